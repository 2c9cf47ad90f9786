#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace beltflow {

struct Vec2 {
    double x{0.0};
    double y{0.0};

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

[[nodiscard]] inline double norm(Vec2 v) { return std::sqrt(v.x * v.x + v.y * v.y); }

/// Dense cell-centred 2D array, x-index fastest (row j holds cells (0..nx-1, j)).
template <class T>
class Field2D {
public:
    Field2D() = default;
    Field2D(int nx, int ny, T fill = T{})
        : nx_(nx), ny_(ny), data_(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), fill) {}

    [[nodiscard]] int nx() const { return nx_; }
    [[nodiscard]] int ny() const { return ny_; }
    [[nodiscard]] std::size_t size() const { return data_.size(); }

    [[nodiscard]] std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i);
    }

    [[nodiscard]] T& operator()(int i, int j) { return data_[index(i, j)]; }
    [[nodiscard]] const T& operator()(int i, int j) const { return data_[index(i, j)]; }

    [[nodiscard]] std::vector<T>& data() { return data_; }
    [[nodiscard]] const std::vector<T>& data() const { return data_; }

    /// Row order reversed: (i, j) -> (i, ny-1-j).
    [[nodiscard]] Field2D flipped_rows() const {
        Field2D out(nx_, ny_);
        for (int j = 0; j < ny_; ++j) {
            for (int i = 0; i < nx_; ++i) {
                out(i, ny_ - 1 - j) = (*this)(i, j);
            }
        }
        return out;
    }

    friend bool operator==(const Field2D&, const Field2D&) = default;

private:
    int nx_{0};
    int ny_{0};
    std::vector<T> data_;
};

using ScalarField = Field2D<double>;
using VectorField = Field2D<Vec2>;

/// Normalised item density (rho_max == 1), one value per cell.
using DensityField = ScalarField;

}  // namespace beltflow
