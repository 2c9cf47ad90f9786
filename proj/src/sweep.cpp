#include "beltflow/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <thread>

#include "beltflow/errors.hpp"
#include "beltflow/run.hpp"

namespace beltflow {

SweepResult epsilon_sweep(const Scenario& scenario, std::vector<double> eps_factors, const MassFlowCurve& ref,
                          unsigned threads) {
    if (eps_factors.empty()) throw ValidationError("sweep: empty eps factor list");
    std::sort(eps_factors.begin(), eps_factors.end());
    for (std::size_t k = 0; k < eps_factors.size(); ++k) {
        if (!(eps_factors[k] >= 0.0)) throw ValidationError("sweep: eps factors must be non-negative");
        if (k > 0 && eps_factors[k] == eps_factors[k - 1]) throw ValidationError("sweep: eps factors must be distinct");
    }
    if (ref.size() < 2) throw ValidationError("sweep: reference curve needs at least 2 samples");

    SweepResult result;
    result.reports.resize(eps_factors.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < eps_factors.size(); k = next++) {
            ErrorReport& r = result.reports[k];
            r.eps_factor = eps_factors[k];
            Scenario sc = scenario;
            sc.model.eps_factor = eps_factors[k];
            r.eps = sc.model.eps();
            try {
                const RunResult out = run(sc);
                r.l2 = l2_error(out.outflow, ref);
                r.linf = linf_error(out.outflow, ref);
            } catch (const std::exception& e) {
                r.ok = false;
                r.failure = e.what();
                r.l2 = r.linf = std::numeric_limits<double>::quiet_NaN();
            }
        }
    };
    const unsigned n = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(eps_factors.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    for (std::size_t k = 0; k < result.reports.size(); ++k) {
        const auto& r = result.reports[k];
        if (!r.ok) continue;
        if (!result.argmin || r.l2 < result.reports[*result.argmin].l2) result.argmin = k;
    }
    return result;
}

}  // namespace beltflow
