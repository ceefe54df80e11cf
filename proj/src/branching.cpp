#include "brw/branching.hpp"

#include <algorithm>
#include <cmath>

#include "brw/errors.hpp"
#include "brw/rng.hpp"

namespace brw {

OffspringLaw::OffspringLaw(std::vector<double> pmf) : pmf_(std::move(pmf)) {
    if (pmf_.empty()) throw DomainError("offspring law needs at least nu(0)");
    double sum = 0.0;
    for (size_t k = 0; k < pmf_.size(); ++k) {
        if (pmf_[k] < 0 || !std::isfinite(pmf_[k]))
            throw DomainError("offspring law entries must be nonnegative");
        sum += pmf_[k];
        mean_ += static_cast<double>(k) * pmf_[k];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw DomainError("offspring law must sum to 1 (got " + std::to_string(sum) + ")");
}

double OffspringLaw::pgf(double s) const {
    double acc = 0.0;
    for (size_t k = pmf_.size(); k-- > 0;) acc = pmf_[k] + s * acc;
    return acc;
}

double OffspringLaw::pgf_derivative(double s) const {
    double acc = 0.0;
    for (size_t k = pmf_.size(); k-- > 1;) acc = static_cast<double>(k) * pmf_[k] + s * acc;
    return acc;
}

FixedPointResult smallest_fixed_point(const OffspringLaw& law, double tol) {
    if (tol <= 0) throw DomainError("fixed point tolerance must be positive");
    FixedPointResult r;
    r.near_critical = std::abs(law.mean() - 1.0) < 1e-6;
    double s = 0.0;
    const int cap = 1000000;
    for (int it = 0; it < cap; ++it) {
        double next = law.pgf(s);
        r.iterations = it + 1;
        if (std::abs(next - s) < tol) {
            r.delta = next;
            return r;
        }
        s = next;
    }
    r.delta = s; // slow convergence near criticality; flagged above
    return r;
}

std::vector<double> fixed_point_iterates(const OffspringLaw& law, int count) {
    std::vector<double> out;
    out.reserve(static_cast<size_t>(std::max(count, 0)));
    double s = 0.0;
    for (int k = 0; k < count; ++k) {
        out.push_back(s);
        s = law.pgf(s);
    }
    return out;
}

PowerhouseBound powerhouse_bound(const std::vector<OffspringLaw>& laws) {
    if (laws.empty()) throw DomainError("powerhouse_bound needs at least one law");
    PowerhouseBound b;
    b.delta_max = 0.0;
    for (const auto& law : laws) {
        // delta_i = 1 exactly when mean <= 1, except the deterministic
        // one-child law whose fixed point is 0
        const bool deterministic_line = law.max_children() >= 1 && law.pmf()[1] >= 1.0 - 1e-15;
        if (law.mean() <= 1.0 && !deterministic_line) return b; // no bound below 1 exists
        b.delta_max = std::max(b.delta_max, smallest_fixed_point(law).delta);
    }
    b.valid = true;
    for (int i = 0; i < static_cast<int>(laws.size()); ++i)
        b.certificates.push_back({i, laws[static_cast<size_t>(i)].pgf(b.delta_max)});
    return b;
}

std::vector<double> simulate_gw(const OffspringLaw& law, int generations, int trials,
                                std::uint64_t seed, long long survival_threshold) {
    if (generations < 0 || trials < 1) throw DomainError("simulate_gw: bad generations/trials");
    std::vector<double> cdf(law.pmf().size());
    double acc = 0.0;
    for (size_t k = 0; k < cdf.size(); ++k) {
        acc += law.pmf()[k];
        cdf[k] = acc;
    }

    std::vector<long long> extinct_by(static_cast<size_t>(generations) + 1, 0);
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial)));
        long long pop = 1;
        int extinct_at = -1;
        for (int gen = 1; gen <= generations; ++gen) {
            long long next = 0;
            for (long long i = 0; i < pop; ++i) {
                double u = rng.uniform();
                next += static_cast<long long>(
                    std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            }
            pop = next;
            if (pop == 0) {
                extinct_at = gen;
                break;
            }
            if (pop > survival_threshold) break; // misclassification risk delta^threshold
        }
        if (extinct_at >= 0)
            for (int g = extinct_at; g <= generations; ++g) ++extinct_by[static_cast<size_t>(g)];
    }

    std::vector<double> freq(static_cast<size_t>(generations) + 1);
    for (int g = 0; g <= generations; ++g)
        freq[static_cast<size_t>(g)] =
            static_cast<double>(extinct_by[static_cast<size_t>(g)]) / static_cast<double>(trials);
    return freq;
}

} // namespace brw
