#pragma once

#include <cstdint>
#include <vector>

namespace brw {

/// Offspring distribution with finite support, nu(0..K).
class OffspringLaw {
public:
    /// Validates: entries >= 0 and sum to 1 within 1e-12.
    explicit OffspringLaw(std::vector<double> pmf);

    double pgf(double s) const;
    double pgf_derivative(double s) const;
    double mean() const { return mean_; }
    int max_children() const { return static_cast<int>(pmf_.size()) - 1; }
    const std::vector<double>& pmf() const { return pmf_; }

private:
    std::vector<double> pmf_;
    double mean_ = 0.0;
};

struct FixedPointResult {
    double delta = 1.0;
    int iterations = 0;
    bool near_critical = false; // |mean - 1| < 1e-6, convergence is slow
};

/// Smallest fixed point of the pgf in [0,1] by iterating s <- G(s) from 0
/// (the classical extinction probability; the k-th iterate is the
/// probability of extinction by generation k).
FixedPointResult smallest_fixed_point(const OffspringLaw& law, double tol = 1e-14);

/// First `count` iterates s_0 = 0, s_{k+1} = G(s_k); monotone, converging
/// up to the extinction probability.
std::vector<double> fixed_point_iterates(const OffspringLaw& law, int count);

struct PowerhouseBound {
    bool valid = false;  // false: some law is not supercritical ("no bound")
    double delta_max = 1.0;
    struct Certificate {
        int law_index;
        double pgf_at_delta_max; // <= delta_max when the bound applies
    };
    std::vector<Certificate> certificates;
};

/// Survival bound for a finite collection of supercritical laws:
/// delta_max = max of the per-law smallest fixed points, with the
/// certificate G_i(delta_max) <= delta_max checked for every law.
PowerhouseBound powerhouse_bound(const std::vector<OffspringLaw>& laws);

/// Empirical extinction-by-generation frequencies over independent trials
/// (index n = fraction of trials extinct by generation n). Populations above
/// survival_threshold are declared survivors and stopped early.
std::vector<double> simulate_gw(const OffspringLaw& law, int generations, int trials,
                                std::uint64_t seed, long long survival_threshold = 2000);

} // namespace brw
