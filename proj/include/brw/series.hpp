#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "brw/family.hpp"
#include "brw/multigraph.hpp"

namespace brw {

/// Truncated power series with nonnegative coefficients c_1..c_{n_max}.
/// Coefficients are kept exactly (rationals); production evaluation is
/// double-precision Horner, the exact evaluator backs test oracles.
struct SeriesTruncation {
    std::vector<mpq_class> coeffs; // coeffs[i] = c_{i+1}
    bool exact = true;
    double degree_bound = 0.0; // M of the underlying graph; 0 when unknown
    std::string provenance;

    int n_max() const { return static_cast<int>(coeffs.size()); }
    double eval(double lambda) const;
    mpq_class eval_exact(const mpq_class& lambda) const;
    /// Upper bound on the full-series tail sum_{n > n_max} c_n lambda^n,
    /// using c_n <= M^n. Infinite when lambda*M >= 1 or M unknown.
    double tail_bound(double lambda) const;
};

/// Two-sided critical-value report. The truncated-root bisection bracket
/// [root_lo, root_hi] has width <= tol and over-estimates the true critical
/// value; lower_bound is certified (1/M, improved by the series tail bound
/// when that is finite). The critical value lies in [lower_bound, root_hi].
struct CriticalBracket {
    double lower_bound = 0.0;
    double root_lo = 0.0;
    double root_hi = 0.0;
    bool has_root = true; // false: series never reaches 1 ("lower bound only")
    int horizon = 0;
    double tol = 0.0;
};

/// First-return series Phi(x,x|.) of a multigraph or family.
SeriesTruncation phi_series(const WeightedMultigraph& g, int x, int n_max);
SeriesTruncation phi_series(const GraphFamily& g, const FamilyVertex& x, int n_max,
                            std::size_t max_vertices = 6'000'000);

/// Root of Phi_trunc = 1 by bisection, plus the certified lower bound.
/// The root is an upper estimate of lambda_s = 1/M_s and is nonincreasing
/// in the truncation horizon.
CriticalBracket lambda_s_from_phi(const SeriesTruncation& phi, double tol = 1e-9);

/// Nondecreasing sequence e_k = max_{j<=k} (gamma^{dj}_{x,x})^{1/(dj)};
/// every term is a lower bound on M_s.
struct MsGrowth {
    int period = 0;
    std::vector<double> estimates;
};
MsGrowth ms_growth_estimate(const GraphFamily& g, const FamilyVertex& x, int n_max,
                            std::size_t max_vertices = 6'000'000);
MsGrowth ms_growth_estimate(const WeightedMultigraph& g, int x, int n_max);

/// Point estimate (T_x^{n_max})^{1/n_max} plus the max-min oscillation of
/// the trailing window (no monotonicity holds for T).
struct MwGrowth {
    double value = 0.0;
    double oscillation = 0.0;
    int horizon = 0;
    int window = 0;
};
MwGrowth mw_growth_estimate(const GraphFamily& g, const FamilyVertex& x, int n_max,
                            std::size_t max_vertices = 6'000'000);
MwGrowth mw_growth_estimate(const WeightedMultigraph& g, int x, int n_max);

/// First-return probability series F(x,x|.) of a row-stochastic weighted
/// graph. DomainError when rows do not sum to 1 within 1e-12.
SeriesTruncation rw_return_series(const WeightedMultigraph& P, int x, int n_max);

/// R = max{lambda : F(x,x|lambda) <= 1} from the truncated series; same
/// bisection contract as lambda_s_from_phi, and R >= 1 always.
CriticalBracket modified_lambda_s(const SeriesTruncation& f, double tol = 1e-9);

/// Theta coefficient vectors per vertex: theta[x][n] = T_x^n for a finite
/// multigraph (exposed for the coefficient-ring recursion checks).
std::vector<std::vector<mpz_class>> theta_coefficients(const WeightedMultigraph& g, int n_max);

} // namespace brw
