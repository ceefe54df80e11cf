#pragma once

#include <gmpxx.h>

#include <vector>

#include "brw/family.hpp"
#include "brw/multigraph.hpp"

namespace brw {

/// Exact walk counts from one source. gamma[n][v] is the number of length-n
/// walks source -> v (weighted by edge multiplicities), totals[n] = T^n.
/// Big-integer entries when all weights are integral, doubles otherwise.
struct PathCountTable {
    int source = 0;
    int horizon = 0;
    bool exact = true;
    std::vector<std::vector<mpz_class>> gamma;
    std::vector<mpz_class> totals;
    std::vector<std::vector<double>> gamma_f;
    std::vector<double> totals_f;

    double total_as_double(int n) const;
    double gamma_as_double(int n, int v) const;
};

/// Full table on a materialized ball (source is a ball index).
PathCountTable path_counts(const Ball& ball, int source, int n_max);
PathCountTable path_counts(const WeightedMultigraph& g, int x, int n_max);
PathCountTable path_counts(const GraphFamily& g, const FamilyVertex& x, int n_max,
                           std::size_t max_vertices = 6'000'000);

/// Diagonal gamma^n_{x,x}, n = 0..n_max. Uses a ball of radius n_max/2 (a
/// closed walk of length <= n_max never leaves it), which keeps tree
/// families tractable at horizons where B(x, n_max) would be astronomical.
std::vector<mpz_class> closed_walk_counts(const GraphFamily& g, const FamilyVertex& x, int n_max,
                                          std::size_t max_vertices = 6'000'000);
std::vector<mpz_class> closed_walk_counts(const WeightedMultigraph& g, int x, int n_max);

/// T_x^n, n = 0..n_max. Needs B(x, n_max); tree families stay exact but the
/// ball budget caps the reachable horizon.
std::vector<mpz_class> total_walk_counts(const GraphFamily& g, const FamilyVertex& x, int n_max,
                                         std::size_t max_vertices = 6'000'000);
std::vector<mpz_class> total_walk_counts(const WeightedMultigraph& g, int x, int n_max);

/// First-passage counts phi^n_{x,y}, n = 0..n_max (phi^0 = 0), computed by
/// propagating with absorption at y.
std::vector<mpz_class> first_passage(const WeightedMultigraph& g, int x, int y, int n_max);
std::vector<mpz_class> first_passage(const GraphFamily& g, const FamilyVertex& x,
                                     const FamilyVertex& y, int n_max,
                                     std::size_t max_vertices = 6'000'000);

/// First-return counts phi^n_{x,x} via the half-radius ball.
std::vector<mpz_class> first_return_counts(const GraphFamily& g, const FamilyVertex& x, int n_max,
                                           std::size_t max_vertices = 6'000'000);
std::vector<mpz_class> first_return_counts(const WeightedMultigraph& g, int x, int n_max);

/// Double-arithmetic routes for graphs with non-integral weights (the
/// exactness contract applies to integer instances only).
std::vector<double> closed_walk_weights(const Ball& ball, int source, int n_max);
std::vector<double> total_walk_weights(const Ball& ball, int source, int n_max);

/// First-return weights in double arithmetic (used for row-stochastic P,
/// where they are first-return probabilities).
std::vector<double> first_return_weights(const Ball& ball, int source, int n_max);

/// gcd of the closed-walk lengths seen up to the horizon. This is an upper
/// bound estimate of the true period: it can only shrink as n_max grows.
struct PeriodEstimate {
    int period = 0;       // meaningless unless conclusive
    bool conclusive = false;
    int horizon = 0;
};
PeriodEstimate period_estimate(const GraphFamily& g, const FamilyVertex& x, int n_max,
                               std::size_t max_vertices = 6'000'000);
PeriodEstimate period_estimate(const WeightedMultigraph& g, int x, int n_max);

/// Growth rate of the diagonal walk counts of a finite multigraph, estimated
/// as (gamma^{n1}_{x,x} / gamma^{n0}_{x,x})^{1/(n1-n0)} with n0, n1 rounded
/// to period multiples, by scaled floating-point vector powering.
double diagonal_growth(const WeightedMultigraph& g, int x, int period, int burn_in, int horizon);

} // namespace brw
