#pragma once

#include <string>
#include <vector>

#include "brw/family.hpp"
#include "brw/multigraph.hpp"

namespace brw {

struct PerronResult {
    double value = 0.0;
    std::vector<double> right; // strictly positive, max entry 1
    std::vector<double> left;
    int iterations = 0;
};

/// Perron root of a nonnegative irreducible matrix by shifted power
/// iteration with Collatz-Wielandt stopping: the returned value is within
/// tol of the true root. DomainError on reducible input.
PerronResult perron_root(const std::vector<std::vector<double>>& n, double tol = 1e-12);

struct MwResult {
    double value = 0.0;
    bool exact = false;  // Perron root of a verified quotient / finite graph
    std::string method;
};

/// M_w through the verified quotient (families) or the graph itself
/// (finite). Families without a quotient fall back to the growth estimate
/// and are marked inexact.
MwResult mw_of(const GraphFamily& g, int verify_radius = 3,
               std::size_t max_vertices = 6'000'000);
MwResult mw_of(const WeightedMultigraph& g);

/// Largest eigenvalue of the adjacency operator on B(o, r) with zero
/// boundary, for each radius. Rayleigh values, so every term is a certified
/// lower bound on M_s and the sequence is nondecreasing (warm-started).
std::vector<double> ms_lower_bounds(const GraphFamily& g, const FamilyVertex& o,
                                    const std::vector<int>& radii,
                                    std::size_t max_vertices = 6'000'000);
std::vector<double> ms_lower_bounds(const WeightedMultigraph& g, int o,
                                    const std::vector<int>& radii);

enum class Verdict { nonamenable, amenable, inconclusive };
std::string to_string(Verdict v);

struct SpectralReport {
    double mw = 0.0;
    bool mw_exact = false;
    std::vector<std::pair<int, double>> ms_sequence; // (radius, bound)
    double ms_final = 0.0;
    double gap = 0.0; // mw - ms_final
    bool ms_stabilized = false;
    Verdict verdict = Verdict::inconclusive;
    double margin = 0.0;
    double lambda_s_lo = 0.0, lambda_s_hi = 0.0; // [1/mw, 1/ms_final]
    double lambda_w = 0.0;
    bool lambda_w_exact = false; // equality holds on F-multigraphs; otherwise ">= 1/M_w only"
    std::string basis;
};

/// Amenability classifier for non-oriented families with a verified
/// quotient: nonamenable iff the spectral gap M_s < M_w survives the margin
/// once the ball bounds stabilize. "inconclusive" is a first-class verdict.
SpectralReport classify(const GraphFamily& g, double tol_margin = 0.05, int radius_max = 20,
                        std::size_t max_vertices = 6'000'000);

} // namespace brw
