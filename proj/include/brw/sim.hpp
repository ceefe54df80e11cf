#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "brw/family.hpp"
#include "brw/multigraph.hpp"
#include "brw/quotient.hpp"

namespace brw {

enum class BreedingMode { edge, site };

/// Immutable simulation arena shared across trials. Edge mode breeds across
/// each incident edge at rate lambda * n_xy (so the per-particle breeding
/// rate is lambda * deg); site mode breeds at total rate lambda and places
/// the child by the row-normalized kernel. On truncated families, offspring
/// falling outside the ball are discarded (kill boundary).
class SimGraph {
public:
    static SimGraph from_ball(Ball ball, BreedingMode mode);
    /// Finite graph, no boundary. Site mode requires row sums 1 (1e-9).
    static SimGraph from_graph(const WeightedMultigraph& g, BreedingMode mode);

    int site_count() const { return static_cast<int>(site_weight_.size()); }
    int root() const { return 0; }
    BreedingMode mode() const { return mode_; }
    const Ball& ball() const { return ball_; }

    // per-particle breeding weight w(x): deg (edge) or 1 (site)
    double site_weight(int x) const { return site_weight_[static_cast<size_t>(x)]; }

private:
    friend struct TrialRunner;
    Ball ball_; // kept for distances/encodings (projection, radius coupling)
    BreedingMode mode_ = BreedingMode::edge;
    std::vector<double> site_weight_;
    std::vector<double> full_weight_;  // total offspring weight incl. discarded mass
    std::vector<int> nb_ptr_;
    std::vector<int> nb_target_;
    std::vector<double> nb_cum_;   // per-site cumulative offspring weights
    std::vector<int> sole_target_; // >= 0 when every birth from x lands there
};

enum class SimStatus { extinct, cap_hit, horizon_end };
std::string to_string(SimStatus s);

struct SimConfig {
    double lambda = 1.0;
    double t_max = 100.0;
    long long pop_cap = 100000;
    std::uint64_t seed = 1;
    std::vector<std::pair<int, long long>> init; // default: one particle at the root
    std::vector<double> sample_times;            // sorted; empty = no sampling
    bool record_sites = false;
    bool check_rates = false; // recompute the total rate every 1024 events
};

/// Fill sample_times with `count` evenly spaced times in (0, t_max].
std::vector<double> even_sample_times(double t_max, int count);

struct SimOutcome {
    SimStatus status = SimStatus::horizon_end;
    double end_time = 0.0;
    long long events = 0;
    long long peak_population = 0;
    /// Latest time the root was occupied (exact, event-level); -1 if never.
    double root_occupied_after = -1.0;
    /// Per sample time. Samples after a cap hit freeze the state at the cap.
    std::vector<long long> pop_at;
    std::vector<std::uint8_t> root_at;
    std::vector<std::vector<std::pair<int, long long>>> sites_at; // when record_sites
};

SimOutcome run_trial(const SimGraph& g, const SimConfig& cfg, long long trial_index);

/// Shared-randomness coupling: the primary process runs at cfg.lambda; the
/// secondary is the thinned sub-process at lambda_secondary <= lambda whose
/// ancestries stay within distance radius_secondary (<0 = no radius cut).
/// Its survival indicator is dominated by the primary's, trial by trial.
struct CoupledOutcome {
    SimStatus primary;
    SimStatus secondary;
};
CoupledOutcome run_coupled_trial(const SimGraph& g, const SimConfig& cfg, double lambda_secondary,
                                 int radius_secondary, long long trial_index);

struct SurvivalEstimate {
    long long trials = 0;
    double t0 = 0.0;
    long long survived = 0, capped = 0, extinct = 0, local = 0;
    double global_freq = 0, global_lo = 0, global_hi = 0;
    double local_freq = 0, local_lo = 0, local_hi = 0;
};

/// Survival frequencies with Wilson 95% intervals. Global survival = not
/// extinct before min(t_max, cap time); a cap hit counts as survival. Local
/// survival = root occupied at some sample time in [t0, t_max].
SurvivalEstimate estimate_survival(const SimGraph& g, const SimConfig& cfg, long long trials,
                                   double t0, int threads = 1);

struct SweepRow {
    double lambda = 0.0;
    long long trials = 0;
    SurvivalEstimate estimate;
    std::uint64_t seed = 0;
};

std::vector<SweepRow> sweep_lambda(const SimGraph& g, const SimConfig& cfg,
                                   const std::vector<double>& lambda_grid, long long trials,
                                   double t0, int threads = 1);

/// Class assignment for every ball site under a verified quotient map;
/// refuses unverified maps.
std::vector<int> quotient_site_classes(const Ball& ball, const KnownQuotient& q,
                                       const VerifyReport& verified);

/// Class-summed trajectory; preserves the total population at every sample.
std::vector<std::vector<long long>> project_samples(const SimOutcome& outcome,
                                                    const std::vector<int>& site_class,
                                                    int class_count);

} // namespace brw
