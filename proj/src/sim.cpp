#include "brw/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "brw/errors.hpp"
#include "brw/rng.hpp"
#include "brw/stats.hpp"

namespace brw {

namespace {

// Fenwick tree over per-site rates: O(log n) update and prefix-search.
class RateIndex {
public:
    explicit RateIndex(int n) : tree_(static_cast<size_t>(n) + 1, 0.0), n_(n) {}

    void add(int i, double delta) {
        for (int k = i + 1; k <= n_; k += k & -k) tree_[static_cast<size_t>(k)] += delta;
    }

    double total() const {
        double s = 0.0;
        for (int k = n_; k > 0; k -= k & -k) s += tree_[static_cast<size_t>(k)];
        return s;
    }

    // largest index with prefix sum <= u; returns the site and the offset of
    // u inside that site's rate slot
    std::pair<int, double> find(double u) const {
        int pos = 0;
        int bit = 1;
        while (2 * bit <= n_) bit *= 2;
        for (; bit > 0; bit /= 2) {
            int next = pos + bit;
            if (next <= n_ && tree_[static_cast<size_t>(next)] <= u) {
                u -= tree_[static_cast<size_t>(next)];
                pos = next;
            }
        }
        return {std::min(pos, n_ - 1), u};
    }

private:
    std::vector<double> tree_;
    int n_;
};

} // namespace

std::string to_string(SimStatus s) {
    switch (s) {
        case SimStatus::extinct: return "extinct";
        case SimStatus::cap_hit: return "cap_hit";
        default: return "horizon_end";
    }
}

SimGraph SimGraph::from_ball(Ball ball, BreedingMode mode) {
    SimGraph g;
    g.mode_ = mode;
    const int n = ball.size();
    g.site_weight_.resize(static_cast<size_t>(n));
    g.full_weight_.resize(static_cast<size_t>(n));
    g.nb_ptr_ = ball.row_ptr;
    g.nb_target_ = ball.col;
    g.nb_cum_.resize(ball.wt.size());
    g.sole_target_.assign(static_cast<size_t>(n), -1);
    for (int x = 0; x < n; ++x) {
        double acc = 0.0;
        const int lo = ball.row_ptr[static_cast<size_t>(x)], hi = ball.row_ptr[static_cast<size_t>(x) + 1];
        for (int e = lo; e < hi; ++e) {
            acc += ball.wt[static_cast<size_t>(e)];
            g.nb_cum_[static_cast<size_t>(e)] = acc;
        }
        g.full_weight_[static_cast<size_t>(x)] = ball.full_degree[static_cast<size_t>(x)];
        g.site_weight_[static_cast<size_t>(x)] =
            mode == BreedingMode::edge ? ball.full_degree[static_cast<size_t>(x)] : 1.0;
        if (hi - lo == 1 && ball.boundary_loss[static_cast<size_t>(x)] == 0.0)
            g.sole_target_[static_cast<size_t>(x)] = ball.col[static_cast<size_t>(lo)];
    }
    g.ball_ = std::move(ball);
    return g;
}

SimGraph SimGraph::from_graph(const WeightedMultigraph& g, BreedingMode mode) {
    if (mode == BreedingMode::site) {
        for (int v = 0; v < g.vertex_count(); ++v)
            if (std::abs(g.degree(v) - 1.0) > 1e-9)
                throw DomainError("site mode needs row-stochastic weights; row " + g.vertex_name(v) +
                                  " sums to " + std::to_string(g.degree(v)));
    }
    return from_ball(whole_graph_ball(g), mode);
}

std::vector<double> even_sample_times(double t_max, int count) {
    std::vector<double> t;
    for (int i = 1; i <= count; ++i) t.push_back(t_max * static_cast<double>(i) / count);
    return t;
}

namespace {

struct TrialState {
    std::vector<long long> counts;
    std::vector<long long> marked; // secondary process of a coupled run
    long long pop = 0, pop_marked = 0;
};

} // namespace

struct TrialRunner {
    const SimGraph& g;
    const SimConfig& cfg;
    std::vector<double> prate; // per-particle rate 1 + lambda * w(x)

    TrialRunner(const SimGraph& graph, const SimConfig& config) : g(graph), cfg(config) {
        if (cfg.lambda < 0) throw ConfigError("lambda must be >= 0");
        if (cfg.pop_cap < 1) throw ConfigError("pop_cap must be >= 1");
        if (cfg.t_max <= 0) throw ConfigError("t_max must be positive");
        const int n = g.site_count();
        prate.resize(static_cast<size_t>(n));
        for (int x = 0; x < n; ++x) {
            prate[static_cast<size_t>(x)] = 1.0 + cfg.lambda * g.site_weight_[static_cast<size_t>(x)];
            if (static_cast<double>(cfg.pop_cap) * prate[static_cast<size_t>(x)] > 1e15)
                throw ConfigError("total event rate would overflow the guard; lower pop_cap");
        }
    }

    // coupled: thinning ratio for the secondary process (1 = none)
    SimOutcome run(long long trial, double secondary_ratio = -1.0, int secondary_radius = -1,
                   SimStatus* secondary_status = nullptr) const {
        const bool coupled = secondary_ratio >= 0.0;
        const int n = g.site_count();
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(trial)));

        TrialState st;
        st.counts.assign(static_cast<size_t>(n), 0);
        if (coupled) st.marked.assign(static_cast<size_t>(n), 0);
        RateIndex rates(n);

        double total_rate = 0.0;
        auto add_particle = [&](int x, long long k) {
            st.counts[static_cast<size_t>(x)] += k;
            st.pop += k;
            rates.add(x, static_cast<double>(k) * prate[static_cast<size_t>(x)]);
            total_rate += static_cast<double>(k) * prate[static_cast<size_t>(x)];
        };
        if (cfg.init.empty()) {
            add_particle(g.root(), 1);
            if (coupled) {
                st.marked[static_cast<size_t>(g.root())] = 1;
                st.pop_marked = 1;
            }
        } else {
            for (auto [x, k] : cfg.init) {
                if (x < 0 || x >= n) throw ConfigError("init vertex out of range");
                if (k < 0) throw ConfigError("init counts must be >= 0");
                add_particle(x, k);
                if (coupled) {
                    st.marked[static_cast<size_t>(x)] += k;
                    st.pop_marked += k;
                }
            }
        }

        SimOutcome out;
        out.peak_population = st.pop;
        const size_t n_samples = cfg.sample_times.size();
        out.pop_at.assign(n_samples, 0);
        out.root_at.assign(n_samples, 0);
        if (cfg.record_sites) out.sites_at.resize(n_samples);
        size_t sample_idx = 0;

        double t = 0.0;
        out.root_occupied_after = st.counts[static_cast<size_t>(g.root())] > 0 ? 0.0 : -1.0;

        auto record_sample = [&](size_t i) {
            out.pop_at[i] = st.pop;
            out.root_at[i] = st.counts[static_cast<size_t>(g.root())] > 0 ? 1 : 0;
            if (cfg.record_sites) {
                auto& snap = out.sites_at[i];
                for (int x = 0; x < n; ++x)
                    if (st.counts[static_cast<size_t>(x)] > 0)
                        snap.emplace_back(x, st.counts[static_cast<size_t>(x)]);
            }
        };
        auto finish_samples = [&]() {
            // extinct: zeros from here on; cap: frozen at the cap state
            for (; sample_idx < n_samples; ++sample_idx)
                if (cfg.sample_times[sample_idx] <= cfg.t_max) record_sample(sample_idx);
        };

        for (;;) {
            if (st.pop == 0) {
                out.status = SimStatus::extinct;
                out.end_time = t;
                finish_samples();
                break;
            }
            if (st.pop >= cfg.pop_cap) {
                out.status = SimStatus::cap_hit;
                out.end_time = t;
                finish_samples();
                break;
            }

            const double total = total_rate;
            const double t_next = t + rng.exponential(total);
            while (sample_idx < n_samples && cfg.sample_times[sample_idx] < t_next &&
                   cfg.sample_times[sample_idx] <= cfg.t_max) {
                record_sample(sample_idx);
                ++sample_idx;
            }
            if (t_next > cfg.t_max) {
                out.status = SimStatus::horizon_end;
                out.end_time = cfg.t_max;
                break;
            }
            t = t_next;
            ++out.events;

#ifndef NDEBUG
            const bool audit_rates = true;
#else
            const bool audit_rates = cfg.check_rates;
#endif
            if (audit_rates && (out.events & 1023) == 0) {
                double recomputed = 0.0;
                for (int x = 0; x < n; ++x)
                    recomputed += static_cast<double>(st.counts[static_cast<size_t>(x)]) *
                                  prate[static_cast<size_t>(x)];
                if (std::abs(recomputed - total) > 1e-9 * std::max(1.0, recomputed))
                    throw NumericError("rate bookkeeping drifted beyond 1e-9");
            }

            auto [x, offset] = rates.find(rng.uniform() * total);
            const size_t sx = static_cast<size_t>(x);
            if (st.counts[sx] == 0) continue; // float residue at slot boundaries
            const bool is_death = offset < static_cast<double>(st.counts[sx]);

            if (is_death) {
                const bool kill_marked =
                    coupled && st.marked[sx] > 0 &&
                    rng.uniform() * static_cast<double>(st.counts[sx]) < static_cast<double>(st.marked[sx]);
                st.counts[sx] -= 1;
                st.pop -= 1;
                rates.add(x, -prate[sx]);
                total_rate -= prate[sx];
                if (kill_marked) {
                    st.marked[sx] -= 1;
                    st.pop_marked -= 1;
                }
                if (x == g.root() && st.counts[sx] == 0) out.root_occupied_after = t;
            } else {
                // birth from a uniformly random particle at x
                int target = g.sole_target_[sx];
                if (target < 0) {
                    double u = rng.uniform() * g.full_weight_[sx];
                    const int lo = g.nb_ptr_[sx], hi = g.nb_ptr_[sx + 1];
                    if (lo < hi && u < g.nb_cum_[static_cast<size_t>(hi) - 1]) {
                        int edge = static_cast<int>(
                            std::upper_bound(g.nb_cum_.begin() + lo, g.nb_cum_.begin() + hi, u) -
                            g.nb_cum_.begin());
                        target = g.nb_target_[static_cast<size_t>(edge)];
                    }
                }
                if (target >= 0) {
                    const size_t sy = static_cast<size_t>(target);
                    bool mark_child = false;
                    if (coupled && st.marked[sx] > 0) {
                        const bool parent_marked =
                            rng.uniform() * static_cast<double>(st.counts[sx]) <
                            static_cast<double>(st.marked[sx]);
                        mark_child = parent_marked &&
                                     (secondary_ratio >= 1.0 || rng.uniform() < secondary_ratio) &&
                                     (secondary_radius < 0 ||
                                      g.ball_.dist[sy] <= secondary_radius);
                    }
                    st.counts[sy] += 1;
                    st.pop += 1;
                    out.peak_population = std::max(out.peak_population, st.pop);
                    rates.add(target, prate[sy]);
                    total_rate += prate[sy];
                    if (mark_child) {
                        st.marked[sy] += 1;
                        st.pop_marked += 1;
                    }
                }
                // else: offspring landed outside the truncation ball
            }

        }

        if (coupled && secondary_status) {
            // marked <= counts pointwise, so primary extinction forces
            // secondary extinction
            if (st.pop_marked == 0)
                *secondary_status = SimStatus::extinct;
            else if (st.pop_marked >= cfg.pop_cap)
                *secondary_status = SimStatus::cap_hit;
            else
                *secondary_status = SimStatus::horizon_end;
        }
        if (st.counts[static_cast<size_t>(g.root())] > 0) out.root_occupied_after = out.end_time;
        return out;
    }
};

SimOutcome run_trial(const SimGraph& g, const SimConfig& cfg, long long trial_index) {
    return TrialRunner(g, cfg).run(trial_index);
}

CoupledOutcome run_coupled_trial(const SimGraph& g, const SimConfig& cfg, double lambda_secondary,
                                 int radius_secondary, long long trial_index) {
    if (lambda_secondary < 0 || lambda_secondary > cfg.lambda)
        throw ConfigError("coupled run needs 0 <= lambda_secondary <= lambda");
    TrialRunner runner(g, cfg);
    CoupledOutcome out{};
    double ratio = cfg.lambda > 0 ? lambda_secondary / cfg.lambda : 1.0;
    SimStatus secondary = SimStatus::extinct;
    SimOutcome primary = runner.run(trial_index, ratio, radius_secondary, &secondary);
    out.primary = primary.status;
    out.secondary = secondary;
    return out;
}

namespace {

struct SurvivalAccumulator {
    long long survived = 0, capped = 0, extinct = 0, local = 0;

    void absorb(const SimOutcome& o, const SimConfig& cfg, double t0) {
        if (o.status == SimStatus::extinct)
            ++extinct;
        else
            ++survived;
        if (o.status == SimStatus::cap_hit) ++capped;
        for (size_t i = 0; i < cfg.sample_times.size(); ++i)
            if (cfg.sample_times[i] >= t0 && cfg.sample_times[i] <= cfg.t_max && o.root_at[i]) {
                ++local;
                break;
            }
    }

    void merge(const SurvivalAccumulator& other) {
        survived += other.survived;
        capped += other.capped;
        extinct += other.extinct;
        local += other.local;
    }
};

} // namespace

SurvivalEstimate estimate_survival(const SimGraph& g, const SimConfig& cfg, long long trials,
                                   double t0, int threads) {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (t0 >= cfg.t_max) throw ConfigError("t0 must be below t_max");
    TrialRunner runner(g, cfg);

    threads = std::max(1, threads);
    std::vector<SurvivalAccumulator> accs(static_cast<size_t>(threads));
    std::atomic<long long> next{0};
    auto work = [&](int tid) {
        for (;;) {
            long long trial = next.fetch_add(1, std::memory_order_relaxed);
            if (trial >= trials) break;
            accs[static_cast<size_t>(tid)].absorb(runner.run(trial), cfg, t0);
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(work, i);
        for (auto& th : pool) th.join();
    }
    SurvivalAccumulator total;
    for (const auto& a : accs) total.merge(a);

    SurvivalEstimate est;
    est.trials = trials;
    est.t0 = t0;
    est.survived = total.survived;
    est.capped = total.capped;
    est.extinct = total.extinct;
    est.local = total.local;
    auto [glo, ghi] = wilson_interval(total.survived, trials);
    est.global_freq = static_cast<double>(total.survived) / static_cast<double>(trials);
    est.global_lo = glo;
    est.global_hi = ghi;
    auto [llo, lhi] = wilson_interval(total.local, trials);
    est.local_freq = static_cast<double>(total.local) / static_cast<double>(trials);
    est.local_lo = llo;
    est.local_hi = lhi;
    return est;
}

std::vector<SweepRow> sweep_lambda(const SimGraph& g, const SimConfig& cfg,
                                   const std::vector<double>& lambda_grid, long long trials,
                                   double t0, int threads) {
    if (lambda_grid.empty()) throw ConfigError("sweep needs a nonempty lambda grid");
    if (!std::is_sorted(lambda_grid.begin(), lambda_grid.end()))
        throw ConfigError("sweep grid must be sorted");
    std::vector<SweepRow> rows;
    for (size_t i = 0; i < lambda_grid.size(); ++i) {
        SimConfig c = cfg;
        c.lambda = lambda_grid[i];
        c.seed = derive_seed(cfg.seed, i, 0x5eedu);
        SweepRow row;
        row.lambda = c.lambda;
        row.trials = trials;
        row.seed = c.seed;
        row.estimate = estimate_survival(g, c, trials, t0, threads);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<int> quotient_site_classes(const Ball& ball, const KnownQuotient& q,
                                       const VerifyReport& verified) {
    if (!verified.pass) throw DomainError("projection refused: quotient map is not verified");
    if (ball.encoding.empty()) throw DomainError("projection needs ball encodings");
    std::vector<int> cls(static_cast<size_t>(ball.size()));
    for (int v = 0; v < ball.size(); ++v) {
        cls[static_cast<size_t>(v)] = q.class_of(ball.encoding[static_cast<size_t>(v)]);
        if (cls[static_cast<size_t>(v)] < 0 || cls[static_cast<size_t>(v)] >= q.codomain.vertex_count())
            throw DomainError("projection: class out of range at " +
                              vertex_label(ball.encoding[static_cast<size_t>(v)]));
    }
    return cls;
}

std::vector<std::vector<long long>> project_samples(const SimOutcome& outcome,
                                                    const std::vector<int>& site_class,
                                                    int class_count) {
    std::vector<std::vector<long long>> out;
    out.reserve(outcome.sites_at.size());
    for (size_t i = 0; i < outcome.sites_at.size(); ++i) {
        std::vector<long long> row(static_cast<size_t>(class_count), 0);
        long long total = 0;
        for (auto [site, count] : outcome.sites_at[i]) {
            row[static_cast<size_t>(site_class[static_cast<size_t>(site)])] += count;
            total += count;
        }
        if (total != outcome.pop_at[i])
            throw NumericError("projection lost particles at sample " + std::to_string(i));
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace brw
