#include "brw/walks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "brw/errors.hpp"

namespace brw {

namespace {

constexpr std::size_t kTableEntryBudget = 60'000'000;

std::vector<unsigned long> integer_weights_of(const Ball& b) {
    std::vector<unsigned long> w(b.wt.size());
    for (size_t i = 0; i < b.wt.size(); ++i) {
        double x = b.wt[i];
        if (x < 0 || x != std::floor(x) || x > 4e9)
            throw NumericError("weights are not small nonnegative integers");
        w[i] = static_cast<unsigned long>(x);
    }
    return w;
}

// One propagation step u1 = u N (scatter over out-edges) in uint64 with
// overflow detection. Returns false on overflow.
bool step_u64(const Ball& b, const std::vector<unsigned long>& w,
              const std::vector<std::uint64_t>& u, std::vector<std::uint64_t>& u1) {
    std::fill(u1.begin(), u1.end(), 0);
    const int n = b.size();
    for (int x = 0; x < n; ++x) {
        const std::uint64_t ux = u[static_cast<size_t>(x)];
        if (ux == 0) continue;
        for (int e = b.row_ptr[static_cast<size_t>(x)]; e < b.row_ptr[static_cast<size_t>(x) + 1]; ++e) {
            std::uint64_t prod;
            if (__builtin_mul_overflow(ux, static_cast<std::uint64_t>(w[static_cast<size_t>(e)]), &prod))
                return false;
            std::uint64_t& dst = u1[static_cast<size_t>(b.col[static_cast<size_t>(e)])];
            if (__builtin_add_overflow(dst, prod, &dst)) return false;
        }
    }
    return true;
}

void step_mpz(const Ball& b, const std::vector<unsigned long>& w,
              const std::vector<mpz_class>& u, std::vector<mpz_class>& u1) {
    for (auto& z : u1) z = 0;
    const int n = b.size();
    for (int x = 0; x < n; ++x) {
        const mpz_class& ux = u[static_cast<size_t>(x)];
        if (ux == 0) continue;
        for (int e = b.row_ptr[static_cast<size_t>(x)]; e < b.row_ptr[static_cast<size_t>(x) + 1]; ++e)
            mpz_addmul_ui(u1[static_cast<size_t>(b.col[static_cast<size_t>(e)])].get_mpz_t(),
                          ux.get_mpz_t(), w[static_cast<size_t>(e)]);
    }
}

// Exact integer propagation driver. visit(n, values) is called for
// n = 0..n_max with the current walk-count vector as mpz. If absorb_at >= 0
// the entry at that index is zeroed after each visit (first-passage counting).
template <class Visit>
void propagate_exact(const Ball& b, int source, int n_max, int absorb_at, Visit&& visit) {
    const auto w = integer_weights_of(b);
    const size_t n = static_cast<size_t>(b.size());

    // fast path in uint64, escalate to big integers on overflow
    std::vector<std::uint64_t> u(n, 0), u1(n, 0);
    u[static_cast<size_t>(source)] = 1;
    std::vector<mpz_class> zu, zu1, snapshot(n);
    bool wide = false;
    int start_n = 0;

    for (size_t i = 0; i < n; ++i) snapshot[i] = 0;
    auto emit_u64 = [&](int step) {
        for (size_t i = 0; i < n; ++i) snapshot[i] = static_cast<unsigned long>(u[i]);
        visit(step, snapshot);
        if (absorb_at >= 0 && step >= 1) u[static_cast<size_t>(absorb_at)] = 0;
    };

    for (int stepn = 0;; ++stepn) {
        emit_u64(stepn);
        if (stepn == n_max) return;
        if (!step_u64(b, w, u, u1)) {
            wide = true;
            start_n = stepn; // redo this step in mpz
            break;
        }
        std::swap(u, u1);
    }
    if (!wide) return;

    zu.assign(n, 0);
    for (size_t i = 0; i < n; ++i) zu[i] = static_cast<unsigned long>(u[i]);
    zu1.assign(n, 0);
    for (int stepn = start_n; stepn < n_max; ++stepn) {
        step_mpz(b, w, zu, zu1);
        std::swap(zu, zu1);
        visit(stepn + 1, zu);
        if (absorb_at >= 0) zu[static_cast<size_t>(absorb_at)] = 0; // step >= 1 here
    }
}

template <class Visit>
void propagate_double(const Ball& b, int source, int n_max, int absorb_at, Visit&& visit) {
    const size_t n = static_cast<size_t>(b.size());
    std::vector<double> u(n, 0.0), u1(n, 0.0);
    u[static_cast<size_t>(source)] = 1.0;
    for (int stepn = 0;; ++stepn) {
        visit(stepn, u);
        if (stepn == n_max) return;
        if (absorb_at >= 0 && stepn >= 1) u[static_cast<size_t>(absorb_at)] = 0.0;
        std::fill(u1.begin(), u1.end(), 0.0);
        for (size_t x = 0; x < n; ++x) {
            const double ux = u[x];
            if (ux == 0.0) continue;
            for (int e = b.row_ptr[x]; e < b.row_ptr[x + 1]; ++e)
                u1[static_cast<size_t>(b.col[static_cast<size_t>(e)])] += ux * b.wt[static_cast<size_t>(e)];
        }
        std::swap(u, u1);
    }
}

void check_horizon(int n_max) {
    if (n_max < 0) throw DomainError("horizon must be >= 0");
}

} // namespace

double PathCountTable::total_as_double(int n) const {
    return exact ? totals[static_cast<size_t>(n)].get_d() : totals_f[static_cast<size_t>(n)];
}

double PathCountTable::gamma_as_double(int n, int v) const {
    return exact ? gamma[static_cast<size_t>(n)][static_cast<size_t>(v)].get_d()
                 : gamma_f[static_cast<size_t>(n)][static_cast<size_t>(v)];
}

PathCountTable path_counts(const Ball& ball, int source, int n_max) {
    check_horizon(n_max);
    if (source < 0 || source >= ball.size()) throw DomainError("path_counts: source out of range");
    const std::size_t entries =
        static_cast<std::size_t>(n_max + 1) * static_cast<std::size_t>(ball.size());
    if (entries > kTableEntryBudget)
        throw ResourceError("path count table budget exceeded at horizon " + std::to_string(n_max) +
                            " (" + std::to_string(entries) + " entries)");

    PathCountTable t;
    t.source = source;
    t.horizon = n_max;
    t.exact = ball.integer_weights;
    if (t.exact) {
        t.gamma.resize(static_cast<size_t>(n_max) + 1);
        t.totals.resize(static_cast<size_t>(n_max) + 1);
        propagate_exact(ball, source, n_max, -1, [&](int n, const std::vector<mpz_class>& u) {
            t.gamma[static_cast<size_t>(n)] = u;
            mpz_class s = 0;
            for (const auto& v : u) s += v;
            t.totals[static_cast<size_t>(n)] = s;
        });
    } else {
        t.gamma_f.resize(static_cast<size_t>(n_max) + 1);
        t.totals_f.resize(static_cast<size_t>(n_max) + 1);
        propagate_double(ball, source, n_max, -1, [&](int n, const std::vector<double>& u) {
            t.gamma_f[static_cast<size_t>(n)] = u;
            t.totals_f[static_cast<size_t>(n)] = std::accumulate(u.begin(), u.end(), 0.0);
        });
    }
    return t;
}

PathCountTable path_counts(const WeightedMultigraph& g, int x, int n_max) {
    return path_counts(whole_graph_ball(g), x, n_max);
}

PathCountTable path_counts(const GraphFamily& g, const FamilyVertex& x, int n_max,
                           std::size_t max_vertices) {
    check_horizon(n_max);
    Ball b = materialize_ball(g, x, n_max, max_vertices, false);
    return path_counts(b, 0, n_max);
}

namespace {

std::vector<mpz_class> diagonal_counts(const Ball& b, int source, int n_max) {
    std::vector<mpz_class> diag(static_cast<size_t>(n_max) + 1);
    propagate_exact(b, source, n_max, -1, [&](int n, const std::vector<mpz_class>& u) {
        diag[static_cast<size_t>(n)] = u[static_cast<size_t>(source)];
    });
    return diag;
}

std::vector<mpz_class> totals_counts(const Ball& b, int source, int n_max) {
    std::vector<mpz_class> tot(static_cast<size_t>(n_max) + 1);
    propagate_exact(b, source, n_max, -1, [&](int n, const std::vector<mpz_class>& u) {
        mpz_class s = 0;
        for (const auto& v : u) s += v;
        tot[static_cast<size_t>(n)] = s;
    });
    return tot;
}

std::vector<mpz_class> absorbed_counts(const Ball& b, int source, int target, int n_max) {
    std::vector<mpz_class> phi(static_cast<size_t>(n_max) + 1);
    phi[0] = 0;
    propagate_exact(b, source, n_max, target, [&](int n, const std::vector<mpz_class>& u) {
        if (n >= 1) phi[static_cast<size_t>(n)] = u[static_cast<size_t>(target)];
    });
    return phi;
}

} // namespace

std::vector<mpz_class> closed_walk_counts(const GraphFamily& g, const FamilyVertex& x, int n_max,
                                          std::size_t max_vertices) {
    check_horizon(n_max);
    Ball b = materialize_ball(g, x, n_max / 2, max_vertices, false);
    return diagonal_counts(b, 0, n_max);
}

std::vector<mpz_class> closed_walk_counts(const WeightedMultigraph& g, int x, int n_max) {
    check_horizon(n_max);
    return diagonal_counts(whole_graph_ball(g), x, n_max);
}

std::vector<mpz_class> total_walk_counts(const GraphFamily& g, const FamilyVertex& x, int n_max,
                                         std::size_t max_vertices) {
    check_horizon(n_max);
    Ball b = materialize_ball(g, x, n_max, max_vertices, false);
    return totals_counts(b, 0, n_max);
}

std::vector<mpz_class> total_walk_counts(const WeightedMultigraph& g, int x, int n_max) {
    check_horizon(n_max);
    return totals_counts(whole_graph_ball(g), x, n_max);
}

std::vector<mpz_class> first_passage(const WeightedMultigraph& g, int x, int y, int n_max) {
    check_horizon(n_max);
    Ball b = whole_graph_ball(g);
    return absorbed_counts(b, x, y, n_max);
}

std::vector<mpz_class> first_passage(const GraphFamily& g, const FamilyVertex& x,
                                     const FamilyVertex& y, int n_max, std::size_t max_vertices) {
    check_horizon(n_max);
    if (x == y) return first_return_counts(g, x, n_max, max_vertices);
    Ball b = materialize_ball(g, x, n_max, max_vertices, true);
    int target = -1;
    for (int v = 0; v < b.size(); ++v)
        if (b.encoding[static_cast<size_t>(v)] == y) {
            target = v;
            break;
        }
    if (target < 0) {
        // y unreachable within the horizon: every count is zero
        g.neighbors(y); // still validate the vertex
        return std::vector<mpz_class>(static_cast<size_t>(n_max) + 1, mpz_class(0));
    }
    return absorbed_counts(b, 0, target, n_max);
}

std::vector<mpz_class> first_return_counts(const GraphFamily& g, const FamilyVertex& x, int n_max,
                                           std::size_t max_vertices) {
    check_horizon(n_max);
    Ball b = materialize_ball(g, x, n_max / 2, max_vertices, false);
    return absorbed_counts(b, 0, 0, n_max);
}

std::vector<mpz_class> first_return_counts(const WeightedMultigraph& g, int x, int n_max) {
    check_horizon(n_max);
    return absorbed_counts(whole_graph_ball(g), x, x, n_max);
}

std::vector<double> closed_walk_weights(const Ball& ball, int source, int n_max) {
    check_horizon(n_max);
    std::vector<double> diag(static_cast<size_t>(n_max) + 1, 0.0);
    propagate_double(ball, source, n_max, -1, [&](int n, const std::vector<double>& u) {
        diag[static_cast<size_t>(n)] = u[static_cast<size_t>(source)];
    });
    return diag;
}

std::vector<double> total_walk_weights(const Ball& ball, int source, int n_max) {
    check_horizon(n_max);
    std::vector<double> tot(static_cast<size_t>(n_max) + 1, 0.0);
    propagate_double(ball, source, n_max, -1, [&](int n, const std::vector<double>& u) {
        tot[static_cast<size_t>(n)] = std::accumulate(u.begin(), u.end(), 0.0);
    });
    return tot;
}

std::vector<double> first_return_weights(const Ball& ball, int source, int n_max) {
    check_horizon(n_max);
    std::vector<double> f(static_cast<size_t>(n_max) + 1, 0.0);
    propagate_double(ball, source, n_max, source, [&](int n, const std::vector<double>& u) {
        if (n >= 1) f[static_cast<size_t>(n)] = u[static_cast<size_t>(source)];
    });
    return f;
}

namespace {

PeriodEstimate period_from_diag(const std::vector<mpz_class>& diag, int n_max) {
    PeriodEstimate p;
    p.horizon = n_max;
    int d = 0;
    for (int n = 1; n <= n_max; ++n)
        if (diag[static_cast<size_t>(n)] > 0) d = std::gcd(d, n);
    p.period = d;
    p.conclusive = d > 0;
    return p;
}

} // namespace

PeriodEstimate period_estimate(const GraphFamily& g, const FamilyVertex& x, int n_max,
                               std::size_t max_vertices) {
    return period_from_diag(closed_walk_counts(g, x, n_max, max_vertices), n_max);
}

PeriodEstimate period_estimate(const WeightedMultigraph& g, int x, int n_max) {
    return period_from_diag(closed_walk_counts(g, x, n_max), n_max);
}

double diagonal_growth(const WeightedMultigraph& g, int x, int period, int burn_in, int horizon) {
    if (period < 1) throw DomainError("diagonal_growth: period must be >= 1");
    if (burn_in < 1 || horizon <= burn_in) throw DomainError("diagonal_growth: need burn_in < horizon");
    const int n0 = (burn_in / period) * period;
    const int n1 = (horizon / period) * period;
    if (n0 < 1 || n1 <= n0) throw DomainError("diagonal_growth: horizons collapse under the period");

    const size_t n = static_cast<size_t>(g.vertex_count());
    auto mat = g.adjacency_matrix();
    std::vector<double> u(n, 0.0), u1(n, 0.0);
    u[static_cast<size_t>(x)] = 1.0;
    double log_scale = 0.0, log_g0 = 0.0, log_g1 = 0.0;
    for (int stepn = 1; stepn <= n1; ++stepn) {
        for (size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (size_t j = 0; j < n; ++j) s += u[j] * mat[j][i];
            u1[i] = s;
        }
        std::swap(u, u1);
        double norm = *std::max_element(u.begin(), u.end());
        if (norm <= 0) throw NumericError("diagonal_growth: walk counts vanished");
        for (auto& v : u) v /= norm;
        log_scale += std::log(norm);
        if (stepn == n0) {
            if (u[static_cast<size_t>(x)] <= 0) throw NumericError("diagonal_growth: zero diagonal at burn-in");
            log_g0 = log_scale + std::log(u[static_cast<size_t>(x)]);
        }
        if (stepn == n1) {
            if (u[static_cast<size_t>(x)] <= 0) throw NumericError("diagonal_growth: zero diagonal at horizon");
            log_g1 = log_scale + std::log(u[static_cast<size_t>(x)]);
        }
    }
    return std::exp((log_g1 - log_g0) / static_cast<double>(n1 - n0));
}

} // namespace brw
