#include "brw/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "brw/errors.hpp"
#include "brw/walks.hpp"

namespace brw {

namespace {

SeriesTruncation series_from_counts(const std::vector<mpz_class>& counts, double degree_bound,
                                    std::string provenance) {
    SeriesTruncation s;
    s.exact = true;
    s.degree_bound = degree_bound;
    s.provenance = std::move(provenance);
    s.coeffs.reserve(counts.size() > 0 ? counts.size() - 1 : 0);
    for (size_t n = 1; n < counts.size(); ++n) s.coeffs.emplace_back(counts[n]);
    return s;
}

} // namespace

double SeriesTruncation::eval(double lambda) const {
    // Horner on c_1..c_N: lambda * (c_1 + lambda * (c_2 + ...))
    double acc = 0.0;
    for (size_t i = coeffs.size(); i-- > 0;) acc = coeffs[i].get_d() + lambda * acc;
    return lambda * acc;
}

mpq_class SeriesTruncation::eval_exact(const mpq_class& lambda) const {
    mpq_class acc = 0;
    for (size_t i = coeffs.size(); i-- > 0;) acc = coeffs[i] + lambda * acc;
    return lambda * acc;
}

double SeriesTruncation::tail_bound(double lambda) const {
    if (degree_bound <= 0.0) return std::numeric_limits<double>::infinity();
    const double q = lambda * degree_bound;
    if (q >= 1.0) return std::numeric_limits<double>::infinity();
    return std::pow(q, n_max() + 1) / (1.0 - q);
}

SeriesTruncation phi_series(const WeightedMultigraph& g, int x, int n_max) {
    const std::string provenance = "phi(" + g.vertex_name(x) + ") n_max=" + std::to_string(n_max);
    if (!g.integer_weights()) {
        std::vector<double> f = first_return_weights(whole_graph_ball(g), x, n_max);
        SeriesTruncation s;
        s.exact = false;
        s.degree_bound = g.max_degree();
        s.provenance = provenance;
        for (int n = 1; n <= n_max; ++n) s.coeffs.emplace_back(f[static_cast<size_t>(n)]);
        return s;
    }
    return series_from_counts(first_return_counts(g, x, n_max), g.max_degree(), provenance);
}

SeriesTruncation phi_series(const GraphFamily& g, const FamilyVertex& x, int n_max,
                            std::size_t max_vertices) {
    return series_from_counts(first_return_counts(g, x, n_max, max_vertices), g.max_degree(),
                              "phi(" + g.name() + ":" + vertex_label(x) + ") n_max=" + std::to_string(n_max));
}

namespace {

CriticalBracket critical_from_series(const SeriesTruncation& s, double tol) {
    if (tol <= 0) throw DomainError("bisection tolerance must be positive");
    int first_nonzero = 0;
    for (int i = 0; i < s.n_max(); ++i)
        if (s.coeffs[static_cast<size_t>(i)] > 0) {
            first_nonzero = i + 1;
            break;
        }
    if (first_nonzero == 0) throw DomainError("series has no positive coefficient");

    CriticalBracket out;
    out.horizon = s.n_max();
    out.tol = tol;

    // upper estimate: root of the truncated series = 1
    double hi = std::pow(1.0 / s.coeffs[static_cast<size_t>(first_nonzero - 1)].get_d(),
                         1.0 / first_nonzero);
    if (!(hi > 0) || !std::isfinite(hi)) hi = 1.0;
    double lo = 0.0;
    const double overflow_guard = 1e12;
    while (s.eval(hi) <= 1.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > overflow_guard || !std::isfinite(s.eval(hi))) {
            out.has_root = false;
            break;
        }
    }
    if (out.has_root) {
        while (hi - lo > tol) {
            double mid = 0.5 * (lo + hi);
            (s.eval(mid) <= 1.0 ? lo : hi) = mid;
        }
        out.root_lo = lo;
        out.root_hi = hi;
    }

    // certified lower bound on the true critical value: the critical value
    // is 1/M_s and M_s <= M. (The coefficient tail bound c_n <= M^n only
    // converges below 1/M, so it can never improve on this.)
    out.lower_bound = s.degree_bound > 0 ? 1.0 / s.degree_bound : 0.0;
    if (out.has_root) out.lower_bound = std::min(out.lower_bound, out.root_hi);
    return out;
}

} // namespace

CriticalBracket lambda_s_from_phi(const SeriesTruncation& phi, double tol) {
    return critical_from_series(phi, tol);
}

namespace {

MsGrowth ms_growth_from_diag(const std::vector<mpz_class>& diag, int n_max) {
    MsGrowth out;
    int d = 0;
    for (int n = 1; n <= n_max; ++n)
        if (diag[static_cast<size_t>(n)] > 0) d = std::gcd(d, n);
    if (d == 0) throw DomainError("no closed walk within the horizon; cannot estimate growth");
    out.period = d;
    double best = 0.0;
    for (int n = d; n <= n_max; n += d) {
        const mpz_class& g = diag[static_cast<size_t>(n)];
        if (g > 0) {
            signed long e;
            const double m = mpz_get_d_2exp(&e, g.get_mpz_t());
            const double root = std::exp((std::log(m) + e * M_LN2) / n);
            best = std::max(best, root);
        }
        out.estimates.push_back(best);
    }
    return out;
}

MwGrowth mw_growth_from_totals(const std::vector<mpz_class>& totals, int n_max) {
    if (n_max < 1) throw DomainError("mw growth needs horizon >= 1");
    MwGrowth out;
    out.horizon = n_max;
    auto root_at = [&](int n) {
        signed long e;
        const double m = mpz_get_d_2exp(&e, totals[static_cast<size_t>(n)].get_mpz_t());
        return std::exp((std::log(m) + e * M_LN2) / n);
    };
    out.value = root_at(n_max);
    const int w = std::min(10, n_max);
    out.window = w;
    double mn = out.value, mx = out.value;
    for (int n = n_max - w + 1; n <= n_max; ++n) {
        double r = root_at(n);
        mn = std::min(mn, r);
        mx = std::max(mx, r);
    }
    out.oscillation = mx - mn;
    return out;
}

} // namespace

MsGrowth ms_growth_estimate(const GraphFamily& g, const FamilyVertex& x, int n_max,
                            std::size_t max_vertices) {
    return ms_growth_from_diag(closed_walk_counts(g, x, n_max, max_vertices), n_max);
}

MsGrowth ms_growth_estimate(const WeightedMultigraph& g, int x, int n_max) {
    return ms_growth_from_diag(closed_walk_counts(g, x, n_max), n_max);
}

MwGrowth mw_growth_estimate(const GraphFamily& g, const FamilyVertex& x, int n_max,
                            std::size_t max_vertices) {
    return mw_growth_from_totals(total_walk_counts(g, x, n_max, max_vertices), n_max);
}

MwGrowth mw_growth_estimate(const WeightedMultigraph& g, int x, int n_max) {
    return mw_growth_from_totals(total_walk_counts(g, x, n_max), n_max);
}

SeriesTruncation rw_return_series(const WeightedMultigraph& P, int x, int n_max) {
    for (int v = 0; v < P.vertex_count(); ++v)
        if (std::abs(P.degree(v) - 1.0) > 1e-12)
            throw DomainError("rw_return_series: row " + P.vertex_name(v) + " does not sum to 1");
    Ball b = whole_graph_ball(P);
    std::vector<double> f = first_return_weights(b, x, n_max);
    SeriesTruncation s;
    s.exact = false;
    s.degree_bound = 1.0;
    s.provenance = "rw_return(" + P.vertex_name(x) + ") n_max=" + std::to_string(n_max);
    for (int n = 1; n <= n_max; ++n) s.coeffs.emplace_back(f[static_cast<size_t>(n)]);
    return s;
}

CriticalBracket modified_lambda_s(const SeriesTruncation& f, double tol) {
    CriticalBracket b = critical_from_series(f, tol);
    // F(.,1) <= 1, so R >= 1 always
    b.lower_bound = std::max(b.lower_bound, 1.0);
    return b;
}

std::vector<std::vector<mpz_class>> theta_coefficients(const WeightedMultigraph& g, int n_max) {
    std::vector<std::vector<mpz_class>> theta(static_cast<size_t>(g.vertex_count()));
    for (int x = 0; x < g.vertex_count(); ++x)
        theta[static_cast<size_t>(x)] = total_walk_counts(g, x, n_max);
    return theta;
}

} // namespace brw
