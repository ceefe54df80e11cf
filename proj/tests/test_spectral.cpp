#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>

#include "brw/errors.hpp"
#include "brw/quotient.hpp"
#include "brw/spectral.hpp"
#include "oracles.hpp"

using namespace brw;
using nlohmann::json;

TEST_SUITE_BEGIN("spectral");

TEST_CASE("perron roots of the pendant and bridge quotients solve their quadratics") {
    auto p = perron_root({{3, 1}, {1, 0}}, 1e-12);
    CHECK(std::abs(p.value - (3.0 + std::sqrt(13.0)) / 2.0) < 1e-9);
    // eigenvector equation, max-entry normalization, strict positivity
    CHECK(p.right[0] == doctest::Approx(1.0));
    CHECK(p.right[1] > 0.0);
    CHECK(3 * p.right[0] + p.right[1] == doctest::Approx(p.value * p.right[0]).epsilon(1e-9));

    auto q = perron_root({{3, 1}, {2, 0}}, 1e-12);
    CHECK(std::abs(q.value - (3.0 + std::sqrt(17.0)) / 2.0) < 1e-9);
    CHECK(q.left != q.right); // asymmetric matrix

    CHECK(perron_root({{7}}).value == doctest::Approx(7.0));
}

TEST_CASE("perron handles periodic matrices and rejects reducible ones") {
    auto p = perron_root({{0, 3}, {1, 0}}, 1e-12);
    CHECK(p.value == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
    CHECK_THROWS_AS(perron_root({{1, 1}, {0, 1}}), DomainError);
    CHECK_THROWS_AS(perron_root({{1, -1}, {1, 1}}), DomainError);
    CHECK_THROWS_AS(perron_root({}), DomainError);
}

TEST_CASE("adding weight never decreases the perron root") {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 60; ++i) {
        auto g = oracle::random_multigraph(rng, 6, 3);
        auto n = g.adjacency_matrix();
        double before = perron_root(n).value;
        std::uniform_int_distribution<int> pick(0, g.vertex_count() - 1);
        int a = pick(rng), b = pick(rng);
        n[static_cast<size_t>(a)][static_cast<size_t>(b)] += 1.0;
        n[static_cast<size_t>(b)][static_cast<size_t>(a)] = n[static_cast<size_t>(a)][static_cast<size_t>(b)];
        CHECK(perron_root(n).value >= before - 1e-9);
    }
}

TEST_CASE("mw_of: quotient route and finite route") {
    auto t4 = make_family(json{{"family", "regular_tree"}, {"k", 4}});
    auto m = mw_of(*t4);
    CHECK(m.exact);
    CHECK(m.value == doctest::Approx(4.0));

    auto pend = make_family(json{{"family", "pendant_tree3"}});
    CHECK(mw_of(*pend).value == doctest::Approx((3.0 + std::sqrt(13.0)) / 2.0));

    std::mt19937_64 rng(78);
    auto g = oracle::random_multigraph(rng, 6, 3);
    auto fm = mw_of(g);
    CHECK(fm.exact);
    CHECK(fm.value == doctest::Approx(perron_root(g.adjacency_matrix()).value));

    // no quotient: falls back to the growth estimate, marked inexact
    auto rt = make_family(json{{"family", "radial_tree"}, {"period", {1, 1}}});
    auto est = mw_of(*rt);
    CHECK_FALSE(est.exact);
    CHECK(est.value == doctest::Approx(2.0).epsilon(0.05)); // the radial (1,1) tree is Z-like
}

TEST_CASE("ms lower bounds: line matches the tridiagonal formula") {
    auto z = make_family(json{{"family", "line"}});
    auto ms = ms_lower_bounds(*z, {0}, {5, 10, 20});
    REQUIRE(ms.size() == 3);
    CHECK(ms[0] == doctest::Approx(oracle::path_lambda_max(11)).epsilon(1e-6));
    CHECK(ms[1] == doctest::Approx(oracle::path_lambda_max(21)).epsilon(1e-6));
    CHECK(ms[2] == doctest::Approx(oracle::path_lambda_max(41)).epsilon(1e-6));
    CHECK(ms[0] < ms[1]);
    CHECK(ms[1] < ms[2]);
    CHECK(ms[2] < 2.0);
}

TEST_CASE("ms lower bounds: loops and the 3-regular tree") {
    auto l4 = make_family(json{{"family", "loops"}, {"k", 4}});
    for (double v : ms_lower_bounds(*l4, {0}, {1, 3})) CHECK(v == doctest::Approx(4.0));

    auto t3 = make_family(json{{"family", "regular_tree"}, {"k", 3}});
    auto ms = ms_lower_bounds(*t3, t3->root(), {8, 12, 16});
    for (size_t i = 1; i < ms.size(); ++i) CHECK(ms[i] >= ms[i - 1] - 1e-12);
    CHECK(ms.back() > 2.7);
    CHECK(ms.back() <= 2.0 * std::sqrt(2.0) + 1e-9);
}

TEST_CASE("oriented input is refused with a pointer to the growth estimate") {
    auto g = make_multigraph(2, {{0, 1, 2.0}, {1, 0, 1.0}}, true);
    CHECK_THROWS_AS(ms_lower_bounds(g, 0, {2}), DomainError);
}

TEST_CASE("sandwich: ball bounds stay below the quotient perron root") {
    for (auto spec : {json{{"family", "line"}}, json{{"family", "regular_tree"}, {"k", 3}},
                      json{{"family", "pendant_tree3"}}, json{{"family", "bridge"}, {"k", 3}}}) {
        auto g = make_family(spec);
        double mw = mw_of(*g).value;
        double ms = ms_lower_bounds(*g, g->root(), {10}).back();
        CHECK(ms <= mw + 1e-9);
    }
}

TEST_CASE("perron eigenvector transport through the quotient map") {
    auto pend = make_family(json{{"family", "pendant_tree3"}});
    const KnownQuotient& q = *pend->known_quotient();
    auto p = perron_root(q.codomain.adjacency_matrix(), 1e-13);
    Ball b = materialize_ball(*pend, pend->root(), 6);
    std::vector<double> lifted(static_cast<size_t>(b.size()));
    for (int v = 0; v < b.size(); ++v)
        lifted[static_cast<size_t>(v)] = p.right[static_cast<size_t>(q.class_of(b.encoding[static_cast<size_t>(v)]))];
    for (int v = 0; v < b.size(); ++v) {
        if (b.dist[static_cast<size_t>(v)] >= b.radius) continue;
        double sum = 0.0;
        for (int e = b.row_ptr[static_cast<size_t>(v)]; e < b.row_ptr[static_cast<size_t>(v) + 1]; ++e)
            sum += b.wt[static_cast<size_t>(e)] * lifted[static_cast<size_t>(b.col[static_cast<size_t>(e)])];
        CHECK(sum == doctest::Approx(p.value * lifted[static_cast<size_t>(v)]).epsilon(1e-9));
    }
}

TEST_CASE("classifier verdicts") {
    auto z = make_family(json{{"family", "line"}});
    auto rz = classify(*z, 0.05, 60);
    CHECK(rz.verdict == Verdict::amenable);
    CHECK(std::abs(rz.mw - rz.ms_final) < 0.05);
    CHECK(rz.lambda_w == doctest::Approx(0.5));
    CHECK(rz.lambda_s_lo == doctest::Approx(0.5));

    auto t3 = make_family(json{{"family", "regular_tree"}, {"k", 3}});
    auto rt = classify(*t3, 0.1, 20);
    CHECK(rt.verdict == Verdict::nonamenable);
    CHECK(rt.gap > 0.1);
    CHECK(rt.lambda_w == doctest::Approx(1.0 / 3.0));
    // 1 <= M_s <= M_w <= M on a non-oriented family
    CHECK(rt.ms_final >= 1.0);
    CHECK(rt.ms_final <= rt.mw + 1e-9);
    CHECK(rt.mw <= t3->max_degree() + 1e-9);
    for (size_t i = 1; i < rt.ms_sequence.size(); ++i)
        CHECK(rt.ms_sequence[i].second >= rt.ms_sequence[i - 1].second - 1e-12);

    auto pend = make_family(json{{"family", "pendant_tree3"}});
    auto rp = classify(*pend, 0.1, 20);
    CHECK(rp.verdict == Verdict::nonamenable); // pendant decorations keep the gap open
    CHECK(rp.gap > 0.1);

    // margin band without stabilization stays inconclusive
    auto ri = classify(*t3, 0.1, 6);
    CHECK(ri.verdict == Verdict::inconclusive);

    auto rtree = make_family(json{{"family", "radial_tree"}, {"period", {2, 1}}});
    CHECK_THROWS_AS(classify(*rtree, 0.05, 10), DomainError); // no quotient to verify
}

TEST_SUITE_END();
