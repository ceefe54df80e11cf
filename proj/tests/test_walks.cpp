#include <doctest.h>

#include <nlohmann/json.hpp>

#include "brw/errors.hpp"
#include "brw/walks.hpp"
#include "oracles.hpp"

using namespace brw;
using nlohmann::json;

TEST_SUITE_BEGIN("walks");

TEST_CASE("integer line: closed walks, totals, first returns") {
    auto z = make_family(json{{"family", "line"}});
    auto diag = closed_walk_counts(*z, {0}, 10);
    CHECK(diag[0] == 1);
    CHECK(diag[2] == 2);
    CHECK(diag[4] == 6);
    for (int n = 1; n <= 9; n += 2) CHECK(diag[static_cast<size_t>(n)] == 0);
    // brute-force cross-check
    for (int n = 0; n <= 8; ++n)
        CHECK(diag[static_cast<size_t>(n)] == oracle::walk_count(*z, {0}, {0}, n));

    auto tot = total_walk_counts(*z, {0}, 12);
    for (int n = 0; n <= 12; ++n) CHECK(tot[static_cast<size_t>(n)] == mpz_class(1) << n);

    auto phi = first_return_counts(*z, {0}, 8);
    CHECK(phi[0] == 0);
    CHECK(phi[2] == 2);
    CHECK(phi[4] == 2);
    CHECK(phi[6] == 4);
    for (int n = 1; n <= 8; ++n)
        CHECK(phi[static_cast<size_t>(n)] == oracle::first_passage_count(*z, {0}, {0}, n));

    auto phi01 = first_passage(*z, {0}, {1}, 6);
    CHECK(phi01[1] == 1);
    for (int n = 1; n <= 6; ++n)
        CHECK(phi01[static_cast<size_t>(n)] == oracle::first_passage_count(*z, {0}, {1}, n));
}

TEST_CASE("k loops: gamma^n = k^n and the escalation to big integers") {
    auto l3 = make_family(json{{"family", "loops"}, {"k", 3}});
    auto d3 = closed_walk_counts(*l3, {0}, 40);
    mpz_class p = 1;
    for (int n = 0; n <= 40; ++n) {
        CHECK(d3[static_cast<size_t>(n)] == p);
        p *= 3;
    }
    auto phi = first_return_counts(*l3, {0}, 8);
    CHECK(phi[1] == 3);
    for (int n = 2; n <= 8; ++n) CHECK(phi[static_cast<size_t>(n)] == 0);

    // 5^40 overflows 64 bits: exercises the mpz fallback
    auto l5 = make_family(json{{"family", "loops"}, {"k", 5}});
    auto d5 = closed_walk_counts(*l5, {0}, 40);
    mpz_class q = 1;
    mpz_ui_pow_ui(q.get_mpz_t(), 5, 40);
    CHECK(d5[40] == q);
}

TEST_CASE("3-regular tree: totals are 3^n, first returns from the branch structure") {
    auto t3 = make_family(json{{"family", "regular_tree"}, {"k", 3}});
    auto tot = total_walk_counts(*t3, t3->root(), 8);
    mpz_class p = 1;
    for (int n = 0; n <= 8; ++n) {
        CHECK(tot[static_cast<size_t>(n)] == p);
        CHECK(tot[static_cast<size_t>(n)] == oracle::total_count(*t3, t3->root(), n));
        p *= 3;
    }
    auto phi = first_return_counts(*t3, t3->root(), 6);
    CHECK(phi[2] == 3);
    CHECK(phi[4] == 6);
    for (int n = 1; n <= 6; ++n)
        CHECK(phi[static_cast<size_t>(n)] == oracle::first_passage_count(*t3, t3->root(), t3->root(), n));
}

TEST_CASE("path count tables match brute enumeration on random multigraphs") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 30; ++i) {
        auto g = oracle::random_multigraph(rng, 6, 3);
        auto t = path_counts(g, 0, 5);
        REQUIRE(t.exact);
        CHECK(t.gamma[0][0] == 1);
        for (int y = 0; y < g.vertex_count(); ++y)
            CHECK(t.gamma[1][static_cast<size_t>(y)] == mpz_class(static_cast<long>(g.weight(0, y))));
        for (int n = 0; n <= 5; ++n) {
            CHECK(t.totals[static_cast<size_t>(n)] == oracle::total_count(g, 0, n));
            for (int y = 0; y < g.vertex_count(); ++y)
                CHECK(t.gamma[static_cast<size_t>(n)][static_cast<size_t>(y)] ==
                      oracle::walk_count(g, 0, y, n));
        }
    }
}

TEST_CASE("composition identity over random instances") {
    std::mt19937_64 rng(7);
    int instances = 0;
    while (instances < 100) {
        auto g = oracle::random_multigraph(rng, 8, 3);
        auto tx = path_counts(g, 0, 10);
        std::uniform_int_distribution<int> pick(0, 5);
        int n = pick(rng), m = pick(rng);
        std::uniform_int_distribution<int> vy(0, g.vertex_count() - 1);
        int y = vy(rng);
        mpz_class sum = 0;
        for (int w = 0; w < g.vertex_count(); ++w) {
            auto tw = path_counts(g, w, m);
            sum += tx.gamma[static_cast<size_t>(n)][static_cast<size_t>(w)] *
                   tw.gamma[static_cast<size_t>(m)][static_cast<size_t>(y)];
        }
        CHECK(sum == tx.gamma[static_cast<size_t>(n + m)][static_cast<size_t>(y)]);
        ++instances;
    }
}

TEST_CASE("first-passage decomposition over random instances") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
        auto g = oracle::random_multigraph(rng, 8, 3);
        std::uniform_int_distribution<int> vy(0, g.vertex_count() - 1);
        int y = vy(rng);
        auto tx = path_counts(g, 0, 10);
        auto ty = path_counts(g, y, 10);
        auto phi = first_passage(g, 0, y, 10);
        for (int n = 0; n <= 10; ++n) {
            mpz_class sum = 0;
            for (int k = 0; k <= n; ++k)
                sum += phi[static_cast<size_t>(k)] *
                       ty.gamma[static_cast<size_t>(n - k)][static_cast<size_t>(y)];
            if (n == 0 && y == 0) continue; // gamma^0 = 1 is the empty walk, phi^0 = 0
            CHECK(sum == tx.gamma[static_cast<size_t>(n)][static_cast<size_t>(y)]);
        }
    }
}

TEST_CASE("Cauchy-Schwarz bound on closed walks") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 100; ++i) {
        auto g = oracle::random_multigraph(rng, 8, 3);
        auto t = path_counts(g, 0, 16);
        for (int n = 1; n <= 8; ++n) {
            mpz_class lhs = t.gamma[static_cast<size_t>(2 * n)][0] *
                            oracle::ball_size(g, 0, n);
            mpz_class rhs = t.totals[static_cast<size_t>(n)] * t.totals[static_cast<size_t>(n)];
            CHECK(lhs >= rhs);
        }
    }
}

TEST_CASE("period estimates") {
    auto z = make_family(json{{"family", "line"}});
    auto pz = period_estimate(*z, {0}, 10);
    CHECK(pz.conclusive);
    CHECK(pz.period == 2);

    auto l = make_family(json{{"family", "loops"}, {"k", 2}});
    CHECK(period_estimate(*l, {0}, 6).period == 1);

    auto c4 = make_family(json{{"family", "cycle"}, {"n", 4}});
    auto pc = period_estimate(*c4, {0}, 8);
    CHECK(pc.conclusive);
    CHECK(pc.period == 2);

    // no closed walk within the horizon: inconclusive, distinguished from 0
    auto p2 = make_multigraph(2, {{0, 1, 1.0}});
    auto pp = period_estimate(p2, 0, 1);
    CHECK_FALSE(pp.conclusive);
}

TEST_CASE("table budget produces a resource error naming the horizon") {
    auto t3 = make_family(json{{"family", "regular_tree"}, {"k", 3}});
    CHECK_THROWS_AS(path_counts(*t3, t3->root(), 64), ResourceError);
    try {
        path_counts(*t3, t3->root(), 64);
    } catch (const ResourceError& e) {
        CHECK(std::string(e.what()).find("64") != std::string::npos);
    }
}

TEST_CASE("cut-vertex factorization of first-passage series on trees") {
    // w separates x from y: phi_{x,y} is the convolution of phi_{x,w} and
    // phi_{w,y}, coefficient by coefficient up to the horizon
    auto check = [](const WeightedMultigraph& g, int x, int w, int y, int horizon) {
        auto pxy = first_passage(g, x, y, horizon);
        auto pxw = first_passage(g, x, w, horizon);
        auto pwy = first_passage(g, w, y, horizon);
        for (int n = 0; n <= horizon; ++n) {
            mpz_class conv = 0;
            for (int i = 0; i <= n; ++i)
                conv += pxw[static_cast<size_t>(i)] * pwy[static_cast<size_t>(n - i)];
            CHECK(conv == pxy[static_cast<size_t>(n)]);
        }
    };
    check(make_multigraph(5, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}}), 0, 2, 4, 12);
    check(make_multigraph(4, {{0, 1, 2}, {0, 2, 1}, {0, 3, 3}}), 1, 0, 3, 12); // star, weighted
}

TEST_CASE("diagonal growth of finite multigraphs approaches the spectral radius") {
    auto loops = make_multigraph(1, {{0, 0, 3.0}});
    CHECK(diagonal_growth(loops, 0, 1, 100, 200) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_SUITE_END();
