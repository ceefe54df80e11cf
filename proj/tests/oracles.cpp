#include "oracles.hpp"

#include <cmath>
#include <queue>
#include <set>

namespace brw::oracle {

namespace {

void walk_rec(const WeightedMultigraph& g, int cur, int steps_left, const mpz_class& weight,
              int target, bool first_passage, mpz_class& acc) {
    if (steps_left == 0) {
        if (target < 0 || cur == target) acc += weight;
        return;
    }
    for (const auto& [y, w] : g.neighbors(cur)) {
        if (first_passage && y == target && steps_left > 1) continue; // may not revisit early
        walk_rec(g, y, steps_left - 1, weight * static_cast<long>(w), target, first_passage, acc);
    }
}

void walk_rec_family(const GraphFamily& g, const FamilyVertex& cur, int steps_left,
                     const mpz_class& weight, const FamilyVertex* target, bool first_passage,
                     mpz_class& acc) {
    if (steps_left == 0) {
        if (target == nullptr || cur == *target) acc += weight;
        return;
    }
    for (const auto& [y, w] : g.neighbors(cur)) {
        if (first_passage && target && y == *target && steps_left > 1) continue;
        walk_rec_family(g, y, steps_left - 1, weight * static_cast<long>(w), target, first_passage,
                        acc);
    }
}

} // namespace

mpz_class walk_count(const WeightedMultigraph& g, int x, int y, int n) {
    mpz_class acc = 0;
    walk_rec(g, x, n, 1, y, false, acc);
    return acc;
}

mpz_class total_count(const WeightedMultigraph& g, int x, int n) {
    mpz_class acc = 0;
    walk_rec(g, x, n, 1, -1, false, acc);
    return acc;
}

mpz_class first_passage_count(const WeightedMultigraph& g, int x, int y, int n) {
    if (n == 0) return 0;
    mpz_class acc = 0;
    walk_rec(g, x, n, 1, y, true, acc);
    return acc;
}

mpz_class walk_count(const GraphFamily& g, const FamilyVertex& x, const FamilyVertex& y, int n) {
    mpz_class acc = 0;
    walk_rec_family(g, x, n, 1, &y, false, acc);
    return acc;
}

mpz_class total_count(const GraphFamily& g, const FamilyVertex& x, int n) {
    mpz_class acc = 0;
    walk_rec_family(g, x, n, 1, nullptr, false, acc);
    return acc;
}

mpz_class first_passage_count(const GraphFamily& g, const FamilyVertex& x, const FamilyVertex& y,
                              int n) {
    if (n == 0) return 0;
    mpz_class acc = 0;
    walk_rec_family(g, x, n, 1, &y, true, acc);
    return acc;
}

int ball_size(const WeightedMultigraph& g, int x, int n) {
    std::vector<int> dist(static_cast<size_t>(g.vertex_count()), -1);
    std::queue<int> q;
    q.push(x);
    dist[static_cast<size_t>(x)] = 0;
    int count = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        if (dist[static_cast<size_t>(v)] == n) continue;
        for (const auto& [y, w] : g.neighbors(v))
            if (dist[static_cast<size_t>(y)] < 0) {
                dist[static_cast<size_t>(y)] = dist[static_cast<size_t>(v)] + 1;
                ++count;
                q.push(y);
            }
    }
    return count;
}

WeightedMultigraph random_multigraph(std::mt19937_64& rng, int max_vertices, int max_weight,
                                     double extra_edge_prob, double loop_prob) {
    std::uniform_int_distribution<int> nv(2, max_vertices);
    std::uniform_int_distribution<int> wdist(1, max_weight);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = nv(rng);

    std::vector<WeightedMultigraph::Edge> edges;
    for (int v = 1; v < n; ++v) {
        std::uniform_int_distribution<int> parent(0, v - 1);
        edges.push_back({parent(rng), v, static_cast<double>(wdist(rng))});
    }
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b)
            if (u(rng) < extra_edge_prob) edges.push_back({a, b, static_cast<double>(wdist(rng))});
        if (u(rng) < loop_prob) edges.push_back({a, a, static_cast<double>(wdist(rng))});
    }
    return make_multigraph(n, edges, false);
}

double path_lambda_max(int n) {
    return 2.0 * std::cos(M_PI / (n + 1));
}

} // namespace brw::oracle
