#include "brw/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "brw/errors.hpp"
#include "brw/walks.hpp"

namespace brw {

namespace {

// class-wise outgoing weight sums, optionally quantized for float weights
std::vector<double> signature(const WeightedMultigraph& g, int x, const std::vector<int>& block_of,
                              int block_count) {
    std::vector<double> sig(static_cast<size_t>(block_count), 0.0);
    for (const auto& [y, w] : g.neighbors(x)) sig[static_cast<size_t>(block_of[static_cast<size_t>(y)])] += w;
    return sig;
}

std::vector<long long> quantize(const std::vector<double>& sig) {
    std::vector<long long> q(sig.size());
    for (size_t i = 0; i < sig.size(); ++i) q[i] = llround(sig[i] * 1e9);
    return q;
}

Partition canonical_relabel(const WeightedMultigraph& g, std::vector<int> block_of, int count) {
    std::vector<int> size(static_cast<size_t>(count), 0), smallest(static_cast<size_t>(count), g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) {
        int b = block_of[static_cast<size_t>(v)];
        ++size[static_cast<size_t>(b)];
        smallest[static_cast<size_t>(b)] = std::min(smallest[static_cast<size_t>(b)], v);
    }
    std::vector<int> order(static_cast<size_t>(count));
    for (int b = 0; b < count; ++b) order[static_cast<size_t>(b)] = b;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (size[static_cast<size_t>(a)] != size[static_cast<size_t>(b)])
            return size[static_cast<size_t>(a)] < size[static_cast<size_t>(b)];
        return smallest[static_cast<size_t>(a)] < smallest[static_cast<size_t>(b)];
    });
    std::vector<int> rank(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) rank[static_cast<size_t>(order[static_cast<size_t>(i)])] = i;
    for (auto& b : block_of) b = rank[static_cast<size_t>(b)];
    Partition p;
    p.block_of = std::move(block_of);
    p.block_count = count;
    p.float_tolerance_used = !g.integer_weights();
    return p;
}

} // namespace

std::vector<std::vector<int>> Partition::blocks() const {
    std::vector<std::vector<int>> out(static_cast<size_t>(block_count));
    for (int v = 0; v < static_cast<int>(block_of.size()); ++v)
        out[static_cast<size_t>(block_of[static_cast<size_t>(v)])].push_back(v);
    return out;
}

Partition refine_partition(const WeightedMultigraph& g, const std::optional<Partition>& seed) {
    const int n = g.vertex_count();
    std::vector<int> block_of(static_cast<size_t>(n), 0);
    int count = 1;
    if (seed) {
        if (static_cast<int>(seed->block_of.size()) != n)
            throw DomainError("seed partition size does not match the graph");
        // compress to dense ids so the fixed-point test (class count
        // unchanged) is sound even for seeds with gaps or empty blocks
        std::map<int, int> dense;
        block_of.clear();
        for (int b : seed->block_of) {
            if (b < 0) throw DomainError("seed partition entries must be >= 0");
            block_of.push_back(dense.emplace(b, static_cast<int>(dense.size())).first->second);
        }
        count = static_cast<int>(dense.size());
    }

    for (;;) {
        // split every block by (old block, signature)
        std::map<std::pair<int, std::vector<long long>>, int> classes;
        std::vector<int> next(static_cast<size_t>(n));
        for (int v = 0; v < n; ++v) {
            auto key = std::make_pair(block_of[static_cast<size_t>(v)],
                                      quantize(signature(g, v, block_of, count)));
            next[static_cast<size_t>(v)] =
                classes.emplace(std::move(key), static_cast<int>(classes.size())).first->second;
        }
        int next_count = static_cast<int>(classes.size());
        if (next_count == count) break; // refinement only splits, so this is the fixed point
        block_of = std::move(next);
        count = next_count;
    }
    return canonical_relabel(g, std::move(block_of), count);
}

QuotientResult build_quotient(const WeightedMultigraph& g, const Partition& p) {
    const int n = g.vertex_count();
    if (static_cast<int>(p.block_of.size()) != n) throw DomainError("partition size does not match the graph");
    const int k = p.block_count;
    const double tol = g.integer_weights() ? 0.0 : 1e-9;

    std::vector<std::vector<double>> rows(static_cast<size_t>(k));
    std::vector<int> representative(static_cast<size_t>(k), -1);
    for (int v = 0; v < n; ++v) {
        const int b = p.block_of[static_cast<size_t>(v)];
        auto sig = signature(g, v, p.block_of, k);
        if (representative[static_cast<size_t>(b)] < 0) {
            representative[static_cast<size_t>(b)] = v;
            rows[static_cast<size_t>(b)] = std::move(sig);
        } else {
            for (int c = 0; c < k; ++c)
                if (std::abs(sig[static_cast<size_t>(c)] - rows[static_cast<size_t>(b)][static_cast<size_t>(c)]) > tol)
                    throw DomainError(
                        "partition is not equitable: vertices " +
                        g.vertex_name(representative[static_cast<size_t>(b)]) + " and " + g.vertex_name(v) +
                        " disagree on block " + std::to_string(c));
        }
    }

    bool symmetric = true;
    for (int b = 0; b < k; ++b)
        for (int c = 0; c < k; ++c)
            symmetric = symmetric && std::abs(rows[static_cast<size_t>(b)][static_cast<size_t>(c)] -
                                              rows[static_cast<size_t>(c)][static_cast<size_t>(b)]) <= tol;
    // the non-oriented constructor symmetrizes, so list each edge once
    std::vector<WeightedMultigraph::Edge> edges;
    for (int b = 0; b < k; ++b)
        for (int c = symmetric ? b : 0; c < k; ++c) {
            double w = rows[static_cast<size_t>(b)][static_cast<size_t>(c)];
            if (w > 0) edges.push_back({b, c, w});
        }
    std::vector<std::string> names;
    for (int b = 0; b < k; ++b) names.push_back("c" + std::to_string(b));
    return QuotientResult{WeightedMultigraph(std::move(names), edges, !symmetric), p};
}

VerifyReport verify_local_isomorphism(const GraphFamily& g, const KnownQuotient& q, int radius,
                                      std::size_t max_vertices) {
    if (radius < 1) throw DomainError("verification radius must be >= 1");
    VerifyReport rep;
    rep.radius = radius;
    rep.float_tolerance_used = !g.integer_weights();
    const double tol = rep.float_tolerance_used ? 1e-9 : 0.0;

    Ball b = materialize_ball(g, g.root(), radius, max_vertices, true);
    const int k = q.codomain.vertex_count();
    std::vector<int> cls(static_cast<size_t>(b.size()));
    for (int v = 0; v < b.size(); ++v) {
        cls[static_cast<size_t>(v)] = q.class_of(b.encoding[static_cast<size_t>(v)]);
        if (cls[static_cast<size_t>(v)] < 0 || cls[static_cast<size_t>(v)] >= k) {
            rep.violation = "class of " + vertex_label(b.encoding[static_cast<size_t>(v)]) + " is out of range";
            return rep;
        }
    }

    for (int v = 0; v < b.size(); ++v) {
        if (b.dist[static_cast<size_t>(v)] >= radius) continue; // boundary rows are incomplete
        std::vector<double> sums(static_cast<size_t>(k), 0.0);
        for (int e = b.row_ptr[static_cast<size_t>(v)]; e < b.row_ptr[static_cast<size_t>(v) + 1]; ++e)
            sums[static_cast<size_t>(cls[static_cast<size_t>(b.col[static_cast<size_t>(e)])])] +=
                b.wt[static_cast<size_t>(e)];
        for (int y = 0; y < k; ++y) {
            const double expected = q.codomain.weight(cls[static_cast<size_t>(v)], y);
            if (std::abs(sums[static_cast<size_t>(y)] - expected) > tol) {
                rep.violation = "vertex " + vertex_label(b.encoding[static_cast<size_t>(v)]) +
                                " has weight " + std::to_string(sums[static_cast<size_t>(y)]) +
                                " into class " + q.codomain.vertex_name(y) + ", expected " +
                                std::to_string(expected);
                return rep;
            }
        }
        ++rep.interior_checked;
    }

    // walk-total transport at the root, exact in the integers
    rep.transport_horizon = radius - 1;
    if (g.integer_weights() && rep.transport_horizon >= 1) {
        PathCountTable tx = path_counts(b, 0, rep.transport_horizon);
        std::vector<mpz_class> ty = total_walk_counts(q.codomain, cls[0], rep.transport_horizon);
        for (int n = 0; n <= rep.transport_horizon; ++n)
            if (tx.totals[static_cast<size_t>(n)] != ty[static_cast<size_t>(n)]) {
                rep.violation = "walk totals disagree at length " + std::to_string(n) + ": " +
                                tx.totals[static_cast<size_t>(n)].get_str() + " vs " +
                                ty[static_cast<size_t>(n)].get_str();
                return rep;
            }
    }

    rep.pass = true;
    return rep;
}

} // namespace brw
