#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "brw/multigraph.hpp"

namespace brw {

/// Canonical vertex encoding: an integer tuple. Lexicographic order of the
/// encodings is the canonical vertex order everywhere.
using FamilyVertex = std::vector<int>;

std::string vertex_label(const FamilyVertex& v);

class GraphFamily;

/// A local isomorphism onto a finite multigraph, given as the codomain plus
/// a class assignment on encodings.
struct KnownQuotient {
    WeightedMultigraph codomain;
    std::function<int(const FamilyVertex&)> class_of;
};

/// Compact expansion interface for tree-shaped families: every vertex is
/// described by a small integer state, all edges have weight 1 and balls can
/// be materialized without hashing encodings. States fit in [0, state_count).
struct TreeExpansion {
    int state_count = 0;
    int root_state = 0;
    // children[s] = states of the children of a vertex in state s
    std::vector<std::vector<int>> children;
    // quotient class per state, or empty when no known quotient
    std::vector<int> state_class;
};

/// Lazy presentation of a (possibly infinite) weighted multigraph through a
/// pure neighbor oracle with a distinguished root.
class GraphFamily {
public:
    virtual ~GraphFamily() = default;

    virtual const std::string& name() const = 0;
    virtual FamilyVertex root() const = 0;

    /// (y, n_xy) pairs with n_xy > 0, sorted by encoding. DomainError on a
    /// vertex not in the family.
    virtual std::vector<std::pair<FamilyVertex, double>> neighbors(const FamilyVertex& x) const = 0;

    virtual bool oriented() const { return false; }
    virtual bool integer_weights() const { return true; }
    virtual bool finite() const { return false; }

    /// Bound M on the degree, exact for all built-in families.
    virtual double max_degree() const = 0;

    virtual const KnownQuotient* known_quotient() const { return nullptr; }
    virtual const TreeExpansion* tree_expansion() const { return nullptr; }

    /// Whether M_w is certified to be attained uniformly (known quotient, or
    /// the periodic radial structure). "false" means unknown, not "no".
    virtual bool mw_uniform() const { return known_quotient() != nullptr; }

    virtual nlohmann::json spec() const = 0;
};

/// Supported specs: {"family":"loops","k":3}, {"family":"line"},
/// {"family":"lattice","dim":2}, {"family":"regular_tree","k":3},
/// {"family":"pendant_tree","k":3} (alias pendant_tree3),
/// {"family":"bridge","k":3}, {"family":"radial_tree","period":[2,1]},
/// {"family":"radial_composite","period":[2,1,1]},
/// {"family":"cycle","n":4}, {"family":"cover","matrix":[[3,1],[1,0]],"root_class":0}.
std::unique_ptr<GraphFamily> make_family(const nlohmann::json& spec);

/// Finite truncation B(root, radius) in CSR form. Vertices are indexed by
/// BFS discovery order; index 0 is the center. Interior vertices
/// (dist < radius) carry their full neighbor lists; boundary vertices lose
/// the weight recorded in boundary_loss.
struct Ball {
    int radius = 0;
    std::vector<int> dist;
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<double> wt;
    std::vector<double> full_degree;    // degree in the ambient graph
    std::vector<double> boundary_loss;  // full_degree - in-ball weight
    std::vector<FamilyVertex> encoding; // empty when not requested
    bool integer_weights = true;
    bool oriented = false;

    int size() const { return static_cast<int>(dist.size()); }
    WeightedMultigraph to_multigraph() const;
};

/// BFS materialization. ResourceError once more than max_vertices are
/// discovered; the message names the radius.
Ball materialize_ball(const GraphFamily& g, const FamilyVertex& center, int radius,
                      std::size_t max_vertices = 6'000'000, bool keep_encodings = true);

/// Ball inside a finite multigraph (induced subgraph on B(x, radius)).
Ball ball_of(const WeightedMultigraph& g, int center, int radius);

/// Whole finite graph viewed as a Ball (radius treated as infinite).
Ball whole_graph_ball(const WeightedMultigraph& g);

} // namespace brw
