#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace brw {

/// Finite weighted multigraph. Weights n_xy are nonnegative; integer-valued
/// weights make this a multigraph proper and switch all path counting to
/// exact big-integer arithmetic. Immutable after construction.
class WeightedMultigraph {
public:
    using Edge = std::tuple<int, int, double>; // src, dst, weight

    // Non-oriented graphs may list each undirected edge once; the
    // constructor symmetrizes and then checks n_xy == n_yx.
    WeightedMultigraph(std::vector<std::string> vertex_names,
                       const std::vector<Edge>& edges,
                       bool oriented);

    static WeightedMultigraph from_json(const nlohmann::json& j);
    static WeightedMultigraph load_file(const std::string& path);
    nlohmann::json to_json() const;

    int vertex_count() const { return static_cast<int>(names_.size()); }
    const std::string& vertex_name(int x) const { return names_[static_cast<size_t>(x)]; }
    /// Index of a named vertex; DomainError if unknown.
    int vertex_index(const std::string& name) const;

    bool oriented() const { return oriented_; }
    bool integer_weights() const { return integer_weights_; }

    /// n_xy (0 when absent). x, y must be valid indices.
    double weight(int x, int y) const;

    /// Outgoing (y, n_xy) pairs with n_xy > 0, sorted by target index.
    std::span<const std::pair<int, double>> neighbors(int x) const;

    /// deg(x) = sum_y n_xy. Loops count once.
    double degree(int x) const { return degree_[static_cast<size_t>(x)]; }

    /// M = max_x deg(x).
    double max_degree() const { return max_degree_; }

    std::vector<std::vector<double>> adjacency_matrix() const;

private:
    void check_vertex(int x) const;

    std::vector<std::string> names_;
    std::vector<std::vector<std::pair<int, double>>> adj_; // sorted by target
    std::vector<double> degree_;
    double max_degree_ = 0.0;
    bool oriented_ = false;
    bool integer_weights_ = true;
};

/// Convenience builder: vertices named "0".."n-1".
WeightedMultigraph make_multigraph(int n, const std::vector<WeightedMultigraph::Edge>& edges,
                                   bool oriented = false);

} // namespace brw
