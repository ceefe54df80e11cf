#include "brw/multigraph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>

#include <nlohmann/json.hpp>

#include "brw/errors.hpp"

namespace brw {

namespace {

bool is_integral(double w) {
    return w == std::floor(w) && std::abs(w) < 9.007199254740992e15;
}

// connected means a path from x to y for every ordered pair, i.e. strong
// connectivity on the support of the weight matrix
bool strongly_connected(const std::vector<std::vector<std::pair<int, double>>>& adj) {
    const int n = static_cast<int>(adj.size());
    if (n == 0) return false;
    std::vector<std::vector<int>> rev(static_cast<size_t>(n));
    for (int x = 0; x < n; ++x)
        for (const auto& [y, w] : adj[static_cast<size_t>(x)]) rev[static_cast<size_t>(y)].push_back(x);

    auto reaches_all = [n](auto&& next) {
        std::vector<char> seen(static_cast<size_t>(n), 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        int count = 1;
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            for (int y : next(x))
                if (!seen[static_cast<size_t>(y)]) {
                    seen[static_cast<size_t>(y)] = 1;
                    ++count;
                    q.push(y);
                }
        }
        return count == n;
    };
    auto fwd = [&adj](int x) {
        std::vector<int> out;
        for (const auto& [y, w] : adj[static_cast<size_t>(x)]) out.push_back(y);
        return out;
    };
    auto bwd = [&rev](int x) { return rev[static_cast<size_t>(x)]; };
    return reaches_all(fwd) && reaches_all(bwd);
}

} // namespace

WeightedMultigraph::WeightedMultigraph(std::vector<std::string> vertex_names,
                                       const std::vector<Edge>& edges,
                                       bool oriented)
    : names_(std::move(vertex_names)), oriented_(oriented) {
    const int n = vertex_count();
    if (n == 0) throw ConfigError("multigraph needs at least one vertex");

    std::vector<std::map<int, double>> acc(static_cast<size_t>(n));
    auto add = [&](int x, int y, double w) {
        if (x < 0 || x >= n || y < 0 || y >= n)
            throw ConfigError("edge endpoint out of range");
        if (w < 0.0) throw ConfigError("negative edge weight");
        if (w > 0.0) acc[static_cast<size_t>(x)][y] += w;
    };
    for (const auto& [x, y, w] : edges) {
        add(x, y, w);
        if (!oriented_ && x != y) add(y, x, w);
    }

    adj_.resize(static_cast<size_t>(n));
    degree_.assign(static_cast<size_t>(n), 0.0);
    for (int x = 0; x < n; ++x) {
        for (const auto& [y, w] : acc[static_cast<size_t>(x)]) {
            adj_[static_cast<size_t>(x)].emplace_back(y, w);
            degree_[static_cast<size_t>(x)] += w;
            if (!is_integral(w)) integer_weights_ = false;
        }
        max_degree_ = std::max(max_degree_, degree_[static_cast<size_t>(x)]);
    }

    if (!oriented_) {
        for (int x = 0; x < n; ++x)
            for (const auto& [y, w] : adj_[static_cast<size_t>(x)])
                if (weight(y, x) != w)
                    throw ConfigError("non-oriented multigraph has asymmetric weights at (" +
                                      names_[static_cast<size_t>(x)] + "," + names_[static_cast<size_t>(y)] + ")");
    }
    if (!strongly_connected(adj_))
        throw ConfigError("multigraph is not connected");
}

int WeightedMultigraph::vertex_index(const std::string& name) const {
    for (int i = 0; i < vertex_count(); ++i)
        if (names_[static_cast<size_t>(i)] == name) return i;
    throw DomainError("unknown vertex: " + name);
}

void WeightedMultigraph::check_vertex(int x) const {
    if (x < 0 || x >= vertex_count()) throw DomainError("vertex index out of range");
}

double WeightedMultigraph::weight(int x, int y) const {
    check_vertex(x);
    check_vertex(y);
    const auto& row = adj_[static_cast<size_t>(x)];
    auto it = std::lower_bound(row.begin(), row.end(), y,
                               [](const std::pair<int, double>& p, int v) { return p.first < v; });
    return (it != row.end() && it->first == y) ? it->second : 0.0;
}

std::span<const std::pair<int, double>> WeightedMultigraph::neighbors(int x) const {
    check_vertex(x);
    return adj_[static_cast<size_t>(x)];
}

std::vector<std::vector<double>> WeightedMultigraph::adjacency_matrix() const {
    const size_t n = names_.size();
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (size_t x = 0; x < n; ++x)
        for (const auto& [y, w] : adj_[x]) m[x][static_cast<size_t>(y)] = w;
    return m;
}

WeightedMultigraph WeightedMultigraph::from_json(const nlohmann::json& j) {
    if (!j.is_object() || j.value("format", "") != "brw-graph-v1")
        throw ConfigError("expected a brw-graph-v1 graph object");
    std::vector<std::string> names = j.at("vertices").get<std::vector<std::string>>();
    std::map<std::string, int> index;
    for (int i = 0; i < static_cast<int>(names.size()); ++i) {
        if (!index.emplace(names[static_cast<size_t>(i)], i).second)
            throw ConfigError("duplicate vertex name: " + names[static_cast<size_t>(i)]);
    }
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 3) throw ConfigError("edge entries must be [src, dst, weight]");
        auto find = [&](const nlohmann::json& v) {
            auto it = index.find(v.get<std::string>());
            if (it == index.end()) throw ConfigError("edge references unknown vertex " + v.get<std::string>());
            return it->second;
        };
        edges.emplace_back(find(e[0]), find(e[1]), e[2].get<double>());
    }
    return WeightedMultigraph(std::move(names), edges, j.value("oriented", false));
}

WeightedMultigraph WeightedMultigraph::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open graph file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
    return from_json(j);
}

nlohmann::json WeightedMultigraph::to_json() const {
    nlohmann::json j;
    j["format"] = "brw-graph-v1";
    j["oriented"] = oriented_;
    j["vertices"] = names_;
    nlohmann::json edges = nlohmann::json::array();
    for (int x = 0; x < vertex_count(); ++x)
        for (const auto& [y, w] : adj_[static_cast<size_t>(x)]) {
            if (!oriented_ && y < x) continue; // list each undirected edge once
            edges.push_back({names_[static_cast<size_t>(x)], names_[static_cast<size_t>(y)], w});
        }
    j["edges"] = std::move(edges);
    return j;
}

WeightedMultigraph make_multigraph(int n, const std::vector<WeightedMultigraph::Edge>& edges, bool oriented) {
    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
    return WeightedMultigraph(std::move(names), edges, oriented);
}

} // namespace brw
