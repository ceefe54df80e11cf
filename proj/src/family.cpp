#include "brw/family.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "brw/errors.hpp"

namespace brw {

std::string vertex_label(const FamilyVertex& v) {
    if (v.size() == 1) return std::to_string(v[0]);
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    s += ")";
    return s;
}

namespace {

struct VertexHash {
    size_t operator()(const FamilyVertex& v) const {
        size_t h = 1469598103934665603ULL;
        for (int x : v) {
            h ^= static_cast<size_t>(static_cast<unsigned>(x));
            h *= 1099511628211ULL;
        }
        return h;
    }
};

using NeighborList = std::vector<std::pair<FamilyVertex, double>>;

void sort_neighbors(NeighborList& out) {
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
}

// ---------------------------------------------------------------------------
// loops: one vertex with k self-edges (the quotient of every k-regular graph)

class LoopsFamily final : public GraphFamily {
public:
    explicit LoopsFamily(int k) : k_(k), name_("loops") {
        if (k < 1) throw ConfigError("loops: k must be >= 1");
        quotient_.emplace(KnownQuotient{
            make_multigraph(1, {{0, 0, static_cast<double>(k)}}, false),
            [](const FamilyVertex&) { return 0; }});
    }
    const std::string& name() const override { return name_; }
    FamilyVertex root() const override { return {0}; }
    NeighborList neighbors(const FamilyVertex& x) const override {
        if (x != FamilyVertex{0}) throw DomainError("loops: unknown vertex " + vertex_label(x));
        return {{{0}, static_cast<double>(k_)}};
    }
    bool finite() const override { return true; }
    double max_degree() const override { return k_; }
    const KnownQuotient* known_quotient() const override { return &*quotient_; }
    nlohmann::json spec() const override { return {{"family", "loops"}, {"k", k_}}; }

private:
    int k_;
    std::string name_;
    std::optional<KnownQuotient> quotient_;
};

// ---------------------------------------------------------------------------
// cycle: finite cycle C_n

class CycleFamily final : public GraphFamily {
public:
    explicit CycleFamily(int n) : n_(n), name_("cycle") {
        if (n < 3) throw ConfigError("cycle: n must be >= 3");
        quotient_.emplace(KnownQuotient{make_multigraph(1, {{0, 0, 2.0}}, false),
                                        [](const FamilyVertex&) { return 0; }});
    }
    const std::string& name() const override { return name_; }
    FamilyVertex root() const override { return {0}; }
    NeighborList neighbors(const FamilyVertex& x) const override {
        if (x.size() != 1 || x[0] < 0 || x[0] >= n_)
            throw DomainError("cycle: unknown vertex " + vertex_label(x));
        NeighborList out{{{(x[0] + n_ - 1) % n_}, 1.0}, {{(x[0] + 1) % n_}, 1.0}};
        sort_neighbors(out);
        return out;
    }
    bool finite() const override { return true; }
    double max_degree() const override { return 2.0; }
    const KnownQuotient* known_quotient() const override { return &*quotient_; }
    nlohmann::json spec() const override { return {{"family", "cycle"}, {"n", n_}}; }

private:
    int n_;
    std::string name_;
    std::optional<KnownQuotient> quotient_;
};

// ---------------------------------------------------------------------------
// line: the integer line Z; 2-regular, quotient = one vertex with 2 loops

class LineFamily final : public GraphFamily {
public:
    LineFamily() : name_("line") {
        quotient_.emplace(KnownQuotient{make_multigraph(1, {{0, 0, 2.0}}, false),
                                        [](const FamilyVertex&) { return 0; }});
        expansion_.state_count = 2;
        expansion_.root_state = 0;
        expansion_.children = {{1, 1}, {1}};
        expansion_.state_class = {0, 0};
    }
    const std::string& name() const override { return name_; }
    FamilyVertex root() const override { return {0}; }
    NeighborList neighbors(const FamilyVertex& x) const override {
        if (x.size() != 1) throw DomainError("line: unknown vertex " + vertex_label(x));
        return {{{x[0] - 1}, 1.0}, {{x[0] + 1}, 1.0}};
    }
    double max_degree() const override { return 2.0; }
    const KnownQuotient* known_quotient() const override { return &*quotient_; }
    const TreeExpansion* tree_expansion() const override { return &expansion_; }
    nlohmann::json spec() const override { return {{"family", "line"}}; }

private:
    std::string name_;
    std::optional<KnownQuotient> quotient_;
    TreeExpansion expansion_;
};

// ---------------------------------------------------------------------------
// lattice: Z^d, 2d-regular

class LatticeFamily final : public GraphFamily {
public:
    explicit LatticeFamily(int dim) : dim_(dim), name_("lattice") {
        if (dim < 1) throw ConfigError("lattice: dim must be >= 1");
        quotient_.emplace(KnownQuotient{
            make_multigraph(1, {{0, 0, 2.0 * dim}}, false),
            [](const FamilyVertex&) { return 0; }});
    }
    const std::string& name() const override { return name_; }
    FamilyVertex root() const override { return FamilyVertex(static_cast<size_t>(dim_), 0); }
    NeighborList neighbors(const FamilyVertex& x) const override {
        if (static_cast<int>(x.size()) != dim_)
            throw DomainError("lattice: unknown vertex " + vertex_label(x));
        NeighborList out;
        for (int i = 0; i < dim_; ++i)
            for (int s : {-1, +1}) {
                FamilyVertex y = x;
                y[static_cast<size_t>(i)] += s;
                out.emplace_back(std::move(y), 1.0);
            }
        sort_neighbors(out);
        return out;
    }
    double max_degree() const override { return 2.0 * dim_; }
    const KnownQuotient* known_quotient() const override { return &*quotient_; }
    nlohmann::json spec() const override { return {{"family", "lattice"}, {"dim", dim_}}; }

private:
    int dim_;
    std::string name_;
    std::optional<KnownQuotient> quotient_;
};

// ---------------------------------------------------------------------------
// cover: the tree cover of a finite multigraph Y. A vertex over class y whose
// parent lies over y_p has, for every class z, n_yz - [z == y_p] children
// over z, each attached by a single edge; the class map is then a local
// isomorphism onto Y by construction. Encodings are slot paths
// {root_class, s1, s2, ...} into the deterministic child lists.
//
// regular_tree, pendant_tree and bridge are covers of one-line matrices:
//   [[k]]          -> the k-regular tree
//   [[k,1],[1,0]]  -> the k-regular tree with one pendant vertex per vertex
//   [[k,1],[2,0]]  -> k-regular trees joined pairwise through two-edge
//                     bridges with an intermediate vertex

class CoverFamily final : public GraphFamily {
public:
    CoverFamily(std::string name, nlohmann::json spec,
                std::vector<std::vector<int>> matrix, int root_class)
        : name_(std::move(name)), spec_(std::move(spec)), m_(std::move(matrix)), root_class_(root_class) {
        const int c = static_cast<int>(m_.size());
        if (c == 0) throw ConfigError(name_ + ": empty quotient matrix");
        for (const auto& row : m_)
            if (static_cast<int>(row.size()) != c) throw ConfigError(name_ + ": matrix must be square");
        if (root_class_ < 0 || root_class_ >= c) throw ConfigError(name_ + ": root_class out of range");
        for (int y = 0; y < c; ++y)
            for (int z = 0; z < c; ++z) {
                if (m_[sz(y)][sz(z)] < 0) throw ConfigError(name_ + ": negative multiplicity");
                if ((m_[sz(y)][sz(z)] > 0) != (m_[sz(z)][sz(y)] > 0))
                    throw ConfigError(name_ + ": cover needs a symmetric support");
            }

        bool symmetric = true;
        for (int y = 0; y < c; ++y)
            for (int z = 0; z < c; ++z) symmetric = symmetric && m_[sz(y)][sz(z)] == m_[sz(z)][sz(y)];
        // non-oriented construction symmetrizes, so list each edge once
        std::vector<WeightedMultigraph::Edge> edges;
        for (int y = 0; y < c; ++y)
            for (int z = symmetric ? y : 0; z < c; ++z)
                if (m_[sz(y)][sz(z)] > 0) edges.push_back({y, z, static_cast<double>(m_[sz(y)][sz(z)])});
        std::vector<std::string> class_names;
        for (int y = 0; y < c; ++y) class_names.push_back("c" + std::to_string(y));
        quotient_.emplace(KnownQuotient{
            WeightedMultigraph(std::move(class_names), edges, !symmetric),
            [this](const FamilyVertex& v) { return decode(v).back(); }});

        // expansion states: (class, parent class or none)
        expansion_.state_count = c * (c + 1);
        expansion_.root_state = state(root_class_, -1);
        expansion_.children.resize(sz(expansion_.state_count));
        expansion_.state_class.assign(sz(expansion_.state_count), -1);
        for (int y = 0; y < c; ++y)
            for (int p = -1; p < c; ++p) {
                auto& kids = expansion_.children[sz(state(y, p))];
                for (int z = 0; z < c; ++z) {
                    int count = m_[sz(y)][sz(z)] - (z == p ? 1 : 0);
                    for (int i = 0; i < count; ++i) kids.push_back(state(z, y));
                }
                expansion_.state_class[sz(state(y, p))] = y;
            }

        max_degree_ = 0;
        for (int y = 0; y < c; ++y) {
            int row = 0;
            for (int z = 0; z < c; ++z) row += m_[sz(y)][sz(z)];
            max_degree_ = std::max(max_degree_, static_cast<double>(row));
        }
    }

    const std::string& name() const override { return name_; }
    FamilyVertex root() const override { return {root_class_}; }

    NeighborList neighbors(const FamilyVertex& x) const override {
        std::vector<int> classes = decode(x);
        NeighborList out;
        if (x.size() > 1) {
            FamilyVertex parent(x.begin(), x.end() - 1);
            out.emplace_back(std::move(parent), 1.0);
        }
        const int y = classes.back();
        const int p = classes.size() >= 2 ? classes[classes.size() - 2] : -1;
        int slots = 0;
        for (int z = 0; z < static_cast<int>(m_.size()); ++z)
            slots += m_[sz(y)][sz(z)] - (z == p ? 1 : 0);
        for (int s = 0; s < slots; ++s) {
            FamilyVertex child = x;
            child.push_back(s);
            out.emplace_back(std::move(child), 1.0);
        }
        return out; // parent (a strict prefix) already sorts first
    }

    double max_degree() const override { return max_degree_; }
    const KnownQuotient* known_quotient() const override { return &*quotient_; }
    const TreeExpansion* tree_expansion() const override { return &expansion_; }
    nlohmann::json spec() const override { return spec_; }

private:
    static size_t sz(int i) { return static_cast<size_t>(i); }
    int state(int y, int p) const { return y * (static_cast<int>(m_.size()) + 1) + (p + 1); }

    // classes along the slot path; throws on an invalid encoding
    std::vector<int> decode(const FamilyVertex& x) const {
        if (x.empty() || x[0] != root_class_)
            throw DomainError(name_ + ": unknown vertex " + vertex_label(x));
        std::vector<int> classes{root_class_};
        int y = root_class_, p = -1;
        for (size_t i = 1; i < x.size(); ++i) {
            int slot = x[i], cls = -1;
            for (int z = 0; z < static_cast<int>(m_.size()) && cls < 0; ++z) {
                int count = m_[sz(y)][sz(z)] - (z == p ? 1 : 0);
                if (slot < count)
                    cls = z;
                else
                    slot -= count;
            }
            if (cls < 0 || x[i] < 0) throw DomainError(name_ + ": unknown vertex " + vertex_label(x));
            p = y;
            y = cls;
            classes.push_back(y);
        }
        return classes;
    }

    std::string name_;
    nlohmann::json spec_;
    std::vector<std::vector<int>> m_;
    int root_class_;
    double max_degree_ = 0;
    std::optional<KnownQuotient> quotient_;
    TreeExpansion expansion_;
};

// ---------------------------------------------------------------------------
// radial_tree: rooted tree where a vertex at distance k from the root has
// degree p[k mod d] + 1 (the root has p[0] + 1 children). Periodic, so M_w
// is attained uniformly, but the root spoils any level-map quotient.

class RadialTreeFamily final : public GraphFamily {
public:
    explicit RadialTreeFamily(std::vector<int> period) : p_(std::move(period)), name_("radial_tree") {
        if (p_.empty()) throw ConfigError("radial_tree: period must be nonempty");
        for (int k : p_)
            if (k < 1) throw ConfigError("radial_tree: period entries must be >= 1");
        const int d = static_cast<int>(p_.size());
        expansion_.state_count = d + 1;
        expansion_.root_state = 0;
        expansion_.children.resize(sz(d + 1));
        expansion_.state_class.assign(sz(d + 1), -1);
        // state 0 = root; state s in 1..d = vertices at level l with l mod d = s mod d
        expansion_.children[0].assign(sz(p_[0] + 1), 1);
        for (int s = 1; s <= d; ++s)
            expansion_.children[sz(s)].assign(sz(p_[sz(s % d)]), (s % d) + 1);
    }
    const std::string& name() const override { return name_; }
    FamilyVertex root() const override { return {}; }
    NeighborList neighbors(const FamilyVertex& x) const override {
        const int d = static_cast<int>(p_.size());
        const int level = static_cast<int>(x.size());
        int kids = level == 0 ? p_[0] + 1 : p_[sz(level % d)];
        for (size_t i = 0; i < x.size(); ++i) {
            int cap = i == 0 ? p_[0] + 1 : p_[sz(static_cast<int>(i) % d)];
            if (x[i] < 0 || x[i] >= cap) throw DomainError("radial_tree: unknown vertex " + vertex_label(x));
        }
        NeighborList out;
        if (level > 0) out.emplace_back(FamilyVertex(x.begin(), x.end() - 1), 1.0);
        for (int c = 0; c < kids; ++c) {
            FamilyVertex child = x;
            child.push_back(c);
            out.emplace_back(std::move(child), 1.0);
        }
        return out;
    }
    double max_degree() const override {
        return static_cast<double>(*std::max_element(p_.begin(), p_.end()) + 1);
    }
    const TreeExpansion* tree_expansion() const override { return &expansion_; }
    bool mw_uniform() const override { return true; } // periodic radial structure
    nlohmann::json spec() const override { return {{"family", "radial_tree"}, {"period", p_}}; }

private:
    static size_t sz(int i) { return static_cast<size_t>(i); }
    std::vector<int> p_;
    std::string name_;
    TreeExpansion expansion_;
};

// ---------------------------------------------------------------------------
// radial_composite: cyclic core y_0..y_{d-1} (single edges both ways), with
// p[i]-1 radial trees attached to y_i. Locally isomorphic to the oriented
// d-cycle with forward multiplicities p[i] and backward multiplicities 1.

class RadialCompositeFamily final : public GraphFamily {
public:
    explicit RadialCompositeFamily(std::vector<int> period)
        : p_(std::move(period)), name_("radial_composite") {
        const int d = static_cast<int>(p_.size());
        if (d < 3) throw ConfigError("radial_composite: period length must be >= 3");
        for (int k : p_)
            if (k < 1) throw ConfigError("radial_composite: period entries must be >= 1");
        std::vector<WeightedMultigraph::Edge> edges;
        for (int i = 0; i < d; ++i) {
            edges.push_back({i, (i + 1) % d, static_cast<double>(p_[sz(i)])});
            edges.push_back({(i + 1) % d, i, 1.0});
        }
        std::vector<std::string> names;
        for (int i = 0; i < d; ++i) names.push_back("c" + std::to_string(i));
        const int dd = d;
        quotient_.emplace(KnownQuotient{
            WeightedMultigraph(std::move(names), edges, true),
            [dd](const FamilyVertex& v) {
                if (v.size() == 1) return v[0];
                return (v[0] + static_cast<int>(v.size()) - 1) % dd;
            }});
    }
    const std::string& name() const override { return name_; }
    FamilyVertex root() const override { return {0}; }
    NeighborList neighbors(const FamilyVertex& x) const override {
        const int d = static_cast<int>(p_.size());
        validate(x);
        NeighborList out;
        if (x.size() == 1) {
            const int i = x[0];
            out.emplace_back(FamilyVertex{(i + d - 1) % d}, 1.0);
            out.emplace_back(FamilyVertex{(i + 1) % d}, 1.0);
            for (int c = 0; c + 1 < p_[sz(i)]; ++c) out.emplace_back(FamilyVertex{i, c}, 1.0);
        } else {
            const int i = x[0];
            const int depth = static_cast<int>(x.size()) - 1;
            out.emplace_back(x.size() == 2 ? FamilyVertex{i} : FamilyVertex(x.begin(), x.end() - 1), 1.0);
            const int kids = p_[sz((i + depth) % d)];
            for (int c = 0; c < kids; ++c) {
                FamilyVertex child = x;
                child.push_back(c);
                out.emplace_back(std::move(child), 1.0);
            }
        }
        sort_neighbors(out);
        return out;
    }
    double max_degree() const override {
        return static_cast<double>(*std::max_element(p_.begin(), p_.end()) + 1);
    }
    const KnownQuotient* known_quotient() const override { return &*quotient_; }
    nlohmann::json spec() const override { return {{"family", "radial_composite"}, {"period", p_}}; }

private:
    static size_t sz(int i) { return static_cast<size_t>(i); }
    void validate(const FamilyVertex& x) const {
        const int d = static_cast<int>(p_.size());
        if (x.empty() || x[0] < 0 || x[0] >= d)
            throw DomainError("radial_composite: unknown vertex " + vertex_label(x));
        if (x.size() >= 2 && (x[1] < 0 || x[1] >= p_[sz(x[0])] - 1))
            throw DomainError("radial_composite: unknown vertex " + vertex_label(x));
        for (size_t j = 2; j < x.size(); ++j) {
            int depth = static_cast<int>(j) - 1;
            if (x[j] < 0 || x[j] >= p_[sz((x[0] + depth) % d)])
                throw DomainError("radial_composite: unknown vertex " + vertex_label(x));
        }
    }
    std::vector<int> p_;
    std::string name_;
    std::optional<KnownQuotient> quotient_;
};

std::vector<std::vector<int>> int_matrix(const nlohmann::json& j, const std::string& ctx) {
    if (!j.is_array()) throw ConfigError(ctx + ": matrix must be an array of rows");
    std::vector<std::vector<int>> m;
    for (const auto& row : j) m.push_back(row.get<std::vector<int>>());
    return m;
}

} // namespace

std::unique_ptr<GraphFamily> make_family(const nlohmann::json& spec) {
    if (!spec.is_object() || !spec.contains("family"))
        throw ConfigError("family spec must be an object with a \"family\" key");
    std::string f = spec.at("family").get<std::string>();

    auto cover = [&spec](std::string name, std::vector<std::vector<int>> m, int root_class) {
        nlohmann::json s = spec;
        return std::make_unique<CoverFamily>(std::move(name), std::move(s), std::move(m), root_class);
    };

    if (f == "loops") return std::make_unique<LoopsFamily>(spec.value("k", 1));
    if (f == "cycle") return std::make_unique<CycleFamily>(spec.value("n", 3));
    if (f == "line") return std::make_unique<LineFamily>();
    if (f == "lattice") return std::make_unique<LatticeFamily>(spec.value("dim", 2));
    if (f == "regular_tree") {
        int k = spec.value("k", 3);
        if (k < 1) throw ConfigError("regular_tree: k must be >= 1");
        return cover("regular_tree", {{k}}, 0);
    }
    if (f == "pendant_tree" || f == "pendant_tree3") {
        int k = f == "pendant_tree3" ? 3 : spec.value("k", 3);
        if (k < 2) throw ConfigError("pendant_tree: k must be >= 2");
        return cover("pendant_tree", {{k, 1}, {1, 0}}, 0);
    }
    if (f == "bridge" || f == "bridge3") {
        int k = f == "bridge3" ? 3 : spec.value("k", 3);
        if (k < 2) throw ConfigError("bridge: k must be >= 2");
        return cover("bridge", {{k, 1}, {2, 0}}, 0);
    }
    if (f == "radial_tree")
        return std::make_unique<RadialTreeFamily>(spec.value("period", std::vector<int>{}));
    if (f == "radial_composite")
        return std::make_unique<RadialCompositeFamily>(spec.value("period", std::vector<int>{}));
    if (f == "cover") {
        if (!spec.contains("matrix")) throw ConfigError("cover: a \"matrix\" is required");
        return cover("cover", int_matrix(spec.at("matrix"), "cover"), spec.value("root_class", 0));
    }
    throw ConfigError("unknown family: " + f);
}

// ---------------------------------------------------------------------------
// Ball materialization

namespace {

Ball ball_generic(const GraphFamily& g, const FamilyVertex& center, int radius,
                  std::size_t max_vertices, bool keep_encodings) {
    Ball b;
    b.radius = radius;
    b.integer_weights = g.integer_weights();
    b.oriented = g.oriented();

    std::unordered_map<FamilyVertex, int, VertexHash> index;
    std::vector<FamilyVertex> verts{center};
    index.emplace(center, 0);
    b.dist.push_back(0);

    // discover
    for (size_t head = 0; head < verts.size(); ++head) {
        if (b.dist[head] >= radius) continue;
        for (auto& [y, w] : g.neighbors(verts[head])) {
            if (index.emplace(y, static_cast<int>(verts.size())).second) {
                if (verts.size() >= max_vertices)
                    throw ResourceError("ball budget exceeded at radius " + std::to_string(radius) +
                                        " (more than " + std::to_string(max_vertices) + " vertices)");
                verts.push_back(y);
                b.dist.push_back(b.dist[head] + 1);
            }
        }
    }

    // induced adjacency; every vertex is queried once so boundary-boundary
    // edges are kept too
    const int n = static_cast<int>(verts.size());
    b.row_ptr.assign(static_cast<size_t>(n) + 1, 0);
    b.full_degree.assign(static_cast<size_t>(n), 0.0);
    b.boundary_loss.assign(static_cast<size_t>(n), 0.0);
    std::vector<std::vector<std::pair<int, double>>> rows(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) {
        double in_ball = 0.0;
        for (auto& [y, w] : g.neighbors(verts[static_cast<size_t>(v)])) {
            b.full_degree[static_cast<size_t>(v)] += w;
            auto it = index.find(y);
            if (it != index.end()) {
                rows[static_cast<size_t>(v)].emplace_back(it->second, w);
                in_ball += w;
            }
        }
        b.boundary_loss[static_cast<size_t>(v)] = b.full_degree[static_cast<size_t>(v)] - in_ball;
    }
    for (int v = 0; v < n; ++v) {
        b.row_ptr[static_cast<size_t>(v) + 1] =
            b.row_ptr[static_cast<size_t>(v)] + static_cast<int>(rows[static_cast<size_t>(v)].size());
        for (auto& [y, w] : rows[static_cast<size_t>(v)]) {
            b.col.push_back(y);
            b.wt.push_back(w);
        }
    }
    if (keep_encodings) b.encoding = std::move(verts);
    return b;
}

// hash-free expansion for tree families
Ball ball_tree(const GraphFamily& g, int radius, std::size_t max_vertices) {
    const TreeExpansion& ex = *g.tree_expansion();
    Ball b;
    b.radius = radius;
    b.integer_weights = true;

    std::vector<int> state{ex.root_state};
    std::vector<int> parent{-1};
    std::vector<long long> child_begin{0};
    b.dist.push_back(0);

    for (size_t head = 0; head < state.size(); ++head) {
        child_begin[head] = static_cast<long long>(state.size());
        if (b.dist[head] >= radius) continue;
        for (int cs : ex.children[static_cast<size_t>(state[head])]) {
            if (state.size() >= max_vertices)
                throw ResourceError("ball budget exceeded at radius " + std::to_string(radius) +
                                    " (more than " + std::to_string(max_vertices) + " vertices)");
            state.push_back(cs);
            parent.push_back(static_cast<int>(head));
            child_begin.push_back(0);
            b.dist.push_back(b.dist[head] + 1);
        }
    }

    const int n = static_cast<int>(state.size());
    b.row_ptr.assign(static_cast<size_t>(n) + 1, 0);
    b.full_degree.assign(static_cast<size_t>(n), 0.0);
    b.boundary_loss.assign(static_cast<size_t>(n), 0.0);
    b.col.reserve(2 * static_cast<size_t>(n));
    b.wt.reserve(2 * static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) {
        const size_t sv = static_cast<size_t>(v);
        const auto& kids = ex.children[static_cast<size_t>(state[sv])];
        b.full_degree[sv] = static_cast<double>(kids.size()) + (parent[sv] >= 0 ? 1.0 : 0.0);
        if (parent[sv] >= 0) {
            b.col.push_back(parent[sv]);
            b.wt.push_back(1.0);
        }
        if (b.dist[sv] < radius) {
            long long c0 = child_begin[sv];
            for (size_t k = 0; k < kids.size(); ++k) {
                b.col.push_back(static_cast<int>(c0 + static_cast<long long>(k)));
                b.wt.push_back(1.0);
            }
        } else {
            b.boundary_loss[sv] = static_cast<double>(kids.size());
        }
        b.row_ptr[sv + 1] = static_cast<int>(b.col.size());
    }
    return b;
}

} // namespace

Ball materialize_ball(const GraphFamily& g, const FamilyVertex& center, int radius,
                      std::size_t max_vertices, bool keep_encodings) {
    if (radius < 0) throw DomainError("ball radius must be >= 0");
    if (!keep_encodings && g.tree_expansion() != nullptr && center == g.root())
        return ball_tree(g, radius, max_vertices);
    return ball_generic(g, center, radius, max_vertices, keep_encodings);
}

Ball ball_of(const WeightedMultigraph& g, int center, int radius) {
    if (radius < 0) throw DomainError("ball radius must be >= 0");
    if (center < 0 || center >= g.vertex_count()) throw DomainError("ball center out of range");
    Ball b;
    b.radius = radius;
    b.integer_weights = g.integer_weights();
    b.oriented = g.oriented();
    std::vector<int> index(static_cast<size_t>(g.vertex_count()), -1);
    std::vector<int> verts{center};
    index[static_cast<size_t>(center)] = 0;
    b.dist.push_back(0);
    for (size_t head = 0; head < verts.size(); ++head) {
        if (b.dist[head] >= radius) continue;
        for (const auto& [y, w] : g.neighbors(verts[head]))
            if (index[static_cast<size_t>(y)] < 0) {
                index[static_cast<size_t>(y)] = static_cast<int>(verts.size());
                verts.push_back(y);
                b.dist.push_back(b.dist[head] + 1);
            }
    }
    const int n = static_cast<int>(verts.size());
    b.row_ptr.assign(static_cast<size_t>(n) + 1, 0);
    b.full_degree.assign(static_cast<size_t>(n), 0.0);
    b.boundary_loss.assign(static_cast<size_t>(n), 0.0);
    for (int v = 0; v < n; ++v) {
        const size_t sv = static_cast<size_t>(v);
        b.full_degree[sv] = g.degree(verts[sv]);
        double in_ball = 0.0;
        for (const auto& [y, w] : g.neighbors(verts[sv]))
            if (index[static_cast<size_t>(y)] >= 0) {
                b.col.push_back(index[static_cast<size_t>(y)]);
                b.wt.push_back(w);
                in_ball += w;
            }
        b.boundary_loss[sv] = b.full_degree[sv] - in_ball;
        b.row_ptr[sv + 1] = static_cast<int>(b.col.size());
    }
    for (int v : verts) {
        FamilyVertex enc{v};
        b.encoding.push_back(std::move(enc));
    }
    return b;
}

Ball whole_graph_ball(const WeightedMultigraph& g) {
    Ball b;
    b.radius = g.vertex_count(); // larger than any distance
    b.integer_weights = g.integer_weights();
    b.oriented = g.oriented();
    const int n = g.vertex_count();
    b.dist.assign(static_cast<size_t>(n), 0);
    b.row_ptr.assign(static_cast<size_t>(n) + 1, 0);
    b.full_degree.assign(static_cast<size_t>(n), 0.0);
    b.boundary_loss.assign(static_cast<size_t>(n), 0.0);
    for (int v = 0; v < n; ++v) {
        b.full_degree[static_cast<size_t>(v)] = g.degree(v);
        for (const auto& [y, w] : g.neighbors(v)) {
            b.col.push_back(y);
            b.wt.push_back(w);
        }
        b.row_ptr[static_cast<size_t>(v) + 1] = static_cast<int>(b.col.size());
        b.encoding.push_back({v});
    }
    return b;
}

WeightedMultigraph Ball::to_multigraph() const {
    std::vector<std::string> names;
    const int n = size();
    for (int v = 0; v < n; ++v)
        names.push_back(encoding.empty() ? "v" + std::to_string(v)
                                         : vertex_label(encoding[static_cast<size_t>(v)]));
    // rows already hold both directions of every edge
    std::vector<WeightedMultigraph::Edge> edges;
    for (int v = 0; v < n; ++v)
        for (int e = row_ptr[static_cast<size_t>(v)]; e < row_ptr[static_cast<size_t>(v) + 1]; ++e) {
            int y = col[static_cast<size_t>(e)];
            if (oriented || y >= v) edges.push_back({v, y, wt[static_cast<size_t>(e)]});
        }
    return WeightedMultigraph(std::move(names), edges, oriented);
}

} // namespace brw
