// brw: critical values, quotients and survival simulation of branching
// random walks on weighted multigraphs.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "brw/branching.hpp"
#include "brw/errors.hpp"
#include "brw/family.hpp"
#include "brw/multigraph.hpp"
#include "brw/quotient.hpp"
#include "brw/series.hpp"
#include "brw/sim.hpp"
#include "brw/spectral.hpp"
#include "brw/walks.hpp"

using nlohmann::json;

namespace {

constexpr const char* kVersion = "brw 0.1.0";

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw brw::ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(ss.str())));
    return buf;
}

std::string iso_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
    return buf;
}

// ---------------------------------------------------------------------------
// input/output plumbing

struct Output {
    std::string path;   // empty = stdout
    std::string format; // "csv" or "json"
    json manifest;      // embedded without timestamp; the sidecar carries it

    void write_text(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw brw::ConfigError("cannot write " + path);
        out << text;
        json side = manifest;
        side["timestamp"] = iso_now();
        std::ofstream m(path + ".manifest.json", std::ios::binary);
        m << side.dump(2) << "\n";
    }

    void write_json(json data) const {
        data["manifest"] = manifest;
        write_text(data.dump(2) + "\n");
    }
};

struct GraphInput {
    std::unique_ptr<brw::GraphFamily> family;
    std::optional<brw::WeightedMultigraph> graph;
    std::string graph_path;

    bool is_family() const { return family != nullptr; }
};

struct CommonOpts {
    std::string graph_file;
    std::string family_name;
    std::string family_spec;
    int k = -1, dim = -1, n = -1, root_class = 0;
    std::string period, matrix;
    std::string out_path;
    std::string format;
    std::string vertex;
};

void add_graph_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--graph", o.graph_file, "brw-graph-v1 JSON file");
    cmd->add_option("--family", o.family_name, "family name (or inline JSON spec)");
    cmd->add_option("--family-spec", o.family_spec, "family spec as JSON");
    cmd->add_option("--k", o.k, "family branching parameter");
    cmd->add_option("--dim", o.dim, "lattice dimension");
    cmd->add_option("--n", o.n, "cycle length");
    cmd->add_option("--period", o.period, "radial period, e.g. 2,1");
    cmd->add_option("--matrix", o.matrix, "cover matrix as JSON, e.g. [[3,1],[1,0]]");
    cmd->add_option("--root-class", o.root_class, "cover root class");
}

void add_out_opts(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--out", o.out_path, "output file (or a bare format name: csv|json)");
    cmd->add_option("--format", o.format, "csv|json");
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    return out;
}

brw::FamilyVertex parse_vertex(const std::string& s) {
    std::string trimmed = s;
    if (!trimmed.empty() && trimmed.front() == '(') trimmed = trimmed.substr(1, trimmed.size() - 2);
    return parse_ints(trimmed);
}

GraphInput resolve_graph(const CommonOpts& o, json& resolved_params) {
    GraphInput in;
    if (!o.graph_file.empty()) {
        in.graph = brw::WeightedMultigraph::load_file(o.graph_file);
        in.graph_path = o.graph_file;
        resolved_params["graph"] = o.graph_file;
        return in;
    }
    json spec;
    if (!o.family_spec.empty())
        spec = json::parse(o.family_spec);
    else if (!o.family_name.empty() && o.family_name.find('{') != std::string::npos)
        spec = json::parse(o.family_name);
    else if (!o.family_name.empty()) {
        spec["family"] = o.family_name;
        if (o.k >= 0) spec["k"] = o.k;
        if (o.dim >= 0) spec["dim"] = o.dim;
        if (o.n >= 0) spec["n"] = o.n;
        if (!o.period.empty()) spec["period"] = parse_ints(o.period);
        if (!o.matrix.empty()) spec["matrix"] = json::parse(o.matrix);
        if (o.root_class > 0) spec["root_class"] = o.root_class;
    } else {
        throw brw::ConfigError("one of --graph or --family is required");
    }
    in.family = brw::make_family(spec);
    resolved_params["family"] = in.family->spec();
    return in;
}

Output make_output(const CommonOpts& o, const std::string& subcommand, json params,
                   const std::string& graph_path, std::optional<std::uint64_t> seed,
                   const std::string& default_format) {
    Output out;
    out.path = o.out_path;
    out.format = o.format.empty() ? default_format : o.format;
    if (out.path == "csv" || out.path == "json") { // `--out csv|json` selects the format
        out.format = out.path;
        out.path.clear();
    }
    if (out.format != "csv" && out.format != "json")
        throw brw::ConfigError("unknown format: " + out.format);
    out.manifest["artifact_version"] = kVersion;
    out.manifest["subcommand"] = subcommand;
    out.manifest["parameters"] = std::move(params);
    if (seed) out.manifest["seed"] = *seed;
    if (!graph_path.empty()) out.manifest["input_digests"] = {{graph_path, file_digest(graph_path)}};
    return out;
}

int thread_count(int opt) {
    if (opt > 0) return opt;
    if (const char* env = std::getenv("BRW_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

std::uint64_t pick_seed(std::optional<std::uint64_t> given) {
    if (given) return *given;
    std::random_device rd;
    std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::cerr << "seed: " << s << "\n";
    return s;
}

// ---------------------------------------------------------------------------
// subcommand bodies

int cmd_gen(CommonOpts& o, int radius) {
    json params{{"radius", radius}};
    GraphInput in = resolve_graph(o, params);
    Output out = make_output(o, "gen", params, in.graph_path, std::nullopt, "json");
    if (out.format != "json") throw brw::ConfigError("gen emits JSON graphs; use --format json");
    brw::WeightedMultigraph g =
        in.is_family() ? brw::materialize_ball(*in.family, in.family->root(), radius).to_multigraph()
                       : *in.graph;
    out.write_json(g.to_json());
    return 0;
}

int cmd_paths(CommonOpts& o, int n_max) {
    json params{{"nmax", n_max}};
    GraphInput in = resolve_graph(o, params);
    if (!o.vertex.empty()) params["vertex"] = o.vertex;
    Output out = make_output(o, "paths", params, in.graph_path, std::nullopt, "csv");

    // exact big integers on integer weights, doubles otherwise
    std::vector<std::string> diag, totals;
    auto render = [](const std::vector<mpz_class>& v) {
        std::vector<std::string> out_v;
        for (const auto& z : v) out_v.push_back(z.get_str());
        return out_v;
    };
    auto render_f = [](const std::vector<double>& v) {
        std::vector<std::string> out_v;
        for (double d : v) out_v.push_back(fmt(d));
        return out_v;
    };
    if (in.is_family()) {
        brw::FamilyVertex x = o.vertex.empty() ? in.family->root() : parse_vertex(o.vertex);
        diag = render(brw::closed_walk_counts(*in.family, x, n_max));
        totals = render(brw::total_walk_counts(*in.family, x, n_max));
    } else if (in.graph->integer_weights()) {
        int x = o.vertex.empty() ? 0 : in.graph->vertex_index(o.vertex);
        diag = render(brw::closed_walk_counts(*in.graph, x, n_max));
        totals = render(brw::total_walk_counts(*in.graph, x, n_max));
    } else {
        int x = o.vertex.empty() ? 0 : in.graph->vertex_index(o.vertex);
        brw::Ball b = brw::whole_graph_ball(*in.graph);
        diag = render_f(brw::closed_walk_weights(b, x, n_max));
        totals = render_f(brw::total_walk_weights(b, x, n_max));
    }
    if (out.format == "csv") {
        std::ostringstream csv;
        csv << "n,gamma_diag,total\n";
        for (int n = 0; n <= n_max; ++n)
            csv << n << "," << diag[static_cast<size_t>(n)] << "," << totals[static_cast<size_t>(n)]
                << "\n";
        out.write_text(csv.str());
    } else {
        json j;
        j["n"] = json::array();
        j["gamma_diag"] = json::array();
        j["total"] = json::array();
        for (int n = 0; n <= n_max; ++n) {
            j["n"].push_back(n);
            j["gamma_diag"].push_back(diag[static_cast<size_t>(n)]);
            j["total"].push_back(totals[static_cast<size_t>(n)]);
        }
        out.write_json(j);
    }
    return 0;
}

int cmd_critical(CommonOpts& o, int n_max, double tol) {
    json params{{"nmax", n_max}, {"tol", tol}};
    GraphInput in = resolve_graph(o, params);
    if (!o.vertex.empty()) params["vertex"] = o.vertex;
    Output out = make_output(o, "critical", params, in.graph_path, std::nullopt, "csv");

    // phi / diagonal / totals as doubles; exact big integers feed them on
    // integer instances (totals can exceed the ball budget on trees)
    std::vector<double> phi_f, diag_f, totals_f;
    std::vector<mpz_class> phi_z, diag_z, totals_z;
    bool exact = true, have_totals = true;
    double degree_bound = 0.0;
    auto to_f = [](const std::vector<mpz_class>& v) {
        std::vector<double> out_v;
        for (const auto& z : v) out_v.push_back(z.get_d());
        return out_v;
    };
    if (in.is_family()) {
        brw::FamilyVertex x = o.vertex.empty() ? in.family->root() : parse_vertex(o.vertex);
        phi_z = brw::first_return_counts(*in.family, x, n_max);
        diag_z = brw::closed_walk_counts(*in.family, x, n_max);
        degree_bound = in.family->max_degree();
        try {
            totals_z = brw::total_walk_counts(*in.family, x, n_max);
        } catch (const brw::ResourceError& e) {
            have_totals = false;
            std::cerr << "brw: note: walk totals skipped: " << e.what() << "\n";
        }
    } else if (in.graph->integer_weights()) {
        int x = o.vertex.empty() ? 0 : in.graph->vertex_index(o.vertex);
        phi_z = brw::first_return_counts(*in.graph, x, n_max);
        diag_z = brw::closed_walk_counts(*in.graph, x, n_max);
        totals_z = brw::total_walk_counts(*in.graph, x, n_max);
        degree_bound = in.graph->max_degree();
    } else {
        exact = false;
        int x = o.vertex.empty() ? 0 : in.graph->vertex_index(o.vertex);
        brw::Ball b = brw::whole_graph_ball(*in.graph);
        phi_f = brw::first_return_weights(b, x, n_max);
        diag_f = brw::closed_walk_weights(b, x, n_max);
        totals_f = brw::total_walk_weights(b, x, n_max);
        degree_bound = in.graph->max_degree();
    }

    int period = 0;
    for (int n = 1; n <= n_max; ++n) {
        bool positive = exact ? diag_z[static_cast<size_t>(n)] > 0
                              : diag_f[static_cast<size_t>(n)] > 1e-300;
        if (positive) period = std::gcd(period, n);
    }

    auto nth_root = [](const mpz_class& v, int n) {
        signed long e;
        double m = mpz_get_d_2exp(&e, v.get_mpz_t());
        return std::exp((std::log(m) + static_cast<double>(e) * M_LN2) / n);
    };

    struct Row {
        int horizon;
        double root_lo = 0, root_hi = 0;
        bool has_root = false;
        double ms = 0, mw = 0;
        bool has_mw = false;
    };
    std::vector<Row> rows;
    double best_ms = 0.0;
    for (int h = 1; h <= n_max; ++h) {
        Row r;
        r.horizon = h;
        brw::SeriesTruncation s;
        s.degree_bound = degree_bound;
        s.exact = exact;
        bool any = false;
        for (int n = 1; n <= h; ++n) {
            if (exact)
                s.coeffs.emplace_back(phi_z[static_cast<size_t>(n)]);
            else
                s.coeffs.emplace_back(phi_f[static_cast<size_t>(n)]);
            any = any || s.coeffs.back() > 0;
        }
        if (any) {
            brw::CriticalBracket b = brw::lambda_s_from_phi(s, tol);
            r.has_root = b.has_root;
            r.root_lo = b.root_lo;
            r.root_hi = b.root_hi;
        }
        if (period > 0 && h % period == 0) {
            if (exact && diag_z[static_cast<size_t>(h)] > 0)
                best_ms = std::max(best_ms, nth_root(diag_z[static_cast<size_t>(h)], h));
            if (!exact && diag_f[static_cast<size_t>(h)] > 0)
                best_ms = std::max(best_ms,
                                   std::exp(std::log(diag_f[static_cast<size_t>(h)]) / h));
        }
        r.ms = best_ms;
        if (have_totals) {
            r.mw = exact ? nth_root(totals_z[static_cast<size_t>(h)], h)
                         : std::exp(std::log(totals_f[static_cast<size_t>(h)]) / h);
            r.has_mw = true;
        }
        rows.push_back(r);
    }

    if (out.format == "csv") {
        std::ostringstream csv;
        csv << "horizon,phi_root_lo,phi_root_hi,ms_growth,mw_growth\n";
        for (const Row& r : rows)
            csv << r.horizon << "," << (r.has_root ? fmt(r.root_lo) : "") << ","
                << (r.has_root ? fmt(r.root_hi) : "") << "," << fmt(r.ms) << ","
                << (r.has_mw ? fmt(r.mw) : "") << "\n";
        out.write_text(csv.str());
    } else {
        json j;
        j["period"] = period;
        j["rows"] = json::array();
        for (const Row& r : rows) {
            json row{{"horizon", r.horizon}, {"ms_growth", r.ms}};
            if (r.has_root) {
                row["phi_root_lo"] = r.root_lo;
                row["phi_root_hi"] = r.root_hi;
            }
            if (r.has_mw) row["mw_growth"] = r.mw;
            j["rows"].push_back(row);
        }
        out.write_json(j);
    }
    return 0;
}

int cmd_quotient(CommonOpts& o, const std::string& seed_partition, int radius) {
    json params{{"radius", radius}};
    GraphInput in = resolve_graph(o, params);
    Output out = make_output(o, "quotient", params, in.graph_path, std::nullopt, "json");
    if (out.format != "json") throw brw::ConfigError("quotient emits JSON; use --format json");

    json j;
    if (in.is_family()) {
        const brw::KnownQuotient* q = in.family->known_quotient();
        if (!q) throw brw::DomainError("family " + in.family->name() + " carries no known quotient");
        brw::VerifyReport rep = brw::verify_local_isomorphism(*in.family, *q, radius);
        if (!rep.pass) throw brw::NumericError("quotient verification failed: " + rep.violation);
        j["blocks"] = json::array();
        for (int v = 0; v < q->codomain.vertex_count(); ++v)
            j["blocks"].push_back(q->codomain.vertex_name(v));
        j["matrix"] = q->codomain.adjacency_matrix();
        j["verified_radius"] = rep.radius;
        j["interior_checked"] = rep.interior_checked;
    } else {
        std::optional<brw::Partition> seed;
        if (!seed_partition.empty()) {
            brw::Partition p;
            for (int b : parse_ints(seed_partition)) p.block_of.push_back(b);
            p.block_count = *std::max_element(p.block_of.begin(), p.block_of.end()) + 1;
            seed = std::move(p);
        }
        brw::Partition part = brw::refine_partition(*in.graph, seed);
        brw::QuotientResult q = brw::build_quotient(*in.graph, part);
        j["blocks"] = json::array();
        for (const auto& block : part.blocks()) {
            json names = json::array();
            for (int v : block) names.push_back(in.graph->vertex_name(v));
            j["blocks"].push_back(names);
        }
        j["matrix"] = q.quotient.adjacency_matrix();
        j["float_tolerance_used"] = part.float_tolerance_used;
    }
    out.write_json(j);
    return 0;
}

int cmd_classify(CommonOpts& o, int radius_max, double margin) {
    json params{{"radius_max", radius_max}, {"margin", margin}};
    GraphInput in = resolve_graph(o, params);
    if (!in.is_family())
        throw brw::ConfigError("classify works on families (finite graphs have M_s = M_w)");
    Output out = make_output(o, "classify", params, in.graph_path, std::nullopt, "json");
    if (out.format != "json") throw brw::ConfigError("classify emits JSON; use --format json");

    brw::SpectralReport rep = brw::classify(*in.family, margin, radius_max);
    json j;
    j["verdict"] = to_string(rep.verdict);
    j["basis"] = rep.basis;
    j["mw"] = rep.mw;
    j["mw_exact"] = rep.mw_exact;
    j["ms_sequence"] = json::array();
    for (auto [r, v] : rep.ms_sequence) j["ms_sequence"].push_back({{"radius", r}, {"bound", v}});
    j["ms_final"] = rep.ms_final;
    j["ms_stabilized"] = rep.ms_stabilized;
    j["gap"] = rep.gap;
    j["margin"] = rep.margin;
    j["lambda_s_bracket"] = {rep.lambda_s_lo, rep.lambda_s_hi};
    j["lambda_w"] = rep.lambda_w;
    j["lambda_w_exact"] = rep.lambda_w_exact;
    out.write_json(j);
    return 0;
}

int cmd_gw(CommonOpts& o, const std::vector<std::string>& pgfs, double tol) {
    if (pgfs.empty()) throw brw::ConfigError("gw needs at least one --pgf");
    json params{{"tol", tol}, {"pgf", pgfs}};
    Output out = make_output(o, "gw", params, "", std::nullopt, "json");

    std::vector<brw::OffspringLaw> laws;
    for (const auto& p : pgfs) {
        std::vector<double> pmf;
        std::istringstream in(p);
        std::string item;
        while (std::getline(in, item, ',')) pmf.push_back(std::stod(item));
        laws.emplace_back(std::move(pmf));
    }

    json j;
    j["laws"] = json::array();
    for (const auto& law : laws) {
        brw::FixedPointResult fp = brw::smallest_fixed_point(law, tol);
        j["laws"].push_back({{"delta", fp.delta},
                             {"mean", law.mean()},
                             {"iterations", fp.iterations},
                             {"near_critical", fp.near_critical}});
    }
    brw::PowerhouseBound bound = brw::powerhouse_bound(laws);
    j["bound_valid"] = bound.valid;
    if (bound.valid) {
        j["delta_max"] = bound.delta_max;
        j["certificates"] = json::array();
        for (const auto& c : bound.certificates)
            j["certificates"].push_back({{"law", c.law_index},
                                         {"pgf_at_delta_max", c.pgf_at_delta_max},
                                         {"holds", c.pgf_at_delta_max <= bound.delta_max + 1e-12}});
    }
    if (out.format == "csv") {
        std::ostringstream csv;
        csv << "law,delta,mean,near_critical\n";
        for (size_t i = 0; i < laws.size(); ++i)
            csv << i << "," << fmt(j["laws"][i]["delta"].get<double>()) << "," << fmt(laws[i].mean())
                << "," << (j["laws"][i]["near_critical"].get<bool>() ? 1 : 0) << "\n";
        out.write_text(csv.str());
    } else {
        out.write_json(j);
    }
    return 0;
}

struct SimOpts {
    std::string mode = "edge";
    double lambda = 1.0;
    long long trials = 1000;
    double t_max = 100.0;
    long long cap = 100000;
    int radius = 12;
    double t0 = -1.0;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    int samples = 64;
    std::string lambda_grid;
};

brw::SimGraph build_sim_graph(const GraphInput& in, const std::string& mode_name, int radius) {
    brw::BreedingMode mode;
    if (mode_name == "edge")
        mode = brw::BreedingMode::edge;
    else if (mode_name == "site")
        mode = brw::BreedingMode::site;
    else
        throw brw::ConfigError("unknown mode: " + mode_name);
    if (in.is_family()) {
        brw::Ball b = brw::materialize_ball(*in.family, in.family->root(), radius, 6'000'000, false);
        return brw::SimGraph::from_ball(std::move(b), mode);
    }
    return brw::SimGraph::from_graph(*in.graph, mode);
}

int cmd_simulate(CommonOpts& o, SimOpts& s, bool sweep) {
    std::uint64_t seed = pick_seed(s.seed);
    double t0 = s.t0 >= 0 ? s.t0 : s.t_max / 2;
    json params{{"mode", s.mode},       {"trials", s.trials}, {"tmax", s.t_max},
                {"cap", s.cap},         {"radius", s.radius}, {"t0", t0},
                {"samples", s.samples}, {"threads", thread_count(s.threads)}};
    if (sweep)
        params["lambda_grid"] = s.lambda_grid;
    else
        params["lambda"] = s.lambda;
    GraphInput in = resolve_graph(o, params);
    Output out = make_output(o, sweep ? "sweep" : "simulate", params, in.graph_path, seed,
                             "csv");

    brw::SimGraph graph = build_sim_graph(in, s.mode, s.radius);
    brw::SimConfig cfg;
    cfg.lambda = s.lambda;
    cfg.t_max = s.t_max;
    cfg.pop_cap = s.cap;
    cfg.seed = seed;
    cfg.sample_times = brw::even_sample_times(s.t_max, s.samples);

    std::vector<brw::SweepRow> rows;
    if (sweep) {
        std::vector<double> grid;
        if (s.lambda_grid.find(':') != std::string::npos) { // a:b:step
            std::istringstream gs(s.lambda_grid);
            std::string a, b, st;
            std::getline(gs, a, ':');
            std::getline(gs, b, ':');
            std::getline(gs, st, ':');
            double lo = std::stod(a), hi = std::stod(b), step = st.empty() ? 1.0 : std::stod(st);
            if (step <= 0) throw brw::ConfigError("sweep step must be positive");
            for (double l = lo; l <= hi + 1e-12; l += step) grid.push_back(l);
        } else {
            std::istringstream gs(s.lambda_grid);
            std::string item;
            while (std::getline(gs, item, ',')) grid.push_back(std::stod(item));
        }
        rows = brw::sweep_lambda(graph, cfg, grid, s.trials, t0, thread_count(s.threads));
    } else {
        brw::SweepRow row;
        row.lambda = s.lambda;
        row.trials = s.trials;
        row.seed = seed;
        row.estimate = brw::estimate_survival(graph, cfg, s.trials, t0, thread_count(s.threads));
        rows.push_back(row);
    }

    if (out.format == "csv") {
        std::ostringstream csv;
        csv << "lambda,trials,global_freq,global_lo,global_hi,local_freq,local_lo,local_hi,"
               "radius,cap,seed\n";
        for (const auto& r : rows) {
            const auto& e = r.estimate;
            csv << fmt(r.lambda) << "," << r.trials << "," << fmt(e.global_freq) << ","
                << fmt(e.global_lo) << "," << fmt(e.global_hi) << "," << fmt(e.local_freq) << ","
                << fmt(e.local_lo) << "," << fmt(e.local_hi) << "," << s.radius << "," << s.cap
                << "," << r.seed << "\n";
        }
        out.write_text(csv.str());
    } else {
        json j;
        j["rows"] = json::array();
        for (const auto& r : rows) {
            const auto& e = r.estimate;
            j["rows"].push_back({{"lambda", r.lambda},
                                 {"trials", e.trials},
                                 {"t0", e.t0},
                                 {"global_freq", e.global_freq},
                                 {"global_lo", e.global_lo},
                                 {"global_hi", e.global_hi},
                                 {"local_freq", e.local_freq},
                                 {"local_lo", e.local_lo},
                                 {"local_hi", e.local_hi},
                                 {"survived", e.survived},
                                 {"capped", e.capped},
                                 {"extinct", e.extinct},
                                 {"radius", s.radius},
                                 {"cap", s.cap},
                                 {"seed", r.seed}});
        }
        out.write_json(j);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"branching random walks on weighted multigraphs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    CommonOpts o;
    SimOpts s;
    int gen_radius = 3, n_max = 40, radius_max = 20, verify_radius = 6;
    double tol = 1e-9, gw_tol = 1e-14, margin = 0.05;
    std::string seed_partition;
    std::vector<std::string> pgfs;
    std::uint64_t seed_opt = 0;
    bool seed_given = false;

    auto* gen = app.add_subcommand("gen", "materialize a graph or family ball as brw-graph-v1");
    add_graph_opts(gen, o);
    gen->add_option("--radius", gen_radius, "truncation radius for families");
    add_out_opts(gen, o);

    auto* paths = app.add_subcommand("paths", "closed-walk and total walk counts");
    add_graph_opts(paths, o);
    paths->add_option("--vertex", o.vertex, "source vertex (name, or encoding for families)");
    paths->add_option("--nmax", n_max, "horizon");
    add_out_opts(paths, o);

    auto* critical = app.add_subcommand("critical", "critical-value brackets and growth estimates");
    add_graph_opts(critical, o);
    critical->add_option("--vertex", o.vertex, "source vertex");
    critical->add_option("--nmax", n_max, "truncation horizon");
    critical->add_option("--tol", tol, "bisection tolerance");
    add_out_opts(critical, o);

    auto* quotient = app.add_subcommand("quotient", "equitable quotient / verified local isomorphism");
    add_graph_opts(quotient, o);
    quotient->add_option("--seed-partition", seed_partition, "comma list of block indices");
    quotient->add_option("--radius", verify_radius, "verification radius for families");
    add_out_opts(quotient, o);

    auto* classify = app.add_subcommand("classify", "amenability via the spectral gap");
    add_graph_opts(classify, o);
    classify->add_option("--radius-max", radius_max, "largest ball radius");
    classify->add_option("--margin", margin, "verdict margin");
    add_out_opts(classify, o);

    auto* gw = app.add_subcommand("gw", "Galton-Watson extinction probabilities");
    gw->add_option("--pgf", pgfs, "offspring pmf as c0,c1,... (repeatable)");
    gw->add_option("--tol", gw_tol, "fixed point tolerance");
    add_out_opts(gw, o);

    auto add_sim_opts = [&](CLI::App* cmd) {
        add_graph_opts(cmd, o);
        cmd->add_option("--mode", s.mode, "edge|site");
        cmd->add_option("--trials", s.trials, "number of trials");
        cmd->add_option("--tmax", s.t_max, "time horizon");
        cmd->add_option("--cap", s.cap, "population cap (cap hits count as survival)");
        cmd->add_option("--radius", s.radius, "truncation radius for families");
        cmd->add_option("--t0", s.t0, "local-survival window start (default tmax/2)");
        cmd->add_option("--samples", s.samples, "root-occupancy samples over (0,tmax]");
        cmd->add_option("--seed", seed_opt, "master seed")
            ->each([&](const std::string&) { seed_given = true; });
        cmd->add_option("--threads", s.threads, "worker threads (BRW_THREADS fallback)");
        add_out_opts(cmd, o);
    };

    auto* simulate = app.add_subcommand("simulate", "event-driven survival estimation");
    simulate->add_option("--lambda", s.lambda, "breeding rate");
    add_sim_opts(simulate);

    auto* sweep = app.add_subcommand("sweep", "survival across a lambda grid");
    sweep->add_option("--lambda-grid", s.lambda_grid, "a:b:step or comma list")->required();
    add_sim_opts(sweep);

    try {
        app.parse(argc, argv);
        if (seed_given) s.seed = seed_opt;
        if (gen->parsed()) return cmd_gen(o, gen_radius);
        if (paths->parsed()) return cmd_paths(o, n_max);
        if (critical->parsed()) return cmd_critical(o, n_max, tol);
        if (quotient->parsed()) return cmd_quotient(o, seed_partition, verify_radius);
        if (classify->parsed()) return cmd_classify(o, radius_max, margin);
        if (gw->parsed()) return cmd_gw(o, pgfs, gw_tol);
        if (simulate->parsed()) return cmd_simulate(o, s, false);
        if (sweep->parsed()) return cmd_simulate(o, s, true);
        return 2;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const brw::ConfigError& e) {
        std::cerr << "brw: error: config: " << e.what() << "\n";
        return 2;
    } catch (const brw::DomainError& e) {
        std::cerr << "brw: error: domain: " << e.what() << "\n";
        return 2;
    } catch (const brw::ResourceError& e) {
        std::cerr << "brw: error: resource: " << e.what() << "\n";
        return 3;
    } catch (const brw::NumericError& e) {
        std::cerr << "brw: error: numeric: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "brw: error: internal: " << e.what() << "\n";
        return 3;
    }
}
