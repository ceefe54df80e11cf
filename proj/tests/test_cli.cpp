#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

using nlohmann::json;

TEST_SUITE_BEGIN("cli");

namespace {

#ifndef BRW_CLI_PATH
#define BRW_CLI_PATH "./brw"
#endif

struct RunResult {
    int exit_code;
    std::string out;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    const std::string out_file = "cli_stdout.tmp";
    std::string cmd = std::string(BRW_CLI_PATH) + " " + args + " > " + out_file + " 2> cli_stderr.tmp";
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(rc);
    r.out = slurp(out_file);
    return r;
}

// minimal structural validation against the shipped schema files: required
// keys exist and primitive types match
bool matches_schema(const json& data, const json& schema) {
    if (!schema.contains("required")) return true;
    for (const auto& key : schema["required"]) {
        if (!data.contains(key.get<std::string>())) return false;
        if (schema.contains("properties") && schema["properties"].contains(key.get<std::string>())) {
            const auto& prop = schema["properties"][key.get<std::string>()];
            if (prop.contains("type")) {
                const std::string t = prop["type"].get<std::string>();
                const auto& v = data[key.get<std::string>()];
                if (t == "number" && !v.is_number()) return false;
                if (t == "string" && !v.is_string()) return false;
                if (t == "array" && !v.is_array()) return false;
                if (t == "object" && !v.is_object()) return false;
                if (t == "boolean" && !v.is_boolean()) return false;
            }
        }
    }
    return true;
}

json load_schema(const std::string& name) {
#ifndef BRW_SCHEMA_DIR
#define BRW_SCHEMA_DIR "schemas"
#endif
    std::ifstream in(std::string(BRW_SCHEMA_DIR) + "/" + name);
    REQUIRE(in.good());
    json j;
    in >> j;
    return j;
}

} // namespace

TEST_CASE("paths on the 3-loop vertex prints powers of three") {
    auto r = run_cli("paths --family loops --k 3 --nmax 4");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("1,3,3") != std::string::npos);
    CHECK(r.out.find("2,9,9") != std::string::npos);
    CHECK(r.out.find("3,27,27") != std::string::npos);
    CHECK(r.out.find("4,81,81") != std::string::npos);
}

TEST_CASE("quotient of the pendant family writes its matrix") {
    auto r = run_cli("quotient --family pendant_tree3 --out q.json");
    REQUIRE(r.exit_code == 0);
    json q = json::parse(slurp("q.json"));
    CHECK(q["matrix"] == json({{3.0, 1.0}, {1.0, 0.0}}));
    CHECK(q["verified_radius"] == 6);
    CHECK(matches_schema(q, load_schema("quotient.schema.json")));
    // the manifest sidecar accompanies the output
    json side = json::parse(slurp("q.json.manifest.json"));
    CHECK(side["subcommand"] == "quotient");
    CHECK(side.contains("timestamp"));
    std::remove("q.json");
    std::remove("q.json.manifest.json");
}

TEST_CASE("gw prints the fixed point 1/3") {
    auto r = run_cli("gw --pgf 0.25,0,0.75");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(std::abs(j["laws"][0]["delta"].get<double>() - 1.0 / 3.0) < 1e-9);
    CHECK(j["bound_valid"] == true);
    CHECK(matches_schema(j, load_schema("gw.schema.json")));
}

TEST_CASE("classify emits a schema-conforming verdict") {
    auto r = run_cli("classify --family line --radius-max 40 --margin 0.05");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["verdict"] == "amenable");
    CHECK(matches_schema(j, load_schema("classify.schema.json")));
}

TEST_CASE("simulate/sweep output rows carry the documented CSV header") {
    auto r = run_cli(
        "simulate --family loops --k 3 --lambda 0.2 --trials 50 --tmax 10 --cap 100 --seed 7");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.rfind("lambda,trials,global_freq,global_lo,global_hi,local_freq,local_lo,"
                      "local_hi,radius,cap,seed",
                      0) == 0);

    auto s = run_cli(
        "sweep --family loops --k 3 --lambda-grid 0.1:0.3:0.1 --trials 20 --tmax 5 --cap 100 "
        "--seed 7 --format json");
    REQUIRE(s.exit_code == 0);
    json j = json::parse(s.out);
    CHECK(j["rows"].size() == 3);
    CHECK(matches_schema(j, load_schema("survival.schema.json")));
}

TEST_CASE("reruns with the same manifest reproduce the bytes") {
    const std::string args =
        "simulate --family line --radius 6 --lambda 0.6 --trials 200 --tmax 20 --cap 500 "
        "--seed 99 --out run1.csv";
    REQUIRE(run_cli(args).exit_code == 0);
    REQUIRE(run_cli("simulate --family line --radius 6 --lambda 0.6 --trials 200 --tmax 20 "
                    "--cap 500 --seed 99 --out run2.csv")
                .exit_code == 0);
    CHECK(slurp("run1.csv") == slurp("run2.csv"));
    // manifests agree except for the timestamp
    json m1 = json::parse(slurp("run1.csv.manifest.json"));
    json m2 = json::parse(slurp("run2.csv.manifest.json"));
    m1.erase("timestamp");
    m2.erase("timestamp");
    CHECK(m1 == m2);
    for (const char* f : {"run1.csv", "run2.csv", "run1.csv.manifest.json", "run2.csv.manifest.json"})
        std::remove(f);
}

TEST_CASE("gen round-trips through the graph loader") {
    REQUIRE(run_cli("gen --family cycle --n 5 --out c5.json").exit_code == 0);
    json g = json::parse(slurp("c5.json"));
    CHECK(g["format"] == "brw-graph-v1");
    CHECK(g["vertices"].size() == 5);
    auto r = run_cli("paths --graph c5.json --nmax 4");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("2,2,4") != std::string::npos); // gamma^2 = 2, T^2 = 4 on the cycle
    std::remove("c5.json");
    std::remove("c5.json.manifest.json");
}

TEST_CASE("error taxonomy maps to exit codes") {
    CHECK(run_cli("paths --family unknown_family --nmax 3").exit_code == 2);
    CHECK(run_cli("classify --family radial_tree --period 2,1").exit_code == 2);
    // ball budget: configuration of the run cannot be met
    CHECK(run_cli("paths --family regular_tree --k 3 --nmax 80").exit_code == 3);
    CHECK(run_cli("simulate --family loops --k 3 --lambda -2 --trials 5").exit_code == 2);
}

TEST_SUITE_END();
