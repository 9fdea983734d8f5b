#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "svset/json_io.hpp"

using namespace svset;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* env = std::getenv("SVSET_CLI");
    return env ? env : "./svset";
}

int run_cli(const std::string& args) {
    std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / "svset_io_tests" / name;
    fs::create_directories(p.parent_path());
    return p;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << content;
}

}  // namespace

TEST_CASE("polytope json round trip with facets") {
    Polytope tri = v_to_h_2d(Polytope({{-1, -1}, {2, -1}, {-1, 2}}));
    json j = polytope_to_json(tri);
    Polytope back = polytope_from_json(j);
    CHECK(same_vertices(tri, back, 1e-15));

    json bad = j;
    bad["extra"] = 1;
    CHECK_THROWS_AS(polytope_from_json(bad), MalformedInput);

    json viol = j;
    viol["offsets"][0] = -10.0;  // every vertex now violates this facet
    CHECK_THROWS_AS(polytope_from_json(viol), MalformedInput);

    json short_row = j;
    short_row["vertices"][0] = json::array({1.0});
    CHECK_THROWS_AS(polytope_from_json(short_row), MalformedInput);
}

TEST_CASE("fan json round trip") {
    Fan f = make_fan({{-1, 0}, {0, -1}, {1, 1}}, {{0, 1}, {1, 2}, {0, 2}});
    json j = fan_to_json(f);
    Fan back = fan_from_json(j);
    CHECK(fans_equal(f, back));
    CHECK(back.rays[2][0] == doctest::Approx(1.0));  // given scaling preserved

    json bad = j;
    bad["rays"].push_back(std::vector<double>{0.0, 0.0});
    CHECK_THROWS_AS(fan_from_json(bad), MalformedInput);
}

TEST_CASE("tree json parsing and validation") {
    json j;
    j["branching"] = {2};
    j["leaves"]["xi"] = {{{0.0, 0.0}, {1.0, 1.0}}};
    TreeInput in = tree_from_json(j);
    CHECK(in.tree.leaf_count() == 2);
    CHECK(in.selections.size() == 1);

    json bad = j;
    bad["unknown"] = true;
    CHECK_THROWS_AS(tree_from_json(bad), MalformedInput);

    json wrong_len = j;
    wrong_len["leaves"]["xi"] = {{{0.0, 0.0}}};
    CHECK_THROWS_AS(tree_from_json(wrong_len), MalformedInput);

    json with_probs = j;
    with_probs["probs"] = {{0.25, 0.75}};
    TreeInput in2 = tree_from_json(with_probs);
    CHECK(in2.tree.prob(in2.tree.leaves()[0]) == doctest::Approx(0.25));
}

TEST_CASE("sim config: defaults, round trip, unknown keys rejected") {
    SimConfig def = sim_config_from_json(json::object());
    CHECK(def.seed == 1);
    CHECK(def.samples == 100000);
    CHECK(def.steps == 10000);
    CHECK(def.alpha == 0.5);
    CHECK(def.mode == "walk");
    CHECK(def.grid_k == 720);
    CHECK(def.thin_stride() == 20);

    json j = sim_config_to_json(def);
    SimConfig back = sim_config_from_json(j);
    CHECK(sim_config_to_json(back) == j);

    json bad = j;
    bad["typo_key"] = 1;
    CHECK_THROWS_AS(sim_config_from_json(bad), MalformedInput);

    json badmode = j;
    badmode["mode"] = "quasi";
    CHECK_THROWS_AS(sim_config_from_json(badmode), MalformedInput);

    json badgrid = j;
    badgrid["grid_k"] = 7;
    CHECK_THROWS_AS(sim_config_from_json(badgrid), MalformedInput);
}

TEST_CASE("g17 formatting round-trips doubles") {
    for (double v : {1.0 / 3.0, 3.0 * std::sqrt(2.0), -1e-17, 12345.678901234567}) {
        std::string s = io::g17(v);
        CHECK(std::stod(s) == v);
        CHECK(s.find(',') == std::string::npos);
    }
}

TEST_CASE("atomic write leaves no temp file behind") {
    fs::path p = scratch("atomic.txt");
    io::atomic_write(p, "payload");
    CHECK(slurp(p) == "payload");
    CHECK_FALSE(fs::exists(p.string() + ".tmp"));
}

TEST_CASE("cli: fan command on the triangle file") {
    fs::path out = scratch("fan_out");
    CHECK(run_cli("fan data/triangle.json --out " + out.string()) == 0);
    json rep = io::load_file(out / "report.json");
    CHECK(rep["verdicts"]["fan"] == "pass");
    CHECK(rep["verdicts"]["admissibility_echo"] == "pass");
    CHECK(rep["tables"]["effective_rows"].size() == 1);
    CHECK(fs::exists(out / "fan.json"));
    CHECK(fs::exists(out / "typecone.json"));

    // degenerate input: exit 2
    fs::path seg = scratch("segment.json");
    write_file(seg, R"({"dim": 2, "vertices": [[0,0],[1,1]]})");
    CHECK(run_cli("fan " + seg.string() + " --out " + out.string() + "_d") == 2);

    // missing file: exit 2
    CHECK(run_cli("fan /nonexistent.json --out " + out.string() + "_m") == 2);
}

TEST_CASE("cli: tree command verdicts and exit codes") {
    fs::path out = scratch("tree_out");
    CHECK(run_cli("tree data/tree_deterministic.json --mode equivalence --out " + out.string()) ==
          0);
    CHECK(run_cli("tree data/tree_rotating.json --mode equivalence --out " + out.string()) == 1);
    json rep = io::load_file(out / "report.json");
    CHECK(rep["tables"]["max_gap"].get<double>() >= 1e-3);
    CHECK(fs::exists(out / "gaps.csv"));

    CHECK(run_cli("tree data/tree_scalar.json --mode randomization --out " + out.string()) == 0);
    CHECK(run_cli("tree data/tree_deterministic.json --mode audit --out " + out.string()) == 0);

    fs::path empty = scratch("empty.json");
    write_file(empty, "{}");
    CHECK(run_cli("tree " + empty.string() + " --mode audit --out " + out.string()) == 2);

    fs::path garbage = scratch("garbage.json");
    write_file(garbage, "not json");
    CHECK(run_cli("tree " + garbage.string() + " --mode audit --out " + out.string()) == 2);
}

TEST_CASE("cli: simulate is byte-deterministic across runs and thread counts") {
    fs::path a = scratch("sim_a"), b = scratch("sim_b"), c = scratch("sim_c");
    std::string base = "simulate --seed 5 --samples 400 --steps 200 --grid-k 24 --out ";
    CHECK(run_cli(base + a.string()) == 0);
    CHECK(run_cli(base + b.string()) == 0);
    setenv("SVSET_THREADS", "4", 1);
    CHECK(run_cli(base + c.string()) == 0);
    unsetenv("SVSET_THREADS");
    for (const char* f : {"triangle.csv", "right_angle_vertex.csv", "hypotenuse.csv",
                          "report.json"}) {
        CAPTURE(f);
        CHECK(slurp(a / f) == slurp(b / f));
        CHECK(slurp(a / f) == slurp(c / f));
    }
    // different seed changes the trajectory bytes
    fs::path d = scratch("sim_d");
    CHECK(run_cli("simulate --seed 6 --samples 400 --steps 200 --grid-k 24 --out " + d.string()) ==
          0);
    CHECK(slurp(a / "triangle.csv") != slurp(d / "triangle.csv"));
}

TEST_CASE("cli: simulate with alpha zero keeps the triangle constant") {
    fs::path out = scratch("sim_alpha0");
    CHECK(run_cli("simulate --seed 2 --samples 100 --steps 100 --alpha 0 --grid-k 24 --out " +
                  out.string()) == 0);
    std::istringstream hyp(slurp(out / "hypotenuse.csv"));
    std::string line;
    std::getline(hyp, line);  // header
    const double want = 3.0 * std::sqrt(2.0);
    int rows = 0;
    while (std::getline(hyp, line)) {
        double len = std::stod(line.substr(line.rfind(',') + 1));
        CHECK(len == doctest::Approx(want).epsilon(1e-15));
        ++rows;
    }
    CHECK(rows > 0);
}

TEST_CASE("cli: verify suite selection and unknown suite") {
    CHECK(run_cli("verify --suite geometry --seed 11") == 0);
    CHECK(run_cli("verify --suite nosuchsuite") == 2);
    CHECK(run_cli("frobnicate") == 2);
}
