// svset: command-line surface of the set-valued stochastic analysis toolkit.
// Subcommands: fan, tree, simulate, verify. Exit codes: 0 pass, 1 verdict
// fail, 2 usage or input error. All randomness is seeded explicitly; output
// files are deterministic functions of (command, config, seed).

#include <chrono>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "svset/json_io.hpp"
#include "svset/mc.hpp"
#include "svset/verify.hpp"

namespace fs = std::filesystem;
using namespace svset;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

class Stopwatch {
  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void ensure_out_dir(const fs::path& out) {
    if (out.empty()) throw MalformedInput("an output directory is required (--out DIR)");
    fs::create_directories(out);
}

void write_report(const fs::path& out, const Report& rep) {
    io::atomic_write(out / "report.json", report_to_json(rep).dump(2) + "\n");
}

int finish(const std::string& command, const Report& rep, const Stopwatch& watch) {
    bool ok = report_passed(rep);
    std::cout << command << ": " << (ok ? "pass" : "fail") << " (" << watch.seconds() << " s)\n";
    return ok ? kExitPass : kExitFail;
}

int run_fan(const std::string& input, const fs::path& out, double tol_) {
    Stopwatch watch;
    ensure_out_dir(out);
    Polytope p = polytope_from_json(io::load_file(input));
    Polytope withs = v_to_h_2d(p);
    Fan fan = normal_fan_2d(p);
    io::atomic_write(out / "fan.json", fan_to_json(fan).dump(2) + "\n");

    Report rep;
    rep.command = "fan";
    rep.config = json{{"input", input}, {"tol", tol_}};
    rep.verdicts["fan"] = "pass";
    std::vector<double> offsets;
    for (const Facet& f : withs.facets()) offsets.push_back(f.offset);
    rep.tables["offsets"] = offsets;
    rep.tables["rays"] = fan_to_json(fan)["rays"];
    try {
        TypeCone tc = type_cone(fan);
        io::atomic_write(out / "typecone.json", typecone_to_json(tc).dump(2) + "\n");
        rep.verdicts["type_cone"] = "pass";
        rep.tables["effective_rows"] = effective_rows(tc);
        bool adm = is_admissible(tc, offsets);
        rep.verdicts["admissibility_echo"] = adm ? "pass" : "fail";
        rep.tables["admissible"] = adm;
    } catch (const InvalidFan& e) {
        rep.verdicts["type_cone"] = "diagnostic";
        rep.tables["type_cone_note"] = e.what();
    }
    write_report(out, rep);
    return finish("fan", rep, watch);
}

std::string gaps_csv(const ScenarioTree& tree, const std::vector<double>& gaps) {
    std::string csv = "node,level,gap\n";
    for (int n = 0; n < tree.node_count(); ++n)
        csv += std::to_string(n) + "," + std::to_string(tree.level(n)) + "," + io::g17(gaps[n]) +
               "\n";
    return csv;
}

int run_tree(const std::string& input, const std::string& mode, const fs::path& out, int grid_k,
             double tol_) {
    Stopwatch watch;
    ensure_out_dir(out);
    TreeInput in = tree_from_json(io::load_file(input));
    const double verdict_tol = tol_ > 0 ? tol_ : tol::gap_verdict;

    Report rep;
    rep.command = "tree";
    rep.config = json{{"input", input}, {"mode", mode}, {"grid_k", grid_k}, {"tol", verdict_tol}};
    rep.tables["leaf_count"] = in.tree.leaf_count();
    rep.tables["depth"] = in.tree.depth();

    if (mode == "audit") {
        std::vector<Polytope> leaf_hulls;
        for (int i = 0; i < in.tree.leaf_count(); ++i) {
            std::vector<Vec> pts;
            for (const auto& sel : in.selections) pts.push_back(sel[i]);
            leaf_hulls.push_back(Polytope(pts));
        }
        auto proc = cond_expect_polytope_all(in.tree, leaf_hulls);
        MartingaleAudit audit = martingale_audit(in.tree, proc, verdict_tol);
        rep.verdicts["martingale"] = audit.martingale ? "pass" : "fail";
        rep.tables["max_defect"] = audit.max_defect;
        rep.tables["max_sub_violation"] = audit.max_sub_violation;
        rep.tables["max_super_violation"] = audit.max_super_violation;
        rep.tables["submartingale_only"] = audit.submartingale_only;
        rep.tables["worst_node"] = audit.worst_node;
        io::atomic_write(out / "gaps.csv", gaps_csv(in.tree, audit.node_defect));
    } else if (mode == "equivalence") {
        DirectionGrid grid(2, grid_k);
        std::vector<std::vector<Vec>> tuples;
        for (int i = 0; i < in.tree.leaf_count(); ++i) {
            std::vector<Vec> tup;
            for (const auto& sel : in.selections) tup.push_back(sel[i]);
            tuples.push_back(std::move(tup));
        }
        FanTestReport fan_rep = deterministic_fan_test(tuples, grid);
        auto hv = hull_vs_conditional(in.tree, in.selections, verdict_tol);
        rep.verdicts["martingale"] = hv.martingale ? "pass" : "fail";
        rep.verdicts["inclusion"] = hv.inclusion_ok ? "pass" : "fail";
        rep.verdicts["fan_martingale_agreement"] =
            fan_rep.verdict == hv.martingale ? "pass" : "fail";
        rep.tables["deterministic_fan"] = fan_rep.verdict;
        rep.tables["max_gap"] = hv.max_gap;
        rep.tables["worst_node"] = hv.worst_node;
        if (!fan_rep.argmax_ok) {
            rep.tables["witness_direction_index"] = fan_rep.witness_direction;
            rep.tables["witness_direction"] = fan_rep.witness_dir;
        }
        if (!fan_rep.fans_ok && fan_rep.witness_sample >= 0)
            rep.tables["witness_sample"] = fan_rep.witness_sample;
        io::atomic_write(out / "gaps.csv", gaps_csv(in.tree, hv.node_gap));
    } else if (mode == "randomization") {
        std::vector<std::vector<double>> zeta;
        for (const auto& sel : in.selections) {
            std::vector<double> row;
            for (const Vec& v : sel) {
                if (v.size() != 1)
                    throw MalformedInput("tree randomization: selections must be scalar (d=1)");
                row.push_back(v[0]);
            }
            zeta.push_back(std::move(row));
        }
        std::vector<double> atom_probs;
        for (int l : in.tree.leaves()) atom_probs.push_back(in.tree.prob(l));
        try {
            RandomizationResult r = randomization_identity(atom_probs, zeta);
            rep.verdicts["three_way_equality"] = "pass";
            rep.tables["partition_value"] = r.partition_value;
            rep.tables["expected_max"] = r.expected_max;
            rep.tables["simplex_value"] = r.simplex_value;
            rep.tables["partition"] = r.partition;
        } catch (const NumericalFailure& e) {
            rep.verdicts["three_way_equality"] = "fail";
            rep.tables["note"] = e.what();
        }
    } else {
        throw MalformedInput("tree: unknown mode \"" + mode + "\"");
    }
    write_report(out, rep);
    return finish("tree", rep, watch);
}

int run_simulate(const SimConfig& cfg, const fs::path& out) {
    Stopwatch watch;
    ensure_out_dir(out);
    PathEnsemble paths(cfg.driver());
    const int N = cfg.steps;
    const double alpha = cfg.alpha;

    // stored time grid
    std::vector<int> cps;
    for (int k = 0; k <= N; k += cfg.thin_stride()) cps.push_back(k);
    if (cps.back() != N) cps.push_back(N);

    Report rep;
    rep.command = "simulate";
    rep.config = sim_config_to_json(cfg);

    // trajectory files for the first traj_samples paths
    PolytopeTrajectory traj;
    for (int cp : cps) traj.times.push_back(cp * paths.dt());
    {
        std::string tri_csv = "sample,t,vertex_index,x,y\n";
        std::string corner_csv = "sample,t,x,y\n";
        std::string hyp_csv = "sample,t,length\n";
        for (int s = 0; s < cfg.traj_samples; ++s) {
            auto tri = sample_triangle_trajectory(paths, alpha, s, cps);
            std::vector<std::vector<Vec>> path;
            for (std::size_t j = 0; j < cps.size(); ++j) {
                const std::string ts = io::g17(tri.times[j]);
                for (int i = 0; i < 3; ++i)
                    tri_csv += std::to_string(s) + "," + ts + "," + std::to_string(i) + "," +
                               io::g17(tri.vertices[j][i][0]) + "," +
                               io::g17(tri.vertices[j][i][1]) + "\n";
                corner_csv += std::to_string(s) + "," + ts + "," +
                              io::g17(tri.vertices[j][0][0]) + "," +
                              io::g17(tri.vertices[j][0][1]) + "\n";
                hyp_csv += std::to_string(s) + "," + ts + "," +
                           io::g17(hypotenuse_length(tri.vertices[j])) + "\n";
                path.push_back({tri.vertices[j][0], tri.vertices[j][1], tri.vertices[j][2]});
            }
            traj.slices.push_back(std::move(path));
        }
        io::atomic_write(out / "triangle.csv", tri_csv);
        io::atomic_write(out / "right_angle_vertex.csv", corner_csv);
        io::atomic_write(out / "hypotenuse.csv", hyp_csv);
    }

    // path-regularity diagnostics on the stored trajectories
    if (!traj.slices.empty() && traj.times.size() >= 2) {
        RegularityReport reg = path_regularity_report(traj);
        int stat_samples = std::min(cfg.samples, 200);
        std::vector<int> ids(stat_samples);
        for (int i = 0; i < stat_samples; ++i) ids[i] = i;
        reg.summability = summability_statistic(
            [&](int s) { return triangle_integrands(paths, alpha, s); }, ids, N, paths.dt());
        json regj;
        regj["max_increment"] = reg.max_increment;
        regj["sample_max_increment"] = reg.sample_max_increment;
        regj["lag_times"] = reg.lag_times;
        regj["lag_max"] = reg.lag_max;
        regj["lag_mean"] = reg.lag_mean;
        regj["summability"] = reg.summability;
        rep.tables["regularity"] = regj;
        rep.verdicts["regularity"] = "diagnostic";
    }

    // terminal vertices for every sample, chunked deterministically
    const std::int64_t chunk = kDefaultChunk;
    const std::int64_t nchunks = (cfg.samples + chunk - 1) / chunk;
    std::vector<double> term(static_cast<std::size_t>(cfg.samples) * 6);
    parallel_chunks(cfg.samples, chunk, [&](std::int64_t, std::int64_t begin, std::int64_t end) {
        std::vector<double> b;
        const std::vector<int> cp{N};
        for (std::int64_t s = begin; s < end; ++s) {
            paths.values_at(static_cast<int>(s), cp, b);
            double t = paths.horizon();
            std::array<double, 3> eta;
            for (int c = 0; c < 3; ++c) eta[c] = std::exp(alpha * b[c] - 0.5 * alpha * alpha * t);
            auto v = right_triangle_vertices(eta[0], eta[1], eta[2]);
            for (int i = 0; i < 3; ++i)
                for (int d = 0; d < 2; ++d)
                    term[static_cast<std::size_t>(s) * 6 + i * 2 + d] = v[i][d];
        }
    });

    // vertex sample means against the time-zero vertices
    {
        std::vector<double> sums(static_cast<std::size_t>(nchunks) * 12, 0.0);
        parallel_chunks(cfg.samples, chunk,
                        [&](std::int64_t ci, std::int64_t begin, std::int64_t end) {
                            double* acc = &sums[static_cast<std::size_t>(ci) * 12];
                            for (std::int64_t s = begin; s < end; ++s)
                                for (int k = 0; k < 6; ++k) {
                                    double v = term[static_cast<std::size_t>(s) * 6 + k];
                                    acc[k] += v;
                                    acc[6 + k] += v * v;
                                }
                        });
        double sum[6] = {0, 0, 0, 0, 0, 0}, sumsq[6] = {0, 0, 0, 0, 0, 0};
        for (std::int64_t ci = 0; ci < nchunks; ++ci)
            for (int k = 0; k < 6; ++k) {
                sum[k] += sums[static_cast<std::size_t>(ci) * 12 + k];
                sumsq[k] += sums[static_cast<std::size_t>(ci) * 12 + 6 + k];
            }
        auto target = right_triangle_vertices(1.0, 1.0, 1.0);
        json vm = json::array();
        bool ok = true;
        const double n = cfg.samples;
        for (int i = 0; i < 3; ++i) {
            json row;
            Vec mean(2), se(2), z(2);
            for (int d = 0; d < 2; ++d) {
                mean[d] = sum[i * 2 + d] / n;
                double var = std::max(0.0, (sumsq[i * 2 + d] - n * mean[d] * mean[d]) / (n - 1));
                se[d] = std::sqrt(var / n);
                z[d] = se[d] > 0 ? (mean[d] - target[i][d]) / se[d] : 0.0;
                if (std::fabs(z[d]) > kStatThreshold) ok = false;
            }
            row["mean"] = mean;
            row["se"] = se;
            row["target"] = target[i];
            row["z"] = z;
            vm.push_back(row);
        }
        rep.tables["vertex_means"] = vm;
        rep.verdicts["vertex_means"] = ok ? "pass" : "fail";
    }

    // supremum test over the direction grid
    {
        DirectionGrid grid(2, cfg.grid_k);
        // exact mean of the discrete exponential martingale at T
        double pre0 = cfg.mode == "walk"
                          ? std::exp(-0.5 * alpha * alpha * cfg.horizon) *
                                std::pow(std::cosh(alpha * paths.sqrt_dt()), N)
                          : 1.0;
        auto tv = right_triangle_vertices(pre0, pre0, pre0);
        auto terminal_of = [&](int s, std::vector<Vec>& pts) {
            for (int i = 0; i < 3; ++i)
                for (int d = 0; d < 2; ++d)
                    pts[i][d] = term[static_cast<std::size_t>(s) * 6 + i * 2 + d];
        };
        SupremumReport sup =
            mc_supremum_test(terminal_of, cfg.samples, 3, 2, {tv[0], tv[1], tv[2]}, grid);
        json supj;
        supj["directions"] = cfg.grid_k;
        supj["max_z"] = sup.max_z;
        supj["min_z"] = sup.min_z;
        supj["worst_direction"] = sup.worst_direction;
        json stats = json::array();
        for (const DirectionStat& st : sup.stats)
            stats.push_back(json{{"lhs", st.lhs}, {"rhs", st.rhs}, {"se", st.se}, {"z", st.z}});
        supj["per_direction"] = stats;
        rep.tables["supremum"] = supj;
        rep.verdicts["supremum_test"] =
            sup.verdict == SupremumVerdict::ConsistentMartingale ? "pass" : "fail";
    }

    write_report(out, rep);
    return finish("simulate", rep, watch);
}

int run_verify(const std::string& suite, std::uint64_t seed, const fs::path& out) {
    Stopwatch watch;
    auto results = verify_suite(suite, seed);
    Report rep;
    rep.command = "verify";
    rep.config = json{{"suite", suite}, {"seed", seed}};
    json checks = json::array();
    for (const CheckResult& c : results) {
        rep.verdicts[c.name] = c.pass ? "pass" : "fail";
        checks.push_back(json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        std::cout << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.name
                  << (c.detail.empty() ? "" : " - " + c.detail) << "\n";
    }
    rep.tables["checks"] = checks;
    if (!out.empty()) {
        ensure_out_dir(out);
        write_report(out, rep);
    }
    return finish("verify", rep, watch);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"svset: exact polyhedral geometry, scenario-tree probability, and Monte Carlo "
                 "diagnostics for set-valued martingales"};
    app.require_subcommand(1);

    std::string input, mode = "audit", suite = "all", out_dir, config_path;
    std::uint64_t seed = 1;
    double tol_ = 0.0;
    int grid_k = 720;

    auto* fan_cmd = app.add_subcommand("fan", "normal fan and type cone of a polygon");
    fan_cmd->add_option("input", input, "polytope JSON file")->required();
    fan_cmd->add_option("--out", out_dir, "output directory")->required();
    fan_cmd->add_option("--tol", tol_, "tolerance override");

    auto* tree_cmd = app.add_subcommand("tree", "exact scenario-tree computations");
    tree_cmd->add_option("input", input, "tree JSON file")->required();
    tree_cmd->add_option("--mode", mode, "audit | equivalence | randomization")
        ->check(CLI::IsMember({"audit", "equivalence", "randomization"}));
    tree_cmd->add_option("--out", out_dir, "output directory")->required();
    tree_cmd->add_option("--grid-k", grid_k, "direction grid size");
    tree_cmd->add_option("--tol", tol_, "verdict tolerance");

    auto* sim_cmd = app.add_subcommand("simulate", "random-triangle Monte Carlo reproduction");
    sim_cmd->add_option("--config", config_path, "config JSON file");
    sim_cmd->add_option("--out", out_dir, "output directory")->required();
    std::uint64_t sim_seed = 0;
    int sim_samples = -1, sim_steps = -1, sim_grid_k = -1, sim_thin = -1, sim_traj = -1;
    double sim_alpha = std::numeric_limits<double>::quiet_NaN();
    std::string sim_mode;
    auto* seed_opt = sim_cmd->add_option("--seed", sim_seed, "RNG seed");
    sim_cmd->add_option("--samples", sim_samples, "Monte Carlo sample count");
    sim_cmd->add_option("--steps", sim_steps, "driver steps N");
    sim_cmd->add_option("--alpha", sim_alpha, "exponential martingale coefficient");
    sim_cmd->add_option("--grid-k", sim_grid_k, "direction grid size");
    sim_cmd->add_option("--mode", sim_mode, "walk | gauss")->check(CLI::IsMember({"walk", "gauss"}));
    sim_cmd->add_option("--thin", sim_thin, "store every k-th step (0 = auto)");
    sim_cmd->add_option("--traj-samples", sim_traj, "paths written to trajectory files");

    auto* verify_cmd = app.add_subcommand("verify", "module invariant suites");
    verify_cmd->add_option("--suite", suite, "geometry | fan | tree | mc | all");
    verify_cmd->add_option("--seed", seed, "suite seed");
    verify_cmd->add_option("--out", out_dir, "optional report directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (fan_cmd->parsed()) return run_fan(input, out_dir, tol_);
        if (tree_cmd->parsed()) return run_tree(input, mode, out_dir, grid_k, tol_);
        if (sim_cmd->parsed()) {
            SimConfig cfg;
            if (!config_path.empty()) cfg = sim_config_from_json(io::load_file(config_path));
            if (seed_opt->count() > 0) cfg.seed = sim_seed;
            if (sim_samples >= 0) cfg.samples = sim_samples;
            if (sim_steps >= 0) cfg.steps = sim_steps;
            if (!std::isnan(sim_alpha)) cfg.alpha = sim_alpha;
            if (sim_grid_k >= 0) cfg.grid_k = sim_grid_k;
            if (!sim_mode.empty()) cfg.mode = sim_mode;
            if (sim_thin >= 0) cfg.thin = sim_thin;
            if (sim_traj >= 0) cfg.traj_samples = std::min(sim_traj, cfg.samples);
            if (cfg.samples < 1 || cfg.steps < 1)
                throw MalformedInput("simulate: samples and steps must be >= 1");
            if (cfg.grid_k < 2 || cfg.grid_k % 2 != 0)
                throw MalformedInput("simulate: grid_k must be even and >= 2");
            return run_simulate(cfg, out_dir);
        }
        if (verify_cmd->parsed()) return run_verify(suite, seed, out_dir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
