// supermix command-line driver: simulation, SFW/CPGD solves, certificate
// audits, rate sweeps, and the canned figure-1 configuration.
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "supermix/certificate.hpp"
#include "supermix/fidelity.hpp"
#include "supermix/io.hpp"
#include "supermix/kernels.hpp"
#include "supermix/measures.hpp"
#include "supermix/metrics.hpp"
#include "supermix/solver_cpgd.hpp"
#include "supermix/solver_sfw.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace supermix;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    DiscreteMeasure truth{1};
    MixingKernelSpec mixing;
    FidelitySpec fidelity;
    double m = 0.0;          // bandwidth under the 1/tau = 4m convention
    bool m_given = false;    // whether m (rather than tau) was specified
    double kappa = 0.01;
    bool kappa_auto_rule = false;
    double kappa_factor = 1.0;
    int n = 0;
    bool exact_moments = false;
    std::vector<std::uint64_t> seeds{1};
    json raw;

    SfwConfig sfw;
    CpgdConfig cpgd;
};

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw UsageError(std::string("config parse error: ") + e.what());
    }
    return j;
}

VectorXd vector_from_json(const json& j) {
    VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
    return v;
}

ExperimentConfig parse_config(const json& j) {
    ExperimentConfig cfg;
    cfg.raw = j;
    try {
        cfg.truth = io::measure_from_json(j.at("truth"));
        cfg.mixing = MixingKernelSpec::from_json(j.at("mixing"));

        const bool has_tau = j.contains("tau"), has_m = j.contains("m");
        if (has_tau == has_m)
            throw UsageError("config must give exactly one of tau or m");
        cfg.fidelity.dim = cfg.mixing.dim;
        if (has_tau) {
            cfg.fidelity.tau = j["tau"].get<double>();
            cfg.m = 0.25 / cfg.fidelity.tau;
        } else {
            cfg.m = j["m"].get<double>();
            cfg.m_given = true;
            cfg.fidelity.tau = 0.25 / cfg.m;
        }
        if (cfg.fidelity.tau <= 0.0) throw UsageError("tau must be positive");
        if (j.contains("quad_points_per_dim"))
            cfg.fidelity.quad_points_per_dim = j["quad_points_per_dim"].get<int>();

        cfg.n = j.value("n", 0);
        cfg.exact_moments = j.value("exact_moments", false);
        if (j.contains("seeds")) {
            cfg.seeds.clear();
            for (const auto& s : j["seeds"]) cfg.seeds.push_back(s.get<std::uint64_t>());
        } else if (j.contains("seed")) {
            cfg.seeds = {j["seed"].get<std::uint64_t>()};
        }

        cfg.kappa_factor = j.value("kappa_factor", 1.0);
        if (j.contains("kappa") && j["kappa"].is_string()) {
            if (j["kappa"].get<std::string>() != "auto")
                throw UsageError("kappa must be a number or \"auto\"");
            if (!cfg.m_given) throw UsageError("kappa \"auto\" requires m in the config");
            cfg.kappa_auto_rule = true;
        } else if (j.contains("kappa")) {
            cfg.kappa = j["kappa"].get<double>();
            if (cfg.kappa <= 0.0) throw UsageError("kappa must be positive");
        }
        if (cfg.kappa_auto_rule)
            cfg.kappa = kappa_auto(static_cast<int>(cfg.truth.size()), cfg.mixing.dim, cfg.m,
                                   std::max(cfg.n, 1), cfg.mixing, cfg.kappa_factor);

        if (j.contains("sfw")) {
            const auto& s = j["sfw"];
            cfg.sfw.max_iters = s.value("max_iters", cfg.sfw.max_iters);
            cfg.sfw.dual_tol = s.value("dual_tol", cfg.sfw.dual_tol);
            cfg.sfw.grid_points_per_dim =
                s.value("grid_points_per_dim", cfg.sfw.grid_points_per_dim);
            cfg.sfw.nonnegative = s.value("nonnegative", cfg.sfw.nonnegative);
            if (s.contains("box_lo")) cfg.sfw.box_lo = vector_from_json(s["box_lo"]);
            if (s.contains("box_hi")) cfg.sfw.box_hi = vector_from_json(s["box_hi"]);
        }
        if (j.contains("cpgd")) {
            const auto& c = j["cpgd"];
            cfg.cpgd.alpha = c.value("alpha", cfg.cpgd.alpha);
            cfg.cpgd.beta = c.value("beta", cfg.cpgd.beta);
            cfg.cpgd.num_particles = c.value("num_particles", cfg.cpgd.num_particles);
            cfg.cpgd.num_steps = c.value("num_steps", cfg.cpgd.num_steps);
            cfg.cpgd.record_every = c.value("record_every", cfg.cpgd.record_every);
            cfg.cpgd.init_seed = c.value("init_seed", cfg.cpgd.init_seed);
            if (c.contains("box_lo")) cfg.cpgd.box_lo = vector_from_json(c["box_lo"]);
            if (c.contains("box_hi")) cfg.cpgd.box_hi = vector_from_json(c["box_hi"]);
        }
        cfg.sfw.kappa = cfg.kappa;
        cfg.cpgd.kappa = cfg.kappa;
    } catch (const json::exception& e) {
        throw UsageError(std::string("config error: ") + e.what());
    }
    return cfg;
}

std::string timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

// refuse to reuse an output directory whose manifest hash differs, unless
// --force; the manifest is the only place a timestamp appears
void write_manifest(const fs::path& out, const std::string& command, const json& config,
                    const std::vector<std::string>& files, bool force) {
    const std::string hash = io::config_hash(config);
    const fs::path manifest_path = out / ("manifest_" + command + ".json");
    if (fs::exists(manifest_path) && !force) {
        const json old = load_json(manifest_path.string());
        if (old.value("config_hash", "") != hash)
            throw UsageError("output directory holds results for a different config (hash " +
                             old.value("config_hash", "?") + "); pass --force to overwrite");
    }
    json manifest = {{"command", command},
                     {"config_hash", hash},
                     {"timestamp", timestamp_now()},
                     {"files", files}};
    io::write_text_file(manifest_path.string(), manifest.dump(2) + "\n");
}

DataFit make_data(const ExperimentConfig& cfg, std::uint64_t seed) {
    auto corr = std::make_shared<CorrelationEvaluator>(cfg.mixing, cfg.fidelity);
    if (cfg.exact_moments) return DataFit::exact_moments(corr, cfg.truth);
    return DataFit::empirical(corr, sample_mixture(cfg.truth, cfg.mixing, cfg.n, seed));
}

int cmd_simulate(const ExperimentConfig& cfg, const fs::path& out, bool force) {
    std::vector<std::string> files;
    for (const auto seed : cfg.seeds) {
        const Sample sample = sample_mixture(cfg.truth, cfg.mixing, cfg.n, seed);
        const std::string name = "sample_" + std::to_string(seed) + ".csv";
        std::ofstream f(out / name);
        io::sample_to_csv(sample, f);
        files.push_back(name);
    }
    write_manifest(out, "simulate", cfg.raw, files, force);
    return 0;
}

int cmd_solve_sfw(const ExperimentConfig& cfg, const fs::path& out, bool force) {
    std::vector<std::string> files;
    bool all_converged = true;
    for (const auto seed : cfg.seeds) {
        const DataFit data = make_data(cfg, seed);
        const SolveResult result = solve_sfw(data, cfg.sfw);
        all_converged = all_converged && result.converged;
        json rj = io::solve_result_to_json(result);
        rj["seed"] = seed;
        rj["kappa"] = cfg.kappa;
        const std::string base = "sfw_" + std::to_string(seed);
        io::write_text_file((out / (base + ".json")).string(), rj.dump(2) + "\n");
        std::ofstream trace(out / (base + "_trace.csv"));
        io::objective_trace_to_csv(result, trace);
        std::ofstream mcsv(out / (base + "_measure.csv"));
        io::measure_to_csv(result.estimate, mcsv);
        files.insert(files.end(), {base + ".json", base + "_trace.csv", base + "_measure.csv"});
    }
    write_manifest(out, "sfw", cfg.raw, files, force);
    return all_converged ? 0 : 1;
}

int cmd_solve_cpgd(const ExperimentConfig& cfg, const fs::path& out, bool force) {
    std::vector<std::string> files;
    for (const auto seed : cfg.seeds) {
        const DataFit data = make_data(cfg, seed);
        CpgdConfig cc = cfg.cpgd;
        if (!cfg.raw.contains("cpgd") || !cfg.raw["cpgd"].contains("init_seed"))
            cc.init_seed = seed + 1;  // decouple particle init from the data seed
        const CpgdResult result = solve_cpgd(data, cc);
        const std::string base = "cpgd_" + std::to_string(seed);
        json rj = {{"estimate", io::measure_to_json(result.estimate)},
                   {"seed", seed},
                   {"kappa", cfg.kappa},
                   {"steps", cc.num_steps},
                   {"particles", cc.num_particles}};
        io::write_text_file((out / (base + ".json")).string(), rj.dump(2) + "\n");
        std::ofstream traj(out / (base + "_trajectory.csv"));
        io::trajectory_to_csv(result.trajectory, traj);
        files.insert(files.end(), {base + ".json", base + "_trajectory.csv"});
    }
    write_manifest(out, "cpgd", cfg.raw, files, force);
    return 0;
}

int cmd_certify(const json& j, const fs::path& out, bool force) {
    std::vector<VectorXd> support;
    try {
        for (const auto& t : j.at("support")) support.push_back(vector_from_json(t));
    } catch (const json::exception& e) {
        throw UsageError(std::string("certify config needs a support array: ") + e.what());
    }
    if (support.empty()) throw UsageError("certify: empty support");
    const double m = j.value("m", 0.0);
    if (m <= 0.0) throw UsageError("certify: m must be positive");
    const std::string kind_name = j.value("kind", "P");
    CertificateKind kind = CertificateKind::P;
    int selector = -1;
    if (kind_name == "Q") {
        kind = CertificateKind::Q;
        selector = j.value("selector", 0);
    } else if (kind_name != "P") {
        throw UsageError("certify: kind must be \"P\" or \"Q\"");
    }

    const int d = static_cast<int>(support.front().size());
    AuditGrid grid;
    if (j.contains("grid")) {
        grid.lo = vector_from_json(j["grid"].at("lo"));
        grid.hi = vector_from_json(j["grid"].at("hi"));
        grid.points_per_dim = j["grid"].value("points_per_dim", grid.points_per_dim);
    } else {
        grid.lo = VectorXd::Constant(d, std::numeric_limits<double>::infinity());
        grid.hi = -grid.lo;
        for (const auto& t : support) {
            grid.lo = grid.lo.cwiseMin(t);
            grid.hi = grid.hi.cwiseMax(t);
        }
        grid.lo.array() -= 10.0;
        grid.hi.array() += 10.0;
    }

    const Certificate cert = build_certificate(support, m, kind, selector);
    const AuditReport report = audit_certificate(cert, grid, j.value("epsilon", 0.0));

    json rj = io::audit_report_to_json(report);
    rj["m"] = m;
    rj["kind"] = kind_name;
    io::write_text_file((out / "audit.json").string(), rj.dump(2) + "\n");

    // grid CSV only along the first axis for d > 1 would be misleading; write
    // the full tensor grid, one row per point
    std::ofstream g(out / "certificate_grid.csv");
    for (int jdx = 1; jdx <= d; ++jdx) g << "x" << jdx << ",";
    g << "p,P\n";
    std::vector<long> idx(d, 0);
    const long npd = grid.points_per_dim;
    long total = 1;
    for (int k = 0; k < d; ++k) total *= npd;
    VectorXd t(d);
    for (long c = 0; c < total; ++c) {
        for (int k = 0; k < d; ++k)
            t[k] = grid.lo[k] + (grid.hi[k] - grid.lo[k]) * idx[k] / double(npd - 1);
        const double p = cert.p_value(t);
        for (int k = 0; k < d; ++k) g << std::setprecision(17) << t[k] << ",";
        g << std::setprecision(17) << p << "," << p * p << "\n";
        for (int k = 0; k < d; ++k) {
            if (++idx[k] < npd) break;
            idx[k] = 0;
        }
    }
    write_manifest(out, "certify", j, {"audit.json", "certificate_grid.csv"}, force);
    return 0;
}

struct RateRow {
    int n = 0;
    std::uint64_t seed = 0;
    SupportError err;
    bool converged = false;
};

int cmd_rates(const ExperimentConfig& cfg, const fs::path& out, bool force) {
    std::vector<int> n_grid;
    if (cfg.raw.contains("n_grid"))
        for (const auto& v : cfg.raw["n_grid"]) n_grid.push_back(v.get<int>());
    if (n_grid.size() < 3) throw UsageError("rates: n_grid needs at least 3 points");
    if (cfg.seeds.size() < 10) throw UsageError("rates: need at least 10 replicate seeds");

    std::vector<std::pair<int, std::uint64_t>> tasks;
    for (const int n : n_grid)
        for (const auto seed : cfg.seeds) tasks.emplace_back(n, seed);
    std::vector<RateRow> rows(tasks.size());

    // replicates are independent single-threaded solves; merge by task order
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const auto [n, seed] = tasks[i];
            ExperimentConfig local = cfg;
            local.n = n;
            if (cfg.kappa_auto_rule) {
                local.kappa = kappa_auto(static_cast<int>(cfg.truth.size()), cfg.mixing.dim,
                                         cfg.m, n, cfg.mixing, cfg.kappa_factor);
                local.sfw.kappa = local.kappa;
            }
            const DataFit data = make_data(local, seed);
            const SolveResult result = solve_sfw(data, local.sfw);
            rows[i] = {n, seed, support_error(result.estimate, cfg.truth), result.converged};
        }
    };
    const unsigned pool =
        std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), tasks.size());
    std::vector<std::thread> threads;
    for (unsigned k = 0; k < pool; ++k) threads.emplace_back(worker);
    for (auto& th : threads) th.join();

    const std::string hash = io::config_hash(cfg.raw);
    std::ofstream ledger(out / "ledger.csv");
    ledger << "config_hash,n,seed,k_hat,hausdorff,matched_weight_l1,converged\n";
    for (const auto& r : rows)
        ledger << hash << "," << r.n << "," << r.seed << "," << r.err.k_hat << ","
               << std::setprecision(17) << r.err.hausdorff << "," << r.err.matched_weight_l1
               << "," << (r.converged ? 1 : 0) << "\n";

    // OLS slope of log(median matched-weight error) against log(n)
    std::vector<double> logn, logerr;
    for (const int n : n_grid) {
        std::vector<double> errs;
        for (const auto& r : rows)
            if (r.n == n) errs.push_back(r.err.matched_weight_l1);
        std::sort(errs.begin(), errs.end());
        const std::size_t k = errs.size();
        const double med = (k % 2) ? errs[k / 2] : 0.5 * (errs[k / 2 - 1] + errs[k / 2]);
        logn.push_back(std::log(static_cast<double>(n)));
        logerr.push_back(std::log(std::max(med, 1e-300)));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double cnt = static_cast<double>(logn.size());
    for (std::size_t i = 0; i < logn.size(); ++i) {
        sx += logn[i];
        sy += logerr[i];
        sxx += logn[i] * logn[i];
        sxy += logn[i] * logerr[i];
    }
    const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);

    json summary = {{"config_hash", hash},
                    {"n_grid", n_grid},
                    {"replicates", cfg.seeds.size()},
                    {"slope", slope},
                    {"log_median_errors", logerr}};
    io::write_text_file((out / "slope_summary.json").string(), summary.dump(2) + "\n");
    write_manifest(out, "rates", cfg.raw, {"ledger.csv", "slope_summary.json"}, force);
    return 0;
}

json figure1_config() {
    return {{"truth",
             {{"dim", 1},
              {"atoms",
               {{{"w", 0.36}, {"t", {-13.1}}},
                {{"w", 0.52}, {"t", {-0.9}}},
                {{"w", 0.12}, {"t", {14.0}}}}}}},
            {"mixing", {{"family", "gaussian"}, {"dim", 1}}},
            {"tau", 0.1},
            {"kappa", 0.01},
            {"n", 200},
            {"seed", 1},
            {"cpgd",
             {{"alpha", 0.05},
              {"beta", 1.0},
              {"num_particles", 20},
              {"num_steps", 2500},
              {"init_seed", 2}}}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grid-less mixture deconvolution: simulation, BLASSO solvers, "
                 "certificate audits, and rate experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    bool force = false;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> steps_override, particles_override;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", config_path, "JSON config file");
        if (config_required) opt->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed_override, "override the config seed list");
        sub->add_flag("--force", force, "overwrite results from a different config");
    };

    auto* sim = app.add_subcommand("simulate", "draw mixture samples");
    auto* sfw = app.add_subcommand("sfw", "solve by sliding Frank-Wolfe");
    auto* cpgd = app.add_subcommand("cpgd", "solve by conic particle gradient descent");
    auto* certify = app.add_subcommand("certify", "build and audit a dual certificate");
    auto* rates = app.add_subcommand("rates", "error-vs-n sweep with OLS slope");
    auto* figure1 = app.add_subcommand("figure1", "canned three-spike CPGD run");
    for (auto* sub : {sim, sfw, cpgd, certify, rates}) add_common(sub, true);
    add_common(figure1, false);
    figure1->add_option("--steps", steps_override, "gradient step count");
    figure1->add_option("--particles", particles_override, "particle count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        fs::create_directories(out_dir);
        const fs::path out(out_dir);

        json raw;
        if (!config_path.empty())
            raw = load_json(config_path);
        else if (figure1->parsed())
            raw = figure1_config();
        if (figure1->parsed() && !config_path.empty()) {
            // overlay user keys on the canned defaults
            json base = figure1_config();
            base.merge_patch(raw);
            raw = base;
        }
        if (seed_override) {
            raw.erase("seeds");
            raw["seed"] = *seed_override;
        }
        if (figure1->parsed()) {
            if (steps_override) raw["cpgd"]["num_steps"] = *steps_override;
            if (particles_override) raw["cpgd"]["num_particles"] = *particles_override;
        }

        if (certify->parsed()) return cmd_certify(raw, out, force);

        const ExperimentConfig cfg = parse_config(raw);
        if (sim->parsed()) return cmd_simulate(cfg, out, force);
        if (sfw->parsed()) return cmd_solve_sfw(cfg, out, force);
        if (cpgd->parsed() || figure1->parsed()) return cmd_solve_cpgd(cfg, out, force);
        if (rates->parsed()) return cmd_rates(cfg, out, force);
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 1;
    }
}
