// Command-line front end: configuration validation, single-path and ensemble
// runs, and the verification suites. Exit codes: 0 ok, 1 config/usage error,
// 2 validation-gate failure, 3 verification failure, 4 blow-up.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "nlch/config.hpp"
#include "nlch/io.hpp"
#include "nlch/parallel.hpp"
#include "nlch/report.hpp"

using namespace nlch;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitValidation = 2;
constexpr int kExitVerification = 3;
constexpr int kExitBlowup = 4;

std::string resolve_outdir(const RunConfig& rc, const std::string& override_dir) {
    std::filesystem::path dir = override_dir.empty() ? rc.output.dir : override_dir;
    if (dir.is_relative()) {
        if (const char* root = std::getenv("NLCH_OUT_ROOT")) dir = std::filesystem::path(root) / dir;
    }
    std::filesystem::create_directories(dir);
    return dir.string();
}

void emit(const json& report, const std::string& outdir, const std::string& name) {
    write_report(report, (std::filesystem::path(outdir) / name).string());
    std::cout << render_text(report);
}

json base_report(const RunConfig& rc) {
    json j;
    j["provenance"] = provenance(rc);
    j["config"] = rc.resolved();
    return j;
}

int run_validate(const RunConfig& rc, const std::string& outdir) {
    json gates = json::array();
    bool all_pass = true;
    auto add = [&](const std::string& name, bool pass, json measured, const std::string& note) {
        measured["gate"] = name;
        measured["pass"] = pass;
        if (!note.empty()) measured["reason"] = note;
        gates.push_back(std::move(measured));
        all_pass = all_pass && pass;
    };

    std::shared_ptr<const BasisSpec> basis;
    try {
        basis = BasisSpec::build(rc.solver.domain, rc.solver.modes, rc.solver.basis_options);
        add("basis_memory", true,
            {{"total_nodes", basis->total_nodes()}, {"modes", basis->mode_count()}}, "");
    } catch (const Error& e) {
        add("basis_memory", false, {}, e.what());
    }

    double c0 = 0.0;
    if (basis) {
        try {
            auto tables = KernelTables::build(rc.solver.kernel, basis);
            GridField a = coefficient_a(tables);
            json m{{"l1_kernel", tables.l1_kernel()}, {"l1_gradient", tables.l1_gradient()}};
            try {
                c0 = validate_c0(a);
                m["c0"] = c0;
                add("positivity_margin_c0", true, m, "");
            } catch (const AssumptionViolation& e) {
                m["c0"] = *std::min_element(a.values.begin(), a.values.end()) - 1.0;
                add("positivity_margin_c0", false, m, "c0 nonpositive");
                (void)e;
            }
        } catch (const Error& e) {
            add("positivity_margin_c0", false, {}, e.what());
        }

        try {
            VelocityField u = velocity_eval(rc.solver.velocity, basis);
            add("velocity_admissible", true,
                {{"sup_norm", u.sup_norm},
                 {"max_divergence", u.max_divergence},
                 {"boundary_trace", u.boundary_trace}},
                "");
        } catch (const Error& e) {
            add("velocity_admissible", false, {}, e.what());
        }

        try {
            KqReport kq = validate_kq(rc.solver.noise, *basis, rc.solver.kq_probe_depth);
            add("noise_trace_condition", kq.pass, to_json(kq), kq.pass ? "" : "block sums do not decay");
        } catch (const Error& e) {
            add("noise_trace_condition", false, {}, e.what());
        }
    }

    json report = base_report(rc);
    report["gates"] = std::move(gates);
    report["pass"] = all_pass;
    emit(report, outdir, "validate_report.json");
    return all_pass ? kExitOk : kExitValidation;
}

int run_simulate(const RunConfig& rc, const std::string& outdir, std::uint64_t path_index) {
    SolverContext ctx = SolverContext::create(rc.solver);
    SpectralField phi0 = rc.ic.realize(ctx.basis_ptr(), rc.master_seed, path_index);
    Trajectory traj = simulate(ctx, phi0, path_index);

    const std::string stem = "trajectory_" + std::to_string(path_index);
    const std::string& fmt = rc.output.trajectory_format;
    if (fmt == "csv" || fmt == "both")
        export_trajectory_csv(traj, (std::filesystem::path(outdir) / (stem + ".csv")).string());
    if (fmt == "binary" || fmt == "both")
        export_trajectory_binary(traj, (std::filesystem::path(outdir) / (stem + ".bin")).string());
    if (rc.output.gnuplot)
        export_trajectory_gnuplot(traj, (std::filesystem::path(outdir) / (stem + ".dat")).string());

    json report = base_report(rc);
    report["path_index"] = path_index;
    report["status"] = traj.completed() ? "completed" : "blowup";
    report["blowup_step"] = traj.blowup_step;
    report["recorded_states"] = traj.states.size();
    if (traj.completed()) {
        report["final_h_norm"] = sobolev_norm(traj.states.back(), 0.0);
        report["final_energy"] = energy(traj.states.back(), ctx);
    }
    emit(report, outdir, "simulate_report_" + std::to_string(path_index) + ".json");
    return traj.completed() ? kExitOk : kExitBlowup;
}

int run_ensemble(const RunConfig& rc, const std::string& outdir, std::uint64_t first, int count) {
    SolverContext ctx = SolverContext::create(rc.solver);
    struct Row {
        std::uint64_t index;
        bool completed;
        double sup_h2, l2u2, l4_4, grad_mu, final_energy;
    };
    std::vector<Row> rows(static_cast<size_t>(count));
    const int block = 16;
    const int blocks = (count + block - 1) / block;
    parallel_for_blocks(blocks, [&](int b) {
        for (int i = b * block; i < std::min(count, (b + 1) * block); ++i) {
            const std::uint64_t idx = first + static_cast<std::uint64_t>(i);
            SpectralField phi0 = rc.ic.realize(ctx.basis_ptr(), rc.master_seed, idx);
            Trajectory traj = simulate(ctx, phi0, idx);
            Row& r = rows[static_cast<size_t>(i)];
            r.index = idx;
            r.completed = traj.completed();
            if (!r.completed) continue;
            double sup = 0.0, l2u = 0.0, l44 = 0.0;
            for (size_t s = 0; s < traj.states.size(); ++s) {
                const double nh = sobolev_norm(traj.states[s], 0.0);
                sup = std::max(sup, nh * nh);
                if (s + 1 < traj.states.size()) {
                    const double w = traj.times[s + 1] - traj.times[s];
                    const double nu = sobolev_norm(traj.states[s], 1.0);
                    const double l4 = l4_norm(traj.states[s]);
                    l2u += w * nu * nu;
                    l44 += w * l4 * l4 * l4 * l4;
                }
            }
            r.sup_h2 = sup;
            r.l2u2 = l2u;
            r.l4_4 = l44;
            r.grad_mu = gradient_mu_norm(traj, ctx);
            r.final_energy = energy(traj.states.back(), ctx);
        }
    });

    int blowups = 0;
    json jrows = json::array();
    double mean_sup = 0.0;
    for (const Row& r : rows) {
        if (!r.completed) ++blowups;
        else mean_sup += r.sup_h2;
        jrows.push_back({{"path_index", r.index},
                         {"status", r.completed ? "completed" : "blowup"},
                         {"sup_h2", r.sup_h2},
                         {"l2_u2", r.l2u2},
                         {"l4_4", r.l4_4},
                         {"grad_mu_l2", r.grad_mu},
                         {"final_energy", r.final_energy}});
    }
    if (count > blowups) mean_sup /= (count - blowups);

    json report = base_report(rc);
    report["first"] = first;
    report["count"] = count;
    report["blowups"] = blowups;
    report["mean_sup_h2"] = mean_sup;
    report["rows"] = std::move(jrows);
    emit(report, outdir,
         "ensemble_" + std::to_string(first) + "_" + std::to_string(count) + ".json");
    return blowups == 0 ? kExitOk : kExitBlowup;
}

int run_verify_energy(const RunConfig& rc, const std::string& outdir, std::uint64_t path_index) {
    const int halvings = rc.verify.energy_halvings;
    SolverConfig fine_cfg = rc.solver;
    fine_cfg.dt = rc.solver.dt / static_cast<double>(1 << halvings);
    SolverContext fine = SolverContext::create(fine_cfg);
    SpectralField phi0 = rc.ic.realize(fine.basis_ptr(), rc.master_seed, path_index);
    WienerPath fine_path = sample_path(fine_cfg.noise, fine.basis(),
                                       static_cast<int>(fine.steps()), fine_cfg.dt, path_index);

    std::vector<double> residuals;
    for (int level = 0; level <= halvings; ++level) {
        SolverConfig cfg = rc.solver;
        cfg.dt = rc.solver.dt / static_cast<double>(1 << level);
        SolverContext ctx = SolverContext::create(cfg);
        WienerPath path = coarsen_path(fine_path, 1 << (halvings - level));
        Trajectory traj = simulate_with_path(ctx, phi0, path);
        if (!traj.completed()) return kExitBlowup;
        EnergyLedger led = energy_identity_residual(traj, ctx);
        residuals.push_back(std::abs(led.residual_at_horizon()));
    }
    json ratios = json::array();
    bool pass = true;
    for (size_t i = 0; i + 1 < residuals.size(); ++i) {
        const double ratio = residuals[i] / std::max(residuals[i + 1], 1e-300);
        ratios.push_back(ratio);
        if (!(ratio >= 1.8)) pass = false;
    }
    json report = base_report(rc);
    report["path_index"] = path_index;
    report["halvings"] = halvings;
    report["residuals"] = residuals;
    report["ratios"] = std::move(ratios);
    report["threshold"] = 1.8;
    report["pass"] = pass;
    emit(report, outdir, "verify_energy.json");
    return pass ? kExitOk : kExitVerification;
}

int run_verify_weak(const RunConfig& rc, const std::string& outdir, int paths) {
    auto basis = BasisSpec::build(rc.solver.domain, rc.solver.modes, rc.solver.basis_options);
    auto xis = rc.make_xis(basis);
    auto battery = rc.make_battery();
    WeakReport rep = weak_solution_check(rc.solver, rc.ic, xis, battery, paths);
    const int bias_paths = std::min(paths, 512);
    auto allowances = weak_bias_fit(rc.solver, rc.ic, xis, battery, bias_paths);

    bool pass = true;
    json pairs = to_json(rep)["pairs"];
    for (size_t i = 0; i < rep.pairs.size(); ++i) {
        const double tol = rep.pairs[i].stat_band + allowances[i];
        pairs[i]["dt_allowance"] = allowances[i];
        pairs[i]["tolerance"] = tol;
        const bool ok = rep.pairs[i].discrepancy <= tol;
        pairs[i]["pass"] = ok;
        pass = pass && ok;
    }
    json report = base_report(rc);
    report["paths"] = paths;
    report["bias_fit_paths"] = bias_paths;
    report["pairs"] = std::move(pairs);
    report["pass"] = pass;
    // Norm-scale parameters carried for completeness; they gate nothing.
    // p' is a free choice in (3, 4); q' follows from 2/3 + 1/p' + 1/q' = 1.
    const double p_prime = 3.5;
    report["norm_parameters"] = {{"p_prime", p_prime},
                                 {"q_prime", 1.0 / (1.0 - 2.0 / 3.0 - 1.0 / p_prime)},
                                 {"eps", rc.verify.eps},
                                 {"holder_beta", 0.4}};
    emit(report, outdir, "verify_weak.json");
    return pass ? kExitOk : kExitVerification;
}

int run_verify_strong(const RunConfig& rc, const std::string& outdir, std::uint64_t path_index) {
    const int levels = 3;
    SolverConfig fine_cfg = rc.solver;
    fine_cfg.dt = rc.solver.dt / static_cast<double>(1 << (levels - 1));
    SolverContext fine = SolverContext::create(fine_cfg);
    SpectralField phi0 = rc.ic.realize(fine.basis_ptr(), rc.master_seed, path_index);
    WienerPath fine_path = sample_path(fine_cfg.noise, fine.basis(),
                                       static_cast<int>(fine.steps()), fine_cfg.dt, path_index);
    auto battery = rc.make_battery();

    std::vector<std::vector<double>> residuals; // level x battery
    double ic_mismatch = 0.0;
    std::vector<double> matched, control;
    for (int level = 0; level < levels; ++level) {
        SolverConfig cfg = rc.solver;
        cfg.dt = rc.solver.dt / static_cast<double>(1 << level);
        SolverContext ctx = SolverContext::create(cfg);
        WienerPath path = coarsen_path(fine_path, 1 << (levels - 1 - level));
        Trajectory traj = simulate_with_path(ctx, phi0, path);
        if (!traj.completed()) return kExitBlowup;
        StrongReport rep = strong_residual(traj, path, phi0, battery, ctx, rc.verify.eps);
        residuals.push_back(rep.residuals);
        if (level == levels - 1) {
            ic_mismatch = rep.ic_mismatch;
            matched = rep.residuals;
            WienerPath wrong = sample_path(cfg.noise, ctx.basis(), static_cast<int>(ctx.steps()),
                                           cfg.dt, path_index + 1);
            control = strong_residual(traj, wrong, phi0, battery, ctx, rc.verify.eps).residuals;
        }
    }

    bool pass = true;
    json per_v = json::array();
    for (size_t j = 0; j < battery.size(); ++j) {
        json v;
        v["mode"] = battery[j].mode;
        v["profile"] = battery[j].name;
        json rs = json::array();
        for (int level = 0; level < levels; ++level) rs.push_back(residuals[static_cast<size_t>(level)][j]);
        v["residuals"] = std::move(rs);
        json orders = json::array();
        for (int level = 0; level + 1 < levels; ++level) {
            const double order = std::log2(residuals[static_cast<size_t>(level)][j] /
                                           std::max(residuals[static_cast<size_t>(level + 1)][j], 1e-300));
            orders.push_back(order);
            if (!(order >= 0.5)) pass = false;
        }
        v["orders"] = std::move(orders);
        v["matched_residual"] = matched[j];
        v["control_residual"] = control[j];
        const bool control_ok = control[j] >= 10.0 * matched[j];
        v["control_pass"] = control_ok;
        pass = pass && control_ok;
        per_v.push_back(std::move(v));
    }

    json report = base_report(rc);
    report["path_index"] = path_index;
    report["ic_mismatch"] = ic_mismatch;
    report["battery"] = std::move(per_v);
    report["pass"] = pass;
    emit(report, outdir, "verify_strong.json");
    return pass ? kExitOk : kExitVerification;
}

int run_verify_uniqueness(const RunConfig& rc, const std::string& outdir) {
    SolverContext ctx = SolverContext::create(rc.solver);
    bool pass = true;
    json seeds = json::array();
    for (int seed = 0; seed < rc.verify.gronwall_seeds; ++seed) {
        const std::uint64_t idx = static_cast<std::uint64_t>(seed);
        SpectralField phi0 = rc.ic.realize(ctx.basis_ptr(), rc.master_seed, idx);
        Trajectory a = simulate(ctx, phi0, idx);
        Trajectory a2 = simulate(ctx, phi0, idx);
        bool bitwise = a.states.size() == a2.states.size();
        if (bitwise)
            for (size_t i = 0; i < a.states.size(); ++i)
                if (a.states[i].coeffs != a2.states[i].coeffs) {
                    bitwise = false;
                    break;
                }

        SpectralField pert = phi0;
        if (pert.coeffs.size() > 1) pert.coeffs[1] += rc.verify.gronwall_delta;
        Trajectory b = simulate(ctx, pert, idx);
        if (!a.completed() || !b.completed()) return kExitBlowup;
        GronwallReport rep = uniqueness_gronwall(a, b, ctx, rc.verify.gronwall_slack);

        json row = to_json(rep);
        row["seed"] = seed;
        row["bitwise_identical_replay"] = bitwise;
        seeds.push_back(std::move(row));
        pass = pass && bitwise && rep.per_step_pass && rep.endpoint_pass;
    }
    json report = base_report(rc);
    report["delta"] = rc.verify.gronwall_delta;
    report["seeds"] = std::move(seeds);
    report["pass"] = pass;
    emit(report, outdir, "verify_uniqueness.json");
    return pass ? kExitOk : kExitVerification;
}

int run_estimate_moments(const RunConfig& rc, const std::string& outdir, int paths) {
    SolverConfig cfg = rc.solver;
    cfg.record_stride = rc.verify.moment_record_stride;
    MomentReport rep = estimate_moments(cfg, rc.ic, rc.verify.m_ladder, paths,
                                        rc.verify.holder_window);
    json report = base_report(rc);
    report["moments"] = to_json(rep);
    const double p_prime = 3.5;
    report["norm_parameters"] = {{"p_prime", p_prime},
                                 {"q_prime", 1.0 / (1.0 - 2.0 / 3.0 - 1.0 / p_prime)},
                                 {"eps", rc.verify.eps},
                                 {"holder_beta", 0.4}};
    report["pass"] = rep.valid && rep.non_explosion_pass;
    emit(report, outdir, "estimate_moments.json");
    if (!rep.valid) return kExitBlowup;
    return rep.non_explosion_pass ? kExitOk : kExitVerification;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral-Galerkin simulator and statistical verification harness for the "
                 "stochastic nonlocal convective Cahn-Hilliard equation"};
    app.require_subcommand(1);

    std::string config_path, out_override;
    std::uint64_t path_index = 0, first = 0;
    int count = -1, paths = -1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "run configuration (JSON)")->required();
        sub->add_option("-o,--out", out_override, "output directory override");
    };

    CLI::App* validate = app.add_subcommand("validate", "run the assumption gates");
    add_common(validate);
    CLI::App* simulate = app.add_subcommand("simulate", "single-path run with trajectory export");
    add_common(simulate);
    simulate->add_option("-p,--path-index", path_index, "path index (seed lineage)");
    CLI::App* ensemble = app.add_subcommand("ensemble", "run a shard of paths");
    add_common(ensemble);
    ensemble->add_option("--first", first, "first path index of the shard");
    ensemble->add_option("--count", count, "number of paths in the shard");
    CLI::App* venergy = app.add_subcommand("verify-energy", "energy identity under step halving");
    add_common(venergy);
    venergy->add_option("-p,--path-index", path_index, "path index (seed lineage)");
    CLI::App* vweak = app.add_subcommand("verify-weak", "characteristic-functional identity");
    add_common(vweak);
    vweak->add_option("--paths", paths, "Monte-Carlo path count");
    CLI::App* vstrong = app.add_subcommand("verify-strong", "pathwise residual against the white noise");
    add_common(vstrong);
    vstrong->add_option("-p,--path-index", path_index, "path index (seed lineage)");
    CLI::App* vuniq = app.add_subcommand("verify-uniqueness", "pathwise uniqueness and Gronwall bound");
    add_common(vuniq);
    CLI::App* moments = app.add_subcommand("estimate-moments", "moment ladder across mode counts");
    add_common(moments);
    moments->add_option("--paths", paths, "paths per mode count");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig rc = RunConfig::from_file(config_path);
        const std::string outdir = resolve_outdir(rc, out_override);
        if (validate->parsed()) return run_validate(rc, outdir);
        if (simulate->parsed()) return run_simulate(rc, outdir, path_index);
        if (ensemble->parsed())
            return run_ensemble(rc, outdir, first, count > 0 ? count : rc.verify.paths);
        if (venergy->parsed()) return run_verify_energy(rc, outdir, path_index);
        if (vweak->parsed()) return run_verify_weak(rc, outdir, paths > 0 ? paths : rc.verify.paths);
        if (vstrong->parsed()) return run_verify_strong(rc, outdir, path_index);
        if (vuniq->parsed()) return run_verify_uniqueness(rc, outdir);
        if (moments->parsed())
            return run_estimate_moments(rc, outdir, paths > 0 ? paths : rc.verify.moment_paths);
    } catch (const AssumptionViolation& e) {
        std::cerr << "validation failure: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
