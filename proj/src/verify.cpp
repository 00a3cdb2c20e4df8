#include "nlch/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nlch/parallel.hpp"

namespace nlch {

namespace {

// mu pipeline for one state: grid values, convolution, chemical potential grid
// and its projection; the same assembly the solver uses.
struct MuPieces {
    GridField phig;
    SpectralField mu_m;
};

MuPieces mu_pipeline(const SpectralField& phi, const SolverContext& ctx) {
    MuPieces out{evaluate(phi), {}};
    GridField conv = ctx.kernel().convolve(out.phig, ctx.backend());
    GridField mu{phi.basis, std::vector<double>(out.phig.values.size(), 0.0)};
    const auto& av = ctx.a().values;
    const bool freeze = ctx.linearized();
    for (size_t i = 0; i < mu.values.size(); ++i) {
        const double p = out.phig.values[i];
        const double cubic = freeze ? 0.0 : p * p * p;
        mu.values[i] = av[i] * p - conv.values[i] + cubic - p;
    }
    out.mu_m = project(mu);
    return out;
}

// (phi u, grad e_k) -- the convection quadrature of the weak-form functional C.
double convection_coefficient(const GridField& phig, int mode, const SolverContext& ctx) {
    if (ctx.velocity().is_zero()) return 0.0;
    const auto& row = ctx.convection_rows()[static_cast<size_t>(mode)];
    double sum = 0.0;
    for (size_t q = 0; q < row.size(); ++q) sum += row[q] * phig.values[q];
    return ctx.basis().quad_weight() * sum;
}

double trapezoid(std::span<const double> times, std::span<const double> values) {
    double sum = 0.0;
    for (size_t i = 0; i + 1 < times.size(); ++i)
        sum += 0.5 * (values[i] + values[i + 1]) * (times[i + 1] - times[i]);
    return sum;
}

void require_dense(const Trajectory& traj) {
    if (!traj.completed()) throw ConfigError("trajectory did not complete");
    if (traj.record_stride != 1)
        throw ConfigError("this check needs a densely recorded trajectory (record_stride = 1)");
}

} // namespace

double energy(const SpectralField& phi, const SolverContext& ctx) {
    GridField phig = evaluate(phi);
    GridField conv = ctx.kernel().convolve(phig, ctx.backend());
    const auto& av = ctx.a().values;
    const bool freeze = ctx.linearized();
    double bulk = 0.0, pair = 0.0;
    for (size_t i = 0; i < phig.values.size(); ++i) {
        const double p = phig.values[i];
        const double p2 = p * p;
        const double quartic = freeze ? 0.0 : 0.25 * p2 * p2;
        bulk += 0.5 * av[i] * p2 + quartic - 0.5 * p2;
        pair += conv.values[i] * p;
    }
    const double w = ctx.basis().quad_weight();
    return w * bulk - 0.5 * w * pair;
}

EnergyLedger energy_identity_residual(const Trajectory& traj, const SolverContext& ctx) {
    require_dense(traj);
    const BasisSpec& b = ctx.basis();
    const int m = b.mode_count();
    const size_t n = traj.states.size();

    // Time-independent pieces of the Ito correction: the diagonal trace field
    // G(x) = sum_k theta_k e_k(x)^2 and the kernel pairing sum_k theta_k (J*e_k, e_k).
    const auto thetas = ctx.thetas();
    std::vector<double> gsum(static_cast<size_t>(b.total_nodes()), 0.0);
    double qpair = 0.0;
    {
        SpectralField unit = zero_field(ctx.basis_ptr());
        for (int k = 0; k < m; ++k) {
            if (thetas[static_cast<size_t>(k)] == 0.0) continue;
            std::fill(unit.coeffs.begin(), unit.coeffs.end(), 0.0);
            unit.coeffs[static_cast<size_t>(k)] = 1.0;
            GridField ek = evaluate(unit);
            GridField jek = ctx.kernel().convolve(ek, ctx.backend());
            double dot = 0.0;
            for (size_t q = 0; q < ek.values.size(); ++q) {
                gsum[q] += thetas[static_cast<size_t>(k)] * ek.values[q] * ek.values[q];
                dot += jek.values[q] * ek.values[q];
            }
            qpair += thetas[static_cast<size_t>(k)] * b.quad_weight() * dot;
        }
    }
    const auto& av = ctx.a().values;
    const double w = b.quad_weight();
    const bool freeze = ctx.linearized();

    EnergyLedger led;
    led.times = traj.times;
    led.z.resize(n);
    led.drift_work.assign(n, 0.0);
    led.martingale.assign(n, 0.0);
    led.ito_correction.assign(n, 0.0);
    led.residual.assign(n, 0.0);

    for (size_t i = 0; i < n; ++i) {
        const SpectralField& state = traj.states[i];
        led.z[i] = energy(state, ctx);
        if (i + 1 == n) break; // no increment past the horizon
        const double dt = traj.times[i + 1] - traj.times[i];
        DriftPieces pieces = drift_pieces(state, ctx); // the solver's own assembly

        double work = 0.0, mart = 0.0;
        const long step = traj.record_steps[i];
        const double* dW = traj.path.increments.data() + static_cast<size_t>(step) * m;
        for (int k = 0; k < m; ++k) {
            work += pieces.mu_m.coeffs[static_cast<size_t>(k)] * pieces.b.coeffs[static_cast<size_t>(k)];
            mart += pieces.mu_m.coeffs[static_cast<size_t>(k)] * dW[k];
        }
        led.drift_work[i] = dt * work;
        led.martingale[i] = mart;

        double corr = 0.0;
        for (size_t q = 0; q < gsum.size(); ++q) {
            const double p = pieces.phig.values[q];
            const double fpp = (freeze ? 0.0 : 3.0 * p * p) + av[q] - 1.0;
            corr += fpp * gsum[q];
        }
        led.ito_correction[i] = 0.5 * dt * (w * corr - qpair);
    }

    double cum = 0.0;
    for (size_t i = 0; i < n; ++i) {
        led.residual[i] = led.z[i] - led.z[0] - cum;
        if (i + 1 < n) cum += led.drift_work[i] + led.martingale[i] + led.ito_correction[i];
    }
    return led;
}

double gradient_mu_norm(const Trajectory& traj, const SolverContext& ctx) {
    if (!traj.completed()) throw ConfigError("trajectory did not complete");
    double sum = 0.0;
    for (size_t i = 0; i + 1 < traj.states.size(); ++i) {
        const double dt = traj.times[i + 1] - traj.times[i];
        MuPieces mp = mu_pipeline(traj.states[i], ctx);
        const double g = gradient_norm(mp.mu_m);
        sum += dt * g * g;
    }
    return sum;
}

const std::array<const char*, 5>& MomentReport::names() {
    static const std::array<const char*, 5> n = {"L2_U_sq", "Linf_H_sq", "L4_L4_fourth",
                                                 "holder_2_5_Vdual", "grad_mu_L2_sq"};
    return n;
}

MomentReport estimate_moments(const SolverConfig& base, const IcSpec& ic,
                              std::span<const int> m_list, int paths,
                              int holder_pair_window) {
    if (paths < 2) throw ConfigError("moment estimation needs at least 2 paths");
    MomentReport rep;
    rep.valid = true;

    for (int m : m_list) {
        SolverConfig cfg = base;
        cfg.modes = m;
        const SolverContext ctx = SolverContext::create(cfg);

        std::vector<std::array<double, 5>> values(static_cast<size_t>(paths));
        std::vector<char> blew(static_cast<size_t>(paths), 0);

        const int block_size = 16;
        const int blocks = (paths + block_size - 1) / block_size;
        parallel_for_blocks(blocks, [&](int blk) {
            for (int p = blk * block_size; p < std::min(paths, (blk + 1) * block_size); ++p) {
                SpectralField phi0 = ic.realize(ctx.basis_ptr(), cfg.noise.master_seed,
                                                static_cast<std::uint64_t>(p));
                Trajectory traj = simulate(ctx, phi0, static_cast<std::uint64_t>(p));
                if (!traj.completed()) {
                    blew[static_cast<size_t>(p)] = 1;
                    continue;
                }
                std::array<double, 5>& f = values[static_cast<size_t>(p)];
                std::vector<double> u2(traj.states.size()), l44(traj.states.size());
                double linf = 0.0;
                for (size_t i = 0; i < traj.states.size(); ++i) {
                    const double nu = sobolev_norm(traj.states[i], 1.0);
                    u2[i] = nu * nu;
                    const double nh = sobolev_norm(traj.states[i], 0.0);
                    linf = std::max(linf, nh * nh);
                    const double l4 = l4_norm(traj.states[i]);
                    l44[i] = l4 * l4 * l4 * l4;
                }
                f[0] = trapezoid(traj.times, u2);
                f[1] = linf;
                f[2] = trapezoid(traj.times, l44);
                f[3] = holder_seminorm(traj.times, traj.states, 0.4, -2.0, holder_pair_window);
                f[4] = gradient_mu_norm(traj, ctx);
            }
        });

        MomentRow row;
        row.m = m;
        row.paths = paths;
        for (int p = 0; p < paths; ++p)
            if (blew[static_cast<size_t>(p)]) ++row.blowups;
        if (row.blowups > 0) rep.valid = false;

        const int good = paths - row.blowups;
        for (int fi = 0; fi < 5; ++fi) {
            double mean = 0.0;
            for (int p = 0; p < paths; ++p)
                if (!blew[static_cast<size_t>(p)]) mean += values[static_cast<size_t>(p)][static_cast<size_t>(fi)];
            mean /= std::max(good, 1);
            double var = 0.0;
            for (int p = 0; p < paths; ++p)
                if (!blew[static_cast<size_t>(p)]) {
                    const double d = values[static_cast<size_t>(p)][static_cast<size_t>(fi)] - mean;
                    var += d * d;
                }
            var /= std::max(good - 1, 1);
            row.functionals[static_cast<size_t>(fi)] = {mean, 3.0 * std::sqrt(var / std::max(good, 1))};
        }
        rep.rows.push_back(std::move(row));
    }

    // Non-explosion verdict: max/median <= 2 per functional across the ladder.
    rep.non_explosion_pass = true;
    for (int fi = 0; fi < 5; ++fi) {
        std::vector<double> means;
        for (const auto& row : rep.rows) means.push_back(row.functionals[static_cast<size_t>(fi)].mean);
        std::vector<double> sorted = means;
        std::sort(sorted.begin(), sorted.end());
        const size_t n = sorted.size();
        const double median = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
        const double mx = sorted.back();
        const double ratio = median > 0.0 ? mx / median : (mx > 0.0 ? INFINITY : 1.0);
        rep.max_over_median[static_cast<size_t>(fi)] = ratio;
        if (!(ratio <= 2.0)) rep.non_explosion_pass = false;
    }
    return rep;
}

std::vector<double> c_functional_battery(const Trajectory& traj,
                                         std::span<const TestFunction> battery,
                                         const SpectralField& phi0, const SolverContext& ctx) {
    if (!traj.completed()) throw ConfigError("trajectory did not complete");
    const BasisSpec& b = ctx.basis();
    const auto mus = b.eigenvalues();
    for (const auto& v : battery) {
        v.validate();
        if (v.mode >= b.mode_count()) throw ConfigError("test function mode exceeds the basis");
    }

    const size_t n = traj.states.size();
    const size_t nv = battery.size();
    // integrand(t) per battery entry: -g b_conv - g (1-mu_k) mu^_k - g' c_k
    std::vector<std::vector<double>> integ(nv, std::vector<double>(n, 0.0));
    for (size_t i = 0; i < n; ++i) {
        MuPieces mp = mu_pipeline(traj.states[i], ctx);
        const double t = traj.times[i];
        for (size_t j = 0; j < nv; ++j) {
            const TestFunction& v = battery[j];
            const int k = v.mode;
            const double g = v.g(t);
            const double conv = convection_coefficient(mp.phig, k, ctx);
            integ[j][i] = -g * conv -
                          g * (1.0 - mus[static_cast<size_t>(k)]) * mp.mu_m.coeffs[static_cast<size_t>(k)] -
                          v.dg(t) * traj.states[i].coeffs[static_cast<size_t>(k)];
        }
    }

    std::vector<double> out(nv, 0.0);
    for (size_t j = 0; j < nv; ++j) {
        const TestFunction& v = battery[j];
        const double ic_coeff =
            v.mode < static_cast<int>(phi0.coeffs.size()) ? phi0.coeffs[static_cast<size_t>(v.mode)] : 0.0;
        out[j] = -v.g(0.0) * ic_coeff + trapezoid(traj.times, integ[j]);
    }
    return out;
}

double c_functional(const Trajectory& traj, const TestFunction& v, const SpectralField& phi0,
                    const SolverContext& ctx) {
    return c_functional_battery(traj, {&v, 1}, phi0, ctx)[0];
}

std::complex<double> ic_char_functional(const IcSpec& ic, const SpectralField& xi,
                                        const BasisSpec& basis) {
    const int m = basis.mode_count();
    double phase = 0.0, decay = 0.0;
    for (int k = 0; k < m && k < static_cast<int>(xi.coeffs.size()); ++k) {
        const double xik = xi.coeffs[static_cast<size_t>(k)];
        if (xik == 0.0) continue;
        if (ic.deterministic()) {
            const double ck = k < static_cast<int>(ic.coeffs.size()) ? ic.coeffs[static_cast<size_t>(k)] : 0.0;
            phase += ck * xik;
        } else {
            double mk = 0.0;
            if (ic.mean_is_uniform)
                mk = k == 0 ? ic.mean_value * std::sqrt(basis.domain().volume()) : 0.0;
            else if (static_cast<size_t>(k) < ic.mean.size()) mk = ic.mean[static_cast<size_t>(k)];
            const double vk = ic.var_power_law
                                  ? ic.var_sigma2 * std::pow(basis.eigenvalue(k), -ic.var_p)
                                  : (static_cast<size_t>(k) < ic.var.size() ? ic.var[static_cast<size_t>(k)] : 0.0);
            phase += mk * xik;
            decay += 0.5 * vk * xik * xik;
        }
    }
    return std::exp(-decay) * std::complex<double>(std::cos(phase), std::sin(phase));
}

double WeakReport::max_discrepancy() const {
    double mx = 0.0;
    for (const auto& p : pairs) mx = std::max(mx, p.discrepancy);
    return mx;
}

namespace {

void check_battery_domain(const SolverContext& ctx, std::span<const SpectralField> xis,
                          std::span<const TestFunction> battery) {
    for (const auto& xi : xis)
        if (static_cast<int>(xi.coeffs.size()) > ctx.basis().mode_count())
            throw ConfigError("xi has more modes than the basis");
    for (const auto& v : battery)
        if (v.mode >= ctx.basis().mode_count())
            throw ConfigError("test function mode exceeds the basis");
    const double horizon_gap =
        std::abs(static_cast<double>(ctx.steps()) * ctx.dt() - ctx.config().horizon);
    if (horizon_gap > 1e-9 * ctx.config().horizon)
        throw ConfigError("horizon must be an integer multiple of dt for the identity checks");
}

// Monte-Carlo sum of exp(i (xi-pairing + C)) per (xi, v) pair, block-parallel
// with deterministic block-order reduction.
std::vector<std::complex<double>> weak_lhs_sums(const SolverContext& ctx, const IcSpec& ic,
                                                std::span<const SpectralField> xis,
                                                std::span<const TestFunction> battery, int paths) {
    const size_t np = xis.size() * battery.size();
    const int block_size = 64;
    const int blocks = (paths + block_size - 1) / block_size;
    std::vector<std::vector<std::complex<double>>> partial(
        static_cast<size_t>(blocks), std::vector<std::complex<double>>(np, {0.0, 0.0}));

    parallel_for_blocks(blocks, [&](int blk) {
        auto& acc = partial[static_cast<size_t>(blk)];
        for (int p = blk * block_size; p < std::min(paths, (blk + 1) * block_size); ++p) {
            SpectralField phi0 = ic.realize(ctx.basis_ptr(), ctx.config().noise.master_seed,
                                            static_cast<std::uint64_t>(p));
            Trajectory traj = simulate(ctx, phi0, static_cast<std::uint64_t>(p));
            if (!traj.completed())
                throw Error("a path blew up during the weak-solution check");
            std::vector<double> cs = c_functional_battery(traj, battery, traj.states.front(), ctx);
            for (size_t xi = 0; xi < xis.size(); ++xi) {
                double pairing = 0.0;
                const auto& x = xis[xi].coeffs;
                const auto& c0 = traj.states.front().coeffs;
                for (size_t k = 0; k < x.size() && k < c0.size(); ++k) pairing += x[k] * c0[k];
                for (size_t j = 0; j < battery.size(); ++j) {
                    const double theta = pairing + cs[j];
                    acc[xi * battery.size() + j] += std::complex<double>(std::cos(theta), std::sin(theta));
                }
            }
        }
    });

    std::vector<std::complex<double>> sums(np, {0.0, 0.0});
    for (const auto& acc : partial)
        for (size_t i = 0; i < np; ++i) sums[i] += acc[i];
    return sums;
}

} // namespace

WeakReport weak_solution_check(const SolverConfig& config, const IcSpec& ic,
                               std::span<const SpectralField> xis,
                               std::span<const TestFunction> battery, int paths) {
    if (paths < 1) throw ConfigError("weak check needs at least one path");
    const SolverContext ctx = SolverContext::create(config);
    check_battery_domain(ctx, xis, battery);

    auto sums = weak_lhs_sums(ctx, ic, xis, battery, paths);

    WeakReport rep;
    rep.paths = paths;
    rep.dt = config.dt;
    rep.config_hash = ctx.config_hash();
    const double band = 3.0 / std::sqrt(static_cast<double>(paths));
    for (size_t xi = 0; xi < xis.size(); ++xi)
        for (size_t j = 0; j < battery.size(); ++j) {
            WeakPair pair;
            pair.xi_index = static_cast<int>(xi);
            pair.v_index = static_cast<int>(j);
            pair.lhs = sums[xi * battery.size() + j] / static_cast<double>(paths);
            pair.rhs = ic_char_functional(ic, xis[xi], ctx.basis()) *
                       wiener_char_functional(battery[j], config.noise, ctx.basis(), config.horizon);
            pair.discrepancy = std::abs(pair.lhs - pair.rhs);
            pair.stat_band = band;
            rep.pairs.push_back(pair);
        }
    return rep;
}

std::vector<double> weak_bias_fit(const SolverConfig& config, const IcSpec& ic,
                                  std::span<const SpectralField> xis,
                                  std::span<const TestFunction> battery, int paths) {
    SolverConfig fine_cfg = config;
    fine_cfg.dt = config.dt / 2.0;
    const SolverContext coarse = SolverContext::create(config);
    const SolverContext fine = SolverContext::create(fine_cfg);
    check_battery_domain(coarse, xis, battery);

    const size_t np = xis.size() * battery.size();
    const int block_size = 64;
    const int blocks = (paths + block_size - 1) / block_size;
    std::vector<std::vector<std::complex<double>>> partial(
        static_cast<size_t>(blocks), std::vector<std::complex<double>>(np, {0.0, 0.0}));

    parallel_for_blocks(blocks, [&](int blk) {
        auto& acc = partial[static_cast<size_t>(blk)];
        for (int p = blk * block_size; p < std::min(paths, (blk + 1) * block_size); ++p) {
            SpectralField phi0 = ic.realize(fine.basis_ptr(), config.noise.master_seed,
                                            static_cast<std::uint64_t>(p));
            WienerPath fpath = sample_path(config.noise, fine.basis(), static_cast<int>(fine.steps()),
                                           fine.dt(), static_cast<std::uint64_t>(p));
            Trajectory tf = simulate_with_path(fine, phi0, fpath);
            Trajectory tc = simulate_with_path(coarse, phi0, coarsen_path(fpath, 2));
            if (!tf.completed() || !tc.completed())
                throw Error("a path blew up during the weak bias fit");
            std::vector<double> cf = c_functional_battery(tf, battery, tf.states.front(), fine);
            std::vector<double> cc = c_functional_battery(tc, battery, tc.states.front(), coarse);
            for (size_t xi = 0; xi < xis.size(); ++xi) {
                double pairing = 0.0;
                const auto& x = xis[xi].coeffs;
                const auto& c0 = tf.states.front().coeffs;
                for (size_t k = 0; k < x.size() && k < c0.size(); ++k) pairing += x[k] * c0[k];
                for (size_t j = 0; j < battery.size(); ++j) {
                    const double a = pairing + cc[j];
                    const double b = pairing + cf[j];
                    acc[xi * battery.size() + j] +=
                        std::complex<double>(std::cos(a) - std::cos(b), std::sin(a) - std::sin(b));
                }
            }
        }
    });

    std::vector<double> out(np, 0.0);
    for (size_t i = 0; i < np; ++i) {
        std::complex<double> sum{0.0, 0.0};
        for (const auto& acc : partial) sum += acc[i];
        out[i] = 2.0 * std::abs(sum) / static_cast<double>(paths);
    }
    return out;
}

double StrongReport::max_residual() const {
    double mx = 0.0;
    for (double r : residuals) mx = std::max(mx, r);
    return mx;
}

StrongReport strong_residual(const Trajectory& traj, const WienerPath& path,
                             const SpectralField& phi0, std::span<const TestFunction> battery,
                             const SolverContext& ctx, double eps) {
    if (traj.config_hash != ctx.config_hash())
        throw ConfigError("trajectory was produced under a different configuration");
    if (path.steps != traj.total_steps || std::abs(path.dt - traj.dt) > 1e-12 * traj.dt)
        throw ConfigError("path step grid does not match the trajectory");
    if (!(eps > 0.0 && eps < 0.25)) throw ConfigError("eps must lie in (0, 1/4)");

    StrongReport rep;
    std::vector<double> cs = c_functional_battery(traj, battery, phi0, ctx);
    rep.residuals.resize(cs.size());
    for (size_t j = 0; j < battery.size(); ++j)
        rep.residuals[j] = std::abs(cs[j] - white_noise_pairing(path, battery[j]));

    SpectralField diff = traj.states.front();
    for (size_t k = 0; k < diff.coeffs.size(); ++k)
        diff.coeffs[k] -= k < phi0.coeffs.size() ? phi0.coeffs[k] : 0.0;
    rep.ic_mismatch = sobolev_norm(diff, -eps);
    return rep;
}

double gronwall_constant(double l1_grad_kernel, double u_sup, double c0) {
    if (!(c0 > 0.0)) throw ConfigError("gronwall constant needs c0 > 0");
    return (2.0 * l1_grad_kernel * l1_grad_kernel + u_sup * u_sup) / c0;
}

GronwallReport uniqueness_gronwall(const Trajectory& a, const Trajectory& b,
                                   const SolverContext& ctx, double slack) {
    if (!a.completed() || !b.completed()) throw ConfigError("both trajectories must complete");
    if (a.record_stride != 1 || b.record_stride != 1)
        throw ConfigError("the Gronwall check needs densely recorded trajectories");
    if (a.path.master_seed != b.path.master_seed || a.path.path_index != b.path.path_index ||
        a.path.steps != b.path.steps || a.path.dt != b.path.dt)
        throw ConfigError("trajectories do not share a Wiener path");
    if (a.states.size() != b.states.size()) throw ConfigError("trajectory lengths differ");
    if (a.states.front().coeffs[0] != b.states.front().coeffs[0])
        throw ConfigError("mode-0 initial coefficients must match exactly (mean-zero difference)");

    const auto mus = ctx.basis().eigenvalues();
    const int m = ctx.basis().mode_count();

    GronwallReport rep;
    rep.slack = slack;
    rep.K = gronwall_constant(ctx.kernel().l1_gradient(), ctx.velocity().sup_norm, ctx.c0());
    rep.g.resize(a.states.size());
    for (size_t i = 0; i < a.states.size(); ++i) {
        double g = 0.0;
        for (int k = 1; k < m; ++k) {
            const double r = a.states[i].coeffs[static_cast<size_t>(k)] -
                             b.states[i].coeffs[static_cast<size_t>(k)];
            g += r * r / (mus[static_cast<size_t>(k)] - 1.0);
        }
        rep.g[i] = g;
    }

    rep.tol = 1e-14 * std::max(1.0, rep.g.front());
    rep.per_step_pass = true;
    const double kslack = (1.0 + slack) * rep.K;
    for (size_t i = 0; i + 1 < rep.g.size(); ++i) {
        const double dt = a.times[i + 1] - a.times[i];
        if (rep.g[i + 1] > rep.g[i] * (1.0 + kslack * dt) + rep.tol) {
            rep.per_step_pass = false;
            rep.first_violation = static_cast<long>(i);
            break;
        }
    }
    const double T = a.times.back() - a.times.front();
    rep.endpoint_bound = rep.g.front() * std::exp(kslack * T) + rep.tol;
    rep.endpoint_pass = rep.g.back() <= rep.endpoint_bound;
    return rep;
}

} // namespace nlch
