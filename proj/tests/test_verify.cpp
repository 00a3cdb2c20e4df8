#include <doctest.h>

#include <cmath>
#include <complex>

#include "nlch/verify.hpp"
#include "oracle_helpers.hpp"

using namespace nlch;

namespace {

SolverConfig desk_config() {
    SolverConfig c;
    c.domain = Domain{1, {1.0, 1.0, 1.0}};
    c.modes = 8;
    c.kernel = KernelSpec::constant(2.5);
    c.velocity = VelocitySpec::zero();
    c.noise = NoiseSpec::power_law(0.01, 2.0, 4321);
    c.horizon = 0.1;
    c.dt = 1e-3;
    c.stepper = Stepper::Imex;
    return c;
}

IcSpec deterministic_ic(const std::vector<double>& coeffs) {
    IcSpec ic;
    ic.family = IcSpec::Family::Deterministic;
    ic.coeffs = coeffs;
    return ic;
}

} // namespace

TEST_CASE("energy: zero state, the -1/4 constant state, and a quadrature oracle") {
    auto ctx = SolverContext::create(desk_config());
    CHECK(energy(zero_field(ctx.basis_ptr()), ctx) == 0.0);

    SpectralField one = zero_field(ctx.basis_ptr());
    one.coeffs[0] = 1.0; // phi = 1 on the unit box
    CHECK(energy(one, ctx) == doctest::Approx(-0.25).epsilon(1e-12));

    SpectralField phi = oracle::random_field(ctx.basis_ptr(), 31, 0.4);
    const double mass = phi.coeffs[0];
    const double expect =
        oracle::refined_quadrature(Domain{1, {1.0, 1.0, 1.0}}, 8192, [&](std::span<const double> x) {
            const double p = oracle::field_at(phi, x);
            return 0.5 * 2.5 * p * p + 0.25 * p * p * p * p - 0.5 * p * p - 0.5 * 2.5 * mass * p;
        });
    CHECK(std::abs(energy(phi, ctx) - expect) < 1e-8);
}

TEST_CASE("energy ledger: equilibrium run has an identically zero ledger") {
    SolverConfig c = desk_config();
    c.noise = NoiseSpec::explicit_list(std::vector<double>(8, 0.0), 1);
    auto ctx = SolverContext::create(c);
    SpectralField phi0 = zero_field(ctx.basis_ptr());
    phi0.coeffs[0] = 0.45;
    Trajectory traj = simulate(ctx, phi0, 0);
    EnergyLedger led = energy_identity_residual(traj, ctx);
    for (size_t i = 0; i < led.residual.size(); ++i) {
        CHECK(std::abs(led.drift_work[i]) < 1e-14);
        CHECK(std::abs(led.martingale[i]) < 1e-14);
        CHECK(std::abs(led.ito_correction[i]) < 1e-14);
        CHECK(std::abs(led.residual[i]) < 1e-12);
    }
}

TEST_CASE("energy ledger: closure is a bookkeeping identity") {
    auto ctx = SolverContext::create(desk_config());
    Trajectory traj = simulate(ctx, oracle::random_field(ctx.basis_ptr(), 2, 0.3), 7);
    REQUIRE(traj.completed());
    EnergyLedger led = energy_identity_residual(traj, ctx);
    double cum = 0.0;
    for (size_t i = 0; i < led.residual.size(); ++i) {
        CHECK(led.residual[i] == led.z[i] - led.z[0] - cum);
        if (i + 1 < led.residual.size())
            cum += led.drift_work[i] + led.martingale[i] + led.ito_correction[i];
    }

    SolverConfig sparse = desk_config();
    sparse.record_stride = 4;
    auto ctx2 = SolverContext::create(sparse);
    Trajectory t2 = simulate(ctx2, zero_field(ctx2.basis_ptr()), 0);
    CHECK_THROWS_AS(energy_identity_residual(t2, ctx2), ConfigError);
}

TEST_CASE("energy ledger: deterministic residual shrinks under step halving") {
    SolverConfig base = desk_config();
    base.noise = NoiseSpec::explicit_list(std::vector<double>(8, 0.0), 1);
    base.horizon = 0.05;
    SpectralField phi0;
    double r_coarse = 0.0, r_fine = 0.0;
    {
        SolverConfig c = base;
        c.dt = 2e-4;
        auto ctx = SolverContext::create(c);
        phi0 = oracle::random_field(ctx.basis_ptr(), 17, 0.3);
        EnergyLedger led = energy_identity_residual(simulate(ctx, phi0, 0), ctx);
        r_coarse = std::abs(led.residual_at_horizon());
    }
    {
        SolverConfig c = base;
        c.dt = 1e-4;
        auto ctx = SolverContext::create(c);
        EnergyLedger led = energy_identity_residual(simulate(ctx, phi0, 0), ctx);
        r_fine = std::abs(led.residual_at_horizon());
    }
    CHECK(r_coarse / r_fine >= 1.8);
}

TEST_CASE("energy ledger: linearized OU residual is centered (CLT band over paths)") {
    SolverConfig c = desk_config();
    c.linearized = true;
    c.noise = NoiseSpec::power_law(0.05, 2.0, 606);
    c.horizon = 0.1;
    c.dt = 1e-3;
    auto ctx = SolverContext::create(c);
    const int n_paths = 1000;
    double sum = 0.0, sum2 = 0.0;
    for (int p = 0; p < n_paths; ++p) {
        Trajectory traj = simulate(ctx, zero_field(ctx.basis_ptr()), static_cast<std::uint64_t>(p));
        REQUIRE(traj.completed());
        EnergyLedger led = energy_identity_residual(traj, ctx);
        const double r = led.residual_at_horizon();
        sum += r;
        sum2 += r * r;
    }
    const double mean = sum / n_paths;
    const double sd = std::sqrt((sum2 / n_paths - mean * mean) / n_paths);
    // the discretization bias is O(dt); allow it alongside the 3-sigma band
    CHECK(std::abs(mean) < 3.0 * sd + 5.0 * c.dt * std::abs(sum2 / n_paths));
    CHECK(std::abs(mean) < 1e-3);
}

TEST_CASE("gradient_mu_norm: constants, energy balance, nonlinearity witness") {
    SolverConfig c = desk_config();
    c.noise = NoiseSpec::explicit_list(std::vector<double>(8, 0.0), 1);
    c.dt = 2e-5;
    c.horizon = 0.02;
    auto ctx = SolverContext::create(c);

    SpectralField cst = zero_field(ctx.basis_ptr());
    cst.coeffs[0] = 0.2;
    Trajectory flat = simulate(ctx, cst, 0);
    CHECK(gradient_mu_norm(flat, ctx) < 1e-20);

    // damp the stiff modes so the initial transient is resolved by dt
    SpectralField phi0 = oracle::random_field(ctx.basis_ptr(), 23, 0.3);
    for (int k = 0; k < 8; ++k)
        phi0.coeffs[static_cast<size_t>(k)] /= std::sqrt(ctx.basis().eigenvalue(k));
    Trajectory traj = simulate(ctx, phi0, 0);
    REQUIRE(traj.completed());
    const double gm = gradient_mu_norm(traj, ctx);
    const double drop = energy(traj.states.front(), ctx) - energy(traj.states.back(), ctx);
    CHECK(gm > 0.0);
    CHECK(std::abs(gm - drop) < 0.05 * std::max(drop, 1e-12));

    // doubling the state does not scale the functional linearly
    Trajectory doubled = traj;
    for (auto& s : doubled.states)
        for (auto& cc : s.coeffs) cc *= 2.0;
    const double gm2 = gradient_mu_norm(doubled, ctx);
    CHECK(std::abs(gm2 / gm - 2.0) > 0.5);
}

TEST_CASE("moments: degenerate ensemble collapses to the single deterministic run") {
    SolverConfig c = desk_config();
    c.noise = NoiseSpec::explicit_list(std::vector<double>(8, 0.0), 9);
    c.record_stride = 2;
    IcSpec ic = deterministic_ic({0.3, 0.15, -0.1});
    const int mlist[1] = {8};
    MomentReport rep = estimate_moments(c, ic, mlist, 4);
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.valid);
    for (const auto& f : rep.rows[0].functionals) CHECK(f.half_width < 1e-12);

    auto ctx = SolverContext::create(c);
    Trajectory traj = simulate(ctx, ic.realize(ctx.basis_ptr(), c.noise.master_seed, 0), 0);
    double sup = 0.0;
    for (const auto& s : traj.states) {
        const double n = sobolev_norm(s, 0.0);
        sup = std::max(sup, n * n);
    }
    CHECK(rep.rows[0].functionals[1].mean == doctest::Approx(sup).epsilon(1e-12));
}

TEST_CASE("moments: scaling the covariance up raises the sup-norm estimate") {
    SolverConfig lo = desk_config();
    lo.record_stride = 2;
    lo.noise = NoiseSpec::power_law(0.02, 2.0, 777);
    SolverConfig hi = lo;
    hi.noise = NoiseSpec::power_law(0.08, 2.0, 777); // paired seeds
    IcSpec ic = deterministic_ic({0.1});
    const int mlist[1] = {8};
    MomentReport rlo = estimate_moments(lo, ic, mlist, 24);
    MomentReport rhi = estimate_moments(hi, ic, mlist, 24);
    CHECK(rhi.rows[0].functionals[1].mean > rlo.rows[0].functionals[1].mean);
}

TEST_CASE("moments: short ladder smoke with non-explosion verdict") {
    SolverConfig c = desk_config();
    c.record_stride = 5;
    c.noise = NoiseSpec::power_law(0.01, 2.0, 31);
    IcSpec ic = deterministic_ic({0.2, 0.1});
    const int mlist[2] = {4, 8};
    MomentReport rep = estimate_moments(c, ic, mlist, 16);
    CHECK(rep.valid);
    CHECK(rep.non_explosion_pass);
    for (double r : rep.max_over_median) CHECK(r <= 2.0);
}

TEST_CASE("moments: blow-up paths invalidate the report") {
    SolverConfig c = desk_config();
    c.dt = 0.05;
    c.horizon = 1.0;
    c.stepper = Stepper::EulerMaruyama;
    c.blowup_threshold = 20.0;
    c.noise = NoiseSpec::explicit_list(std::vector<double>(8, 0.0), 1);
    IcSpec ic = deterministic_ic({0.0, 5.0});
    const int mlist[1] = {8};
    MomentReport rep = estimate_moments(c, ic, mlist, 3);
    CHECK_FALSE(rep.valid);
    CHECK(rep.rows[0].blowups == 3);
}

TEST_CASE("c functional: zero trajectory and constant-state hand evaluation") {
    SolverConfig c = desk_config();
    c.noise = NoiseSpec::explicit_list(std::vector<double>(8, 0.0), 1);
    auto ctx = SolverContext::create(c);

    Trajectory zt = simulate(ctx, zero_field(ctx.basis_ptr()), 0);
    for (const auto& v : make_battery(std::vector<int>{0, 1, 2}, std::vector<std::string>{"linear", "quadratic"}, c.horizon))
        CHECK(std::abs(c_functional(zt, v, zero_field(ctx.basis_ptr()), ctx)) < 1e-14);

    // phi == s: -(phi0, v(0)) cancels the time-derivative telescoping; the
    // chemical-potential term vanishes (constant mu against Delta v).
    const double s = 0.6;
    SpectralField cst = zero_field(ctx.basis_ptr());
    cst.coeffs[0] = s;
    Trajectory traj = simulate(ctx, cst, 0);
    for (int mode : {0, 1, 3}) {
        TestFunction v = quadratic_ramp(mode, c.horizon);
        CHECK(std::abs(c_functional(traj, v, cst, ctx)) < 1e-12);
    }
}

TEST_CASE("c functional: perturbation response is first order with a stable constant") {
    auto ctx = SolverContext::create(desk_config());
    Trajectory traj = simulate(ctx, oracle::random_field(ctx.basis_ptr(), 3, 0.2), 1);
    REQUIRE(traj.completed());
    TestFunction v = linear_ramp(1, 0.1);
    const double c0 = c_functional(traj, v, traj.states.front(), ctx);
    auto perturbed = [&](double delta) {
        Trajectory t = traj;
        for (auto& s : t.states) s.coeffs[1] += delta;
        return c_functional(t, v, t.states.front(), ctx);
    };
    const double d1 = (perturbed(1e-3) - c0) / 1e-3;
    const double d2 = (perturbed(5e-4) - c0) / 5e-4;
    CHECK(d1 == doctest::Approx(d2).epsilon(1e-2));
    CHECK(std::abs(d1) > 1e-6); // the response is genuinely first order, not flat
}

TEST_CASE("ic characteristic functional: deterministic phase and gaussian closed form") {
    auto ctx = SolverContext::create(desk_config());
    const auto& basis = ctx.basis();

    IcSpec det = deterministic_ic({0.2, -0.4, 0.3});
    SpectralField xi = zero_field(ctx.basis_ptr());
    xi.coeffs[1] = 1.7;
    std::complex<double> got = ic_char_functional(det, xi, basis);
    CHECK(std::abs(got - std::exp(std::complex<double>(0.0, -0.4 * 1.7))) < 1e-14);

    IcSpec gauss;
    gauss.family = IcSpec::Family::Gaussian;
    gauss.mean = {0.1};
    gauss.var_power_law = true;
    gauss.var_sigma2 = 0.3;
    gauss.var_p = 1.0;
    std::complex<double> closed = ic_char_functional(gauss, xi, basis);
    const int n_samples = 40000;
    std::complex<double> mc{0.0, 0.0};
    for (int i = 0; i < n_samples; ++i) {
        SpectralField f = gauss.realize(ctx.basis_ptr(), 555, static_cast<std::uint64_t>(i));
        const double theta = f.coeffs[1] * 1.7;
        mc += std::complex<double>(std::cos(theta), std::sin(theta));
    }
    mc /= static_cast<double>(n_samples);
    CHECK(std::abs(mc - closed) < 3.0 / std::sqrt(static_cast<double>(n_samples)));
}

TEST_CASE("weak check: zero noise collapses to a single deterministic phase") {
    SolverConfig c = desk_config();
    c.noise = NoiseSpec::explicit_list(std::vector<double>(8, 0.0), 3);
    IcSpec ic = deterministic_ic({0.25, 0.1});
    std::vector<SpectralField> xis;
    {
        auto basis = BasisSpec::build(c.domain, c.modes, c.basis_options);
        SpectralField xi = zero_field(basis);
        xi.coeffs[1] = 1.0;
        xis.push_back(xi);
    }
    auto battery = make_battery(std::vector<int>{1, 2}, std::vector<std::string>{"linear"}, c.horizon);
    WeakReport rep = weak_solution_check(c, ic, xis, battery, 1);
    for (const auto& p : rep.pairs) {
        CHECK(std::abs(std::abs(p.lhs) - 1.0) < 1e-13);
        CHECK(std::abs(std::abs(p.rhs) - 1.0) < 1e-13);
        CHECK(p.discrepancy < 0.02); // O(dt) phase defect only
    }
}

TEST_CASE("weak check: linearized dynamics match the closed form within band") {
    SolverConfig c = desk_config();
    c.linearized = true;
    c.dt = 1e-3;
    c.horizon = 0.1;
    c.noise = NoiseSpec::power_law(0.05, 2.0, 246);
    IcSpec ic = deterministic_ic({0.2, 0.1});
    std::vector<SpectralField> xis;
    {
        auto basis = BasisSpec::build(c.domain, c.modes, c.basis_options);
        SpectralField xi = zero_field(basis);
        xi.coeffs[1] = 1.0;
        xis.push_back(xi);
    }
    auto battery = make_battery(std::vector<int>{1, 2}, std::vector<std::string>{"linear", "quadratic"},
                                c.horizon);
    const int paths = 1500;
    WeakReport rep = weak_solution_check(c, ic, xis, battery, paths);
    for (const auto& p : rep.pairs) CHECK(p.discrepancy <= p.stat_band + 1e-3);
}

TEST_CASE("weak check: gaussian initial law factorizes against the closed form") {
    SolverConfig c = desk_config();
    c.linearized = true;
    c.dt = 1e-3;
    c.horizon = 0.1;
    c.noise = NoiseSpec::power_law(0.05, 2.0, 987);
    IcSpec ic;
    ic.family = IcSpec::Family::Gaussian;
    ic.mean = {0.2, 0.1};
    ic.var_power_law = true;
    ic.var_sigma2 = 0.05;
    ic.var_p = 2.0;
    auto basis = BasisSpec::build(c.domain, c.modes, c.basis_options);
    std::vector<SpectralField> xis;
    {
        SpectralField xi = zero_field(basis);
        xi.coeffs[0] = 0.5;
        xi.coeffs[1] = 1.0;
        xi.coeffs[2] = 0.3; // multi-mode pairing
        xis.push_back(xi);
    }
    auto battery = make_battery(std::vector<int>{1, 2}, std::vector<std::string>{"linear"}, c.horizon);
    const int paths = 1500;
    WeakReport rep = weak_solution_check(c, ic, xis, battery, paths);
    for (const auto& p : rep.pairs) {
        CHECK(std::abs(p.rhs) < 1.0); // gaussian law decays the modulus
        CHECK(p.discrepancy <= p.stat_band + 1e-3);
    }
}

TEST_CASE("weak check: bias fit returns small dt allowances on the desk config") {
    SolverConfig c = desk_config();
    c.horizon = 0.05;
    c.dt = 1e-3;
    IcSpec ic = deterministic_ic({0.2, 0.1});
    std::vector<SpectralField> xis;
    {
        auto basis = BasisSpec::build(c.domain, c.modes, c.basis_options);
        SpectralField xi = zero_field(basis);
        xi.coeffs[1] = 1.0;
        xis.push_back(xi);
    }
    auto battery = make_battery(std::vector<int>{1}, std::vector<std::string>{"linear"}, c.horizon);
    auto allowances = weak_bias_fit(c, ic, xis, battery, 64);
    REQUIRE(allowances.size() == 1);
    CHECK(allowances[0] >= 0.0);
    CHECK(allowances[0] < 0.05);
}

TEST_CASE("strong residual: equilibrium, halving order, negative control, lineage") {
    SolverConfig c = desk_config();
    c.horizon = 0.2;
    c.noise = NoiseSpec::power_law(0.1, 2.0, 2048);

    // equilibrium with zero noise: residuals vanish to quadrature accuracy
    {
        SolverConfig cz = c;
        cz.noise = NoiseSpec::explicit_list(std::vector<double>(8, 0.0), 5);
        auto ctx = SolverContext::create(cz);
        SpectralField cst = zero_field(ctx.basis_ptr());
        cst.coeffs[0] = 0.3;
        Trajectory traj = simulate(ctx, cst, 0);
        auto battery = make_battery(std::vector<int>{1, 2}, std::vector<std::string>{"linear"}, cz.horizon);
        StrongReport rep = strong_residual(traj, traj.path, cst, battery, ctx);
        CHECK(rep.max_residual() < 1e-12);
        CHECK(rep.ic_mismatch == 0.0);
    }

    // step-halving decay on the same refined path
    c.dt = 2.5e-4;
    c.noise = NoiseSpec::power_law(1.0, 2.0, 2048);
    auto battery = make_battery(std::vector<int>{1, 2}, std::vector<std::string>{"linear", "quadratic"},
                                c.horizon);
    SolverConfig fine_cfg = c;
    fine_cfg.dt = c.dt / 4.0;
    auto fine_ctx = SolverContext::create(fine_cfg);
    SpectralField phi0 = oracle::random_field(fine_ctx.basis_ptr(), 12, 0.2);
    WienerPath fine_path = sample_path(c.noise, fine_ctx.basis(), static_cast<int>(fine_ctx.steps()),
                                       fine_cfg.dt, 9);
    std::vector<double> worst;
    std::vector<double> finest_matched;
    for (int level = 0; level < 3; ++level) {
        SolverConfig cc = c;
        cc.dt = c.dt / (1 << level);
        auto ctx = SolverContext::create(cc);
        WienerPath path = coarsen_path(fine_path, 4 / (1 << level));
        Trajectory traj = simulate_with_path(ctx, phi0, path);
        REQUIRE(traj.completed());
        StrongReport rep = strong_residual(traj, path, phi0, battery, ctx);
        worst.push_back(rep.max_residual());
        if (level == 2) {
            // negative control at the finest level: a mismatched path leaves a
            // noise-scale residual well above the matched-path defect
            WienerPath wrong = sample_path(cc.noise, ctx.basis(), static_cast<int>(ctx.steps()),
                                           cc.dt, 99);
            StrongReport control = strong_residual(traj, wrong, phi0, battery, ctx);
            for (size_t j = 0; j < battery.size(); ++j)
                CHECK(control.residuals[j] >= 10.0 * rep.residuals[j]);
        }
    }
    CHECK(std::log2(worst[0] / worst[1]) >= 0.5);
    CHECK(std::log2(worst[1] / worst[2]) >= 0.5);

    // lineage gate: a context with another dt rejects the trajectory
    {
        auto ctx = SolverContext::create(c);
        Trajectory traj = simulate(ctx, phi0, 2);
        SolverConfig other = c;
        other.dt = c.dt / 2.0;
        auto ctx2 = SolverContext::create(other);
        CHECK_THROWS_AS(strong_residual(traj, traj.path, phi0, battery, ctx2), ConfigError);
    }
}

TEST_CASE("strong residual: ic mismatch uses the H^{-eps} spectral weights") {
    auto ctx = SolverContext::create(desk_config());
    SpectralField phi0 = oracle::random_field(ctx.basis_ptr(), 40, 0.2);
    Trajectory traj = simulate(ctx, phi0, 0);
    SpectralField other = phi0;
    other.coeffs[2] += 0.05;
    auto battery = make_battery(std::vector<int>{1}, std::vector<std::string>{"linear"}, 0.1);
    StrongReport rep = strong_residual(traj, traj.path, other, battery, ctx, 0.1);
    const double expect = 0.05 * std::pow(ctx.basis().eigenvalue(2), -0.05);
    CHECK(rep.ic_mismatch == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("gronwall: identical runs, perturbed runs, and the formula's monotonicity") {
    SolverConfig c = desk_config();
    c.dt = 1e-4;
    c.horizon = 0.05;
    c.noise = NoiseSpec::power_law(0.01, 2.0, 11);
    auto ctx = SolverContext::create(c);
    SpectralField phi0 = oracle::random_field(ctx.basis_ptr(), 50, 0.2);

    Trajectory a = simulate(ctx, phi0, 4);
    Trajectory b = simulate(ctx, phi0, 4);
    GronwallReport same = uniqueness_gronwall(a, b, ctx);
    for (double g : same.g) CHECK(g == 0.0);
    CHECK(same.per_step_pass);
    CHECK(same.endpoint_pass);

    SpectralField pert = phi0;
    pert.coeffs[1] += 1e-3;
    Trajectory bp = simulate(ctx, pert, 4);
    GronwallReport rep = uniqueness_gronwall(a, bp, ctx);
    CHECK(rep.K == 0.0); // constant kernel, zero velocity
    CHECK(rep.per_step_pass);
    CHECK(rep.endpoint_pass);
    CHECK(rep.g.front() > 0.0);

    // mean-zero preservation: mode 0 of the difference stays exactly zero
    for (size_t i = 0; i < a.states.size(); ++i)
        CHECK(a.states[i].coeffs[0] - bp.states[i].coeffs[0] == 0.0);

    // differing mode-0 initial coefficients are rejected
    SpectralField shifted = phi0;
    shifted.coeffs[0] += 0.1;
    Trajectory bs = simulate(ctx, shifted, 4);
    CHECK_THROWS_AS(uniqueness_gronwall(a, bs, ctx), ConfigError);

    // different paths are rejected
    Trajectory other = simulate(ctx, pert, 5);
    CHECK_THROWS_AS(uniqueness_gronwall(a, other, ctx), ConfigError);

    CHECK(gronwall_constant(2.0, 1.0, 1.5) >= gronwall_constant(1.0, 1.0, 1.5));
    CHECK(gronwall_constant(1.0, 2.0, 1.5) >= gronwall_constant(1.0, 1.0, 1.5));
    CHECK(gronwall_constant(2.0, 1.0, 1.5) == doctest::Approx((2.0 * 4.0 + 1.0) / 1.5));
}

TEST_CASE("gronwall: nonzero K from a gaussian kernel still bounds the growth") {
    SolverConfig c = desk_config();
    c.kernel = KernelSpec::gaussian(3.0, 0.35); // min a > 1 on the unit box
    c.dt = 1e-4;
    c.horizon = 0.05;
    c.noise = NoiseSpec::power_law(0.01, 2.0, 13);
    auto ctx = SolverContext::create(c);
    CHECK(ctx.c0() > 0.0);
    SpectralField phi0 = oracle::random_field(ctx.basis_ptr(), 60, 0.2);
    Trajectory a = simulate(ctx, phi0, 1);
    SpectralField pert = phi0;
    pert.coeffs[1] += 1e-3;
    Trajectory b = simulate(ctx, pert, 1);
    GronwallReport rep = uniqueness_gronwall(a, b, ctx);
    CHECK(rep.K > 0.0);
    CHECK(rep.per_step_pass);
    CHECK(rep.endpoint_pass);
}
