#include "nlch/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace nlch {

namespace {

// Canonical byte-stream hash of a solver configuration; embedded in every
// trajectory and report so replays can be lineage-checked.
struct Fnv {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    void bytes(const void* p, size_t n) {
        const unsigned char* c = static_cast<const unsigned char*>(p);
        for (size_t i = 0; i < n; ++i) {
            h ^= c[i];
            h *= 0x100000001B3ULL;
        }
    }
    void f64(double v) { bytes(&v, sizeof v); }
    void i64(std::int64_t v) { bytes(&v, sizeof v); }
    void u64(std::uint64_t v) { bytes(&v, sizeof v); }
    void vec(const std::vector<double>& v) {
        i64(static_cast<std::int64_t>(v.size()));
        for (double x : v) f64(x);
    }
};

std::uint64_t hash_config(const SolverConfig& c) {
    Fnv f;
    f.i64(c.domain.dim);
    for (int i = 0; i < c.domain.dim; ++i) f.f64(c.domain.length(i));
    f.i64(c.modes);
    f.i64(c.basis_options.padding);
    f.i64(static_cast<std::int64_t>(c.kernel.family));
    f.f64(c.kernel.level);
    f.f64(c.kernel.amplitude);
    f.f64(c.kernel.width);
    f.vec(c.kernel.table_values);
    f.i64(static_cast<std::int64_t>(c.velocity.family));
    f.f64(c.velocity.amplitude);
    f.i64(static_cast<std::int64_t>(c.noise.family));
    f.vec(c.noise.thetas);
    f.f64(c.noise.sigma2);
    f.f64(c.noise.q);
    f.u64(c.noise.master_seed);
    f.f64(c.horizon);
    f.f64(c.dt);
    f.i64(static_cast<std::int64_t>(c.stepper));
    f.f64(c.stabilization.value_or(-1.0));
    f.f64(c.blowup_threshold);
    f.i64(c.record_stride);
    f.i64(c.conv_backend ? static_cast<std::int64_t>(*c.conv_backend) : -1);
    f.i64(c.linearized ? 1 : 0);
    return f.h;
}

void check_finite_state(std::span<const double> coeffs, long step) {
    for (double c : coeffs)
        if (!std::isfinite(c)) throw BlowupSignal(step, "state has non-finite coefficients");
}

} // namespace

SpectralField IcSpec::realize(const std::shared_ptr<const BasisSpec>& basis,
                              std::uint64_t master_seed, std::uint64_t path_index) const {
    const int m = basis->mode_count();
    SpectralField out = zero_field(basis);
    if (family == Family::Deterministic) {
        const size_t n = std::min(coeffs.size(), out.coeffs.size());
        std::copy_n(coeffs.begin(), n, out.coeffs.begin());
        return out;
    }
    const CounterRng rng(master_seed, path_index, CounterRng::Stream::InitialCondition);
    // A uniform mean state s has the single coefficient s * sqrt(|D|) on the
    // constant mode (e_0 = |D|^{-1/2}).
    const double uniform_c0 = mean_value * std::sqrt(basis->domain().volume());
    for (int k = 0; k < m; ++k) {
        double mu = basis->eigenvalue(k);
        double mk = 0.0;
        if (mean_is_uniform) mk = k == 0 ? uniform_c0 : 0.0;
        else if (static_cast<size_t>(k) < mean.size()) mk = mean[static_cast<size_t>(k)];
        double vk = var_power_law ? var_sigma2 * std::pow(mu, -var_p)
                                  : (static_cast<size_t>(k) < var.size() ? var[static_cast<size_t>(k)] : 0.0);
        if (vk < 0.0) throw ConfigError("initial-condition variance must be nonnegative");
        out.coeffs[static_cast<size_t>(k)] =
            mk + std::sqrt(vk) * rng.normal(0, static_cast<std::uint64_t>(k));
    }
    return out;
}

void SolverConfig::validate() const {
    domain.validate();
    if (modes < 1) throw ConfigError("modes must be >= 1");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(horizon >= dt)) throw ConfigError("horizon must be >= dt");
    if (!(blowup_threshold > 0.0)) throw ConfigError("blowup threshold must be positive");
    if (record_stride < 1) throw ConfigError("record stride must be >= 1");
    if (stabilization && *stabilization < 0.0) throw ConfigError("stabilization must be >= 0");
    if (kq_probe_depth < 1) throw ConfigError("kq probe depth must be >= 1");
}

SolverContext SolverContext::create(const SolverConfig& config) {
    config.validate();
    SolverContext ctx;
    ctx.config_ = config;
    ctx.basis_ = BasisSpec::build(config.domain, config.modes, config.basis_options);
    ctx.kernel_ = KernelTables::build(config.kernel, ctx.basis_);
    ctx.a_ = coefficient_a(ctx.kernel_);
    ctx.c0_ = validate_c0(ctx.a_);
    ctx.velocity_ = velocity_eval(config.velocity, ctx.basis_);
    ctx.kq_ = validate_kq(config.noise, *ctx.basis_, config.kq_probe_depth);
    if (ctx.kq_.gating && !ctx.kq_.pass)
        throw AssumptionViolation("noise trace condition failed: dyadic block sums do not decay "
                                  "(ratio " + std::to_string(ctx.kq_.block_ratio) + ")");
    ctx.thetas_ = config.noise.thetas_for(*ctx.basis_);

    double amax = *std::max_element(ctx.a_.values.begin(), ctx.a_.values.end());
    ctx.stabilization_ = config.stabilization.value_or(amax + 2.0);

    if (config.conv_backend) {
        ctx.backend_ = *config.conv_backend;
    } else {
        // Direct wins on small grids; the padded transform wins once the
        // quadratic cost of the direct sum takes over.
        ctx.backend_ = ctx.basis_->total_nodes() >= 2048 ? ConvBackend::FftPadded
                                                         : ConvBackend::Direct;
    }

    ctx.steps_ = std::max<long>(1, std::lround(config.horizon / config.dt));
    ctx.config_hash_ = hash_config(config);

    if (!ctx.velocity_.is_zero()) {
        const BasisSpec& b = *ctx.basis_;
        const int d = b.dim();
        ctx.convection_rows_.resize(static_cast<size_t>(b.mode_count()));
        SpectralField unit = zero_field(ctx.basis_);
        for (int i = 0; i < b.mode_count(); ++i) {
            std::fill(unit.coeffs.begin(), unit.coeffs.end(), 0.0);
            unit.coeffs[static_cast<size_t>(i)] = 1.0;
            auto grads = gradient_evaluate(unit);
            auto& row = ctx.convection_rows_[static_cast<size_t>(i)];
            row.assign(static_cast<size_t>(b.total_nodes()), 0.0);
            for (int axis = 0; axis < d; ++axis) {
                const auto& u = ctx.velocity_.components[static_cast<size_t>(axis)].values;
                const auto& g = grads[static_cast<size_t>(axis)].values;
                for (size_t q = 0; q < row.size(); ++q) row[q] += u[q] * g[q];
            }
        }
    }
    return ctx;
}

namespace {

void check_state(const SpectralField& phi, const SolverContext& ctx, long step) {
    check_finite_state(phi.coeffs, step);
    const double sup = grid_sup_norm(evaluate(phi));
    if (!(sup <= ctx.config().blowup_threshold))
        throw BlowupSignal(step, "grid sup-norm exceeded the blow-up threshold");
}

} // namespace

DriftPieces drift_pieces(const SpectralField& phi, const SolverContext& ctx) {
    const BasisSpec& b = ctx.basis();
    DriftPieces out{evaluate(phi), {}, {}};
    GridField conv = ctx.kernel().convolve(out.phig, ctx.backend());
    GridField mu{phi.basis, std::vector<double>(out.phig.values.size(), 0.0)};
    const bool freeze = ctx.linearized();
    const auto& av = ctx.a().values;
    for (size_t i = 0; i < mu.values.size(); ++i) {
        const double p = out.phig.values[i];
        const double cubic = freeze ? 0.0 : p * p * p;
        mu.values[i] = av[i] * p - conv.values[i] + cubic - p;
    }
    out.mu_m = project(mu);

    out.b = zero_field(phi.basis);
    const auto mus = b.eigenvalues();
    for (int k = 0; k < b.mode_count(); ++k)
        out.b.coeffs[static_cast<size_t>(k)] =
            (1.0 - mus[static_cast<size_t>(k)]) * out.mu_m.coeffs[static_cast<size_t>(k)];

    if (!ctx.velocity().is_zero()) {
        // u . grad phi with the gradient synthesized spectrally: exactly zero
        // for constant states. Its e_0 component is int div(u phi), identically
        // zero for an admissible u, and is assembled as such.
        auto grads = gradient_evaluate(phi);
        GridField flux{phi.basis, std::vector<double>(out.phig.values.size(), 0.0)};
        for (int axis = 0; axis < b.dim(); ++axis) {
            const auto& u = ctx.velocity().components[static_cast<size_t>(axis)].values;
            const auto& g = grads[static_cast<size_t>(axis)].values;
            for (size_t q = 0; q < flux.values.size(); ++q) flux.values[q] += u[q] * g[q];
        }
        SpectralField conv_coeffs = project(flux);
        for (int k = 1; k < b.mode_count(); ++k)
            out.b.coeffs[static_cast<size_t>(k)] -= conv_coeffs.coeffs[static_cast<size_t>(k)];
    }
    return out;
}

SpectralField drift(const SpectralField& phi, const SolverContext& ctx) {
    SpectralField b = drift_pieces(phi, ctx).b;
    check_finite_state(b.coeffs, -1);
    return b;
}

SpectralField step_em(const SpectralField& phi, std::span<const double> dW, double dt,
                      const SolverContext& ctx) {
    SpectralField b = drift(phi, ctx);
    SpectralField out = phi;
    for (size_t k = 0; k < out.coeffs.size(); ++k)
        out.coeffs[k] = phi.coeffs[k] + dt * b.coeffs[k] + dW[k];
    check_state(out, ctx, -1);
    return out;
}

SpectralField step_imex(const SpectralField& phi, std::span<const double> dW, double dt,
                        const SolverContext& ctx) {
    SpectralField b = drift(phi, ctx);
    SpectralField out = phi;
    const double S = ctx.stabilization();
    const auto mus = ctx.basis().eigenvalues();
    for (size_t k = 0; k < out.coeffs.size(); ++k) {
        const double lam = S * (mus[k] - 1.0);
        out.coeffs[k] = (phi.coeffs[k] + dt * (b.coeffs[k] + lam * phi.coeffs[k]) + dW[k]) /
                        (1.0 + dt * lam);
    }
    check_state(out, ctx, -1);
    return out;
}

Trajectory simulate(const SolverContext& ctx, const SpectralField& phi0,
                    std::uint64_t path_index) {
    WienerPath path = sample_path(ctx.config().noise, ctx.basis(), static_cast<int>(ctx.steps()),
                                  ctx.dt(), path_index);
    return simulate_with_path(ctx, phi0, path);
}

Trajectory simulate_with_path(const SolverContext& ctx, const SpectralField& phi0,
                              const WienerPath& path) {
    const BasisSpec& b = ctx.basis();
    const int m = b.mode_count();
    if (path.modes != m) throw ConfigError("path mode count does not match the context");
    if (path.steps != ctx.steps()) throw ConfigError("path step count does not match the context");
    if (std::abs(path.dt - ctx.dt()) > 1e-12 * ctx.dt())
        throw ConfigError("path dt does not match the context");

    Trajectory traj;
    traj.path = path;
    traj.dt = ctx.dt();
    traj.total_steps = ctx.steps();
    traj.record_stride = ctx.config().record_stride;
    traj.config_hash = ctx.config_hash();

    // pi_m of the initial condition: truncate or zero-pad the coefficients.
    SpectralField state = zero_field(ctx.basis_ptr());
    const size_t nc = std::min(phi0.coeffs.size(), state.coeffs.size());
    std::copy_n(phi0.coeffs.begin(), nc, state.coeffs.begin());

    const Stepper stepper = ctx.config().stepper;
    const double dt = ctx.dt();
    const double S = ctx.stabilization();
    const auto mus = b.eigenvalues();
    const int stride = traj.record_stride;

    auto record = [&](long n, const SpectralField& s) {
        traj.times.push_back(static_cast<double>(n) * dt);
        traj.states.push_back(s);
        traj.record_steps.push_back(n);
    };

    try {
        for (long n = 0; n < ctx.steps(); ++n) {
            check_finite_state(state.coeffs, n);
            DriftPieces pieces = drift_pieces(state, ctx);
            if (!(grid_sup_norm(pieces.phig) <= ctx.config().blowup_threshold))
                throw BlowupSignal(n, "grid sup-norm exceeded the blow-up threshold");
            if (n % stride == 0) record(n, state);

            const SpectralField& bfield = pieces.b;
            const double* dW = path.increments.data() + static_cast<size_t>(n) * m;
            if (stepper == Stepper::EulerMaruyama) {
                for (int k = 0; k < m; ++k)
                    state.coeffs[static_cast<size_t>(k)] +=
                        dt * bfield.coeffs[static_cast<size_t>(k)] + dW[k];
            } else {
                for (int k = 0; k < m; ++k) {
                    const double lam = S * (mus[static_cast<size_t>(k)] - 1.0);
                    const double c = state.coeffs[static_cast<size_t>(k)];
                    state.coeffs[static_cast<size_t>(k)] =
                        (c + dt * (bfield.coeffs[static_cast<size_t>(k)] + lam * c) + dW[k]) /
                        (1.0 + dt * lam);
                }
            }
        }
        check_finite_state(state.coeffs, ctx.steps());
        if (!(grid_sup_norm(evaluate(state)) <= ctx.config().blowup_threshold))
            throw BlowupSignal(ctx.steps(), "grid sup-norm exceeded the blow-up threshold");
        record(ctx.steps(), state);
        traj.status = Trajectory::Status::Completed;
    } catch (const BlowupSignal& sig) {
        traj.status = Trajectory::Status::Blowup;
        traj.blowup_step = sig.step;
    }
    return traj;
}

} // namespace nlch
