#include "nlch/noise.hpp"

#include <algorithm>
#include <cmath>

namespace nlch {

NoiseSpec NoiseSpec::power_law(double sigma2, double q, std::uint64_t master_seed) {
    if (sigma2 < 0.0) throw ConfigError("noise sigma2 must be nonnegative");
    NoiseSpec s;
    s.family = NoiseFamily::PowerLaw;
    s.sigma2 = sigma2;
    s.q = q;
    s.master_seed = master_seed;
    return s;
}

NoiseSpec NoiseSpec::explicit_list(std::vector<double> thetas, std::uint64_t master_seed) {
    for (double t : thetas)
        if (!(t >= 0.0)) throw ConfigError("explicit noise eigenvalues must be nonnegative");
    NoiseSpec s;
    s.family = NoiseFamily::Explicit;
    s.thetas = std::move(thetas);
    s.master_seed = master_seed;
    return s;
}

double NoiseSpec::theta(int index, double eigenvalue) const {
    if (family == NoiseFamily::PowerLaw) return sigma2 * std::pow(eigenvalue, -q);
    if (index < static_cast<int>(thetas.size())) return thetas[static_cast<size_t>(index)];
    return 0.0; // explicit lists are zero beyond their length
}

std::vector<double> NoiseSpec::thetas_for(const BasisSpec& basis) const {
    std::vector<double> out(static_cast<size_t>(basis.mode_count()));
    for (int i = 0; i < basis.mode_count(); ++i)
        out[static_cast<size_t>(i)] = theta(i, basis.eigenvalue(i));
    return out;
}

KqReport validate_kq(const NoiseSpec& spec, const BasisSpec& basis, int probe_depth) {
    if (probe_depth < 1) throw ConfigError("probe depth must be >= 1");
    if (spec.family == NoiseFamily::Explicit &&
        static_cast<int>(spec.thetas.size()) > probe_depth)
        probe_depth = static_cast<int>(spec.thetas.size());

    const Domain& dom = basis.domain();
    std::vector<double> mus = enumerate_eigenvalues(dom, probe_depth);
    const double expo = (dom.dim - 1) / 2.0;

    KqReport rep;
    rep.depth = probe_depth;
    rep.gating = spec.family == NoiseFamily::PowerLaw;

    // 1-based dyadic blocks [2^j, 2^{j+1}).
    std::vector<double> blocks;
    double block = 0.0;
    int next_boundary = 2;
    for (int i = 0; i < probe_depth; ++i) {
        const double mu = mus[static_cast<size_t>(i)];
        const double term = std::pow(mu - 1.0, expo) * spec.theta(i, mu);
        rep.partial_sum += term;
        block += term;
        if (i + 2 == next_boundary) { // index i is 1-based position i+1
            blocks.push_back(block);
            block = 0.0;
            next_boundary *= 2;
        }
    }

    if (rep.partial_sum == 0.0) {
        rep.decaying = true;
        rep.block_ratio = 0.0;
    } else if (blocks.size() >= 2) {
        const double last = blocks[blocks.size() - 1];
        const double prev = blocks[blocks.size() - 2];
        rep.block_ratio = prev > 0.0 ? last / prev : (last > 0.0 ? 1.0 : 0.0);
        rep.decaying = rep.block_ratio < 0.9;
    } else {
        // Too shallow to see a tail; treat a finite probe as decaying.
        rep.decaying = true;
        rep.block_ratio = 0.0;
    }

    rep.pass = rep.gating ? rep.decaying : true;
    if (rep.gating && !rep.pass) return rep; // caller raises the gate
    return rep;
}

WienerPath sample_path(const NoiseSpec& spec, const BasisSpec& basis, int steps, double dt,
                       std::uint64_t path_index) {
    if (steps < 1) throw ConfigError("path must have at least one step");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");

    WienerPath p;
    p.steps = steps;
    p.modes = basis.mode_count();
    p.dt = dt;
    p.master_seed = spec.master_seed;
    p.path_index = path_index;
    p.increments.assign(static_cast<size_t>(steps) * p.modes, 0.0);

    const std::vector<double> thetas = spec.thetas_for(basis);
    std::vector<double> scale(thetas.size());
    for (size_t k = 0; k < thetas.size(); ++k) scale[k] = std::sqrt(thetas[k] * dt);

    const CounterRng rng(spec.master_seed, path_index, CounterRng::Stream::Noise);
    for (int n = 0; n < steps; ++n)
        for (int k = 0; k < p.modes; ++k) {
            const double s = scale[static_cast<size_t>(k)];
            if (s == 0.0) continue;
            p.increments[static_cast<size_t>(n) * p.modes + k] =
                s * rng.normal(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k));
        }
    return p;
}

WienerPath coarsen_path(const WienerPath& path, int factor) {
    if (factor < 1 || path.steps % factor != 0)
        throw ConfigError("coarsening factor must divide the step count");
    WienerPath out;
    out.steps = path.steps / factor;
    out.modes = path.modes;
    out.dt = path.dt * factor;
    out.master_seed = path.master_seed;
    out.path_index = path.path_index;
    out.increments.assign(static_cast<size_t>(out.steps) * out.modes, 0.0);
    for (int n = 0; n < path.steps; ++n) {
        const int nc = n / factor;
        for (int k = 0; k < path.modes; ++k)
            out.increments[static_cast<size_t>(nc) * out.modes + k] += path.inc(n, k);
    }
    return out;
}

std::vector<double> path_cumsum(const WienerPath& path) {
    std::vector<double> w(static_cast<size_t>(path.steps + 1) * path.modes, 0.0);
    for (int n = 0; n < path.steps; ++n)
        for (int k = 0; k < path.modes; ++k)
            w[static_cast<size_t>(n + 1) * path.modes + k] =
                w[static_cast<size_t>(n) * path.modes + k] + path.inc(n, k);
    return w;
}

std::vector<double> path_cumsum_mode(const WienerPath& path, int mode) {
    if (mode < 0 || mode >= path.modes) throw ConfigError("mode out of range");
    std::vector<double> w(static_cast<size_t>(path.steps + 1), 0.0);
    for (int n = 0; n < path.steps; ++n) w[static_cast<size_t>(n + 1)] = w[static_cast<size_t>(n)] + path.inc(n, mode);
    return w;
}

double white_noise_pairing(const WienerPath& path, const TestFunction& v) {
    v.validate();
    if (v.mode >= path.modes) throw ConfigError("test function mode exceeds the path's modes");
    const std::vector<double> w = path_cumsum_mode(path, v.mode);
    const double dt = path.dt;
    // -(w, g') over [0, T] by the trapezoid rule; w(0) = 0 kills the left end.
    double sum = 0.5 * w[static_cast<size_t>(path.steps)] * v.dg(path.steps * dt);
    for (int n = 1; n < path.steps; ++n) sum += w[static_cast<size_t>(n)] * v.dg(n * dt);
    return -dt * sum;
}

double quad_gauss(const std::function<double(double)>& f, double a, double b, int panels) {
    // 8-point Gauss-Legendre nodes on [-1, 1].
    static const double xs[4] = {0.1834346424956498, 0.5255324099163290,
                                 0.7966664774136267, 0.9602898564975363};
    static const double ws[4] = {0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};
    const double hw = (b - a) / panels;
    double sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * hw;
        for (int i = 0; i < 4; ++i) {
            sum += ws[i] * (f(mid + 0.5 * hw * xs[i]) + f(mid - 0.5 * hw * xs[i]));
        }
    }
    return 0.5 * hw * sum;
}

std::complex<double> wiener_char_functional(const TestFunction& v, const NoiseSpec& spec,
                                            const BasisSpec& basis, double T) {
    v.validate();
    if (v.mode >= basis.mode_count()) throw ConfigError("test function mode exceeds the basis");
    const double theta = spec.theta(v.mode, basis.eigenvalue(v.mode));
    const double g2 = quad_gauss([&](double t) { return v.g(t) * v.g(t); }, 0.0, T);
    return {std::exp(-0.5 * theta * g2), 0.0};
}

} // namespace nlch
