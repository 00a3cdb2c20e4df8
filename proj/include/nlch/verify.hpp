#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "nlch/solver.hpp"
#include "nlch/test_function.hpp"

namespace nlch {

// Free-energy functional Z(phi) = int { a phi^2/2 + phi^4/4 - phi^2/2 }
// - (J*phi, phi)/2 by grid quadrature. Linearized contexts drop the quartic
// term, consistently with the dynamics they produce.
double energy(const SpectralField& phi, const SolverContext& ctx);

// Per-step Ito bookkeeping for Z along a densely recorded trajectory. Column
// n holds the increment over [t_n, t_{n+1}] (the last entry stays zero);
// residual[n] is the accumulated defect at t_n and closes by definition:
// residual = z - z[0] - cum(drift_work) - cum(martingale) - cum(correction).
struct EnergyLedger {
    std::vector<double> times;
    std::vector<double> z;
    std::vector<double> drift_work;
    std::vector<double> martingale;
    std::vector<double> ito_correction;
    std::vector<double> residual;

    double residual_at_horizon() const { return residual.empty() ? 0.0 : residual.back(); }
};

// Requires a completed trajectory recorded at every step.
EnergyLedger energy_identity_residual(const Trajectory& traj, const SolverContext& ctx);

// sum_n dt ||grad mu_m(phi(t_n))||^2 over recorded samples (left Riemann).
double gradient_mu_norm(const Trajectory& traj, const SolverContext& ctx);

struct MomentEstimate {
    double mean = 0.0;
    double half_width = 0.0; // 3 sigma / sqrt(N)
};

struct MomentRow {
    int m = 0;
    int paths = 0;
    int blowups = 0;
    std::array<MomentEstimate, 5> functionals{};
};

// The five functionals tracked per mode count, in this order:
//   0: ||phi||^2_{L2([0,T];U)}      1: ||phi||^2_{Linf([0,T];H)}
//   2: ||phi||^4_{L4([0,T];L4)}     3: Holder-2/5 seminorm into V'
//   4: ||grad mu_m||^2_{L2([0,T];H)}
struct MomentReport {
    static const std::array<const char*, 5>& names();
    std::vector<MomentRow> rows;
    std::array<double, 5> max_over_median{};
    bool non_explosion_pass = false; // max/median <= 2 for every functional
    bool valid = false;              // false if any path blew up
};

MomentReport estimate_moments(const SolverConfig& base, const IcSpec& ic,
                              std::span<const int> m_list, int paths,
                              int holder_pair_window = 512);

// The weak-form functional
//   C(phi, v) = -(phi0, v(0)) - int int phi u . grad v
//               - int int (a phi + phi^3 - phi - J*phi) Delta v - int (phi, dv/dt)
// with Delta v taken spectrally on v's mode and time integrals by trapezoid
// over the recorded samples.
double c_functional(const Trajectory& traj, const TestFunction& v, const SpectralField& phi0,
                    const SolverContext& ctx);

// Same, evaluating the whole battery with one pipeline pass per recorded step.
std::vector<double> c_functional_battery(const Trajectory& traj,
                                         std::span<const TestFunction> battery,
                                         const SpectralField& phi0, const SolverContext& ctx);

// Characteristic functional of the initial-condition law at xi (finite modes).
std::complex<double> ic_char_functional(const IcSpec& ic, const SpectralField& xi,
                                        const BasisSpec& basis);

struct WeakPair {
    int xi_index = 0;
    int v_index = 0;
    std::complex<double> lhs;
    std::complex<double> rhs;
    double discrepancy = 0.0;
    double stat_band = 0.0; // 3 / sqrt(N)
};

struct WeakReport {
    std::vector<WeakPair> pairs;
    int paths = 0;
    double dt = 0.0;
    std::uint64_t config_hash = 0;

    double max_discrepancy() const;
};

// Monte-Carlo check of E[exp(i<phi(0),xi> + i C(phi,v))] = Xi^(xi) N^(v) over
// the (xi, v) battery.
WeakReport weak_solution_check(const SolverConfig& config, const IcSpec& ic,
                               std::span<const SpectralField> xis,
                               std::span<const TestFunction> battery, int paths);

// Paired coarse/fine estimate of the dt bias of the weak identity: runs dt and
// dt/2 on the same refined path per path index and returns 2 |mean difference|
// per pair, an allowance for the C * dt term of the tolerance.
std::vector<double> weak_bias_fit(const SolverConfig& config, const IcSpec& ic,
                                  std::span<const SpectralField> xis,
                                  std::span<const TestFunction> battery, int paths);

struct StrongReport {
    std::vector<double> residuals; // |C(phi, v) - <dw/dt, v>| per battery entry
    double ic_mismatch = 0.0;      // ||phi(0) - phi0|| in the H^{-eps} weights

    double max_residual() const;
};

// The trajectory must have been produced on a path with the same step grid and
// under the same configuration (hash-checked); the path's identity is free so
// that mismatched-path negative controls are expressible.
StrongReport strong_residual(const Trajectory& traj, const WienerPath& path,
                             const SpectralField& phi0, std::span<const TestFunction> battery,
                             const SolverContext& ctx, double eps = 0.1);

// K = (2 ||grad J||_{L1}^2 + ||u||_inf^2) / c0; see docs/gronwall_constant.md
// for the derivation.
double gronwall_constant(double l1_grad_kernel, double u_sup, double c0);

struct GronwallReport {
    double K = 0.0;
    double slack = 0.1;
    double tol = 0.0;
    std::vector<double> g;        // squared B^{-1/2} distance per recorded step
    bool per_step_pass = false;
    long first_violation = -1;
    double endpoint_bound = 0.0;
    bool endpoint_pass = false;
};

// Discrete Gronwall check on G(t) = sum_{k>=1} r_k^2 / (mu_k - 1) for
// r = phi_1 - phi_2: G(t_{n+1}) <= G(t_n) (1 + (1+slack) K dt) + tol at every
// step. Both trajectories must share the Wiener path and start with equal
// mode-0 coefficients (so r stays mean-zero exactly).
GronwallReport uniqueness_gronwall(const Trajectory& a, const Trajectory& b,
                                   const SolverContext& ctx, double slack = 0.1);

} // namespace nlch
