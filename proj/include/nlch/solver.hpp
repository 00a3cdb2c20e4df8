#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "nlch/noise.hpp"
#include "nlch/physics.hpp"

namespace nlch {

enum class Stepper { EulerMaruyama, Imex };

// Initial condition phi_0: a fixed coefficient vector, or independent Gaussian
// coefficients with given mean and per-mode variance. Sampling uses an RNG
// stream separate from the noise stream, so phi_0 is independent of the
// Wiener path by construction.
struct IcSpec {
    enum class Family { Deterministic, Gaussian };
    Family family = Family::Deterministic;

    std::vector<double> coeffs;   // deterministic; zero-padded / truncated to m

    // gaussian mean: either a spatially uniform state (mean_value, hitting only
    // the constant mode) or per-mode coefficient means (zero-padded).
    bool mean_is_uniform = false;
    double mean_value = 0.0;
    std::vector<double> mean;
    bool var_power_law = true;    // var_k = var_sigma2 * mu_k^{-var_p}
    double var_sigma2 = 0.0;
    double var_p = 2.0;
    std::vector<double> var;      // explicit per-mode variance otherwise

    bool deterministic() const { return family == Family::Deterministic; }
    SpectralField realize(const std::shared_ptr<const BasisSpec>& basis,
                          std::uint64_t master_seed, std::uint64_t path_index) const;
};

struct SolverConfig {
    Domain domain{};
    int modes = 8;
    BasisOptions basis_options{};
    KernelSpec kernel = KernelSpec::constant(2.5);
    VelocitySpec velocity = VelocitySpec::zero();
    NoiseSpec noise = NoiseSpec::power_law(0.01, 2.0, 0);
    double horizon = 0.5;
    double dt = 1e-4;
    Stepper stepper = Stepper::Imex;
    std::optional<double> stabilization;      // default max_x a(x) + 2
    double blowup_threshold = 1e6;
    int record_stride = 1;
    std::optional<ConvBackend> conv_backend;  // unset: pick by grid size
    bool linearized = false;                  // freeze the cubic term everywhere
    int kq_probe_depth = 4096;

    void validate() const;
};

// Everything a run needs, built once and immutable: the basis, kernel tables,
// a(x) with its positivity margin, the sampled velocity, resolved noise
// eigenvalues and the stabilization constant. Construction runs every
// assumption gate and throws AssumptionViolation if one fails.
class SolverContext {
public:
    static SolverContext create(const SolverConfig& config);

    const SolverConfig& config() const { return config_; }
    const std::shared_ptr<const BasisSpec>& basis_ptr() const { return basis_; }
    const BasisSpec& basis() const { return *basis_; }
    const KernelTables& kernel() const { return kernel_; }
    const GridField& a() const { return a_; }
    double c0() const { return c0_; }
    const VelocityField& velocity() const { return velocity_; }
    const KqReport& kq() const { return kq_; }
    std::span<const double> thetas() const { return thetas_; }
    double stabilization() const { return stabilization_; }
    ConvBackend backend() const { return backend_; }
    bool linearized() const { return config_.linearized; }
    long steps() const { return steps_; }
    double dt() const { return config_.dt; }
    std::uint64_t config_hash() const { return config_hash_; }

    // u . grad e_k sampled on the grid, one row per mode; empty when u = 0.
    const std::vector<std::vector<double>>& convection_rows() const { return convection_rows_; }

private:
    SolverContext() = default;

    SolverConfig config_;
    std::shared_ptr<const BasisSpec> basis_;
    KernelTables kernel_;
    GridField a_;
    double c0_ = 0.0;
    VelocityField velocity_;
    KqReport kq_;
    std::vector<double> thetas_;
    double stabilization_ = 0.0;
    ConvBackend backend_ = ConvBackend::Direct;
    long steps_ = 0;
    std::uint64_t config_hash_ = 0;
    std::vector<std::vector<double>> convection_rows_;
};

struct Trajectory {
    enum class Status { Completed, Blowup };

    std::vector<double> times;            // recorded times
    std::vector<SpectralField> states;    // recorded states
    std::vector<long> record_steps;       // step index of each recorded state
    WienerPath path;
    Status status = Status::Completed;
    long blowup_step = -1;
    double dt = 0.0;
    long total_steps = 0;
    int record_stride = 1;
    std::uint64_t config_hash = 0;

    bool completed() const { return status == Status::Completed; }
};

// Galerkin drift b(phi): b_k = -(u . grad phi, e_k) + (1 - mu_k) (mu_m)^_k,
// assembled pseudo-spectrally on the dealiased grid. The convected gradient is
// synthesized spectrally, so constant states have an exactly zero convection
// term; the mode-0 coefficient is the quadrature of an identically vanishing
// flux integral and is assembled as exactly zero.
struct DriftPieces {
    GridField phig;        // state on the grid
    SpectralField mu_m;    // projected chemical potential
    SpectralField b;       // drift coefficients
};
DriftPieces drift_pieces(const SpectralField& phi, const SolverContext& ctx);
SpectralField drift(const SpectralField& phi, const SolverContext& ctx);

// phi + dt b(phi) + dW. Throws BlowupSignal if the new state's grid sup-norm
// exceeds the configured cap or stops being finite.
SpectralField step_em(const SpectralField& phi, std::span<const double> dW, double dt,
                      const SolverContext& ctx);

// Diagonal stabilized semi-implicit step: the term S * Laplacian(phi) is
// implicit, the rest explicit. S = 0 reduces exactly to step_em.
SpectralField step_imex(const SpectralField& phi, std::span<const double> dW, double dt,
                        const SolverContext& ctx);

Trajectory simulate(const SolverContext& ctx, const SpectralField& phi0,
                    std::uint64_t path_index);

// Replay / refinement runs on an externally supplied path. The path must match
// the context's step grid exactly.
Trajectory simulate_with_path(const SolverContext& ctx, const SpectralField& phi0,
                              const WienerPath& path);

} // namespace nlch
