#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nlch/spectral.hpp"

namespace nlch {

enum class KernelFamily { Constant, Gaussian, Table };

// Even interaction kernel J. The table family carries samples on exactly the
// offset grid of the basis it will be paired with; see docs/formats.md for the
// import format. Evenness holds by construction for every family (tables are
// symmetrized on ingestion).
struct KernelSpec {
    KernelFamily family = KernelFamily::Constant;
    double level = 0.0;                // constant
    double amplitude = 0.0;            // gaussian
    double width = 1.0;                // gaussian
    std::vector<int> table_shape;      // per-axis offset counts (2N_i + 1)
    std::vector<double> table_values;  // row-major over offsets

    static KernelSpec constant(double level);
    static KernelSpec gaussian(double amplitude, double width);
    static KernelSpec table(std::vector<int> shape, std::vector<double> values);
};

enum class ConvBackend { Direct, FftPadded };

// J and grad J sampled on the offset grid covering [-L_i, L_i] per dimension
// (offsets j*h_i for j in [-N_i, N_i]), with trapezoid-weighted L1 reports and
// the padded-FFT spectrum for the fast convolution backend. Immutable.
class KernelTables {
public:
    KernelTables() = default; // empty; fill via build()
    static KernelTables build(const KernelSpec& spec, std::shared_ptr<const BasisSpec> basis);

    const BasisSpec& basis() const { return *basis_; }
    const std::shared_ptr<const BasisSpec>& basis_ptr() const { return basis_; }

    int offset_count(int axis) const { return 2 * basis_->grid_size(axis) + 1; }
    double kernel_at(std::span<const int> offset) const;    // offset components in [-N, N]
    double gradient_at(int axis, std::span<const int> offset) const;
    std::span<const double> kernel_samples() const { return kernel_; }

    double l1_kernel() const { return l1_kernel_; }
    double l1_gradient() const { return l1_gradient_; }

    // Restricted convolution over the box by rectangle-rule quadrature:
    // out(x_q) = h^d sum_p J(x_q - x_p) phi(x_p). The two backends compute the
    // identical discrete sum; Direct is the permanent oracle for FftPadded.
    GridField convolve(const GridField& phi, ConvBackend backend) const;

private:
    std::int64_t offset_flat(std::span<const int> offset) const;

    std::shared_ptr<const BasisSpec> basis_;
    std::vector<double> kernel_;                 // prod (2N_i+1) samples
    std::array<std::vector<double>, 3> grad_;    // same shape, per axis
    double l1_kernel_ = 0.0;
    double l1_gradient_ = 0.0;

    std::vector<int> padded_dims_;                    // power-of-two, >= 3N-2
    std::vector<std::complex<double>> kernel_hat_;    // spectrum of the shifted inner kernel
};

// a(x) = (J * 1)(x); throws AssumptionViolation if min a < 0.
GridField coefficient_a(const KernelTables& tables);

// Positivity margin c0 = min_x a(x) - 1 (the double-well has min F'' = -1).
// Throws AssumptionViolation unless c0 > 0 strictly.
double validate_c0(const GridField& a);

// F(s) = s^4/4 - s^2/2 and its first two derivatives (order in {0,1,2}).
double potential_eval(double s, int order);

struct VelocitySpec {
    enum class Family { Zero, StreamVortex };
    Family family = Family::Zero;
    double amplitude = 0.0;

    static VelocitySpec zero();
    static VelocitySpec stream_vortex(double amplitude);
};

// Sampled admissible velocity with its measured diagnostics. `components` is
// empty for the zero family so the solver can skip convection entirely.
struct VelocityField {
    VelocitySpec spec;
    std::vector<GridField> components;
    double sup_norm = 0.0;
    double max_divergence = 0.0;    // measured by per-axis spectral differentiation
    double boundary_trace = 0.0;    // max |u| over the analytic boundary faces

    bool is_zero() const { return components.empty(); }
};

// Samples the analytic family on the quadrature grid and validates the
// admissibility gates: measured max |div u| and boundary trace must both stay
// below 1e-8 * ||u||_inf, else AssumptionViolation. StreamVortex is d=2 only.
VelocityField velocity_eval(const VelocitySpec& spec, std::shared_ptr<const BasisSpec> basis);

struct ChemicalPotential {
    GridField grid;         // a*phi - J*phi + F'(phi) pointwise on the dealiased grid
    SpectralField projected; // pi_m of the above
};

// freeze_cubic drops the phi^3 term (the linearized variant used by the
// closed-form comparison runs); the consistent energy bookkeeping drops the
// quartic term as well.
ChemicalPotential chemical_potential(const SpectralField& phi, const KernelTables& tables,
                                     const GridField& a, ConvBackend backend,
                                     bool freeze_cubic = false);

} // namespace nlch
