#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "nlch/errors.hpp"

namespace nlch {

// Axis-aligned box [0,L_1] x ... x [0,L_dim].
struct Domain {
    int dim = 1;
    std::array<double, 3> lengths{1.0, 1.0, 1.0};

    double length(int axis) const { return lengths[static_cast<size_t>(axis)]; }
    double volume() const;
    void validate() const;
};

using MultiIndex = std::array<int, 3>;

struct BasisOptions {
    // Quadrature nodes per dimension: N = padding * (kmax + 1). A factor of 2
    // makes rectangle-rule projection of cubic products exact on the cosine
    // basis (highest product wavenumber 4*kmax stays below the aliasing
    // threshold 2N).
    int padding = 2;
    std::int64_t max_grid_nodes = std::int64_t{1} << 24;
};

// Eigenbasis of A = -Laplacian + I with homogeneous Neumann conditions on a
// box: e_k(x) = prod_i eta(k_i) cos(k_i pi x_i / L_i), eigenvalue
// mu_k = 1 + sum_i (k_i pi / L_i)^2. Modes are sorted by eigenvalue with
// lexicographic tie-break, the constant mode first. Also owns the
// cell-centered quadrature grid and the cosine/derivative tables used by all
// transforms. Immutable after construction; share across threads freely.
class BasisSpec {
public:
    static std::shared_ptr<const BasisSpec> build(const Domain& domain, int m,
                                                  const BasisOptions& options = {});

    const Domain& domain() const { return domain_; }
    int dim() const { return domain_.dim; }
    int mode_count() const { return m_; }
    const MultiIndex& mode(int i) const { return modes_[static_cast<size_t>(i)]; }
    double eigenvalue(int i) const;
    std::span<const double> eigenvalues() const { return eigenvalues_; }

    int grid_size(int axis) const { return grid_size_[static_cast<size_t>(axis)]; }
    std::int64_t total_nodes() const { return total_nodes_; }
    double spacing(int axis) const { return spacing_[static_cast<size_t>(axis)]; }
    double node(int axis, int q) const { return (q + 0.5) * spacing(axis); }
    double quad_weight() const { return quad_weight_; }
    int max_wavenumber(int axis) const { return kmax_[static_cast<size_t>(axis)]; }

    // Row over grid points of the normalized 1-d factor eta(k) cos(k pi x/L)
    // and of its x-derivative, both sampled at the cell-centered nodes.
    std::span<const double> cos_row(int axis, int k) const;
    std::span<const double> dcos_row(int axis, int k) const;

    void decode(std::int64_t flat, std::array<int, 3>& q) const;

private:
    BasisSpec() = default;

    Domain domain_;
    int m_ = 0;
    std::vector<MultiIndex> modes_;
    std::vector<double> eigenvalues_;
    std::array<int, 3> grid_size_{1, 1, 1};
    std::array<int, 3> kmax_{0, 0, 0};
    std::array<double, 3> spacing_{0, 0, 0};
    std::array<std::int64_t, 3> stride_{0, 0, 0};
    std::int64_t total_nodes_ = 0;
    double quad_weight_ = 0;
    std::array<std::vector<double>, 3> cos_table_;
    std::array<std::vector<double>, 3> dcos_table_;
};

// First `count` eigenvalues of A on the domain, sorted ascending with the same
// ordering rule as BasisSpec::build. Grid-free; used by tail probes that look
// far beyond any retained basis.
std::vector<double> enumerate_eigenvalues(const Domain& domain, int count);

// Coefficient vector over the eigenbasis; the state phi_m.
struct SpectralField {
    std::shared_ptr<const BasisSpec> basis;
    std::vector<double> coeffs;

    void validate() const;
};

// Values on the quadrature grid (row-major, axis 0 slowest).
struct GridField {
    std::shared_ptr<const BasisSpec> basis;
    std::vector<double> values;

    void validate() const;
};

SpectralField zero_field(std::shared_ptr<const BasisSpec> basis);

// Synthesis on the quadrature grid via the precomputed cosine tables.
GridField evaluate(const SpectralField& field);

// Reference path: direct summation with trig recomputed per node. Slow; kept
// as the independent check of the table-driven synthesis.
GridField evaluate_direct(const SpectralField& field);

// Projection pi_r: rectangle-rule quadrature of (values, e_k) for the first
// target_m modes; coefficients of modes >= target_m are zero-filled so the
// result stays a field on the same basis.
SpectralField project(const GridField& values, int target_m);
SpectralField project(const GridField& values);

// Per-dimension grids of the exact term-by-term derivative of the cosine
// series (a sine series on the same nodes).
std::vector<GridField> gradient_evaluate(const SpectralField& field);

// (sum_k mu_k^s c_k^2)^{1/2} for s in [-2, 2]. s = 0 is the H norm, s = 1 the
// exact H^1 norm; s = 2 / s = -2 / s = -eps are the fixed spectral-weight
// equivalents of the V / V' / H^{-eps} norms used everywhere in the checks.
double sobolev_norm(const SpectralField& field, double s);

// ||grad phi||_{L^2} = (sum_k (mu_k - 1) c_k^2)^{1/2}.
double gradient_norm(const SpectralField& field);

double l4_norm(const SpectralField& field);

// max over sampled pairs of ||phi(t_i) - phi(t_j)||_s / |t_i - t_j|^beta.
// All pairs when the sample count is <= pair_window, else pairs of a
// stride-limited subset; a lower estimator of the true seminorm either way.
double holder_seminorm(std::span<const double> times, std::span<const SpectralField> states,
                       double beta, double s, int pair_window = 512);

// Spectral derivative along one axis using the full N-mode cosine interpolant
// of the sampled line (not the truncated basis). Exact for lines that are
// band-limited cosine polynomials below the grid's aliasing threshold.
GridField axis_cosine_derivative(const GridField& grid, int axis);

// Small field helpers shared by the solver and the checks.
double h_inner(const SpectralField& a, const SpectralField& b);
SpectralField axpy(double alpha, const SpectralField& x, const SpectralField& y); // alpha*x + y
double quadrature_integral(const GridField& grid);
double grid_sup_norm(const GridField& grid);

} // namespace nlch
