#include "nlch/physics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlch/fft.hpp"

namespace nlch {

namespace {

constexpr double kPi = std::numbers::pi;

double gaussian_value(double amplitude, double width, std::span<const double> x) {
    double r2 = 0.0;
    for (double xi : x) r2 += xi * xi;
    return amplitude * std::exp(-r2 / (2.0 * width * width));
}

} // namespace

KernelSpec KernelSpec::constant(double level) {
    KernelSpec s;
    s.family = KernelFamily::Constant;
    s.level = level;
    return s;
}

KernelSpec KernelSpec::gaussian(double amplitude, double width) {
    if (!(width > 0.0)) throw ConfigError("gaussian kernel width must be positive");
    KernelSpec s;
    s.family = KernelFamily::Gaussian;
    s.amplitude = amplitude;
    s.width = width;
    return s;
}

KernelSpec KernelSpec::table(std::vector<int> shape, std::vector<double> values) {
    KernelSpec s;
    s.family = KernelFamily::Table;
    s.table_shape = std::move(shape);
    s.table_values = std::move(values);
    return s;
}

std::int64_t KernelTables::offset_flat(std::span<const int> offset) const {
    const int d = basis_->dim();
    std::int64_t flat = 0;
    for (int axis = 0; axis < d; ++axis) {
        const int n = basis_->grid_size(axis);
        const int o = offset[static_cast<size_t>(axis)];
        if (o < -n || o > n) throw ConfigError("kernel offset out of range");
        flat = flat * (2 * n + 1) + (o + n);
    }
    return flat;
}

double KernelTables::kernel_at(std::span<const int> offset) const {
    return kernel_[static_cast<size_t>(offset_flat(offset))];
}

double KernelTables::gradient_at(int axis, std::span<const int> offset) const {
    return grad_[static_cast<size_t>(axis)][static_cast<size_t>(offset_flat(offset))];
}

KernelTables KernelTables::build(const KernelSpec& spec, std::shared_ptr<const BasisSpec> basis) {
    KernelTables t;
    t.basis_ = std::move(basis);
    const BasisSpec& b = *t.basis_;
    const int d = b.dim();

    std::array<int, 3> counts{1, 1, 1};
    std::int64_t total = 1;
    for (int axis = 0; axis < d; ++axis) {
        counts[static_cast<size_t>(axis)] = 2 * b.grid_size(axis) + 1;
        total *= counts[static_cast<size_t>(axis)];
    }

    if (spec.family == KernelFamily::Table) {
        if (static_cast<int>(spec.table_shape.size()) != d)
            throw ConfigError("kernel table rank does not match the domain");
        for (int axis = 0; axis < d; ++axis)
            if (spec.table_shape[static_cast<size_t>(axis)] != counts[static_cast<size_t>(axis)])
                throw ConfigError("kernel table shape does not match the offset grid");
        if (static_cast<std::int64_t>(spec.table_values.size()) != total)
            throw ConfigError("kernel table size does not match its shape");
    }

    t.kernel_.assign(static_cast<size_t>(total), 0.0);
    for (int axis = 0; axis < d; ++axis) t.grad_[static_cast<size_t>(axis)].assign(static_cast<size_t>(total), 0.0);

    std::array<int, 3> o{0, 0, 0};
    std::array<double, 3> x{0, 0, 0};
    for (std::int64_t flat = 0; flat < total; ++flat) {
        std::int64_t rem = flat;
        for (int axis = d - 1; axis >= 0; --axis) {
            const int c = counts[static_cast<size_t>(axis)];
            o[static_cast<size_t>(axis)] = static_cast<int>(rem % c) - b.grid_size(axis);
            rem /= c;
        }
        for (int axis = 0; axis < d; ++axis)
            x[static_cast<size_t>(axis)] = o[static_cast<size_t>(axis)] * b.spacing(axis);

        switch (spec.family) {
            case KernelFamily::Constant:
                t.kernel_[static_cast<size_t>(flat)] = spec.level;
                break;
            case KernelFamily::Gaussian: {
                const double v = gaussian_value(spec.amplitude, spec.width, {x.data(), static_cast<size_t>(d)});
                t.kernel_[static_cast<size_t>(flat)] = v;
                for (int axis = 0; axis < d; ++axis)
                    t.grad_[static_cast<size_t>(axis)][static_cast<size_t>(flat)] =
                        -x[static_cast<size_t>(axis)] / (spec.width * spec.width) * v;
                break;
            }
            case KernelFamily::Table: {
                // Symmetrize so evenness holds by construction.
                std::int64_t mirror = 0;
                for (int axis = 0; axis < d; ++axis) {
                    const int n = b.grid_size(axis);
                    mirror = mirror * (2 * n + 1) + (n - o[static_cast<size_t>(axis)]);
                }
                t.kernel_[static_cast<size_t>(flat)] =
                    0.5 * (spec.table_values[static_cast<size_t>(flat)] +
                           spec.table_values[static_cast<size_t>(mirror)]);
                break;
            }
        }
        if (!std::isfinite(t.kernel_[static_cast<size_t>(flat)]))
            throw ConfigError("kernel sample is not finite");
    }

    if (spec.family == KernelFamily::Table) {
        // Centered differences on the offset grid, one-sided at the edges.
        for (int axis = 0; axis < d; ++axis) {
            const double h = b.spacing(axis);
            std::int64_t stride = 1;
            for (int ax = d - 1; ax > axis; --ax) stride *= counts[static_cast<size_t>(ax)];
            const int c = counts[static_cast<size_t>(axis)];
            for (std::int64_t flat = 0; flat < total; ++flat) {
                const int pos = static_cast<int>((flat / stride) % c);
                double num;
                double den;
                if (pos == 0) {
                    num = t.kernel_[static_cast<size_t>(flat + stride)] - t.kernel_[static_cast<size_t>(flat)];
                    den = h;
                } else if (pos == c - 1) {
                    num = t.kernel_[static_cast<size_t>(flat)] - t.kernel_[static_cast<size_t>(flat - stride)];
                    den = h;
                } else {
                    num = t.kernel_[static_cast<size_t>(flat + stride)] - t.kernel_[static_cast<size_t>(flat - stride)];
                    den = 2.0 * h;
                }
                t.grad_[static_cast<size_t>(axis)][static_cast<size_t>(flat)] = num / den;
            }
        }
    }

    // Trapezoid-weighted L1 reports over the difference domain [-L, L]^d.
    double l1j = 0.0, l1g = 0.0;
    for (std::int64_t flat = 0; flat < total; ++flat) {
        std::int64_t rem = flat;
        double wt = 1.0;
        for (int axis = d - 1; axis >= 0; --axis) {
            const int c = counts[static_cast<size_t>(axis)];
            const int pos = static_cast<int>(rem % c);
            rem /= c;
            const double h = b.spacing(axis);
            wt *= (pos == 0 || pos == c - 1) ? 0.5 * h : h;
        }
        l1j += wt * std::abs(t.kernel_[static_cast<size_t>(flat)]);
        double g2 = 0.0;
        for (int axis = 0; axis < d; ++axis) {
            const double g = t.grad_[static_cast<size_t>(axis)][static_cast<size_t>(flat)];
            g2 += g * g;
        }
        l1g += wt * std::sqrt(g2);
    }
    t.l1_kernel_ = l1j;
    t.l1_gradient_ = l1g;

    // Padded spectrum for the fast backend: the inner kernel (offsets
    // -(N-1)..(N-1)) shifted to start at 0, zero-padded to a power of two that
    // holds the full linear convolution (3N - 2 per axis).
    t.padded_dims_.resize(static_cast<size_t>(d));
    std::size_t padded_total = 1;
    for (int axis = 0; axis < d; ++axis) {
        const int n = b.grid_size(axis);
        t.padded_dims_[static_cast<size_t>(axis)] = static_cast<int>(fft::next_pow2(static_cast<size_t>(3 * n - 2)));
        padded_total *= static_cast<size_t>(t.padded_dims_[static_cast<size_t>(axis)]);
    }
    t.kernel_hat_.assign(padded_total, {0.0, 0.0});
    const std::int64_t inner_total = [&] {
        std::int64_t p = 1;
        for (int axis = 0; axis < d; ++axis) p *= 2 * b.grid_size(axis) - 1;
        return p;
    }();
    for (std::int64_t flat = 0; flat < inner_total; ++flat) {
        std::int64_t rem = flat;
        std::array<int, 3> u{0, 0, 0};
        for (int axis = d - 1; axis >= 0; --axis) {
            const int c = 2 * b.grid_size(axis) - 1;
            u[static_cast<size_t>(axis)] = static_cast<int>(rem % c);
            rem /= c;
        }
        std::array<int, 3> off{0, 0, 0};
        for (int axis = 0; axis < d; ++axis)
            off[static_cast<size_t>(axis)] = u[static_cast<size_t>(axis)] - (b.grid_size(axis) - 1);
        std::size_t dst = 0;
        for (int axis = 0; axis < d; ++axis)
            dst = dst * static_cast<size_t>(t.padded_dims_[static_cast<size_t>(axis)]) +
                  static_cast<size_t>(u[static_cast<size_t>(axis)]);
        t.kernel_hat_[dst] = t.kernel_[static_cast<size_t>(t.offset_flat({off.data(), static_cast<size_t>(d)}))];
    }
    fft::transform_nd(t.kernel_hat_, t.padded_dims_, false);
    return t;
}

GridField KernelTables::convolve(const GridField& phi, ConvBackend backend) const {
    const BasisSpec& b = *basis_;
    if (phi.basis.get() != basis_.get())
        throw ConfigError("convolution grid does not match the kernel tables");
    const int d = b.dim();
    GridField out{phi.basis, std::vector<double>(phi.values.size(), 0.0)};
    const double w = b.quad_weight();

    if (backend == ConvBackend::Direct) {
        if (d == 1) {
            const int n = b.grid_size(0);
            const double* J0 = kernel_.data() + n; // center the offset index
            for (int q = 0; q < n; ++q) {
                double sum = 0.0;
                for (int p = 0; p < n; ++p) sum += J0[q - p] * phi.values[static_cast<size_t>(p)];
                out.values[static_cast<size_t>(q)] = w * sum;
            }
        } else if (d == 2) {
            const int n0 = b.grid_size(0), n1 = b.grid_size(1);
            const int c1 = 2 * n1 + 1;
            for (int q0 = 0; q0 < n0; ++q0)
                for (int q1 = 0; q1 < n1; ++q1) {
                    double sum = 0.0;
                    for (int p0 = 0; p0 < n0; ++p0) {
                        const double* Jrow = kernel_.data() +
                                             static_cast<size_t>(q0 - p0 + n0) * c1 + n1;
                        const double* prow = phi.values.data() + static_cast<size_t>(p0) * n1;
                        double inner = 0.0;
                        for (int p1 = 0; p1 < n1; ++p1) inner += Jrow[q1 - p1] * prow[p1];
                        sum += inner;
                    }
                    out.values[static_cast<size_t>(q0) * n1 + q1] = w * sum;
                }
        } else {
            const int n0 = b.grid_size(0), n1 = b.grid_size(1), n2 = b.grid_size(2);
            const int c1 = 2 * n1 + 1, c2 = 2 * n2 + 1;
            std::int64_t qflat = 0;
            for (int q0 = 0; q0 < n0; ++q0)
                for (int q1 = 0; q1 < n1; ++q1)
                    for (int q2 = 0; q2 < n2; ++q2, ++qflat) {
                        double sum = 0.0;
                        std::int64_t pflat = 0;
                        for (int p0 = 0; p0 < n0; ++p0) {
                            const std::int64_t j0 = static_cast<std::int64_t>(q0 - p0 + n0) * c1;
                            for (int p1 = 0; p1 < n1; ++p1) {
                                const double* Jrow = kernel_.data() + (j0 + (q1 - p1 + n1)) * c2 + n2;
                                for (int p2 = 0; p2 < n2; ++p2, ++pflat)
                                    sum += Jrow[q2 - p2] * phi.values[static_cast<size_t>(pflat)];
                            }
                        }
                        out.values[static_cast<size_t>(qflat)] = w * sum;
                    }
        }
        return out;
    }

    // FftPadded: identical discrete linear convolution via zero padding.
    std::size_t padded_total = 1;
    for (int v : padded_dims_) padded_total *= static_cast<size_t>(v);
    std::vector<std::complex<double>> buf(padded_total, {0.0, 0.0});
    std::array<int, 3> q{0, 0, 0};
    for (std::int64_t flat = 0; flat < b.total_nodes(); ++flat) {
        b.decode(flat, q);
        std::size_t dst = 0;
        for (int axis = 0; axis < d; ++axis)
            dst = dst * static_cast<size_t>(padded_dims_[static_cast<size_t>(axis)]) +
                  static_cast<size_t>(q[static_cast<size_t>(axis)]);
        buf[dst] = phi.values[static_cast<size_t>(flat)];
    }
    fft::transform_nd(buf, padded_dims_, false);
    for (std::size_t i = 0; i < padded_total; ++i) buf[i] *= kernel_hat_[i];
    fft::transform_nd(buf, padded_dims_, true);
    for (std::int64_t flat = 0; flat < b.total_nodes(); ++flat) {
        b.decode(flat, q);
        std::size_t src = 0;
        for (int axis = 0; axis < d; ++axis)
            src = src * static_cast<size_t>(padded_dims_[static_cast<size_t>(axis)]) +
                  static_cast<size_t>(q[static_cast<size_t>(axis)] + b.grid_size(axis) - 1);
        out.values[static_cast<size_t>(flat)] = w * buf[src].real();
    }
    return out;
}

GridField coefficient_a(const KernelTables& tables) {
    const BasisSpec& b = tables.basis();
    GridField ones{tables.basis_ptr(), std::vector<double>(static_cast<size_t>(b.total_nodes()), 1.0)};
    GridField a = tables.convolve(ones, ConvBackend::Direct);
    double amin = a.values.empty() ? 0.0 : *std::min_element(a.values.begin(), a.values.end());
    if (amin < 0.0)
        throw AssumptionViolation("kernel mass a(x) is negative somewhere (min a = " +
                                  std::to_string(amin) + ")");
    return a;
}

double validate_c0(const GridField& a) {
    double amin = *std::min_element(a.values.begin(), a.values.end());
    const double c0 = amin - 1.0;
    if (!(c0 > 0.0))
        throw AssumptionViolation("positivity margin c0 = min a - 1 = " + std::to_string(c0) +
                                  " is not strictly positive");
    return c0;
}

double potential_eval(double s, int order) {
    switch (order) {
        case 0: return 0.25 * s * s * s * s - 0.5 * s * s;
        case 1: return s * s * s - s;
        case 2: return 3.0 * s * s - 1.0;
        default: throw ConfigError("potential order must be 0, 1 or 2");
    }
}

VelocitySpec VelocitySpec::zero() { return VelocitySpec{Family::Zero, 0.0}; }

VelocitySpec VelocitySpec::stream_vortex(double amplitude) {
    return VelocitySpec{Family::StreamVortex, amplitude};
}

namespace {

// Analytic stream-vortex components at an arbitrary point (d = 2 only):
// psi = A prod sin^2(pi x_i / L_i), u = (d psi / d x_2, -d psi / d x_1).
void stream_vortex_at(double amplitude, const Domain& dom, double x0, double x1,
                      double& u0, double& u1) {
    const double s0 = std::sin(kPi * x0 / dom.length(0));
    const double s1 = std::sin(kPi * x1 / dom.length(1));
    u0 = amplitude * (kPi / dom.length(1)) * s0 * s0 * std::sin(2.0 * kPi * x1 / dom.length(1));
    u1 = -amplitude * (kPi / dom.length(0)) * std::sin(2.0 * kPi * x0 / dom.length(0)) * s1 * s1;
}

} // namespace

VelocityField velocity_eval(const VelocitySpec& spec, std::shared_ptr<const BasisSpec> basis) {
    VelocityField out;
    out.spec = spec;
    if (spec.family == VelocitySpec::Family::Zero) return out;

    const BasisSpec& b = *basis;
    if (b.dim() != 2) throw ConfigError("stream_vortex velocity requires a 2-d domain");
    for (int axis = 0; axis < 2; ++axis)
        if (b.grid_size(axis) < 3)
            throw ConfigError("quadrature grid too coarse to resolve the stream_vortex field "
                              "(needs at least 3 nodes per axis)");
    const Domain& dom = b.domain();
    const int n0 = b.grid_size(0), n1 = b.grid_size(1);

    GridField u0{basis, std::vector<double>(static_cast<size_t>(b.total_nodes()), 0.0)};
    GridField u1 = u0;
    double sup = 0.0;
    for (int q0 = 0; q0 < n0; ++q0)
        for (int q1 = 0; q1 < n1; ++q1) {
            double a, c;
            stream_vortex_at(spec.amplitude, dom, b.node(0, q0), b.node(1, q1), a, c);
            u0.values[static_cast<size_t>(q0) * n1 + q1] = a;
            u1.values[static_cast<size_t>(q0) * n1 + q1] = c;
            sup = std::max(sup, std::sqrt(a * a + c * c));
        }
    out.sup_norm = sup;

    GridField div = axis_cosine_derivative(u0, 0);
    GridField d1 = axis_cosine_derivative(u1, 1);
    for (size_t i = 0; i < div.values.size(); ++i) div.values[i] += d1.values[i];
    out.max_divergence = grid_sup_norm(div);

    // Analytic boundary faces: x_a in {0, L_a}, grid nodes elsewhere.
    double trace = 0.0;
    for (int face_axis = 0; face_axis < 2; ++face_axis)
        for (double xa : {0.0, dom.length(face_axis)}) {
            const int n_other = b.grid_size(1 - face_axis);
            for (int q = 0; q < n_other; ++q) {
                const double xo = b.node(1 - face_axis, q);
                const double x0 = face_axis == 0 ? xa : xo;
                const double x1 = face_axis == 0 ? xo : xa;
                double a, c;
                stream_vortex_at(spec.amplitude, dom, x0, x1, a, c);
                trace = std::max(trace, std::sqrt(a * a + c * c));
            }
        }
    out.boundary_trace = trace;

    if (sup > 0.0) {
        if (out.max_divergence > 1e-8 * sup)
            throw AssumptionViolation("velocity field is not divergence-free (measured max |div u| = " +
                                      std::to_string(out.max_divergence) + ")");
        if (out.boundary_trace > 1e-8 * sup)
            throw AssumptionViolation("velocity field does not vanish on the boundary");
    }

    out.components.push_back(std::move(u0));
    out.components.push_back(std::move(u1));
    return out;
}

ChemicalPotential chemical_potential(const SpectralField& phi, const KernelTables& tables,
                                     const GridField& a, ConvBackend backend, bool freeze_cubic) {
    GridField phig = evaluate(phi);
    GridField conv = tables.convolve(phig, backend);
    GridField mu{phi.basis, std::vector<double>(phig.values.size(), 0.0)};
    for (size_t i = 0; i < mu.values.size(); ++i) {
        const double p = phig.values[i];
        const double cubic = freeze_cubic ? 0.0 : p * p * p;
        mu.values[i] = a.values[i] * p - conv.values[i] + cubic - p;
    }
    SpectralField mu_m = project(mu);
    return ChemicalPotential{std::move(mu), std::move(mu_m)};
}

} // namespace nlch
