#include "nlch/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nlch {

namespace {

constexpr double kPi = std::numbers::pi;

struct ModeEntry {
    MultiIndex k;
    double mu;
};

bool mode_less(const ModeEntry& a, const ModeEntry& b) {
    if (a.mu != b.mu) return a.mu < b.mu;
    return a.k < b.k;
}

double mode_eigenvalue(const Domain& d, const MultiIndex& k) {
    double mu = 1.0;
    for (int i = 0; i < d.dim; ++i) {
        double w = k[static_cast<size_t>(i)] * kPi / d.length(i);
        mu += w * w;
    }
    return mu;
}

// All modes with multi-index components <= bound, sorted.
std::vector<ModeEntry> boxed_modes(const Domain& d, int bound) {
    std::vector<ModeEntry> out;
    const int n1 = bound + 1;
    const int n2 = d.dim >= 2 ? bound + 1 : 1;
    const int n3 = d.dim >= 3 ? bound + 1 : 1;
    out.reserve(static_cast<size_t>(n1) * n2 * n3);
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n2; ++b)
            for (int c = 0; c < n3; ++c) {
                MultiIndex k{a, b, c};
                out.push_back({k, mode_eigenvalue(d, k)});
            }
    std::sort(out.begin(), out.end(), mode_less);
    return out;
}

// First `count` modes by (eigenvalue, lexicographic) order. The box bound is
// grown until every candidate outside the box provably exceeds the cutoff.
std::vector<ModeEntry> leading_modes(const Domain& d, int count) {
    double max_len = 0.0;
    for (int i = 0; i < d.dim; ++i) max_len = std::max(max_len, d.length(i));
    int bound = 4;
    while (static_cast<double>(bound) < std::pow(static_cast<double>(count), 1.0 / d.dim) + 2) bound *= 2;
    for (;;) {
        auto modes = boxed_modes(d, bound);
        if (static_cast<int>(modes.size()) >= count) {
            double cutoff = modes[static_cast<size_t>(count - 1)].mu;
            double w = (bound + 1) * kPi / max_len;
            if (cutoff < 1.0 + w * w) {
                modes.resize(static_cast<size_t>(count));
                return modes;
            }
        }
        if (bound > (1 << 20)) throw ConfigError("mode enumeration bound overflow");
        bound *= 2;
    }
}

} // namespace

double Domain::volume() const {
    double v = 1.0;
    for (int i = 0; i < dim; ++i) v *= length(i);
    return v;
}

void Domain::validate() const {
    if (dim < 1 || dim > 3) throw ConfigError("domain dim must be 1, 2 or 3");
    for (int i = 0; i < dim; ++i)
        if (!(length(i) > 0.0) || !std::isfinite(length(i)))
            throw ConfigError("domain lengths must be positive finite");
}

std::shared_ptr<const BasisSpec> BasisSpec::build(const Domain& domain, int m,
                                                  const BasisOptions& options) {
    domain.validate();
    if (m < 1) throw ConfigError("mode count must be >= 1");
    if (options.padding < 1) throw ConfigError("padding factor must be >= 1");

    auto spec = std::shared_ptr<BasisSpec>(new BasisSpec());
    spec->domain_ = domain;
    spec->m_ = m;

    auto modes = leading_modes(domain, m);
    spec->modes_.reserve(static_cast<size_t>(m));
    spec->eigenvalues_.reserve(static_cast<size_t>(m));
    for (const auto& e : modes) {
        spec->modes_.push_back(e.k);
        spec->eigenvalues_.push_back(e.mu);
    }

    std::int64_t total = 1;
    for (int axis = 0; axis < domain.dim; ++axis) {
        int kmax = 0;
        for (const auto& e : modes) kmax = std::max(kmax, e.k[static_cast<size_t>(axis)]);
        int n = options.padding * (kmax + 1);
        spec->kmax_[static_cast<size_t>(axis)] = kmax;
        spec->grid_size_[static_cast<size_t>(axis)] = n;
        spec->spacing_[static_cast<size_t>(axis)] = domain.length(axis) / n;
        total *= n;
        if (total > options.max_grid_nodes)
            throw ConfigError("quadrature grid exceeds the configured memory bound");
    }
    spec->total_nodes_ = total;

    double w = 1.0;
    for (int axis = 0; axis < domain.dim; ++axis) w *= spec->spacing_[static_cast<size_t>(axis)];
    spec->quad_weight_ = w;

    // Row-major strides, axis 0 slowest.
    std::int64_t stride = 1;
    for (int axis = domain.dim - 1; axis >= 0; --axis) {
        spec->stride_[static_cast<size_t>(axis)] = stride;
        stride *= spec->grid_size_[static_cast<size_t>(axis)];
    }

    for (int axis = 0; axis < domain.dim; ++axis) {
        const int n = spec->grid_size_[static_cast<size_t>(axis)];
        const int rows = spec->kmax_[static_cast<size_t>(axis)] + 1;
        const double len = domain.length(axis);
        auto& ct = spec->cos_table_[static_cast<size_t>(axis)];
        auto& dt = spec->dcos_table_[static_cast<size_t>(axis)];
        ct.assign(static_cast<size_t>(rows) * n, 0.0);
        dt.assign(static_cast<size_t>(rows) * n, 0.0);
        for (int k = 0; k < rows; ++k) {
            const double eta = std::sqrt((k == 0 ? 1.0 : 2.0) / len);
            const double freq = k * kPi / len;
            for (int q = 0; q < n; ++q) {
                double arg = k * kPi * (q + 0.5) / n;
                ct[static_cast<size_t>(k) * n + q] = eta * std::cos(arg);
                dt[static_cast<size_t>(k) * n + q] = -eta * freq * std::sin(arg);
            }
        }
    }
    return spec;
}

double BasisSpec::eigenvalue(int i) const {
    if (i < 0 || i >= m_) throw ConfigError("mode index out of range");
    return eigenvalues_[static_cast<size_t>(i)];
}

std::span<const double> BasisSpec::cos_row(int axis, int k) const {
    const int n = grid_size(axis);
    const auto& t = cos_table_[static_cast<size_t>(axis)];
    return {t.data() + static_cast<size_t>(k) * n, static_cast<size_t>(n)};
}

std::span<const double> BasisSpec::dcos_row(int axis, int k) const {
    const int n = grid_size(axis);
    const auto& t = dcos_table_[static_cast<size_t>(axis)];
    return {t.data() + static_cast<size_t>(k) * n, static_cast<size_t>(n)};
}

void BasisSpec::decode(std::int64_t flat, std::array<int, 3>& q) const {
    q = {0, 0, 0};
    for (int axis = 0; axis < domain_.dim; ++axis) {
        const std::int64_t s = stride_[static_cast<size_t>(axis)];
        q[static_cast<size_t>(axis)] = static_cast<int>(flat / s);
        flat %= s;
    }
}

std::vector<double> enumerate_eigenvalues(const Domain& domain, int count) {
    domain.validate();
    if (count < 1) throw ConfigError("eigenvalue count must be >= 1");
    auto modes = leading_modes(domain, count);
    std::vector<double> out;
    out.reserve(modes.size());
    for (const auto& e : modes) out.push_back(e.mu);
    return out;
}

void SpectralField::validate() const {
    if (!basis) throw ConfigError("spectral field without basis");
    if (static_cast<int>(coeffs.size()) != basis->mode_count())
        throw ConfigError("spectral field length does not match basis");
    for (double c : coeffs)
        if (!std::isfinite(c)) throw ConfigError("spectral field has non-finite entries");
}

void GridField::validate() const {
    if (!basis) throw ConfigError("grid field without basis");
    if (static_cast<std::int64_t>(values.size()) != basis->total_nodes())
        throw ConfigError("grid field shape does not match quadrature grid");
}

SpectralField zero_field(std::shared_ptr<const BasisSpec> basis) {
    const int m = basis->mode_count();
    return SpectralField{std::move(basis), std::vector<double>(static_cast<size_t>(m), 0.0)};
}

GridField evaluate(const SpectralField& field) {
    const BasisSpec& b = *field.basis;
    GridField out{field.basis, std::vector<double>(static_cast<size_t>(b.total_nodes()), 0.0)};
    double* v = out.values.data();
    const int d = b.dim();
    for (int i = 0; i < b.mode_count(); ++i) {
        const double c = field.coeffs[static_cast<size_t>(i)];
        if (c == 0.0) continue;
        const MultiIndex& k = b.mode(i);
        const auto r0 = b.cos_row(0, k[0]);
        if (d == 1) {
            for (size_t q = 0; q < r0.size(); ++q) v[q] += c * r0[q];
        } else if (d == 2) {
            const auto r1 = b.cos_row(1, k[1]);
            std::int64_t idx = 0;
            for (size_t q0 = 0; q0 < r0.size(); ++q0) {
                const double t = c * r0[q0];
                for (size_t q1 = 0; q1 < r1.size(); ++q1) v[idx++] += t * r1[q1];
            }
        } else {
            const auto r1 = b.cos_row(1, k[1]);
            const auto r2 = b.cos_row(2, k[2]);
            std::int64_t idx = 0;
            for (size_t q0 = 0; q0 < r0.size(); ++q0) {
                const double t0 = c * r0[q0];
                for (size_t q1 = 0; q1 < r1.size(); ++q1) {
                    const double t1 = t0 * r1[q1];
                    for (size_t q2 = 0; q2 < r2.size(); ++q2) v[idx++] += t1 * r2[q2];
                }
            }
        }
    }
    return out;
}

GridField evaluate_direct(const SpectralField& field) {
    const BasisSpec& b = *field.basis;
    const Domain& dom = b.domain();
    GridField out{field.basis, std::vector<double>(static_cast<size_t>(b.total_nodes()), 0.0)};
    std::array<int, 3> q{};
    for (std::int64_t flat = 0; flat < b.total_nodes(); ++flat) {
        b.decode(flat, q);
        double sum = 0.0;
        for (int i = 0; i < b.mode_count(); ++i) {
            const MultiIndex& k = b.mode(i);
            double e = 1.0;
            for (int axis = 0; axis < dom.dim; ++axis) {
                const double len = dom.length(axis);
                const int kk = k[static_cast<size_t>(axis)];
                const double eta = std::sqrt((kk == 0 ? 1.0 : 2.0) / len);
                e *= eta * std::cos(kk * kPi * b.node(axis, q[static_cast<size_t>(axis)]) / len);
            }
            sum += field.coeffs[static_cast<size_t>(i)] * e;
        }
        out.values[static_cast<size_t>(flat)] = sum;
    }
    return out;
}

SpectralField project(const GridField& values, int target_m) {
    const BasisSpec& b = *values.basis;
    if (target_m < 0 || target_m > b.mode_count())
        throw ConfigError("projection target exceeds basis mode count");
    SpectralField out = zero_field(values.basis);
    const double* v = values.values.data();
    const double w = b.quad_weight();
    const int d = b.dim();
    for (int i = 0; i < target_m; ++i) {
        const MultiIndex& k = b.mode(i);
        const auto r0 = b.cos_row(0, k[0]);
        double sum = 0.0;
        if (d == 1) {
            for (size_t q = 0; q < r0.size(); ++q) sum += v[q] * r0[q];
        } else if (d == 2) {
            const auto r1 = b.cos_row(1, k[1]);
            std::int64_t idx = 0;
            for (size_t q0 = 0; q0 < r0.size(); ++q0) {
                double inner = 0.0;
                for (size_t q1 = 0; q1 < r1.size(); ++q1) inner += v[idx++] * r1[q1];
                sum += r0[q0] * inner;
            }
        } else {
            const auto r1 = b.cos_row(1, k[1]);
            const auto r2 = b.cos_row(2, k[2]);
            std::int64_t idx = 0;
            for (size_t q0 = 0; q0 < r0.size(); ++q0) {
                double mid = 0.0;
                for (size_t q1 = 0; q1 < r1.size(); ++q1) {
                    double inner = 0.0;
                    for (size_t q2 = 0; q2 < r2.size(); ++q2) inner += v[idx++] * r2[q2];
                    mid += r1[q1] * inner;
                }
                sum += r0[q0] * mid;
            }
        }
        out.coeffs[static_cast<size_t>(i)] = w * sum;
    }
    return out;
}

SpectralField project(const GridField& values) { return project(values, values.basis->mode_count()); }

std::vector<GridField> gradient_evaluate(const SpectralField& field) {
    const BasisSpec& b = *field.basis;
    const int d = b.dim();
    std::vector<GridField> out;
    out.reserve(static_cast<size_t>(d));
    for (int axis = 0; axis < d; ++axis)
        out.push_back(GridField{field.basis, std::vector<double>(static_cast<size_t>(b.total_nodes()), 0.0)});

    for (int i = 0; i < b.mode_count(); ++i) {
        const double c = field.coeffs[static_cast<size_t>(i)];
        if (c == 0.0) continue;
        const MultiIndex& k = b.mode(i);
        for (int axis = 0; axis < d; ++axis) {
            if (k[static_cast<size_t>(axis)] == 0) continue; // derivative of the constant factor
            double* v = out[static_cast<size_t>(axis)].values.data();
            const auto r0 = axis == 0 ? b.dcos_row(0, k[0]) : b.cos_row(0, k[0]);
            if (d == 1) {
                for (size_t q = 0; q < r0.size(); ++q) v[q] += c * r0[q];
            } else if (d == 2) {
                const auto r1 = axis == 1 ? b.dcos_row(1, k[1]) : b.cos_row(1, k[1]);
                std::int64_t idx = 0;
                for (size_t q0 = 0; q0 < r0.size(); ++q0) {
                    const double t = c * r0[q0];
                    for (size_t q1 = 0; q1 < r1.size(); ++q1) v[idx++] += t * r1[q1];
                }
            } else {
                const auto r1 = axis == 1 ? b.dcos_row(1, k[1]) : b.cos_row(1, k[1]);
                const auto r2 = axis == 2 ? b.dcos_row(2, k[2]) : b.cos_row(2, k[2]);
                std::int64_t idx = 0;
                for (size_t q0 = 0; q0 < r0.size(); ++q0) {
                    const double t0 = c * r0[q0];
                    for (size_t q1 = 0; q1 < r1.size(); ++q1) {
                        const double t1 = t0 * r1[q1];
                        for (size_t q2 = 0; q2 < r2.size(); ++q2) v[idx++] += t1 * r2[q2];
                    }
                }
            }
        }
    }
    return out;
}

double sobolev_norm(const SpectralField& field, double s) {
    if (s < -2.0 || s > 2.0) throw ConfigError("sobolev scale must lie in [-2, 2]");
    const auto mus = field.basis->eigenvalues();
    double sum = 0.0;
    for (size_t i = 0; i < field.coeffs.size(); ++i)
        sum += std::pow(mus[i], s) * field.coeffs[i] * field.coeffs[i];
    return std::sqrt(sum);
}

double gradient_norm(const SpectralField& field) {
    const auto mus = field.basis->eigenvalues();
    double sum = 0.0;
    for (size_t i = 0; i < field.coeffs.size(); ++i)
        sum += (mus[i] - 1.0) * field.coeffs[i] * field.coeffs[i];
    return std::sqrt(std::max(sum, 0.0));
}

double l4_norm(const SpectralField& field) {
    GridField g = evaluate(field);
    double sum = 0.0;
    for (double v : g.values) {
        const double v2 = v * v;
        sum += v2 * v2;
    }
    return std::pow(field.basis->quad_weight() * sum, 0.25);
}

double holder_seminorm(std::span<const double> times, std::span<const SpectralField> states,
                       double beta, double s, int pair_window) {
    if (times.size() != states.size()) throw ConfigError("times/states length mismatch");
    if (times.size() < 2) throw ConfigError("holder seminorm needs at least 2 samples");
    if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("holder exponent must lie in (0,1)");
    if (pair_window < 2) pair_window = 2;

    std::vector<size_t> idx;
    const size_t n = times.size();
    if (static_cast<int>(n) <= pair_window) {
        idx.resize(n);
        for (size_t i = 0; i < n; ++i) idx[i] = i;
    } else {
        const size_t stride = (n - 1 + static_cast<size_t>(pair_window) - 2) / (static_cast<size_t>(pair_window) - 1);
        for (size_t i = 0; i < n; i += stride) idx.push_back(i);
        if (idx.back() != n - 1) idx.push_back(n - 1);
    }

    const auto mus = states[0].basis->eigenvalues();
    const size_t m = states[0].coeffs.size();
    std::vector<double> weight(m);
    for (size_t k = 0; k < m; ++k) weight[k] = std::pow(mus[k], s);

    double best = 0.0;
    for (size_t a = 0; a + 1 < idx.size(); ++a) {
        for (size_t b = a + 1; b < idx.size(); ++b) {
            const auto& ca = states[idx[a]].coeffs;
            const auto& cb = states[idx[b]].coeffs;
            double sum = 0.0;
            for (size_t k = 0; k < m; ++k) {
                const double dcoef = ca[k] - cb[k];
                sum += weight[k] * dcoef * dcoef;
            }
            const double dt = std::abs(times[idx[b]] - times[idx[a]]);
            if (dt <= 0.0) continue;
            best = std::max(best, std::sqrt(sum) / std::pow(dt, beta));
        }
    }
    return best;
}

GridField axis_cosine_derivative(const GridField& grid, int axis) {
    const BasisSpec& b = *grid.basis;
    if (axis < 0 || axis >= b.dim()) throw ConfigError("axis out of range");
    const int n = b.grid_size(axis);
    const double len = b.domain().length(axis);

    // Full-resolution trig tables for this axis (all N wavenumbers, not just
    // the retained ones).
    std::vector<double> ct(static_cast<size_t>(n) * n), st(static_cast<size_t>(n) * n);
    for (int k = 0; k < n; ++k)
        for (int q = 0; q < n; ++q) {
            const double arg = k * kPi * (q + 0.5) / n;
            ct[static_cast<size_t>(k) * n + q] = std::cos(arg);
            st[static_cast<size_t>(k) * n + q] = std::sin(arg);
        }

    GridField out{grid.basis, std::vector<double>(grid.values.size(), 0.0)};

    // Stride walk over all 1-d lines along `axis`.
    std::int64_t stride = 1;
    for (int ax = b.dim() - 1; ax > axis; --ax) stride *= b.grid_size(ax);
    const std::int64_t lines = b.total_nodes() / n;

    std::vector<double> line(static_cast<size_t>(n)), coef(static_cast<size_t>(n));
    for (std::int64_t l = 0; l < lines; ++l) {
        // flat index of the line's first element
        const std::int64_t block = l / stride;
        const std::int64_t offset = l % stride;
        const std::int64_t base = block * stride * n + offset;
        for (int q = 0; q < n; ++q) line[static_cast<size_t>(q)] = grid.values[static_cast<size_t>(base + q * stride)];
        for (int k = 0; k < n; ++k) {
            double sum = 0.0;
            const double* row = ct.data() + static_cast<size_t>(k) * n;
            for (int q = 0; q < n; ++q) sum += row[q] * line[static_cast<size_t>(q)];
            coef[static_cast<size_t>(k)] = (k == 0 ? 1.0 : 2.0) * sum / n;
        }
        for (int q = 0; q < n; ++q) {
            double sum = 0.0;
            for (int k = 1; k < n; ++k)
                sum += coef[static_cast<size_t>(k)] * (-k * kPi / len) * st[static_cast<size_t>(k) * n + q];
            out.values[static_cast<size_t>(base + q * stride)] = sum;
        }
    }
    return out;
}

double h_inner(const SpectralField& a, const SpectralField& b) {
    double sum = 0.0;
    for (size_t i = 0; i < a.coeffs.size(); ++i) sum += a.coeffs[i] * b.coeffs[i];
    return sum;
}

SpectralField axpy(double alpha, const SpectralField& x, const SpectralField& y) {
    SpectralField out = y;
    for (size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += alpha * x.coeffs[i];
    return out;
}

double quadrature_integral(const GridField& grid) {
    double sum = 0.0;
    for (double v : grid.values) sum += v;
    return grid.basis->quad_weight() * sum;
}

double grid_sup_norm(const GridField& grid) {
    double best = 0.0;
    for (double v : grid.values) best = std::max(best, std::abs(v));
    return best;
}

} // namespace nlch
