#include <doctest.h>

#include <cmath>
#include <random>

#include "nlch/physics.hpp"
#include "oracle_helpers.hpp"

using namespace nlch;
using oracle::kPi;

namespace {

Domain box1() { return Domain{1, {1.0, 1.0, 1.0}}; }
Domain box2() { return Domain{2, {1.0, 1.0, 1.0}}; }

GridField random_grid(const std::shared_ptr<const BasisSpec>& b, unsigned seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist;
    GridField g{b, std::vector<double>(static_cast<size_t>(b->total_nodes()), 0.0)};
    for (auto& v : g.values) v = dist(gen);
    return g;
}

} // namespace

TEST_CASE("kernel tables: constant L1 mass over the difference domain") {
    for (int dim = 1; dim <= 2; ++dim) {
        auto b = BasisSpec::build(dim == 1 ? box1() : box2(), 8);
        auto t = KernelTables::build(KernelSpec::constant(0.7), b);
        CHECK(t.l1_kernel() == doctest::Approx(0.7 * std::pow(2.0, dim)).epsilon(1e-12));
        CHECK(t.l1_gradient() == 0.0);
    }
}

TEST_CASE("kernel tables: narrow gaussian mass matches the closed form") {
    {
        auto b = BasisSpec::build(box1(), 16);
        auto t = KernelTables::build(KernelSpec::gaussian(2.0, 0.05), b);
        const double expect = 2.0 * std::sqrt(2.0 * kPi) * 0.05;
        CHECK(std::abs(t.l1_kernel() - expect) < 0.01 * expect);
    }
    {
        auto b = BasisSpec::build(box2(), 60);
        auto t = KernelTables::build(KernelSpec::gaussian(1.5, 0.15), b);
        const double expect = 1.5 * (2.0 * kPi) * 0.15 * 0.15;
        CHECK(std::abs(t.l1_kernel() - expect) < 0.01 * expect);
    }
}

TEST_CASE("kernel tables: evenness holds entrywise, tables included") {
    auto b = BasisSpec::build(box1(), 6);
    const int n = b->grid_size(0);
    // an intentionally asymmetric input table; ingestion symmetrizes it
    std::vector<double> vals(static_cast<size_t>(2 * n + 1));
    std::mt19937 gen(3);
    std::normal_distribution<double> dist;
    for (auto& v : vals) v = 1.0 + 0.1 * dist(gen);
    auto t = KernelTables::build(KernelSpec::table({2 * n + 1}, vals), b);
    for (int o = -n; o <= n; ++o) {
        const int po = o, mo = -o;
        CHECK(t.kernel_at({&po, 1}) == t.kernel_at({&mo, 1}));
    }
    auto tg = KernelTables::build(KernelSpec::gaussian(1.0, 0.3), b);
    for (int o = -n; o <= n; ++o) {
        const int po = o, mo = -o;
        CHECK(tg.kernel_at({&po, 1}) == tg.kernel_at({&mo, 1}));
    }
    CHECK_THROWS_AS(KernelTables::build(KernelSpec::table({2 * n - 1}, vals), b), ConfigError);
}

TEST_CASE("convolve: constant kernel gives a constant output") {
    auto b = BasisSpec::build(box1(), 8);
    auto t = KernelTables::build(KernelSpec::constant(2.5), b);
    SpectralField f = oracle::random_field(b, 11);
    GridField g = evaluate(f);
    const double mass = quadrature_integral(g);
    for (ConvBackend backend : {ConvBackend::Direct, ConvBackend::FftPadded}) {
        GridField out = t.convolve(g, backend);
        for (double v : out.values) CHECK(v == doctest::Approx(2.5 * mass).epsilon(1e-12));
    }
}

TEST_CASE("convolve: discrete delta is the identity") {
    auto b = BasisSpec::build(box1(), 6);
    const int n = b->grid_size(0);
    std::vector<double> vals(static_cast<size_t>(2 * n + 1), 0.0);
    vals[static_cast<size_t>(n)] = 1.0 / b->quad_weight(); // unit discrete mass at offset 0
    auto t = KernelTables::build(KernelSpec::table({2 * n + 1}, vals), b);
    GridField g = random_grid(b, 21);
    for (ConvBackend backend : {ConvBackend::Direct, ConvBackend::FftPadded}) {
        GridField out = t.convolve(g, backend);
        for (size_t q = 0; q < g.values.size(); ++q)
            CHECK(out.values[q] == doctest::Approx(g.values[q]).epsilon(1e-12));
    }
}

TEST_CASE("convolve: backends agree on random fields") {
    for (int dim = 1; dim <= 2; ++dim) {
        auto b = BasisSpec::build(dim == 1 ? box1() : box2(), dim == 1 ? 12 : 20);
        auto t = KernelTables::build(KernelSpec::gaussian(1.3, 0.2), b);
        for (unsigned seed = 0; seed < 5; ++seed) {
            GridField g = random_grid(b, 100 + seed);
            GridField d = t.convolve(g, ConvBackend::Direct);
            GridField f = t.convolve(g, ConvBackend::FftPadded);
            double scale = grid_sup_norm(d);
            for (size_t q = 0; q < d.values.size(); ++q)
                CHECK(std::abs(d.values[q] - f.values[q]) <= 1e-9 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("convolve: grid from another basis is rejected") {
    auto b1 = BasisSpec::build(box1(), 6);
    auto b2 = BasisSpec::build(box1(), 6);
    auto t = KernelTables::build(KernelSpec::constant(1.0), b1);
    GridField g{b2, std::vector<double>(static_cast<size_t>(b2->total_nodes()), 0.0)};
    CHECK_THROWS_AS(t.convolve(g, ConvBackend::Direct), ConfigError);
}

TEST_CASE("coefficient a: constants, zero, and sign gate") {
    auto b = BasisSpec::build(box1(), 8);
    {
        auto t = KernelTables::build(KernelSpec::constant(2.5), b);
        GridField a = coefficient_a(t);
        for (double v : a.values) CHECK(v == doctest::Approx(2.5).epsilon(1e-13));
    }
    {
        auto t = KernelTables::build(KernelSpec::constant(0.0), b);
        GridField a = coefficient_a(t);
        for (double v : a.values) CHECK(v == 0.0);
    }
    {
        auto t = KernelTables::build(KernelSpec::constant(-0.5), b);
        CHECK_THROWS_AS(coefficient_a(t), AssumptionViolation);
    }
}

TEST_CASE("coefficient a: narrow gaussian keeps its mass inside, decays at the wall") {
    auto b = BasisSpec::build(box1(), 16);
    auto t = KernelTables::build(KernelSpec::gaussian(3.0, 0.05), b);
    GridField a = coefficient_a(t);
    const double mass = 3.0 * std::sqrt(2.0 * kPi) * 0.05;
    const int n = b->grid_size(0);
    CHECK(std::abs(a.values[static_cast<size_t>(n / 2)] - mass) < 0.01 * mass);
    // half the mass survives at the wall
    CHECK(a.values[0] == doctest::Approx(mass / 2.0).epsilon(0.05));
    CHECK(a.values[0] < a.values[static_cast<size_t>(n / 2)]);
}

TEST_CASE("validate_c0: margin arithmetic and gates") {
    auto b = BasisSpec::build(box1(), 4);
    auto make_a = [&](double level) {
        return GridField{b, std::vector<double>(static_cast<size_t>(b->total_nodes()), level)};
    };
    CHECK(validate_c0(make_a(2.5)) == doctest::Approx(1.5));
    CHECK_THROWS_AS(validate_c0(make_a(1.0)), AssumptionViolation);
    CHECK_THROWS_AS(validate_c0(make_a(0.0)), AssumptionViolation);
}

TEST_CASE("validate_c0: scaling the kernel scales the margin exactly") {
    auto b = BasisSpec::build(box1(), 8);
    auto t1 = KernelTables::build(KernelSpec::constant(1.7), b);
    auto t2 = KernelTables::build(KernelSpec::constant(3.4), b);
    const double c1 = validate_c0(coefficient_a(t1));
    const double c2 = validate_c0(coefficient_a(t2));
    CHECK(c2 == doctest::Approx(2.0 * (c1 + 1.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("potential: critical points and direct values") {
    CHECK(potential_eval(0.0, 1) == 0.0);
    CHECK(potential_eval(1.0, 1) == 0.0);
    CHECK(potential_eval(-1.0, 1) == 0.0);
    CHECK(potential_eval(1.0, 0) == doctest::Approx(-0.25));
    CHECK(potential_eval(2.0, 2) == doctest::Approx(11.0));
    CHECK_THROWS_AS(potential_eval(1.0, 3), ConfigError);
}

TEST_CASE("chemical potential: constant states reduce to F'") {
    auto b = BasisSpec::build(box1(), 6);
    auto t = KernelTables::build(KernelSpec::constant(2.5), b);
    GridField a = coefficient_a(t);
    const double s = 0.7;
    SpectralField phi = zero_field(b);
    phi.coeffs[0] = s; // e_0 = 1 on the unit box
    auto mu = chemical_potential(phi, t, a, ConvBackend::Direct);
    const double fprime = potential_eval(s, 1);
    for (double v : mu.grid.values) CHECK(v == doctest::Approx(fprime).epsilon(1e-12));
    CHECK(mu.projected.coeffs[0] == doctest::Approx(fprime).epsilon(1e-12));
    for (size_t k = 1; k < mu.projected.coeffs.size(); ++k)
        CHECK(std::abs(mu.projected.coeffs[k]) < 1e-12);

    auto mu0 = chemical_potential(zero_field(b), t, a, ConvBackend::Direct);
    for (double v : mu0.grid.values) CHECK(v == 0.0);
}

TEST_CASE("chemical potential: random state against a dense-quadrature oracle") {
    auto b = BasisSpec::build(box1(), 8);
    const double c = 2.5;
    auto t = KernelTables::build(KernelSpec::constant(c), b);
    GridField a = coefficient_a(t);
    SpectralField phi = oracle::random_field(b, 42, 0.4);
    auto mu = chemical_potential(phi, t, a, ConvBackend::FftPadded);

    // For a constant kernel on the unit box: a = c and (J*phi)(x) = c int phi.
    const double mass = phi.coeffs[0]; // int phi = c_0 * sqrt(|D|) = c_0
    for (int k = 0; k < 8; ++k) {
        const double expect = oracle::refined_quadrature(box1(), 4096, [&](std::span<const double> x) {
            const double p = oracle::field_at(phi, x);
            return (c * p - c * mass + p * p * p - p) * oracle::basis_function_at(*b, k, x);
        });
        CHECK(std::abs(mu.projected.coeffs[static_cast<size_t>(k)] - expect) < 1e-8);
    }
}

TEST_CASE("chemical potential: frozen cubic drops only the cubic term") {
    auto b = BasisSpec::build(box1(), 6);
    auto t = KernelTables::build(KernelSpec::constant(2.5), b);
    GridField a = coefficient_a(t);
    SpectralField phi = oracle::random_field(b, 7, 0.3);
    auto full = chemical_potential(phi, t, a, ConvBackend::Direct, false);
    auto lin = chemical_potential(phi, t, a, ConvBackend::Direct, true);
    GridField phig = evaluate(phi);
    for (size_t q = 0; q < phig.values.size(); ++q) {
        const double p = phig.values[q];
        CHECK(full.grid.values[q] - lin.grid.values[q] == doctest::Approx(p * p * p).epsilon(1e-12));
    }
}

TEST_CASE("velocity: zero family") {
    auto b = BasisSpec::build(box1(), 4);
    VelocityField u = velocity_eval(VelocitySpec::zero(), b);
    CHECK(u.is_zero());
    CHECK(u.sup_norm == 0.0);
}

TEST_CASE("velocity: stream vortex closed form, divergence and no-slip gates") {
    auto b = BasisSpec::build(box2(), 40);
    VelocityField u = velocity_eval(VelocitySpec::stream_vortex(1.0), b);
    REQUIRE(u.components.size() == 2);
    const int n1 = b->grid_size(1);
    for (int q0 = 0; q0 < b->grid_size(0); q0 += 3)
        for (int q1 = 0; q1 < n1; q1 += 3) {
            const double x0 = b->node(0, q0), x1 = b->node(1, q1);
            const double s0 = std::sin(kPi * x0);
            const double expect = 2.0 * kPi * s0 * s0 * std::sin(kPi * x1) * std::cos(kPi * x1);
            CHECK(u.components[0].values[static_cast<size_t>(q0) * n1 + q1] ==
                  doctest::Approx(expect).epsilon(1e-12));
        }
    CHECK(u.sup_norm > 0.0);
    CHECK(u.max_divergence <= 1e-8 * u.sup_norm);
    CHECK(u.boundary_trace <= 1e-8 * u.sup_norm);

    auto b1 = BasisSpec::build(box1(), 4);
    CHECK_THROWS_AS(velocity_eval(VelocitySpec::stream_vortex(1.0), b1), ConfigError);
}

TEST_CASE("invariant: convolution symmetry (J*phi, psi) = (phi, J*psi)") {
    auto b = BasisSpec::build(box1(), 10);
    auto t = KernelTables::build(KernelSpec::gaussian(1.1, 0.22), b);
    for (unsigned seed = 0; seed < 3; ++seed) {
        GridField phi = random_grid(b, 200 + seed);
        GridField psi = random_grid(b, 300 + seed);
        GridField jphi = t.convolve(phi, ConvBackend::Direct);
        GridField jpsi = t.convolve(psi, ConvBackend::FftPadded);
        double lhs = 0.0, rhs = 0.0;
        for (size_t q = 0; q < phi.values.size(); ++q) {
            lhs += jphi.values[q] * psi.values[q];
            rhs += phi.values[q] * jpsi.values[q];
        }
        lhs *= b->quad_weight();
        rhs *= b->quad_weight();
        CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("invariant: Young bound for the restricted convolution") {
    auto b = BasisSpec::build(box1(), 10);
    auto t = KernelTables::build(KernelSpec::gaussian(2.0, 0.15), b);
    for (unsigned seed = 0; seed < 4; ++seed) {
        SpectralField f = oracle::random_field(b, 400 + seed);
        GridField g = evaluate(f);
        GridField conv = t.convolve(g, ConvBackend::Direct);
        double n_in = 0.0, n_out = 0.0;
        for (size_t q = 0; q < g.values.size(); ++q) {
            n_in += g.values[q] * g.values[q];
            n_out += conv.values[q] * conv.values[q];
        }
        n_in = std::sqrt(b->quad_weight() * n_in);
        n_out = std::sqrt(b->quad_weight() * n_out);
        CHECK(n_out <= t.l1_kernel() * n_in * (1.0 + 1e-9));
    }
}

TEST_CASE("invariant: gradient of convolution equals gradient-kernel convolution") {
    auto b = BasisSpec::build(box1(), 8);
    const double amp = 1.4, width = 0.21;
    auto t = KernelTables::build(KernelSpec::gaussian(amp, width), b);
    SpectralField f = oracle::random_field(b, 9, 0.5);
    GridField g = evaluate(f);
    const int n = b->grid_size(0);
    const double h = b->spacing(0);
    const double delta = 1e-5;
    for (int q = 0; q < n; ++q) {
        const double x = b->node(0, q);
        // d/dx of the quadrature-level (J*phi) with J evaluated analytically
        double plus = 0.0, minus = 0.0, grad = 0.0;
        for (int p = 0; p < n; ++p) {
            const double y = b->node(0, p);
            auto J = [&](double z) { return amp * std::exp(-z * z / (2.0 * width * width)); };
            plus += J(x + delta - y) * g.values[static_cast<size_t>(p)];
            minus += J(x - delta - y) * g.values[static_cast<size_t>(p)];
            const int off = q - p;
            grad += t.gradient_at(0, {&off, 1}) * g.values[static_cast<size_t>(p)];
        }
        const double fd = h * (plus - minus) / (2.0 * delta);
        CHECK(std::abs(fd - h * grad) < 1e-8 * std::max(1.0, std::abs(fd)));
    }
}
