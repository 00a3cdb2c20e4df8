// Python bindings for the main operations: basis construction, transforms,
// kernel/velocity/noise specs, the solver, and the verification checks.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nlch/config.hpp"
#include "nlch/io.hpp"
#include "nlch/verify.hpp"

namespace py = pybind11;
using namespace nlch;

namespace {

// pybind11 holders cannot be shared_ptr<const T>; expose the immutable basis
// through a small value wrapper instead.
struct PyBasis {
    std::shared_ptr<const BasisSpec> p;
};

SpectralField make_field(const PyBasis& basis, std::vector<double> coeffs) {
    SpectralField f = zero_field(basis.p);
    if (coeffs.size() > f.coeffs.size()) throw ConfigError("too many coefficients for the basis");
    std::copy(coeffs.begin(), coeffs.end(), f.coeffs.begin());
    return f;
}

std::vector<std::vector<double>> trajectory_coefficients(const Trajectory& t) {
    std::vector<std::vector<double>> out;
    out.reserve(t.states.size());
    for (const auto& s : t.states) out.push_back(s.coeffs);
    return out;
}

} // namespace

PYBIND11_MODULE(_nlch, m) {
    m.doc() = "spectral-Galerkin simulator and statistical verification harness for the "
              "stochastic nonlocal convective Cahn-Hilliard equation";

    py::register_exception<AssumptionViolation>(m, "AssumptionViolation");
    py::register_exception<ConfigError>(m, "ConfigurationError");
    py::register_exception<IoError>(m, "IoError");

    py::class_<Domain>(m, "Domain")
        .def(py::init([](int dim, std::vector<double> lengths) {
                 Domain d;
                 d.dim = dim;
                 for (size_t i = 0; i < lengths.size() && i < 3; ++i) d.lengths[i] = lengths[i];
                 d.validate();
                 return d;
             }),
             py::arg("dim"), py::arg("lengths"))
        .def_readonly("dim", &Domain::dim)
        .def("length", &Domain::length)
        .def("volume", &Domain::volume);

    py::class_<PyBasis>(m, "BasisSpec")
        .def_property_readonly("mode_count", [](const PyBasis& b) { return b.p->mode_count(); })
        .def_property_readonly("dim", [](const PyBasis& b) { return b.p->dim(); })
        .def("eigenvalue", [](const PyBasis& b, int i) { return b.p->eigenvalue(i); })
        .def("eigenvalues",
             [](const PyBasis& b) {
                 return std::vector<double>(b.p->eigenvalues().begin(), b.p->eigenvalues().end());
             })
        .def("mode",
             [](const PyBasis& b, int i) {
                 std::vector<int> k;
                 for (int axis = 0; axis < b.p->dim(); ++axis)
                     k.push_back(b.p->mode(i)[static_cast<size_t>(axis)]);
                 return k;
             })
        .def("grid_size", [](const PyBasis& b, int axis) { return b.p->grid_size(axis); })
        .def_property_readonly("total_nodes", [](const PyBasis& b) { return b.p->total_nodes(); });

    m.def(
        "build_basis",
        [](const Domain& d, int modes, int padding) {
            BasisOptions opt;
            opt.padding = padding;
            return PyBasis{BasisSpec::build(d, modes, opt)};
        },
        py::arg("domain"), py::arg("modes"), py::arg("padding") = 2);
    m.def("enumerate_eigenvalues", &enumerate_eigenvalues, py::arg("domain"), py::arg("count"));

    py::class_<SpectralField>(m, "SpectralField")
        .def(py::init(&make_field), py::arg("basis"), py::arg("coeffs"))
        .def_readonly("coeffs", &SpectralField::coeffs)
        .def_property_readonly("basis", [](const SpectralField& f) { return PyBasis{f.basis}; });

    py::class_<GridField>(m, "GridField").def_readonly("values", &GridField::values);

    m.def("evaluate", &evaluate);
    m.def("project", py::overload_cast<const GridField&, int>(&project), py::arg("values"),
          py::arg("target_m"));
    m.def("project_full", py::overload_cast<const GridField&>(&project));
    m.def("gradient_evaluate", &gradient_evaluate);
    m.def("sobolev_norm", &sobolev_norm, py::arg("field"), py::arg("s"));
    m.def("gradient_norm", &gradient_norm);
    m.def("l4_norm", &l4_norm);

    py::enum_<ConvBackend>(m, "ConvBackend")
        .value("direct", ConvBackend::Direct)
        .value("fft_padded", ConvBackend::FftPadded);

    py::class_<KernelSpec>(m, "KernelSpec")
        .def_static("constant", &KernelSpec::constant, py::arg("level"))
        .def_static("gaussian", &KernelSpec::gaussian, py::arg("amplitude"), py::arg("width"))
        .def_static("table", &KernelSpec::table, py::arg("shape"), py::arg("values"));
    m.def("import_kernel_table", &import_kernel_table, py::arg("path"));

    py::class_<KernelTables>(m, "KernelTables")
        .def_static(
            "build",
            [](const KernelSpec& spec, const PyBasis& basis) {
                return KernelTables::build(spec, basis.p);
            },
            py::arg("spec"), py::arg("basis"))
        .def_property_readonly("l1_kernel", &KernelTables::l1_kernel)
        .def_property_readonly("l1_gradient", &KernelTables::l1_gradient)
        .def("convolve", &KernelTables::convolve, py::arg("phi"), py::arg("backend"));
    m.def("coefficient_a", &coefficient_a);
    m.def("validate_c0", &validate_c0);
    m.def("potential_eval", &potential_eval, py::arg("s"), py::arg("order"));

    py::class_<VelocitySpec>(m, "VelocitySpec")
        .def_static("zero", &VelocitySpec::zero)
        .def_static("stream_vortex", &VelocitySpec::stream_vortex, py::arg("amplitude"));
    py::class_<VelocityField>(m, "VelocityField")
        .def_readonly("sup_norm", &VelocityField::sup_norm)
        .def_readonly("max_divergence", &VelocityField::max_divergence)
        .def_readonly("boundary_trace", &VelocityField::boundary_trace);
    m.def(
        "velocity_eval",
        [](const VelocitySpec& spec, const PyBasis& basis) { return velocity_eval(spec, basis.p); },
        py::arg("spec"), py::arg("basis"));

    py::class_<NoiseSpec>(m, "NoiseSpec")
        .def_static("power_law", &NoiseSpec::power_law, py::arg("sigma2"), py::arg("q"),
                    py::arg("master_seed"))
        .def_static("explicit_list", &NoiseSpec::explicit_list, py::arg("thetas"),
                    py::arg("master_seed"))
        .def("thetas_for", [](const NoiseSpec& s, const PyBasis& b) { return s.thetas_for(*b.p); });

    py::class_<KqReport>(m, "KqReport")
        .def_readonly("partial_sum", &KqReport::partial_sum)
        .def_readonly("block_ratio", &KqReport::block_ratio)
        .def_readonly("decaying", &KqReport::decaying)
        .def_readonly("gating", &KqReport::gating)
        .def_readonly("pass_", &KqReport::pass);
    m.def(
        "validate_kq",
        [](const NoiseSpec& spec, const PyBasis& basis, int depth) {
            return validate_kq(spec, *basis.p, depth);
        },
        py::arg("spec"), py::arg("basis"), py::arg("probe_depth"));

    py::class_<WienerPath>(m, "WienerPath")
        .def_readonly("steps", &WienerPath::steps)
        .def_readonly("modes", &WienerPath::modes)
        .def_readonly("dt", &WienerPath::dt)
        .def_readonly("master_seed", &WienerPath::master_seed)
        .def_readonly("path_index", &WienerPath::path_index)
        .def_readonly("increments", &WienerPath::increments)
        .def("inc", &WienerPath::inc);
    m.def(
        "sample_path",
        [](const NoiseSpec& spec, const PyBasis& basis, int steps, double dt, std::uint64_t idx) {
            return sample_path(spec, *basis.p, steps, dt, idx);
        },
        py::arg("spec"), py::arg("basis"), py::arg("steps"), py::arg("dt"), py::arg("path_index"));
    m.def("coarsen_path", &coarsen_path, py::arg("path"), py::arg("factor"));
    m.def("path_cumsum", &path_cumsum);
    m.def("export_path_csv", &export_path_csv);
    m.def("import_path_csv", &import_path_csv);

    py::class_<TestFunction>(m, "TestFunction")
        .def_readonly("mode", &TestFunction::mode)
        .def_readonly("name", &TestFunction::name)
        .def_readonly("horizon", &TestFunction::horizon);
    m.def("make_test_function", &make_test_function, py::arg("profile"), py::arg("mode"),
          py::arg("horizon"));
    m.def("white_noise_pairing", &white_noise_pairing, py::arg("path"), py::arg("v"));
    m.def(
        "wiener_char_functional",
        [](const TestFunction& v, const NoiseSpec& spec, const PyBasis& basis, double T) {
            return wiener_char_functional(v, spec, *basis.p, T);
        },
        py::arg("v"), py::arg("spec"), py::arg("basis"), py::arg("horizon"));

    py::enum_<Stepper>(m, "Stepper")
        .value("em", Stepper::EulerMaruyama)
        .value("imex", Stepper::Imex);

    py::class_<IcSpec>(m, "IcSpec")
        .def_static(
            "deterministic",
            [](std::vector<double> coeffs) {
                IcSpec ic;
                ic.coeffs = std::move(coeffs);
                return ic;
            },
            py::arg("coeffs"))
        .def_static(
            "gaussian",
            [](std::vector<double> mean, double var_sigma2, double var_p) {
                IcSpec ic;
                ic.family = IcSpec::Family::Gaussian;
                ic.mean = std::move(mean);
                ic.var_power_law = true;
                ic.var_sigma2 = var_sigma2;
                ic.var_p = var_p;
                return ic;
            },
            py::arg("mean"), py::arg("var_sigma2"), py::arg("var_p"))
        .def(
            "realize",
            [](const IcSpec& ic, const PyBasis& basis, std::uint64_t seed, std::uint64_t idx) {
                return ic.realize(basis.p, seed, idx);
            },
            py::arg("basis"), py::arg("master_seed"), py::arg("path_index"));

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("domain", &SolverConfig::domain)
        .def_readwrite("modes", &SolverConfig::modes)
        .def_readwrite("kernel", &SolverConfig::kernel)
        .def_readwrite("velocity", &SolverConfig::velocity)
        .def_readwrite("noise", &SolverConfig::noise)
        .def_readwrite("horizon", &SolverConfig::horizon)
        .def_readwrite("dt", &SolverConfig::dt)
        .def_readwrite("stepper", &SolverConfig::stepper)
        .def_readwrite("stabilization", &SolverConfig::stabilization)
        .def_readwrite("blowup_threshold", &SolverConfig::blowup_threshold)
        .def_readwrite("record_stride", &SolverConfig::record_stride)
        .def_readwrite("linearized", &SolverConfig::linearized);

    py::class_<SolverContext>(m, "SolverContext")
        .def_static("create", &SolverContext::create, py::arg("config"))
        .def_property_readonly("basis", [](const SolverContext& c) { return PyBasis{c.basis_ptr()}; })
        .def_property_readonly("c0", &SolverContext::c0)
        .def_property_readonly("stabilization", &SolverContext::stabilization)
        .def_property_readonly("steps", &SolverContext::steps)
        .def_property_readonly("config_hash", &SolverContext::config_hash)
        .def_property_readonly("kq", &SolverContext::kq);

    py::class_<Trajectory> traj(m, "Trajectory");
    py::enum_<Trajectory::Status>(traj, "Status")
        .value("completed", Trajectory::Status::Completed)
        .value("blowup", Trajectory::Status::Blowup);
    traj.def_readonly("times", &Trajectory::times)
        .def_readonly("status", &Trajectory::status)
        .def_readonly("blowup_step", &Trajectory::blowup_step)
        .def_readonly("path", &Trajectory::path)
        .def_readonly("config_hash", &Trajectory::config_hash)
        .def_property_readonly("coefficients", &trajectory_coefficients)
        .def("completed", &Trajectory::completed);

    m.def("drift", &drift, py::arg("phi"), py::arg("ctx"));
    m.def("simulate", &simulate, py::arg("ctx"), py::arg("phi0"), py::arg("path_index"));
    m.def("simulate_with_path", &simulate_with_path, py::arg("ctx"), py::arg("phi0"),
          py::arg("path"));
    m.def("export_trajectory_csv", &export_trajectory_csv);

    m.def("energy", &energy, py::arg("phi"), py::arg("ctx"));
    py::class_<EnergyLedger>(m, "EnergyLedger")
        .def_readonly("times", &EnergyLedger::times)
        .def_readonly("z", &EnergyLedger::z)
        .def_readonly("drift_work", &EnergyLedger::drift_work)
        .def_readonly("martingale", &EnergyLedger::martingale)
        .def_readonly("ito_correction", &EnergyLedger::ito_correction)
        .def_readonly("residual", &EnergyLedger::residual)
        .def("residual_at_horizon", &EnergyLedger::residual_at_horizon);
    m.def("energy_identity_residual", &energy_identity_residual, py::arg("traj"), py::arg("ctx"));
    m.def("gradient_mu_norm", &gradient_mu_norm, py::arg("traj"), py::arg("ctx"));

    m.def("c_functional", &c_functional, py::arg("traj"), py::arg("v"), py::arg("phi0"),
          py::arg("ctx"));

    py::class_<StrongReport>(m, "StrongReport")
        .def_readonly("residuals", &StrongReport::residuals)
        .def_readonly("ic_mismatch", &StrongReport::ic_mismatch)
        .def("max_residual", &StrongReport::max_residual);
    m.def(
        "strong_residual",
        [](const Trajectory& traj, const WienerPath& path, const SpectralField& phi0,
           const std::vector<TestFunction>& battery, const SolverContext& ctx, double eps) {
            return strong_residual(traj, path, phi0, battery, ctx, eps);
        },
        py::arg("traj"), py::arg("path"), py::arg("phi0"), py::arg("battery"), py::arg("ctx"),
        py::arg("eps") = 0.1);

    py::class_<WeakPair>(m, "WeakPair")
        .def_readonly("xi_index", &WeakPair::xi_index)
        .def_readonly("v_index", &WeakPair::v_index)
        .def_readonly("lhs", &WeakPair::lhs)
        .def_readonly("rhs", &WeakPair::rhs)
        .def_readonly("discrepancy", &WeakPair::discrepancy)
        .def_readonly("stat_band", &WeakPair::stat_band);
    py::class_<WeakReport>(m, "WeakReport")
        .def_readonly("pairs", &WeakReport::pairs)
        .def_readonly("paths", &WeakReport::paths)
        .def("max_discrepancy", &WeakReport::max_discrepancy);
    m.def(
        "weak_solution_check",
        [](const SolverConfig& config, const IcSpec& ic, const std::vector<SpectralField>& xis,
           const std::vector<TestFunction>& battery, int paths) {
            return weak_solution_check(config, ic, xis, battery, paths);
        },
        py::arg("config"), py::arg("ic"), py::arg("xis"), py::arg("battery"), py::arg("paths"));

    py::class_<GronwallReport>(m, "GronwallReport")
        .def_readonly("K", &GronwallReport::K)
        .def_readonly("g", &GronwallReport::g)
        .def_readonly("per_step_pass", &GronwallReport::per_step_pass)
        .def_readonly("endpoint_pass", &GronwallReport::endpoint_pass)
        .def_readonly("endpoint_bound", &GronwallReport::endpoint_bound);
    m.def("uniqueness_gronwall", &uniqueness_gronwall, py::arg("a"), py::arg("b"), py::arg("ctx"),
          py::arg("slack") = 0.1);
    m.def("gronwall_constant", &gronwall_constant, py::arg("l1_grad_kernel"), py::arg("u_sup"),
          py::arg("c0"));

    py::class_<MomentReport>(m, "MomentReport")
        .def_readonly("non_explosion_pass", &MomentReport::non_explosion_pass)
        .def_readonly("valid", &MomentReport::valid)
        .def_property_readonly("max_over_median", [](const MomentReport& r) {
            return std::vector<double>(r.max_over_median.begin(), r.max_over_median.end());
        });
    m.def(
        "estimate_moments",
        [](const SolverConfig& base, const IcSpec& ic, const std::vector<int>& m_list, int paths) {
            return estimate_moments(base, ic, m_list, paths);
        },
        py::arg("config"), py::arg("ic"), py::arg("m_list"), py::arg("paths"));
}
