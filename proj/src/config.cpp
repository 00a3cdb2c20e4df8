#include "nlch/config.hpp"

#include <fstream>
#include <set>

#include "nlch/io.hpp"

namespace nlch {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.contains(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
    if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("bad value for '" + key + "': " + e.what());
    }
}

Domain parse_domain(const json& j) {
    reject_unknown(j, "domain", {"dim", "lengths"});
    Domain d;
    d.dim = get_or<int>(j, "dim", 1);
    auto lengths = get_or<std::vector<double>>(j, "lengths", {1.0});
    if (static_cast<int>(lengths.size()) != d.dim)
        throw ConfigError("domain.lengths must have dim entries");
    for (int i = 0; i < d.dim; ++i) d.lengths[static_cast<size_t>(i)] = lengths[static_cast<size_t>(i)];
    d.validate();
    return d;
}

KernelSpec parse_kernel(const json& j) {
    reject_unknown(j, "kernel", {"family", "level", "amplitude", "width", "path"});
    const std::string family = get_or<std::string>(j, "family", "constant");
    if (family == "constant") return KernelSpec::constant(get_or<double>(j, "level", 2.5));
    if (family == "gaussian")
        return KernelSpec::gaussian(get_or<double>(j, "amplitude", 1.0),
                                    get_or<double>(j, "width", 0.25));
    if (family == "table") {
        if (!j.contains("path")) throw ConfigError("kernel table family needs a 'path'");
        return import_kernel_table(j.at("path").get<std::string>());
    }
    throw ConfigError("unknown kernel family: " + family);
}

VelocitySpec parse_velocity(const json& j) {
    reject_unknown(j, "velocity", {"family", "amplitude"});
    const std::string family = get_or<std::string>(j, "family", "zero");
    if (family == "zero") return VelocitySpec::zero();
    if (family == "stream_vortex")
        return VelocitySpec::stream_vortex(get_or<double>(j, "amplitude", 1.0));
    throw ConfigError("unknown velocity family: " + family);
}

NoiseSpec parse_noise(const json& j, std::uint64_t master_seed) {
    reject_unknown(j, "noise", {"family", "sigma2", "q", "thetas"});
    const std::string family = get_or<std::string>(j, "family", "power_law");
    if (family == "power_law")
        return NoiseSpec::power_law(get_or<double>(j, "sigma2", 0.01), get_or<double>(j, "q", 2.0),
                                    master_seed);
    if (family == "explicit")
        return NoiseSpec::explicit_list(get_or<std::vector<double>>(j, "thetas", {}), master_seed);
    throw ConfigError("unknown noise family: " + family);
}

IcSpec parse_ic(const json& j) {
    reject_unknown(j, "ic", {"family", "coeffs", "mean", "var"});
    IcSpec ic;
    const std::string family = get_or<std::string>(j, "family", "deterministic");
    if (family == "deterministic") {
        ic.family = IcSpec::Family::Deterministic;
        ic.coeffs = get_or<std::vector<double>>(j, "coeffs", {});
        return ic;
    }
    if (family != "gaussian") throw ConfigError("unknown ic family: " + family);
    ic.family = IcSpec::Family::Gaussian;
    if (j.contains("mean")) {
        if (j.at("mean").is_number()) {
            // scalar mean = spatially uniform mean state
            ic.mean_is_uniform = true;
            ic.mean_value = j.at("mean").get<double>();
        } else {
            ic.mean = j.at("mean").get<std::vector<double>>();
        }
    }
    if (j.contains("var")) {
        const json& v = j.at("var");
        if (v.is_array()) {
            ic.var_power_law = false;
            ic.var = v.get<std::vector<double>>();
        } else {
            reject_unknown(v, "ic.var", {"sigma2", "p"});
            ic.var_power_law = true;
            ic.var_sigma2 = get_or<double>(v, "sigma2", 0.0);
            ic.var_p = get_or<double>(v, "p", 2.0);
        }
    }
    return ic;
}

Stepper parse_stepper_scheme(const std::string& s) {
    if (s == "em") return Stepper::EulerMaruyama;
    if (s == "imex") return Stepper::Imex;
    throw ConfigError("unknown stepper scheme: " + s);
}

} // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");
    reject_unknown(j, "config root",
                   {"schema", "master_seed", "domain", "basis", "kernel", "velocity", "noise",
                    "ic", "time", "stepper", "battery", "xis", "verify", "output"});
    const std::string schema = get_or<std::string>(j, "schema", "");
    if (schema != "nlch-config/1")
        throw ConfigError("config schema must be 'nlch-config/1'");

    RunConfig rc;
    rc.master_seed = get_or<std::uint64_t>(j, "master_seed", 0);

    if (j.contains("domain")) rc.solver.domain = parse_domain(j.at("domain"));

    if (j.contains("basis")) {
        const json& b = j.at("basis");
        reject_unknown(b, "basis", {"modes", "padding", "max_grid_nodes"});
        rc.solver.modes = get_or<int>(b, "modes", 8);
        rc.solver.basis_options.padding = get_or<int>(b, "padding", 2);
        rc.solver.basis_options.max_grid_nodes =
            get_or<std::int64_t>(b, "max_grid_nodes", std::int64_t{1} << 24);
    }

    if (j.contains("kernel")) rc.solver.kernel = parse_kernel(j.at("kernel"));
    if (j.contains("velocity")) rc.solver.velocity = parse_velocity(j.at("velocity"));
    rc.solver.noise = j.contains("noise") ? parse_noise(j.at("noise"), rc.master_seed)
                                          : NoiseSpec::power_law(0.01, 2.0, rc.master_seed);
    if (j.contains("ic")) rc.ic = parse_ic(j.at("ic"));

    if (j.contains("time")) {
        const json& t = j.at("time");
        reject_unknown(t, "time", {"horizon", "dt"});
        rc.solver.horizon = get_or<double>(t, "horizon", 0.5);
        rc.solver.dt = get_or<double>(t, "dt", 1e-4);
    }

    if (j.contains("stepper")) {
        const json& s = j.at("stepper");
        reject_unknown(s, "stepper",
                       {"scheme", "stabilization", "blowup_threshold", "record_stride",
                        "conv_backend", "linearized"});
        rc.solver.stepper = parse_stepper_scheme(get_or<std::string>(s, "scheme", "imex"));
        if (s.contains("stabilization") && !s.at("stabilization").is_null())
            rc.solver.stabilization = s.at("stabilization").get<double>();
        rc.solver.blowup_threshold = get_or<double>(s, "blowup_threshold", 1e6);
        rc.solver.record_stride = get_or<int>(s, "record_stride", 1);
        const std::string backend = get_or<std::string>(s, "conv_backend", "auto");
        if (backend == "direct") rc.solver.conv_backend = ConvBackend::Direct;
        else if (backend == "fft_padded") rc.solver.conv_backend = ConvBackend::FftPadded;
        else if (backend != "auto") throw ConfigError("unknown conv_backend: " + backend);
        rc.solver.linearized = get_or<bool>(s, "linearized", false);
    }

    if (j.contains("battery")) {
        const json& b = j.at("battery");
        reject_unknown(b, "battery", {"modes", "profiles"});
        rc.battery.modes = get_or<std::vector<int>>(b, "modes", {1, 2, 3});
        rc.battery.profiles = get_or<std::vector<std::string>>(
            b, "profiles", {"linear", "quadratic", "cos_ramp"});
    }

    if (j.contains("xis")) {
        rc.xis.clear();
        for (const json& x : j.at("xis")) {
            reject_unknown(x, "xis[]", {"mode", "amplitude", "coeffs"});
            XiEntry e;
            if (x.contains("coeffs")) {
                e.coeffs = x.at("coeffs").get<std::vector<double>>();
                e.has_coeffs = true;
            } else {
                e.mode = get_or<int>(x, "mode", 1);
                e.amplitude = get_or<double>(x, "amplitude", 1.0);
            }
            rc.xis.push_back(std::move(e));
        }
    }

    if (j.contains("verify")) {
        const json& v = j.at("verify");
        reject_unknown(v, "verify",
                       {"paths", "eps", "holder_window", "m_ladder",
                        "kq_probe_depth", "energy_halvings", "gronwall_delta", "gronwall_seeds",
                        "gronwall_slack", "moment_paths", "moment_record_stride"});
        rc.verify.paths = get_or<int>(v, "paths", 10000);
        rc.verify.eps = get_or<double>(v, "eps", 0.1);
        rc.verify.holder_window = get_or<int>(v, "holder_window", 512);
        rc.verify.m_ladder = get_or<std::vector<int>>(v, "m_ladder", {4, 8, 16, 32});
        rc.solver.kq_probe_depth = get_or<int>(v, "kq_probe_depth", 4096);
        rc.verify.energy_halvings = get_or<int>(v, "energy_halvings", 3);
        rc.verify.gronwall_delta = get_or<double>(v, "gronwall_delta", 1e-3);
        rc.verify.gronwall_seeds = get_or<int>(v, "gronwall_seeds", 10);
        rc.verify.gronwall_slack = get_or<double>(v, "gronwall_slack", 0.1);
        rc.verify.moment_paths = get_or<int>(v, "moment_paths", 200);
        rc.verify.moment_record_stride = get_or<int>(v, "moment_record_stride", 10);
        if (!(rc.verify.eps > 0.0 && rc.verify.eps < 0.25))
            throw ConfigError("verify.eps must lie in (0, 1/4)");
    }

    if (j.contains("output")) {
        const json& o = j.at("output");
        reject_unknown(o, "output", {"dir", "gnuplot", "trajectory_format"});
        rc.output.dir = get_or<std::string>(o, "dir", "out");
        rc.output.gnuplot = get_or<bool>(o, "gnuplot", false);
        rc.output.trajectory_format = get_or<std::string>(o, "trajectory_format", "csv");
        if (rc.output.trajectory_format != "csv" && rc.output.trajectory_format != "binary" &&
            rc.output.trajectory_format != "both")
            throw ConfigError("output.trajectory_format must be csv, binary or both");
    }

    rc.solver.validate();
    return rc;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
}

nlohmann::json RunConfig::resolved() const {
    json j;
    j["schema"] = "nlch-config/1";
    j["master_seed"] = master_seed;
    j["domain"]["dim"] = solver.domain.dim;
    std::vector<double> lens(solver.domain.lengths.begin(),
                             solver.domain.lengths.begin() + solver.domain.dim);
    j["domain"]["lengths"] = lens;
    j["basis"]["modes"] = solver.modes;
    j["basis"]["padding"] = solver.basis_options.padding;
    j["basis"]["max_grid_nodes"] = solver.basis_options.max_grid_nodes;

    switch (solver.kernel.family) {
        case KernelFamily::Constant:
            j["kernel"] = {{"family", "constant"}, {"level", solver.kernel.level}};
            break;
        case KernelFamily::Gaussian:
            j["kernel"] = {{"family", "gaussian"},
                           {"amplitude", solver.kernel.amplitude},
                           {"width", solver.kernel.width}};
            break;
        case KernelFamily::Table:
            j["kernel"] = {{"family", "table"},
                           {"shape", solver.kernel.table_shape},
                           {"values_fnv", fnv1a64(std::string(
                                              reinterpret_cast<const char*>(solver.kernel.table_values.data()),
                                              solver.kernel.table_values.size() * sizeof(double)))}};
            break;
    }

    j["velocity"]["family"] =
        solver.velocity.family == VelocitySpec::Family::Zero ? "zero" : "stream_vortex";
    if (solver.velocity.family != VelocitySpec::Family::Zero)
        j["velocity"]["amplitude"] = solver.velocity.amplitude;

    if (solver.noise.family == NoiseFamily::PowerLaw)
        j["noise"] = {{"family", "power_law"}, {"sigma2", solver.noise.sigma2}, {"q", solver.noise.q}};
    else
        j["noise"] = {{"family", "explicit"}, {"thetas", solver.noise.thetas}};

    if (ic.deterministic()) {
        j["ic"] = {{"family", "deterministic"}, {"coeffs", ic.coeffs}};
    } else {
        j["ic"]["family"] = "gaussian";
        if (ic.mean_is_uniform) j["ic"]["mean"] = ic.mean_value;
        else j["ic"]["mean"] = ic.mean;
        if (ic.var_power_law)
            j["ic"]["var"] = {{"sigma2", ic.var_sigma2}, {"p", ic.var_p}};
        else
            j["ic"]["var"] = ic.var;
    }

    j["time"] = {{"horizon", solver.horizon}, {"dt", solver.dt}};
    j["stepper"]["scheme"] = solver.stepper == Stepper::Imex ? "imex" : "em";
    if (solver.stabilization) j["stepper"]["stabilization"] = *solver.stabilization;
    else j["stepper"]["stabilization"] = nullptr;
    j["stepper"]["blowup_threshold"] = solver.blowup_threshold;
    j["stepper"]["record_stride"] = solver.record_stride;
    j["stepper"]["conv_backend"] =
        !solver.conv_backend ? "auto"
                             : (*solver.conv_backend == ConvBackend::Direct ? "direct" : "fft_padded");
    j["stepper"]["linearized"] = solver.linearized;

    j["battery"] = {{"modes", battery.modes}, {"profiles", battery.profiles}};
    j["xis"] = json::array();
    for (const auto& x : xis) {
        if (x.has_coeffs) j["xis"].push_back({{"coeffs", x.coeffs}});
        else j["xis"].push_back({{"mode", x.mode}, {"amplitude", x.amplitude}});
    }
    j["verify"] = {{"paths", verify.paths},
                   {"eps", verify.eps},
                   {"holder_window", verify.holder_window},
                   {"m_ladder", verify.m_ladder},
                   {"kq_probe_depth", solver.kq_probe_depth},
                   {"energy_halvings", verify.energy_halvings},
                   {"gronwall_delta", verify.gronwall_delta},
                   {"gronwall_seeds", verify.gronwall_seeds},
                   {"gronwall_slack", verify.gronwall_slack},
                   {"moment_paths", verify.moment_paths},
                   {"moment_record_stride", verify.moment_record_stride}};
    j["output"] = {{"dir", output.dir},
                   {"gnuplot", output.gnuplot},
                   {"trajectory_format", output.trajectory_format}};
    return j;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::uint64_t RunConfig::hash() const { return fnv1a64(resolved().dump()); }

std::vector<TestFunction> RunConfig::make_battery() const {
    return nlch::make_battery(battery.modes, battery.profiles, solver.horizon);
}

std::vector<SpectralField> RunConfig::make_xis(
    const std::shared_ptr<const BasisSpec>& basis) const {
    std::vector<SpectralField> out;
    for (const auto& x : xis) {
        SpectralField f = zero_field(basis);
        if (x.has_coeffs) {
            if (x.coeffs.size() > f.coeffs.size())
                throw ConfigError("xi has more modes than the basis");
            std::copy(x.coeffs.begin(), x.coeffs.end(), f.coeffs.begin());
        } else {
            if (x.mode < 0 || x.mode >= basis->mode_count())
                throw ConfigError("xi mode out of the basis range");
            f.coeffs[static_cast<size_t>(x.mode)] = x.amplitude;
        }
        out.push_back(std::move(f));
    }
    return out;
}

} // namespace nlch
