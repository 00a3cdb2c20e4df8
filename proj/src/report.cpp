#include "nlch/report.hpp"

#include <fstream>
#include <sstream>

namespace nlch {

using nlohmann::json;

json provenance(const RunConfig& rc) {
    json p;
    p["config_hash"] = rc.hash();
    p["master_seed"] = rc.master_seed;
    p["dt"] = rc.solver.dt;
    p["horizon"] = rc.solver.horizon;
    p["modes"] = rc.solver.modes;
    p["dim"] = rc.solver.domain.dim;
    return p;
}

json to_json(const KqReport& rep) {
    return json{{"partial_sum", rep.partial_sum}, {"block_ratio", rep.block_ratio},
                {"depth", rep.depth},             {"decaying", rep.decaying},
                {"gating", rep.gating},           {"pass", rep.pass}};
}

json to_json(const EnergyLedger& led) {
    json j;
    j["times"] = led.times;
    j["z"] = led.z;
    j["drift_work"] = led.drift_work;
    j["martingale"] = led.martingale;
    j["ito_correction"] = led.ito_correction;
    j["residual"] = led.residual;
    j["residual_at_horizon"] = led.residual_at_horizon();
    return j;
}

json to_json(const MomentReport& rep) {
    json rows = json::array();
    for (const auto& row : rep.rows) {
        json r;
        r["m"] = row.m;
        r["paths"] = row.paths;
        r["blowups"] = row.blowups;
        for (int i = 0; i < 5; ++i) {
            r[MomentReport::names()[static_cast<size_t>(i)]] = {
                {"mean", row.functionals[static_cast<size_t>(i)].mean},
                {"half_width", row.functionals[static_cast<size_t>(i)].half_width}};
        }
        rows.push_back(std::move(r));
    }
    json j;
    j["rows"] = std::move(rows);
    for (int i = 0; i < 5; ++i)
        j["max_over_median"][MomentReport::names()[static_cast<size_t>(i)]] =
            rep.max_over_median[static_cast<size_t>(i)];
    j["non_explosion_pass"] = rep.non_explosion_pass;
    j["valid"] = rep.valid;
    j["notes"]["holder_2_5_Vdual"] =
        "sampled-pair lower estimator of the Holder seminorm (pair window applies)";
    j["notes"]["non_explosion"] =
        "factor-2 max/median proxy across the mode ladder for uniform-in-m boundedness";
    return j;
}

json to_json(const WeakReport& rep) {
    json pairs = json::array();
    for (const auto& p : rep.pairs) {
        pairs.push_back({{"xi", p.xi_index},
                         {"v", p.v_index},
                         {"lhs_re", p.lhs.real()},
                         {"lhs_im", p.lhs.imag()},
                         {"rhs_re", p.rhs.real()},
                         {"rhs_im", p.rhs.imag()},
                         {"discrepancy", p.discrepancy},
                         {"stat_band", p.stat_band}});
    }
    return json{{"pairs", std::move(pairs)},
                {"paths", rep.paths},
                {"dt", rep.dt},
                {"config_hash", rep.config_hash},
                {"max_discrepancy", rep.max_discrepancy()}};
}

json to_json(const StrongReport& rep, const std::vector<std::string>& battery_names) {
    json residuals = json::array();
    for (size_t i = 0; i < rep.residuals.size(); ++i)
        residuals.push_back({{"v", i < battery_names.size() ? battery_names[i] : std::to_string(i)},
                             {"residual", rep.residuals[i]}});
    return json{{"residuals", std::move(residuals)},
                {"ic_mismatch", rep.ic_mismatch},
                {"max_residual", rep.max_residual()}};
}

json to_json(const GronwallReport& rep) {
    return json{{"K", rep.K},
                {"slack", rep.slack},
                {"tol", rep.tol},
                {"g_initial", rep.g.empty() ? 0.0 : rep.g.front()},
                {"g_final", rep.g.empty() ? 0.0 : rep.g.back()},
                {"per_step_pass", rep.per_step_pass},
                {"first_violation", rep.first_violation},
                {"endpoint_bound", rep.endpoint_bound},
                {"endpoint_pass", rep.endpoint_pass}};
}

namespace {

void render(const json& j, const std::string& prefix, std::ostringstream& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            render(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    } else if (j.is_array()) {
        if (j.size() > 12) {
            out << "  " << prefix << " = [" << j.size() << " values]\n";
        } else {
            size_t i = 0;
            for (const auto& v : j) render(v, prefix + "[" + std::to_string(i++) + "]", out);
        }
    } else {
        std::string key = prefix;
        key.resize(std::max<size_t>(key.size(), 40), ' ');
        out << "  " << key << " " << j.dump() << "\n";
    }
}

} // namespace

std::string render_text(const json& j) {
    std::ostringstream out;
    render(j, "", out);
    return out.str();
}

void write_report(const json& j, const std::string& file) {
    std::ofstream out(file);
    if (!out) throw IoError("cannot write report: " + file);
    out << j.dump(2) << "\n";
}

} // namespace nlch
