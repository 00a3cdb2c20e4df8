#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlch/solver.hpp"
#include "nlch/test_function.hpp"

namespace nlch {

struct BatterySpec {
    std::vector<int> modes{1, 2, 3};
    std::vector<std::string> profiles{"linear", "quadratic", "cos_ramp"};
};

struct XiEntry {
    int mode = 1;
    double amplitude = 1.0;
    std::vector<double> coeffs; // explicit coefficient vector variant
    bool has_coeffs = false;
};

struct VerifyParams {
    int paths = 10000;
    double eps = 0.1; // H^{-eps} weight exponent, in (0, 1/4)
    int holder_window = 512;
    std::vector<int> m_ladder{4, 8, 16, 32};
    int energy_halvings = 3;
    double gronwall_delta = 1e-3;
    int gronwall_seeds = 10;
    double gronwall_slack = 0.1;
    int moment_paths = 200;
    int moment_record_stride = 10;
};

struct OutputSpec {
    std::string dir = "out";
    bool gnuplot = false;
    std::string trajectory_format = "csv"; // csv | binary | both
};

// The structured-text run configuration (see docs/config_schema.md). Parsing
// is strict: unknown keys anywhere are rejected, and the resolved document
// (all defaults filled in) is what gets hashed and echoed into every report.
struct RunConfig {
    SolverConfig solver;
    IcSpec ic;
    BatterySpec battery;
    std::vector<XiEntry> xis{XiEntry{}};
    VerifyParams verify;
    OutputSpec output;
    std::uint64_t master_seed = 0;

    static RunConfig from_file(const std::string& path);
    static RunConfig from_json_text(const std::string& text);

    nlohmann::json resolved() const;
    std::uint64_t hash() const;

    std::vector<TestFunction> make_battery() const;
    std::vector<SpectralField> make_xis(const std::shared_ptr<const BasisSpec>& basis) const;
};

std::uint64_t fnv1a64(const std::string& bytes);

} // namespace nlch
