/// @file experiment.hpp
/// @brief Reproducible experiment pipelines behind the command-line tool.
///
/// Each pipeline returns a Report: ordered records that carry their full
/// configuration next to every number. Writers render a Report as CSV
/// (table cells rounded to three decimals) or JSON (raw values).

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mac3/lfa_symbols.hpp"
#include "mac3/lfa_twogrid.hpp"
#include "mac3/mac.hpp"

namespace mac3 {

enum class OutputFormat { Csv, Json };

OutputFormat parse_format(std::string_view name);
BoundaryMode parse_bc(std::string_view name);
std::string_view to_string(BoundaryMode bc);

/// Where a parameter set is used: LFA tables or measured multigrid runs.
/// They differ only for QDR, whose measured runs use alpha = 0.7.
enum class ParamContext { Lfa, Measured };

struct ExperimentConfig {
    /// "all" or a scheme name.
    std::string scheme = "all";
    Restriction transfer = Restriction::P25T;
    std::vector<int> nu = {1, 2, 3, 4};
    int n = 81;
    BoundaryMode bc = BoundaryMode::Dirichlet;
    std::optional<double> omega, alpha, sigma, omega_j;
    int resolution = 81;
    std::uint64_t seed = 1;
    int max_iters = 200;

    void validate() const;
};

/// Default parameters of a scheme, then the config's overrides.
RelaxParams default_params(Scheme s, ParamContext ctx);
RelaxParams resolve_params(const ExperimentConfig& cfg, Scheme s, ParamContext ctx);

/// Schemes selected by cfg.scheme; "all" expands to `all`.
std::vector<Scheme> selected_schemes(const ExperimentConfig& cfg,
                                     const std::vector<Scheme>& all);

using Record = nlohmann::ordered_json;

struct Report {
    std::string command;
    std::vector<std::string> columns;  // CSV columns, in order
    std::vector<Record> records;
    /// Set when some cell failed numerically (e.g. a diverged run).
    bool numerical_failure = false;
};

/// Analytic optimum next to the sampled smoothing factor at those parameters.
Report run_smooth_opt(const ExperimentConfig& cfg);
/// Two-grid LFA row rho_h(nu) for each selected scheme.
Report run_twogrid_lfa(const ExperimentConfig& cfg);
/// Measured two-grid and V-cycle rho_m beside the LFA prediction.
Report run_mg(const ExperimentConfig& cfg);
/// run_mg on cfg.bc plus a periodic two-grid validation against the exact
/// lattice LFA.
Report run_compare(const ExperimentConfig& cfg);

struct SelftestCheck {
    std::string name;
    double value = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

/// Fast consistency checks of the analytic, sampled and measured paths.
std::vector<SelftestCheck> run_selftest();
Report selftest_report(const std::vector<SelftestCheck>& checks);

std::string to_csv(const Report& r);
std::string to_json(const Report& r);

}  // namespace mac3
