#include "mac3/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mac3/errors.hpp"
#include "mac3/lfa_analytic.hpp"
#include "mac3/linalg.hpp"
#include "mac3/multigrid.hpp"

namespace mac3 {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string str(std::string_view s) { return std::string(s); }

std::string rho_column(int nu) { return "rho_nu" + std::to_string(nu); }

}  // namespace

OutputFormat parse_format(std::string_view name) {
    const std::string s = lower(name);
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    throw ConfigError("unknown format '" + str(name) + "' (expected csv or json)");
}

BoundaryMode parse_bc(std::string_view name) {
    const std::string s = lower(name);
    if (s == "periodic") return BoundaryMode::Periodic;
    if (s == "dirichlet") return BoundaryMode::Dirichlet;
    throw ConfigError("unknown boundary mode '" + str(name) + "' (expected periodic or dirichlet)");
}

std::string_view to_string(BoundaryMode bc) {
    return bc == BoundaryMode::Periodic ? "periodic" : "dirichlet";
}

void ExperimentConfig::validate() const {
    if (nu.empty()) throw ConfigError("nu list is empty");
    for (int v : nu) {
        if (v < 1 || v > 16) throw ConfigError("nu values must lie in 1..16");
    }
    if (!valid_grid_size(n) || n < 9) {
        throw ConfigError("n must be 3^k with n >= 9, got " + std::to_string(n));
    }
    if (resolution < 9 || resolution % 3 != 0) {
        throw ConfigError("resolution must be a multiple of 3 and >= 9, got " +
                          std::to_string(resolution));
    }
    if (max_iters < 1) throw ConfigError("max_iters must be positive");
    if (scheme != "all") parse_scheme(scheme);
}

RelaxParams default_params(Scheme s, ParamContext ctx) {
    const double ratio = 36.0 / 47.0;
    switch (s) {
        case Scheme::QDR:
            return ctx == ParamContext::Lfa ? RelaxParams::qdr(1.0, ratio)
                                            : RelaxParams::qdr(0.7, 0.7 * ratio);
        case Scheme::QBSR_EXACT: return RelaxParams::qbsr(1.0, ratio);
        case Scheme::QIBSR: return RelaxParams::qibsr(47.0 / 36.0, 1.0, 0.9);
        case Scheme::QUZAWA: return RelaxParams::quzawa(47.0 / 36.0, 1.0, 15.0 / 32.0);
    }
    throw ConfigError("unknown scheme");
}

RelaxParams resolve_params(const ExperimentConfig& cfg, Scheme s, ParamContext ctx) {
    RelaxParams p = default_params(s, ctx);
    if (cfg.omega) p.omega = *cfg.omega;
    if (cfg.alpha) p.alpha = *cfg.alpha;
    if (cfg.sigma && s == Scheme::QUZAWA) p.sigma = *cfg.sigma;
    if (cfg.omega_j && s == Scheme::QIBSR) p.omega_j = *cfg.omega_j;
    p.validate();
    return p;
}

std::vector<Scheme> selected_schemes(const ExperimentConfig& cfg,
                                     const std::vector<Scheme>& all) {
    if (cfg.scheme == "all") return all;
    return {parse_scheme(cfg.scheme)};
}

namespace {

const std::vector<std::string> kParamColumns = {"omega", "alpha", "sigma", "omega_j"};

void put_params(Record& rec, const RelaxParams& p) {
    rec["scheme"] = str(to_string(p.scheme));
    rec["omega"] = p.omega;
    rec["alpha"] = p.alpha;
    if (p.scheme == Scheme::QUZAWA) {
        rec["sigma"] = p.sigma;
    } else {
        rec["sigma"] = nullptr;
    }
    if (p.scheme == Scheme::QIBSR) {
        rec["omega_j"] = p.omega_j;
    } else {
        rec["omega_j"] = nullptr;
    }
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::vector<std::string> rho_columns(const std::vector<int>& nu) {
    std::vector<std::string> out;
    for (int v : nu) out.push_back(rho_column(v));
    return out;
}

OptimalResult optimum_for(Scheme s) {
    switch (s) {
        case Scheme::QDR: return optimal_qdr();
        case Scheme::QBSR_EXACT: return optimal_qbsr();
        case Scheme::QUZAWA: return optimal_uzawa();
        case Scheme::QIBSR: break;
    }
    throw ConfigError("smooth-opt has no closed form for QIBSR (use QDR, QBSR or QUZAWA)");
}

}  // namespace

Report run_smooth_opt(const ExperimentConfig& cfg) {
    cfg.validate();
    Report rep;
    rep.command = "smooth-opt";
    rep.columns = concat(concat({"scheme"}, kParamColumns),
                         {"resolution", "omega_over_alpha", "mu_exact", "mu_analytic",
                          "mu_sampled", "gap"});
    const double h = 1.0 / cfg.n;
    for (Scheme s : selected_schemes(cfg, {Scheme::QDR, Scheme::QBSR_EXACT, Scheme::QUZAWA})) {
        const OptimalResult opt = optimum_for(s);
        const RelaxParams p = resolve_params(cfg, s, ParamContext::Lfa);
        const SmoothingSweep sw = smoothing_sweep(p, cfg.resolution, h);
        Record rec;
        put_params(rec, p);
        rec["resolution"] = cfg.resolution;
        rec["n"] = cfg.n;
        rec["omega_over_alpha"] =
            opt.omega_over_alpha ? to_string(*opt.omega_over_alpha) : std::string("-");
        rec["mu_exact"] = opt.mu_opt.to_string();
        rec["mu_analytic"] = opt.mu();
        rec["mu_sampled"] = sw.factor;
        rec["gap"] = std::abs(sw.factor - opt.mu());
        rec["argmax"] = {sw.argmax.t1, sw.argmax.t2};
        rec["samples_evaluated"] = sw.evaluated;
        rec["samples_skipped"] = sw.skipped;
        if (opt.omega_interval) {
            rec["omega_interval"] = {opt.omega_interval->first, opt.omega_interval->second};
        }
        rep.records.push_back(std::move(rec));
    }
    return rep;
}

Report run_twogrid_lfa(const ExperimentConfig& cfg) {
    cfg.validate();
    Report rep;
    rep.command = "twogrid-lfa";
    rep.columns = concat(concat(concat({"scheme"}, kParamColumns), {"transfer", "resolution", "mu"}),
                         rho_columns(cfg.nu));
    const double h = 1.0 / cfg.n;
    const TransferPair tp{cfg.transfer};
    for (Scheme s : selected_schemes(cfg, {Scheme::QDR, Scheme::QBSR_EXACT, Scheme::QUZAWA})) {
        const RelaxParams p = resolve_params(cfg, s, ParamContext::Lfa);
        Record rec;
        put_params(rec, p);
        rec["transfer"] = tp.label();
        rec["resolution"] = cfg.resolution;
        rec["n"] = cfg.n;
        rec["mu"] = smoothing_factor(p, cfg.resolution, h);
        Record skipped = Record::object();
        for (int v : cfg.nu) {
            const TwoGridSweep sw = two_grid_sweep(v, 0, p, tp, cfg.resolution, h);
            rec[rho_column(v)] = sw.factor;
            skipped[rho_column(v)] = sw.skipped;
        }
        rec["samples_skipped"] = skipped;
        rep.records.push_back(std::move(rec));
    }
    return rep;
}

namespace {

// Scheme whose LFA two-grid factor serves as the prediction for a measured
// run: the inexact sweep is compared against exact Braess-Sarazin.
RelaxParams prediction_params(const ExperimentConfig& cfg, Scheme s) {
    if (s == Scheme::QIBSR) return default_params(Scheme::QBSR_EXACT, ParamContext::Lfa);
    return resolve_params(cfg, s, ParamContext::Measured);
}

Record base_record(const ExperimentConfig& cfg, const RelaxParams& p, std::string_view kind,
                   BoundaryMode bc) {
    Record rec;
    put_params(rec, p);
    rec["kind"] = str(kind);
    rec["transfer"] = TransferPair{cfg.transfer}.label();
    rec["bc"] = str(to_string(bc));
    rec["n"] = cfg.n;
    rec["seed"] = cfg.seed;
    return rec;
}

void measured_rows(const ExperimentConfig& cfg, Scheme s, BoundaryMode bc,
                   const std::vector<CycleType>& cycles, Report& rep) {
    const RelaxParams p = resolve_params(cfg, s, ParamContext::Measured);
    for (CycleType ct : cycles) {
        const GridHierarchy hier(cfg.n, bc, p, cfg.transfer, ct);
        Record rec = base_record(cfg, p, ct == CycleType::TwoGrid ? "two-grid" : "V-cycle", bc);
        Record runs = Record::object();
        for (int v : cfg.nu) {
            SolveOptions opts;
            opts.nu1 = v;
            opts.seed = cfg.seed;
            opts.max_iters = cfg.max_iters;
            const ConvergenceReport cr = solve(hier, opts);
            rec[rho_column(v)] = cr.rho;
            runs[rho_column(v)] = {{"iterations", cr.iterations},
                                   {"converged", cr.converged},
                                   {"diverged", cr.diverged},
                                   {"residual_norms", cr.residual_norms}};
            if (cr.diverged || !cr.converged) rep.numerical_failure = true;
        }
        rec["runs"] = std::move(runs);
        rep.records.push_back(std::move(rec));
    }
}

std::vector<std::string> mg_columns(const ExperimentConfig& cfg) {
    return concat(concat(concat({"scheme", "kind"}, kParamColumns),
                         {"transfer", "bc", "n", "seed"}),
                  rho_columns(cfg.nu));
}

void mg_rows(const ExperimentConfig& cfg, Report& rep) {
    const double h = 1.0 / cfg.n;
    const TransferPair tp{cfg.transfer};
    for (Scheme s : selected_schemes(cfg, {Scheme::QDR, Scheme::QUZAWA, Scheme::QIBSR})) {
        const RelaxParams lp = prediction_params(cfg, s);
        Record lfa = base_record(cfg, resolve_params(cfg, s, ParamContext::Measured),
                                 "lfa-prediction", cfg.bc);
        lfa["lfa_scheme"] = str(to_string(lp.scheme));
        lfa["lfa_omega"] = lp.omega;
        lfa["lfa_alpha"] = lp.alpha;
        lfa["resolution"] = cfg.resolution;
        for (int v : cfg.nu) lfa[rho_column(v)] = two_grid_convergence_factor(v, 0, lp, tp,
                                                                              cfg.resolution, h);
        rep.records.push_back(std::move(lfa));
        measured_rows(cfg, s, cfg.bc, {CycleType::TwoGrid, CycleType::V}, rep);
    }
}

}  // namespace

Report run_mg(const ExperimentConfig& cfg) {
    cfg.validate();
    Report rep;
    rep.command = "mg-run";
    rep.columns = mg_columns(cfg);
    mg_rows(cfg, rep);
    return rep;
}

Report run_compare(const ExperimentConfig& cfg) {
    cfg.validate();
    Report rep;
    rep.command = "compare";
    rep.columns = mg_columns(cfg);
    mg_rows(cfg, rep);

    // Periodic validation: measured two-grid rate against the exact LFA on
    // the grid's own Fourier lattice.
    const TransferPair tp{cfg.transfer};
    for (Scheme s : selected_schemes(cfg, {Scheme::QDR, Scheme::QUZAWA, Scheme::QIBSR})) {
        const RelaxParams p = resolve_params(cfg, s, ParamContext::Measured);
        Record lfa = base_record(cfg, p, "periodic-lfa", BoundaryMode::Periodic);
        for (int v : cfg.nu) lfa[rho_column(v)] = periodic_lattice_factor(v, 0, p, tp, cfg.n);
        const std::size_t first = rep.records.size();
        measured_rows(cfg, s, BoundaryMode::Periodic, {CycleType::TwoGrid}, rep);
        // rho_m includes the initial transient; the power-iteration rate is
        // the quantity the lattice LFA predicts exactly.
        const GridHierarchy hier(cfg.n, BoundaryMode::Periodic, p, cfg.transfer,
                                 CycleType::TwoGrid);
        Record asym = base_record(cfg, p, "periodic-asymptotic", BoundaryMode::Periodic);
        Record gap = base_record(cfg, p, "periodic-gap", BoundaryMode::Periodic);
        Record asym_gap = base_record(cfg, p, "periodic-asymptotic-gap", BoundaryMode::Periodic);
        for (int v : cfg.nu) {
            const std::string c = rho_column(v);
            const double predicted = lfa[c].get<double>();
            asym[c] = asymptotic_rate(hier, v, 0, 40, 80, cfg.seed);
            gap[c] = std::abs(rep.records[first][c].get<double>() - predicted);
            asym_gap[c] = std::abs(asym[c].get<double>() - predicted);
        }
        rep.records.insert(rep.records.begin() + static_cast<std::ptrdiff_t>(first), lfa);
        rep.records.push_back(std::move(asym));
        rep.records.push_back(std::move(gap));
        rep.records.push_back(std::move(asym_gap));
    }
    return rep;
}

std::vector<SelftestCheck> run_selftest() {
    std::vector<SelftestCheck> checks;
    auto add = [&checks](std::string name, double value, double expected, double tol) {
        checks.push_back({std::move(name), value, expected, tol,
                          std::abs(value - expected) <= tol});
    };
    const double mu_d = 17.0 / 47.0;
    const double mu_u = std::sqrt(17.0 / 47.0);
    add("optimal_qdr", optimal_qdr().mu(), mu_d, 0.0);
    add("optimal_qbsr", optimal_qbsr().mu(), mu_d, 0.0);
    add("optimal_uzawa", optimal_uzawa().mu(), mu_u, 1e-15);
    add("smoothing_qdr_n81", smoothing_factor(default_params(Scheme::QDR, ParamContext::Lfa), 81),
        mu_d, 1e-3);
    add("smoothing_uzawa_n81",
        smoothing_factor(default_params(Scheme::QUZAWA, ParamContext::Lfa), 81), mu_u, 2e-3);

    const double h = 1.0 / 81.0;
    add("twogrid_qbsr_p25t_nu1",
        two_grid_convergence_factor(1, 0, default_params(Scheme::QBSR_EXACT, ParamContext::Lfa),
                                    {Restriction::P25T}, 81, h),
        0.361, 0.01);
    add("twogrid_qdr_r1_nu1",
        two_grid_convergence_factor(1, 0, default_params(Scheme::QDR, ParamContext::Lfa),
                                    {Restriction::R1}, 81, h),
        0.546, 0.01);
    add("twogrid_uzawa_r9_nu2",
        two_grid_convergence_factor(2, 0, default_params(Scheme::QUZAWA, ParamContext::Lfa),
                                    {Restriction::R9}, 81, h),
        0.361, 0.01);

    // Brute-force two-grid matrix on a periodic 9x9 grid against the lattice LFA.
    const RelaxParams ib = default_params(Scheme::QIBSR, ParamContext::Measured);
    const GridHierarchy hier(9, BoundaryMode::Periodic, ib, Restriction::P25T,
                             CycleType::TwoGrid);
    const Eigen::MatrixXd E = gauge_complement_projector(9, BoundaryMode::Periodic) *
                              assemble_two_grid_matrix(hier, 1, 0);
    add("periodic_oracle_qibsr_n9", spectral_radius(E.cast<Complex>()),
        periodic_lattice_factor(1, 0, ib, {Restriction::P25T}, 9), 1e-8);

    add("cost_ratio", cost_ratio(), 2.78, 0.01);
    const GExtrema ge = g_extrema();
    add("g_min", ge.min.value(), 15.0 / 4.0, 0.0);
    add("g_max", ge.max.value(), 8.0, 0.0);
    return checks;
}

Report selftest_report(const std::vector<SelftestCheck>& checks) {
    Report rep;
    rep.command = "selftest";
    rep.columns = {"check", "value", "expected", "tolerance", "passed"};
    for (const auto& c : checks) {
        Record rec;
        rec["check"] = c.name;
        rec["value"] = c.value;
        rec["expected"] = c.expected;
        rec["tolerance"] = c.tolerance;
        rec["passed"] = c.passed;
        rep.records.push_back(std::move(rec));
    }
    return rep;
}

namespace {

std::string csv_cell(const Record& v) {
    if (v.is_null()) return "";
    if (v.is_number_float()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3f", v.get<double>());
        return buf;
    }
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    return v.dump();
}

}  // namespace

std::string to_csv(const Report& r) {
    std::ostringstream out;
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
        out << (i ? "," : "") << r.columns[i];
    }
    out << '\n';
    for (const Record& rec : r.records) {
        for (std::size_t i = 0; i < r.columns.size(); ++i) {
            const auto it = rec.find(r.columns[i]);
            out << (i ? "," : "") << (it == rec.end() ? std::string() : csv_cell(*it));
        }
        out << '\n';
    }
    return out.str();
}

std::string to_json(const Report& r) {
    Record doc;
    doc["command"] = r.command;
    doc["records"] = r.records;
    return doc.dump(2) + "\n";
}

}  // namespace mac3
