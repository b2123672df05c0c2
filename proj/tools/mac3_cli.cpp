// Command-line driver for the LFA and multigrid experiments.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure,
// 3 self-test mismatch.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mac3/errors.hpp"
#include "mac3/experiment.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitSelftest = 3;

struct RawOptions {
    std::string scheme = "all";
    std::string transfer = "P25T";
    std::vector<int> nu = {1, 2, 3, 4};
    int n = 81;
    std::string bc = "dirichlet";
    std::optional<double> omega, alpha, sigma, omega_j;
    int resolution = 81;
    std::uint64_t seed = 1;
    int max_iters = 200;
    std::string out;
    std::string format = "csv";
};

mac3::ExperimentConfig to_config(const RawOptions& o) {
    mac3::ExperimentConfig cfg;
    cfg.scheme = o.scheme;
    cfg.transfer = mac3::parse_restriction(o.transfer);
    cfg.nu = o.nu;
    cfg.n = o.n;
    cfg.bc = mac3::parse_bc(o.bc);
    cfg.omega = o.omega;
    cfg.alpha = o.alpha;
    cfg.sigma = o.sigma;
    cfg.omega_j = o.omega_j;
    cfg.resolution = o.resolution;
    cfg.seed = o.seed;
    cfg.max_iters = o.max_iters;
    cfg.validate();
    return cfg;
}

void emit(const mac3::Report& rep, const RawOptions& o) {
    const std::string text = mac3::parse_format(o.format) == mac3::OutputFormat::Json
                                  ? mac3::to_json(rep)
                                  : mac3::to_csv(rep);
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw mac3::ConfigError("cannot open output file '" + o.out + "'");
    f << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coarsening-by-three multigrid and local Fourier analysis for MAC Stokes"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value file; command-line flags take precedence");

    RawOptions o;
    app.add_option("--scheme", o.scheme, "QDR, QBSR, QIBSR, QUZAWA or all")
        ->capture_default_str();
    app.add_option("--transfer", o.transfer, "restriction paired with P25: R1, R9, R9B, P25T")
        ->capture_default_str();
    app.add_option("--nu", o.nu, "presmoothing sweeps, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--n", o.n, "cells per direction (3^k)")->capture_default_str();
    app.add_option("--bc", o.bc, "dirichlet or periodic")->capture_default_str();
    app.add_option("--omega", o.omega, "outer damping override");
    app.add_option("--alpha", o.alpha, "smoother scaling override");
    app.add_option("--sigma", o.sigma, "Uzawa pressure weight override");
    app.add_option("--omega-j,--omega_j", o.omega_j, "inner Jacobi weight override (QIBSR)");
    app.add_option("--resolution", o.resolution, "LFA samples per direction")
        ->capture_default_str();
    app.add_option("--seed", o.seed, "initial-guess seed")->capture_default_str();
    app.add_option("--max-iters,--max_iters", o.max_iters, "cycle limit")->capture_default_str();
    app.add_option("--out", o.out, "output file (default stdout)");
    app.add_option("--format", o.format, "csv or json")->capture_default_str();

    auto* smooth = app.add_subcommand("smooth-opt", "analytic optimum vs sampled smoothing factor");
    auto* lfa = app.add_subcommand("twogrid-lfa", "two-grid LFA factors rho_h(nu)");
    auto* mg = app.add_subcommand("mg-run", "measured two-grid and V-cycle factors");
    auto* cmp = app.add_subcommand("compare", "mg-run plus periodic LFA validation");
    auto* self = app.add_subcommand("selftest", "fast consistency checks");
    for (auto* sub : {smooth, lfa, mg, cmp, self}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (self->parsed()) {
            const auto checks = mac3::run_selftest();
            emit(mac3::selftest_report(checks), o);
            for (const auto& c : checks) {
                if (!c.passed) return kExitSelftest;
            }
            return 0;
        }
        const mac3::ExperimentConfig cfg = to_config(o);
        mac3::Report rep;
        if (smooth->parsed()) {
            rep = mac3::run_smooth_opt(cfg);
        } else if (lfa->parsed()) {
            rep = mac3::run_twogrid_lfa(cfg);
        } else if (mg->parsed()) {
            rep = mac3::run_mg(cfg);
        } else {
            rep = mac3::run_compare(cfg);
        }
        emit(rep, o);
        return rep.numerical_failure ? kExitNumerical : 0;
    } catch (const mac3::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const mac3::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::domain_error& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    }
}
