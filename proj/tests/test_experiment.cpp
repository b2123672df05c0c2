#include "doctest.h"

#include <cmath>
#include <string>

#include "mac3/errors.hpp"
#include "mac3/experiment.hpp"

using namespace mac3;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.n = 27;
    c.resolution = 27;
    c.nu = {1, 2};
    return c;
}

const Record& find_kind(const Report& r, const std::string& scheme, const std::string& kind) {
    for (const Record& rec : r.records) {
        if (rec["scheme"] == scheme && rec["kind"] == kind) return rec;
    }
    throw std::runtime_error("record not found: " + scheme + " " + kind);
}

}  // namespace

TEST_CASE("config validation rejects bad values") {
    CHECK_NOTHROW(ExperimentConfig{}.validate());
    auto bad = [](auto mutate) {
        ExperimentConfig c;
        mutate(c);
        CHECK_THROWS_AS(c.validate(), ConfigError);
    };
    bad([](ExperimentConfig& c) { c.nu.clear(); });
    bad([](ExperimentConfig& c) { c.nu = {0}; });
    bad([](ExperimentConfig& c) { c.nu = {1, 17}; });
    bad([](ExperimentConfig& c) { c.n = 10; });
    bad([](ExperimentConfig& c) { c.n = 3; });
    bad([](ExperimentConfig& c) { c.resolution = 10; });
    bad([](ExperimentConfig& c) { c.resolution = 6; });
    bad([](ExperimentConfig& c) { c.max_iters = 0; });
    bad([](ExperimentConfig& c) { c.scheme = "JACOBI"; });

    CHECK_THROWS_AS(parse_format("xml"), ConfigError);
    CHECK(parse_format("JSON") == OutputFormat::Json);
    CHECK_THROWS_AS(parse_bc("neumann"), ConfigError);
    CHECK(parse_bc("Periodic") == BoundaryMode::Periodic);
    CHECK(to_string(BoundaryMode::Dirichlet) == "dirichlet");
}

TEST_CASE("default parameters and overrides") {
    const RelaxParams lfa = default_params(Scheme::QDR, ParamContext::Lfa);
    CHECK(lfa.alpha == 1.0);
    CHECK(lfa.omega == 36.0 / 47);
    const RelaxParams meas = default_params(Scheme::QDR, ParamContext::Measured);
    CHECK(meas.alpha == 0.7);
    CHECK(meas.omega == 0.7 * 36 / 47);
    const RelaxParams ib = default_params(Scheme::QIBSR, ParamContext::Measured);
    CHECK(ib.alpha == 47.0 / 36);
    CHECK(ib.omega == 1.0);
    CHECK(ib.omega_j == 0.9);
    const RelaxParams uz = default_params(Scheme::QUZAWA, ParamContext::Lfa);
    CHECK(uz.sigma == 15.0 / 32);

    ExperimentConfig c;
    c.omega = 0.5;
    c.sigma = 0.25;
    c.omega_j = 0.8;
    const RelaxParams d = resolve_params(c, Scheme::QDR, ParamContext::Lfa);
    CHECK(d.omega == 0.5);
    CHECK(d.alpha == 1.0);
    CHECK(resolve_params(c, Scheme::QUZAWA, ParamContext::Lfa).sigma == 0.25);
    CHECK(resolve_params(c, Scheme::QIBSR, ParamContext::Lfa).omega_j == 0.8);

    c.alpha = -1.0;
    CHECK_THROWS_AS(resolve_params(c, Scheme::QDR, ParamContext::Lfa), ConfigError);

    ExperimentConfig one;
    one.scheme = "quzawa";
    CHECK(selected_schemes(one, {Scheme::QDR}) == std::vector<Scheme>{Scheme::QUZAWA});
    CHECK(selected_schemes(ExperimentConfig{}, {Scheme::QDR, Scheme::QBSR_EXACT}).size() == 2);
}

TEST_CASE("smooth-opt reports analytic and sampled factors") {
    ExperimentConfig c;
    c.scheme = "QBSR";
    Report r = run_smooth_opt(c);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0]["mu_exact"] == "17/47");
    CHECK(r.records[0]["gap"].get<double>() <= 1e-3);

    c.scheme = "QUZAWA";
    r = run_smooth_opt(c);
    CHECK(std::abs(r.records[0]["mu_sampled"].get<double>() - std::sqrt(17.0 / 47)) <= 2e-3);
    CHECK(r.records[0].contains("omega_interval"));

    c.scheme = "QDR";
    c.omega = 0.5;
    r = run_smooth_opt(c);
    CHECK(r.records[0]["omega"].get<double>() == 0.5);
    CHECK(r.records[0]["mu_sampled"].get<double>() > 17.0 / 47);

    c.scheme = "QIBSR";
    CHECK_THROWS_AS(run_smooth_opt(c), ConfigError);
}

TEST_CASE("twogrid-lfa rows") {
    ExperimentConfig c;
    c.scheme = "QUZAWA";
    c.transfer = Restriction::P25T;
    const Report r = run_twogrid_lfa(c);
    REQUIRE(r.records.size() == 1);
    const double want[] = {0.601, 0.361, 0.240, 0.197};
    for (int nu = 1; nu <= 4; ++nu) {
        CAPTURE(nu);
        const double got = r.records[0]["rho_nu" + std::to_string(nu)].get<double>();
        CHECK(std::abs(got - want[nu - 1]) <= 0.01);
    }
    CHECK(r.records[0]["transfer"] == "P25/P25T");
    CHECK(r.columns.back() == "rho_nu4");
}

TEST_CASE("mg-run records carry provenance") {
    ExperimentConfig c = small_config();
    c.scheme = "QIBSR";
    c.seed = 7;
    const Report r = run_mg(c);
    REQUIRE(r.records.size() == 3);
    CHECK_FALSE(r.numerical_failure);
    for (const Record& rec : r.records) {
        for (const char* key : {"scheme", "kind", "omega", "alpha", "omega_j", "transfer", "bc",
                                "n", "seed", "rho_nu1", "rho_nu2"}) {
            CAPTURE(key);
            CHECK(rec.contains(key));
        }
        CHECK(rec["seed"] == 7);
        CHECK(rec["n"] == 27);
        CHECK(rec["bc"] == "dirichlet");
    }
    const Record& tg = find_kind(r, "QIBSR", "two-grid");
    CHECK(tg["runs"]["rho_nu1"]["converged"] == true);
    CHECK(tg["runs"]["rho_nu1"]["residual_norms"].size() > 2);
    CHECK(tg["rho_nu1"].get<double>() < 1.0);
    CHECK(find_kind(r, "QIBSR", "lfa-prediction")["lfa_scheme"] == "QBSR");
}

TEST_CASE("mg-run flags divergence without aborting the table") {
    ExperimentConfig c = small_config();
    c.scheme = "QDR";
    c.omega = 5.0;
    c.nu = {1};
    const Report r = run_mg(c);
    CHECK(r.numerical_failure);
    CHECK(find_kind(r, "QDR", "two-grid")["runs"]["rho_nu1"]["diverged"] == true);
}

TEST_CASE("compare validates against the periodic lattice LFA") {
    ExperimentConfig c = small_config();
    c.scheme = "QIBSR";
    c.nu = {1};
    const Report r = run_compare(c);
    const Record& asym_gap = find_kind(r, "QIBSR", "periodic-asymptotic-gap");
    CHECK(asym_gap["bc"] == "periodic");
    CHECK(asym_gap["rho_nu1"].get<double>() <= 0.01);
    const double lfa = find_kind(r, "QIBSR", "periodic-lfa")["rho_nu1"].get<double>();
    const double gap = find_kind(r, "QIBSR", "periodic-gap")["rho_nu1"].get<double>();
    CHECK(gap >= 0.0);
    CHECK(gap < lfa);
}

TEST_CASE("writers are deterministic and round to three decimals") {
    ExperimentConfig c = small_config();
    c.scheme = "QUZAWA";
    c.nu = {1};
    const Report a = run_mg(c);
    const Report b = run_mg(c);
    CHECK(to_csv(a) == to_csv(b));
    CHECK(to_json(a) == to_json(b));

    Report r;
    r.command = "demo";
    r.columns = {"name", "x", "flag", "missing"};
    Record rec;
    rec["name"] = "a,\"b\"";
    rec["x"] = 0.12345;
    rec["flag"] = true;
    r.records.push_back(rec);
    CHECK(to_csv(r) == "name,x,flag,missing\n\"a,\"\"b\"\"\",0.123,true,\n");

    const Record doc = Record::parse(to_json(r));
    CHECK(doc["command"] == "demo");
    CHECK(doc["records"][0]["x"].get<double>() == 0.12345);
}

TEST_CASE("selftest report layout") {
    const std::vector<SelftestCheck> checks = {{"a", 1.0, 1.0, 0.0, true},
                                               {"b", 2.0, 1.0, 0.5, false}};
    const Report r = selftest_report(checks);
    CHECK(r.command == "selftest");
    REQUIRE(r.records.size() == 2);
    CHECK(r.records[1]["passed"] == false);
    CHECK(to_csv(r).substr(0, 37) == "check,value,expected,tolerance,passed");
}
