#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "csge/error.hpp"
#include "output.hpp"

using namespace csge;
using namespace csge::cli;
namespace fs = std::filesystem;

namespace {

json reference_params() { return {{"tau2", 6.8}, {"tau3", 2.6}, {"k2", 0.3}, {"k3", 0.3}, {"x0", 4}, {"z0", 4}}; }

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("csge_test_cli_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Context context(const json& doc, const fs::path& root) {
    Context ctx;
    ctx.config = parse_config(doc);
    ctx.out_root = root;
    ctx.threads = 2;
    static std::ostringstream sink;
    ctx.log = &sink;
    return ctx;
}

}  // namespace

TEST_CASE("config requires exactly one parameter block") {
    CHECK_THROWS_AS(parse_config(json::object()), ConfigError);
    json both = {{"dimensionless", reference_params()},
                 {"physical", {{"sigma0", 1}, {"m", 1}, {"mu_c", 1}, {"t2", 1}, {"t3", 1}, {"hbar", 1}}}};
    CHECK_THROWS_AS(parse_config(both), ConfigError);
    CHECK_NOTHROW(parse_config({{"dimensionless", reference_params()}}));
}

TEST_CASE("config schema diagnostics name the location") {
    json doc = {{"dimensionless", reference_params()}};
    doc["dimensionless"]["tau9"] = 1;
    try {
        parse_config(doc);
        FAIL("no throw");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("/dimensionless/tau9") != std::string::npos);
    }
    json missing = {{"dimensionless", {{"tau2", 1}, {"tau3", 1}, {"k2", 0.3}}}};
    CHECK_THROWS_AS(parse_config(missing), ConfigError);
    json wrong_type = {{"dimensionless", reference_params()}};
    wrong_type["dimensionless"]["k2"] = "0.3";
    CHECK_THROWS_AS(parse_config(wrong_type), ConfigError);
    json unknown = {{"dimensionless", reference_params()}, {"plot", true}};
    CHECK_THROWS_AS(parse_config(unknown), ConfigError);
    json phase = {{"dimensionless", reference_params()}, {"z0_phase", "quartic"}};
    CHECK_THROWS_AS(parse_config(phase), ConfigError);
}

TEST_CASE("physical block converts to reduced parameters") {
    json doc = {{"physical",
                 {{"sigma0", 2.0}, {"m", 3.0}, {"mu_c", 1.0}, {"b2", 0.5}, {"b3", 0.25}, {"B2", 1.0}, {"B3", 1.0},
                  {"t2", 4.0}, {"t3", 1.0}, {"hbar", 1.5}}}};
    const RunConfig cfg = parse_config(doc);
    REQUIRE(cfg.physical.has_value());
    const DimensionlessParams d = dimensionless_from_physical(*cfg.physical);
    CHECK(cfg.params.tau2 == doctest::Approx(d.tau2).epsilon(1e-15));
    CHECK(cfg.params.k3 == doctest::Approx(d.k3).epsilon(1e-15));
    CHECK(cfg.params.x0 == doctest::Approx(1.0 / (2.0 * 0.5)));
}

TEST_CASE("config hash ignores key order and formatting") {
    const json a = json::parse(R"({"dimensionless": {"tau2": 1, "tau3": 2, "k2": 0.3, "k3": 0.3}, "seed": 4})");
    const json b = json::parse(R"({"seed":4,"dimensionless":{"k3":0.3,"k2":0.3,"tau3":2,"tau2":1}})");
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    json c = a;
    c["seed"] = 5;
    CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("numbers round-trip through their text form") {
    for (double v : {0.1, -2.62405, 1e-300, 6.283185307179586, 123456789.0}) CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("csv header carries version and config hash") {
    const fs::path root = scratch("csv");
    const RunConfig cfg = parse_config({{"dimensionless", reference_params()}});
    const RunOutput out(root, "demo", cfg);
    out.write_csv("t.csv", {"a", "b"}, {{1.0, 0.5}, {2.0, -0.25}});
    CHECK(out.dir() == root / "demo" / config_hash(cfg.raw));
    CHECK(slurp(out.dir() / "t.csv") ==
          "# csge " + version() + " config_hash=" + out.hash() + "\na,b\n1,0.5\n2,-0.25\n");
    CHECK(json::parse(slurp(out.dir() / "config.json")) == cfg.raw);
    for (const auto& e : fs::directory_iterator(out.dir()))
        CHECK(e.path().filename().string().find(".tmp") == std::string::npos);
}

TEST_CASE("state at zero times is a single centred Gaussian") {
    json doc = {{"dimensionless", {{"tau2", 0}, {"tau3", 0}, {"k2", 0.3}, {"k3", 0.3}}},
                {"state", {{"grid", {{"half_width", 10}, {"points", 81}}}}}};
    const Outcome o = run_state(context(doc, scratch("state0")));
    CHECK(o.exit_code == kExitOk);
    const json& out = o.record["outputs"];
    CHECK(out["local_maxima"] == 1);
    CHECK(out["peak_at"][0].get<double>() == 0.0);
    CHECK(out["peak_at"][1].get<double>() == 0.0);
    CHECK(out["grid_probability"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fs::exists(o.dir / "density.csv"));
}

TEST_CASE("collapse probabilities sum to one") {
    json doc = {{"dimensionless", reference_params()}, {"state", {{"grid", {{"half_width", 40}, {"points", 41}}}}}};
    const Outcome o = run_collapse(context(doc, scratch("collapse")), SpinBasis::sigma_x);
    CHECK(o.exit_code == kExitOk);
    CHECK(std::abs(o.record["outputs"]["probability_sum"].get<double>() - 1.0) <= 1e-8);
    CHECK(fs::exists(o.dir / "collapse_up.csv"));
    CHECK(fs::exists(o.dir / "collapse_down.csv"));
}

TEST_CASE("correlate surface is bounded and theta = 0 holds the cosine part") {
    json doc = {{"dimensionless", reference_params()},
                {"correlate",
                 {{"Z", {{"lo", -5}, {"hi", 5}, {"points", 21}}},
                  {"theta", {{"lo", 0}, {"hi", 6.283185307179586}, {"points", 9}}}}}};
    Context ctx = context(doc, scratch("correlate"));
    ctx.spot_checks = 10;
    const Outcome o = run_correlate(ctx);
    CHECK(o.exit_code == kExitOk);
    CHECK(o.record["outputs"]["max_abs"].get<double>() <= 1.0);
    CHECK(o.record["oracle_check"]["pass"].get<bool>());
    CHECK(o.record["oracle_check"]["max_abs_deviation"].get<double>() <= 1e-6);

    std::ifstream in(o.dir / "surface.csv");
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    CHECK(line == "Z,theta,C");
    std::getline(in, line);
    const double Z = std::stod(line.substr(0, line.find(',')));
    const double C = std::stod(line.substr(line.rfind(',') + 1));
    const PhaseSpacePoint pt{0.1, 0.129, Z, 0.049, 0.0};
    const double cos_part = kCorrelationNormalization * assemble(components(pt, ctx.config.params), 0.0);
    CHECK(C == doctest::Approx(cos_part).epsilon(1e-14));
}

TEST_CASE("bell exit codes distinguish violation from none") {
    json doc = {{"dimensionless", reference_params()},
                {"bell",
                 {{"X", 0.1}, {"P_x", 0.129}, {"P_z", 0.049}, {"Z_primed", 2.4}, {"theta_primed", 0.6283185307179586},
                  {"scan", {{"points", 20}}}, {"surface", false}}}};
    Context ctx = context(doc, scratch("bell"));
    Outcome o = run_bell(ctx, BellKind::chsh);
    CHECK(o.exit_code == kExitNoViolation);
    CHECK(o.record["outputs"]["scan"]["violated"] == false);

    doc["bell"]["expected"] = {{"violated", true}};
    ctx = context(doc, scratch("bell_assert"));
    CHECK(run_bell(ctx, BellKind::chsh).exit_code == kExitNoViolation);
    ctx.assert_mode = true;
    CHECK(run_bell(ctx, BellKind::chsh).exit_code == kExitAssertMismatch);

    doc["bell"]["expected"] = {{"violated", false}};
    ctx = context(doc, scratch("bell_assert_ok"));
    ctx.assert_mode = true;
    CHECK(run_bell(ctx, BellKind::chsh).exit_code == kExitNoViolation);
}

TEST_CASE("bell rejects malformed settings") {
    json doc = {{"dimensionless", reference_params()}, {"bell", {{"X_primed", 0.5}}}};
    CHECK_THROWS_AS(run_bell(context(doc, scratch("bell_bad")), BellKind::chsh), ConfigError);
    doc["bell"] = {{"goal", "sideways"}};
    CHECK_THROWS_AS(run_bell(context(doc, scratch("bell_bad")), BellKind::bkm), ConfigError);
    doc["bell"] = {{"scan", {{"axes", {{{"variable", "Y"}, {"lo", 0}, {"hi", 1}, {"points", 3}}}}}}};
    CHECK_THROWS_AS(run_bell(context(doc, scratch("bell_bad")), BellKind::bkm), Error);
    doc["bell"] = {{"scan", {{"axes", {{{"variable", "X_primed"}, {"lo", 0}, {"hi", 1}, {"points", 3}}}}}}};
    CHECK_THROWS_AS(run_bell(context(doc, scratch("bell_bad")), BellKind::chsh), Error);
}

TEST_CASE("re-running a persisted record reproduces it") {
    json doc = {{"dimensionless", {{"tau2", 2.7}, {"tau3", 4.7}, {"k2", 0.3}, {"k3", 0.3}, {"x0", 4}, {"z0", 4}}},
                {"bell",
                 {{"P_x", 0.051}, {"P_z", 0.089}, {"X_primed", 0.83}, {"Z_primed", 3.3},
                  {"theta_primed", 1.5707963267948966}, {"scan", {{"points", 12}}}}}};
    const Outcome first = run_bell(context(doc, scratch("repro_a")), BellKind::bkm);
    const json replay = json::parse(slurp(first.dir / "config.json"));
    const Outcome second = run_bell(context(replay, scratch("repro_b")), BellKind::bkm);
    CHECK(first.record["config_hash"] == second.record["config_hash"]);
    CHECK(first.record["outputs"] == second.record["outputs"]);

    json cdoc = {{"dimensionless", reference_params()},
                 {"correlate", {{"Z", {{"lo", -2}, {"hi", 2}, {"points", 5}}}}}};
    const Outcome c1 = run_correlate(context(cdoc, scratch("repro_c")));
    const Outcome c2 = run_correlate(context(json::parse(slurp(c1.dir / "config.json")), scratch("repro_d")));
    CHECK(slurp(c1.dir / "surface.csv") == slurp(c2.dir / "surface.csv"));
}

TEST_CASE("entropy curves rise monotonically toward one") {
    json doc = {{"dimensionless", reference_params()},
                {"entropy", {{"k", {0.3}}, {"tau", {{"lo", 0}, {"hi", 20}, {"points", 21}}}}}};
    const Outcome o = run_entropy(context(doc, scratch("entropy")));
    CHECK(o.exit_code == kExitOk);
    const json& curve = o.record["outputs"]["curves"][0];
    CHECK(curve["monotone"].get<bool>());
    CHECK(curve["final"].get<double>() > 0.99);
    CHECK(curve["final"].get<double>() <= 1.0);
}

TEST_CASE("verify surfaces a coarse grid as a numerical error") {
    json doc = {{"dimensionless", reference_params()}, {"verify", {{"grid", {{"half_width", 25}, {"points", 64}}}}}};
    CHECK_THROWS_AS(run_verify(context(doc, scratch("verify_coarse"))), GridTooSmallError);
}
