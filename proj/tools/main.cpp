#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "csge/error.hpp"
#include "csge/parallel.hpp"
#include "output.hpp"

using namespace csge;
using namespace csge::cli;

int main(int argc, char** argv) {
    CLI::App app{"Consecutive Stern-Gerlach correlations and Bell functionals", "csge"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);

    std::string config_path;
    std::string out_root = "results";
    bool assert_mode = false;
    int spot_checks = 0;
    int threads = 0;
    app.add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out_root, "Output root directory")->capture_default_str();
    app.add_flag("--assert", assert_mode, "Exit 3 when an expected value in the config is not met");
    app.add_option("--oracle-spot-check", spot_checks, "Cells checked against the quadrature oracle")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--threads", threads, "Worker threads (default: CSGE_THREADS or hardware)")
        ->check(CLI::PositiveNumber);
    app.fallthrough();

    auto* state = app.add_subcommand("state", "Probability density and branch amplitudes");
    auto* collapse = state->add_subcommand("collapse", "Post-measurement spatial states");
    std::string basis = "sigma_x";
    collapse->add_option("--basis", basis, "sigma_x or sigma_z")
        ->check(CLI::IsMember({"sigma_x", "sigma_z"}))
        ->capture_default_str();
    auto* correlate = app.add_subcommand("correlate", "C(Z, theta) surface");
    auto* bell = app.add_subcommand("bell", "Bell functional extremum");
    std::string kind;
    bell->add_option("kind", kind, "chsh, bkm, svet, sv1 or sv2")
        ->required()
        ->check(CLI::IsMember({"chsh", "bkm", "svet", "sv1", "sv2"}));
    auto* entropy = app.add_subcommand("entropy", "Spin entanglement entropy curves");
    auto* verify = app.add_subcommand("verify", "Closed forms against brute-force oracles");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        Context ctx;
        ctx.config = load_config(config_path);
        ctx.out_root = out_root;
        ctx.assert_mode = assert_mode;
        ctx.spot_checks = spot_checks;
        ctx.threads = threads > 0 ? threads : default_thread_count();

        Outcome o;
        if (state->parsed()) {
            o = collapse->parsed()
                    ? run_collapse(ctx, basis == "sigma_z" ? SpinBasis::sigma_z : SpinBasis::sigma_x)
                    : run_state(ctx);
        } else if (correlate->parsed()) {
            o = run_correlate(ctx);
        } else if (bell->parsed()) {
            o = run_bell(ctx, bell_kind_from_string(kind));
        } else if (entropy->parsed()) {
            o = run_entropy(ctx);
        } else if (verify->parsed()) {
            o = run_verify(ctx);
        }
        return o.exit_code;
    } catch (const GridTooSmallError& e) {
        std::cerr << "error: " << e.what() << " (suggested half width " << e.suggested_half_width();
        if (e.suggested_points() > 0) std::cerr << ", points " << e.suggested_points();
        std::cerr << ")\n";
        return kExitNumerical;
    } catch (const UnstableStepError& e) {
        std::cerr << "error: " << e.what() << " (suggested steps " << e.suggested_steps() << ")\n";
        return kExitNumerical;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.category() == Error::Category::numerical ? kExitNumerical : kExitConfig;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: config: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
