#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "config.hpp"
#include "csge/bell.hpp"
#include "csge/state.hpp"

namespace csge::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitNumerical = 2,
    kExitAssertMismatch = 3,
    kExitNoViolation = 4,
};

struct Context {
    RunConfig config;
    std::filesystem::path out_root = "results";
    bool assert_mode = false;
    int threads = 1;
    int spot_checks = 0;
    std::ostream* log = nullptr;
};

struct Outcome {
    int exit_code = kExitOk;
    json record;
    std::filesystem::path dir;
};

Outcome run_state(const Context& ctx);
Outcome run_collapse(const Context& ctx, SpinBasis basis);
Outcome run_correlate(const Context& ctx);
Outcome run_bell(const Context& ctx, BellKind kind);
Outcome run_entropy(const Context& ctx);
Outcome run_verify(const Context& ctx);

}  // namespace csge::cli
