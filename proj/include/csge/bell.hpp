#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csge/correlation.hpp"
#include "csge/nelder_mead.hpp"
#include "csge/params.hpp"

namespace csge {

enum class BellKind { chsh, bkm, svet, sv1, sv2 };

std::string_view to_string(BellKind kind);
BellKind bell_kind_from_string(std::string_view name);

// Local-realistic bound on |B|.
double local_bound(BellKind kind);

enum class Variable { X, Z, theta, X_primed, Z_primed, theta_primed };

std::string_view to_string(Variable v);
Variable variable_from_string(std::string_view name);
bool is_angle(Variable v);

/// One Bell functional evaluation: the parameters, the frozen momenta and
/// the unprimed/primed measurement settings.
///
/// CHSH pairs Z with theta at a fixed X, so it has no X' (primed_X must be
/// empty); the tripartite functionals require X'.
struct BellSetting {
    BellKind kind = BellKind::chsh;
    DimensionlessParams params;
    double P_x = 0.0;
    double P_z = 0.0;
    double X = 0.0;
    double Z = 0.0;
    double theta = 0.0;
    std::optional<double> X_primed;
    double Z_primed = 0.0;
    double theta_primed = 0.0;

    // Throws StructuralError when the shape does not match `kind`.
    void validate() const;

    double get(Variable v) const;
    void set(Variable v, double value);
};

// One signed term of a functional; true selects the primed setting.
struct BellTerm {
    int sign;
    bool x_primed;
    bool z_primed;
    bool theta_primed;
};

std::span<const BellTerm> bell_terms(BellKind kind);

// Each of these checks that setting.kind matches.
double chsh(const BellSetting& s, const CorrelationOptions& options = {});
double bkm(const BellSetting& s, const CorrelationOptions& options = {});
double svetlichny(const BellSetting& s, const CorrelationOptions& options = {});
double sv1(const BellSetting& s, const CorrelationOptions& options = {});
double sv2(const BellSetting& s, const CorrelationOptions& options = {});

// Dispatches on setting.kind.
double evaluate(const BellSetting& s, const CorrelationOptions& options = {});

struct Axis {
    Variable variable;
    double lo;
    double hi;
    // Angles are sampled on [lo, hi) and wrap; positions on [lo, hi] inclusive.
    int points;
};

struct GridSpec {
    std::vector<Axis> axes;

    long cell_count() const;
};

// Positions/primed positions in [-6, 6], angles in [0, 2 pi).
GridSpec default_scan_box(const std::vector<Variable>& free, int points_per_axis);

enum class Goal { minimize, maximize };

struct ScanResult {
    BellKind kind = BellKind::chsh;
    Goal goal = Goal::minimize;
    double extremum_value = 0.0;
    BellSetting arg_extremum;
    double bound = 0.0;
    bool violated = false;
    GridSpec grid;
    double grid_extremum = 0.0;
    long grid_evaluations = 0;
    int refinement_iterations = 0;
    bool converged = false;
    std::vector<double> refinement_trace;
    // Multi-start runs only.
    int starts = 0;
};

/// Coarse grid over the free axes followed by simplex refinement from the
/// best cell. Deterministic for a given input regardless of `threads`.
ScanResult scan_extremum(const BellSetting& base, Goal goal, const GridSpec& grid, const RefineSpec& refine,
                         int threads = 1, const CorrelationOptions& options = {});

struct MultiStartSpec {
    int starts = 10000;
    std::uint64_t seed = 1;
};

/// Simplex refinement from uniformly random starts inside the axes' box.
ScanResult multistart_extremum(const BellSetting& base, Goal goal, const GridSpec& box, const RefineSpec& refine,
                               const MultiStartSpec& multistart, int threads = 1,
                               const CorrelationOptions& options = {});

}  // namespace csge
