#include "csge/bell.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <stdexcept>

#include "csge/error.hpp"
#include "csge/parallel.hpp"

namespace csge {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr std::array<BellTerm, 4> kChsh{{
    {+1, false, false, false},
    {+1, false, false, true},
    {+1, false, true, false},
    {-1, false, true, true},
}};

constexpr std::array<BellTerm, 4> kBkm{{
    {+1, false, false, true},
    {+1, false, true, false},
    {+1, true, false, false},
    {-1, true, true, true},
}};

constexpr std::array<BellTerm, 8> kSvet{{
    {+1, false, false, false},
    {+1, false, false, true},
    {+1, false, true, false},
    {-1, false, true, true},
    {+1, true, false, false},
    {-1, true, false, true},
    {-1, true, true, false},
    {-1, true, true, true},
}};

constexpr std::array<BellTerm, 8> kSv1{{
    {-1, false, false, false},
    {+1, false, true, false},
    {+1, true, false, false},
    {+1, true, true, false},
    {+1, false, false, true},
    {+1, false, true, true},
    {+1, true, false, true},
    {-1, true, true, true},
}};

constexpr std::array<BellTerm, 8> kSv2{{
    {-1, false, false, false},
    {-1, false, true, false},
    {+1, true, false, false},
    {-1, true, true, false},
    {-1, false, false, true},
    {+1, false, true, true},
    {-1, true, false, true},
    {-1, true, true, true},
}};

void require_kind(const BellSetting& s, BellKind expected) {
    if (s.kind != expected)
        throw StructuralError("setting is " + std::string(to_string(s.kind)) + ", expected " +
                              std::string(to_string(expected)));
}

double signed_sum(const BellSetting& s, const CorrelationOptions& options) {
    s.validate();
    double total = 0.0;
    for (const BellTerm& t : bell_terms(s.kind)) {
        PhaseSpacePoint pt;
        pt.X = t.x_primed ? *s.X_primed : s.X;
        pt.Z = t.z_primed ? s.Z_primed : s.Z;
        pt.theta = t.theta_primed ? s.theta_primed : s.theta;
        pt.P_x = s.P_x;
        pt.P_z = s.P_z;
        total += t.sign * correlation(pt, s.params, options);
    }
    return total;
}

bool allowed_free(BellKind kind, Variable v) {
    if (kind == BellKind::chsh) return v == Variable::Z || v == Variable::theta || v == Variable::Z_primed ||
                                       v == Variable::theta_primed;
    return true;
}

void validate_grid(BellKind kind, const GridSpec& grid) {
    if (grid.axes.empty()) throw StructuralError("empty grid: no free variables");
    std::array<bool, 6> seen{};
    for (const Axis& a : grid.axes) {
        const auto idx = static_cast<std::size_t>(a.variable);
        if (seen[idx]) throw StructuralError("variable " + std::string(to_string(a.variable)) + " listed twice");
        seen[idx] = true;
        if (!allowed_free(kind, a.variable))
            throw StructuralError(std::string(to_string(a.variable)) + " is frozen for " + std::string(to_string(kind)));
        if (a.points < 1) throw StructuralError("empty grid: axis with no points");
        if (!std::isfinite(a.lo) || !std::isfinite(a.hi) || a.hi < a.lo)
            throw StructuralError("axis range must be finite with lo <= hi");
    }
}

double axis_value(const Axis& a, long i) {
    if (a.points == 1) return a.lo;
    if (is_angle(a.variable)) return a.lo + (a.hi - a.lo) * static_cast<double>(i) / a.points;
    return a.lo + (a.hi - a.lo) * static_cast<double>(i) / (a.points - 1);
}

double axis_step(const Axis& a) {
    const double span = a.hi - a.lo;
    if (span == 0.0) return 1e-3;
    if (is_angle(a.variable)) return span / a.points;
    return a.points > 1 ? span / (a.points - 1) : 0.1 * span;
}

// Maps an unconstrained simplex coordinate back into the box.
double project(const Axis& a, double v) {
    if (is_angle(a.variable)) {
        const double span = a.hi - a.lo;
        if (span >= kTwoPi - 1e-12) {
            double w = std::fmod(v - a.lo, kTwoPi);
            if (w < 0.0) w += kTwoPi;
            return a.lo + w;
        }
    }
    return std::clamp(v, a.lo, a.hi);
}

BellSetting with_values(const BellSetting& base, const GridSpec& grid, std::span<const double> v) {
    BellSetting s = base;
    for (std::size_t i = 0; i < grid.axes.size(); ++i) s.set(grid.axes[i].variable, project(grid.axes[i], v[i]));
    return s;
}

double sign_of(Goal g) { return g == Goal::minimize ? 1.0 : -1.0; }

ScanResult finish(const BellSetting& base, Goal goal, const GridSpec& grid, const NelderMeadResult& nm,
                  const CorrelationOptions& options) {
    ScanResult r;
    r.kind = base.kind;
    r.goal = goal;
    r.arg_extremum = with_values(base, grid, nm.x);
    r.extremum_value = evaluate(r.arg_extremum, options);
    r.bound = local_bound(base.kind);
    r.violated = std::abs(r.extremum_value) > r.bound;
    r.grid = grid;
    r.refinement_iterations = nm.iterations;
    r.converged = nm.converged;
    r.refinement_trace.reserve(nm.trace.size());
    for (double t : nm.trace) r.refinement_trace.push_back(sign_of(goal) * t);
    return r;
}

}  // namespace

int default_thread_count() {
    if (const char* env = std::getenv("CSGE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::string_view to_string(BellKind kind) {
    switch (kind) {
        case BellKind::chsh: return "chsh";
        case BellKind::bkm: return "bkm";
        case BellKind::svet: return "svet";
        case BellKind::sv1: return "sv1";
        case BellKind::sv2: return "sv2";
    }
    return "?";
}

BellKind bell_kind_from_string(std::string_view name) {
    for (BellKind k : {BellKind::chsh, BellKind::bkm, BellKind::svet, BellKind::sv1, BellKind::sv2})
        if (to_string(k) == name) return k;
    throw ConfigError("unknown Bell functional '" + std::string(name) + "'");
}

double local_bound(BellKind kind) {
    return kind == BellKind::chsh || kind == BellKind::bkm ? 2.0 : 4.0;
}

std::string_view to_string(Variable v) {
    switch (v) {
        case Variable::X: return "X";
        case Variable::Z: return "Z";
        case Variable::theta: return "theta";
        case Variable::X_primed: return "X_primed";
        case Variable::Z_primed: return "Z_primed";
        case Variable::theta_primed: return "theta_primed";
    }
    return "?";
}

Variable variable_from_string(std::string_view name) {
    for (Variable v : {Variable::X, Variable::Z, Variable::theta, Variable::X_primed, Variable::Z_primed,
                       Variable::theta_primed})
        if (to_string(v) == name) return v;
    throw ConfigError("unknown scan variable '" + std::string(name) + "'");
}

bool is_angle(Variable v) { return v == Variable::theta || v == Variable::theta_primed; }

void BellSetting::validate() const {
    if (kind == BellKind::chsh && X_primed)
        throw StructuralError("CHSH freezes X and has no X_primed");
    if (kind != BellKind::chsh && !X_primed)
        throw StructuralError(std::string(to_string(kind)) + " requires X_primed");
}

double BellSetting::get(Variable v) const {
    switch (v) {
        case Variable::X: return X;
        case Variable::Z: return Z;
        case Variable::theta: return theta;
        case Variable::X_primed:
            if (!X_primed) throw StructuralError("X_primed is not part of this setting");
            return *X_primed;
        case Variable::Z_primed: return Z_primed;
        case Variable::theta_primed: return theta_primed;
    }
    return 0.0;
}

void BellSetting::set(Variable v, double value) {
    switch (v) {
        case Variable::X: X = value; break;
        case Variable::Z: Z = value; break;
        case Variable::theta: theta = value; break;
        case Variable::X_primed:
            if (kind == BellKind::chsh) throw StructuralError("CHSH has no X_primed");
            X_primed = value;
            break;
        case Variable::Z_primed: Z_primed = value; break;
        case Variable::theta_primed: theta_primed = value; break;
    }
}

std::span<const BellTerm> bell_terms(BellKind kind) {
    switch (kind) {
        case BellKind::chsh: return kChsh;
        case BellKind::bkm: return kBkm;
        case BellKind::svet: return kSvet;
        case BellKind::sv1: return kSv1;
        case BellKind::sv2: return kSv2;
    }
    return {};
}

double chsh(const BellSetting& s, const CorrelationOptions& o) {
    require_kind(s, BellKind::chsh);
    return signed_sum(s, o);
}
double bkm(const BellSetting& s, const CorrelationOptions& o) {
    require_kind(s, BellKind::bkm);
    return signed_sum(s, o);
}
double svetlichny(const BellSetting& s, const CorrelationOptions& o) {
    require_kind(s, BellKind::svet);
    return signed_sum(s, o);
}
double sv1(const BellSetting& s, const CorrelationOptions& o) {
    require_kind(s, BellKind::sv1);
    return signed_sum(s, o);
}
double sv2(const BellSetting& s, const CorrelationOptions& o) {
    require_kind(s, BellKind::sv2);
    return signed_sum(s, o);
}

double evaluate(const BellSetting& s, const CorrelationOptions& o) { return signed_sum(s, o); }

long GridSpec::cell_count() const {
    if (axes.empty()) return 0;
    long n = 1;
    for (const Axis& a : axes) n *= std::max(0, a.points);
    return n;
}

GridSpec default_scan_box(const std::vector<Variable>& free, int points_per_axis) {
    GridSpec g;
    for (Variable v : free) {
        if (is_angle(v))
            g.axes.push_back({v, 0.0, kTwoPi, points_per_axis});
        else
            g.axes.push_back({v, -6.0, 6.0, points_per_axis});
    }
    return g;
}

ScanResult scan_extremum(const BellSetting& base, Goal goal, const GridSpec& grid, const RefineSpec& refine,
                         int threads, const CorrelationOptions& options) {
    base.validate();
    validate_grid(base.kind, grid);
    const long cells = grid.cell_count();
    const std::size_t dims = grid.axes.size();
    const double sgn = sign_of(goal);

    auto cell_point = [&](long index, std::vector<double>& out) {
        for (std::size_t d = dims; d-- > 0;) {
            const long n = grid.axes[d].points;
            out[d] = axis_value(grid.axes[d], index % n);
            index /= n;
        }
    };

    std::vector<double> values(static_cast<std::size_t>(cells));
    parallel_chunks(cells, threads, [&](long begin, long end) {
        std::vector<double> v(dims);
        for (long i = begin; i < end; ++i) {
            cell_point(i, v);
            values[static_cast<std::size_t>(i)] = sgn * evaluate(with_values(base, grid, v), options);
        }
    });

    // Row-major order with ascending axes: the first strict minimum is the
    // lexicographically smallest tuple among ties.
    long best = 0;
    for (long i = 1; i < cells; ++i)
        if (values[static_cast<std::size_t>(i)] < values[static_cast<std::size_t>(best)]) best = i;

    std::vector<double> start(dims);
    cell_point(best, start);
    NelderMeadResult nm{start, values[static_cast<std::size_t>(best)], 0, true, {}};
    if (refine.enabled) {
        std::vector<double> steps(dims);
        for (std::size_t d = 0; d < dims; ++d) steps[d] = axis_step(grid.axes[d]);
        nm = nelder_mead([&](std::span<const double> x) { return sgn * evaluate(with_values(base, grid, x), options); },
                         start, steps, refine);
        if (nm.value > values[static_cast<std::size_t>(best)]) {
            nm.x = start;
            nm.value = values[static_cast<std::size_t>(best)];
        }
    }

    ScanResult r = finish(base, goal, grid, nm, options);
    r.grid_extremum = sgn * values[static_cast<std::size_t>(best)];
    r.grid_evaluations = cells;
    return r;
}

ScanResult multistart_extremum(const BellSetting& base, Goal goal, const GridSpec& box, const RefineSpec& refine,
                               const MultiStartSpec& multistart, int threads, const CorrelationOptions& options) {
    base.validate();
    validate_grid(base.kind, box);
    if (multistart.starts < 1) throw StructuralError("multi-start needs at least one start");
    const std::size_t dims = box.axes.size();
    const double sgn = sign_of(goal);

    std::mt19937_64 rng(multistart.seed);
    std::vector<std::vector<double>> starts(static_cast<std::size_t>(multistart.starts), std::vector<double>(dims));
    for (auto& s : starts)
        for (std::size_t d = 0; d < dims; ++d) {
            // Explicit mapping keeps the draw sequence independent of the
            // standard library's distribution implementation.
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            s[d] = box.axes[d].lo + u * (box.axes[d].hi - box.axes[d].lo);
        }

    std::vector<double> steps(dims);
    for (std::size_t d = 0; d < dims; ++d) {
        const double span = box.axes[d].hi - box.axes[d].lo;
        steps[d] = span > 0.0 ? 0.05 * span : 1e-3;
    }

    std::vector<NelderMeadResult> results(starts.size());
    parallel_chunks(static_cast<long>(starts.size()), threads, [&](long begin, long end) {
        for (long i = begin; i < end; ++i)
            results[static_cast<std::size_t>(i)] = nelder_mead(
                [&](std::span<const double> x) { return sgn * evaluate(with_values(base, box, x), options); },
                starts[static_cast<std::size_t>(i)], steps, refine);
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
        if (results[i].value < results[best].value) best = i;

    ScanResult r = finish(base, goal, box, results[best], options);
    r.grid_extremum = r.extremum_value;
    r.starts = multistart.starts;
    return r;
}

}  // namespace csge
