#pragma once

#include <stdexcept>
#include <string>

namespace csge {

// Base for every error raised by the library. The category decides the CLI
// exit code.
class Error : public std::runtime_error {
public:
    enum class Category { config, numerical, structural };

    Error(Category category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    Category category() const noexcept { return category_; }

private:
    Category category_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(Category::config, what) {}
};

// Malformed Bell setting / scan specification.
class StructuralError : public Error {
public:
    explicit StructuralError(const std::string& what) : Error(Category::structural, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(Category::numerical, what) {}
};

// x0 = B2/(sigma0 b2) with b2 == 0 and B2 != 0.
class OffsetUndefinedError : public ConfigError {
public:
    explicit OffsetUndefinedError(const std::string& what) : ConfigError("offset undefined: " + what) {}
};

class NullBranchError : public NumericalError {
public:
    explicit NullBranchError(const std::string& what) : NumericalError("null branch: " + what) {}
};

class GridTooSmallError : public NumericalError {
public:
    GridTooSmallError(const std::string& what, double suggested_half_width, int suggested_points = 0)
        : NumericalError("grid too small: " + what),
          suggested_half_width_(suggested_half_width),
          suggested_points_(suggested_points) {}

    double suggested_half_width() const noexcept { return suggested_half_width_; }
    // 0 when the point count was not the problem.
    int suggested_points() const noexcept { return suggested_points_; }

private:
    double suggested_half_width_;
    int suggested_points_;
};

class UnstableStepError : public NumericalError {
public:
    UnstableStepError(const std::string& what, int suggested_steps)
        : NumericalError("unstable step: " + what), suggested_steps_(suggested_steps) {}

    int suggested_steps() const noexcept { return suggested_steps_; }

private:
    int suggested_steps_;
};

}  // namespace csge
