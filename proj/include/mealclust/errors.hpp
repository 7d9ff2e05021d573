#pragma once

#include <stdexcept>
#include <string>

namespace mealclust {

/// Precondition violation on an argument (bad range, mismatched dimensions, ...).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// CSV header is missing a required column or carries an unknown one.
class SchemaError : public std::runtime_error {
public:
    SchemaError(const std::string& column, const std::string& what)
        : std::runtime_error(what), column_(column) {}
    const std::string& column() const noexcept { return column_; }

private:
    std::string column_;
};

/// Numerical failure inside an iterative fit.
class FitError : public std::runtime_error {
public:
    FitError(int iteration, const std::string& what)
        : std::runtime_error(what), iteration_(iteration) {}
    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

/// Davies-Bouldin index cannot be computed for the given partition.
class UndefinedDbiError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A parameter sweep produced no selectable entry.
class SweepError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Household profile file is malformed; field() names the offending key.
class ProfileError : public std::runtime_error {
public:
    ProfileError(const std::string& field, const std::string& what)
        : std::runtime_error(what), field_(field) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace mealclust
