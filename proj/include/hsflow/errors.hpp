#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace hsflow {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularMatrix : public Error {
public:
    using Error::Error;
};

/// Raised when a triple, metric or field leaves the positive cone.
/// `point` carries the flat lattice index when the failure is located on a grid.
class NotPositive : public Error {
public:
    explicit NotPositive(const std::string& what, std::optional<std::size_t> point = std::nullopt)
        : Error(what), point_(point) {}

    std::optional<std::size_t> point() const noexcept { return point_; }

private:
    std::optional<std::size_t> point_;
};

/// The closed-form T^3 star tables are only valid for det Q = 1.
class DetNotOne : public Error {
public:
    using Error::Error;
};

class StepRejected : public Error {
public:
    StepRejected(const std::string& what, double suggested_dt)
        : Error(what), suggested_dt_(suggested_dt) {}

    double suggested_dt() const noexcept { return suggested_dt_; }

private:
    double suggested_dt_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace hsflow
