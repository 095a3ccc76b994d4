#ifndef WACHSPRESS_ERRORS_HPP
#define WACHSPRESS_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wachspress/format.hpp"

namespace wachspress {

/// Root of every exception thrown by the library. The CLI maps all of these
/// to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateGeometry : public Error {
public:
    using Error::Error;
};

class NonPlanarFace : public Error {
public:
    NonPlanarFace(std::size_t face, double deviation)
        : Error("face " + std::to_string(face) + " is not planar (deviation " +
                std::to_string(deviation) + ")"),
          face_(face), deviation_(deviation) {}

    std::size_t face() const noexcept { return face_; }
    double deviation() const noexcept { return deviation_; }

private:
    std::size_t face_;
    double deviation_;
};

class NotConvex : public Error {
public:
    using Error::Error;
};

class BadTopology : public Error {
public:
    using Error::Error;
};

class NonSimpleVertex : public Error {
public:
    NonSimpleVertex(std::size_t vertex, std::size_t valence)
        : Error("vertex " + std::to_string(vertex) + " is incident to " +
                std::to_string(valence) + " faces"),
          vertex_(vertex) {}

    std::size_t vertex() const noexcept { return vertex_; }

private:
    std::size_t vertex_;
};

/// Evaluation point on or outside the boundary. Carries min_f h_f(x).
class PointNotInterior : public Error {
public:
    explicit PointNotInterior(double min_distance)
        : Error("point is not strictly interior (min h_f = " +
                format_double(min_distance) + ")"),
          min_distance_(min_distance) {}

    double min_distance() const noexcept { return min_distance_; }

private:
    double min_distance_;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class SolveError : public Error {
public:
    SolveError(const std::string& what, std::vector<double> residuals)
        : Error(what), residuals_(std::move(residuals)) {}

    const std::vector<double>& residual_history() const noexcept { return residuals_; }

private:
    std::vector<double> residuals_;
};

}  // namespace wachspress

#endif
