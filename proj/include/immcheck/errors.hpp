#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace immcheck {

/// Base class for all engine errors so callers can catch one type.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Syntax or validation error in an immersion source file. Positions are 1-based.
struct ParseError : Error {
    ParseError(int line_, int col_, std::string what_, std::vector<std::string> expected_ = {})
        : Error(format(line_, col_, what_, expected_)),
          line(line_), col(col_), expected(std::move(expected_)) {}

    int line;
    int col;
    std::vector<std::string> expected;

private:
    static std::string format(int line, int col, const std::string& what,
                              const std::vector<std::string>& expected) {
        std::string msg = std::to_string(line) + ":" + std::to_string(col) + ": " + what;
        if (!expected.empty()) {
            msg += " (expected ";
            for (std::size_t i = 0; i < expected.size(); ++i) {
                if (i) msg += ", ";
                msg += expected[i];
            }
            msg += ")";
        }
        return msg;
    }
};

/// Domain violation of an elementary function or operator (sqrt of non-positive,
/// division by zero, ...). Carries the evaluation site when known.
struct DomainError : Error {
    using Error::Error;
};

/// The chart fails to be an immersion at a point: det g below the
/// degeneracy threshold.
struct NotAnImmersion : Error {
    NotAnImmersion(std::vector<double> point_, double det_g_)
        : Error(format(point_, det_g_)), point(std::move(point_)), det_g(det_g_) {}

    std::vector<double> point;
    double det_g;

private:
    static std::string format(const std::vector<double>& p, double det) {
        std::string msg = "not an immersion at (";
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (i) msg += ", ";
            msg += std::to_string(p[i]);
        }
        msg += "): det g = " + std::to_string(det);
        return msg;
    }
};

/// Jets of different coordinate dimension were mixed, or a frame/split does
/// not match the ambient dimension.
struct DimensionMismatch : Error {
    using Error::Error;
};

/// A parameter lies outside the documented range of a catalog family.
struct OutOfRange : Error {
    using Error::Error;
};

} // namespace immcheck
