#ifndef CSRR_ERROR_HPP
#define CSRR_ERROR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace csrr {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Operands built over different variable/generator universes.
struct UniverseMismatch : Error {
    using Error::Error;
};

struct DivisionByZero : Error {
    using Error::Error;
};

// A substitution or numeric evaluation hit a vanishing denominator.
struct PoleError : Error {
    using Error::Error;
};

struct ShapeError : Error {
    using Error::Error;
};

struct DegreeError : Error {
    using Error::Error;
};

// Problem-file / schema violations; carries the full list of complaints.
struct InputError : Error {
    std::vector<std::string> issues;
    explicit InputError(std::vector<std::string> list)
        : Error(join(list)), issues(std::move(list)) {}
    explicit InputError(const std::string& msg) : Error(msg), issues{msg} {}

  private:
    static std::string join(const std::vector<std::string>& list) {
        std::string out;
        for (const auto& s : list) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }
};

struct ParseError : Error {
    int line;
    int column;
    ParseError(const std::string& msg, int line_, int col_)
        : Error(msg + " at line " + std::to_string(line_) + ", column " +
                std::to_string(col_)),
          line(line_), column(col_) {}
};

// Two independent computations that must agree, disagreed.  Always a bug.
struct SelfCheckError : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace csrr

#endif
