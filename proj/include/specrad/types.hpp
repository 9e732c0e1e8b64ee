#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace specrad {

// Exact integer and rational types used by all counting layers.
// Floating point enters only where logarithms/roots are taken.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

[[noreturn]] inline void fail(const std::string& msg) {
    throw std::invalid_argument(msg);
}

inline void require(bool ok, const std::string& msg) {
    if (!ok) fail(msg);
}

// Internal consistency violations (bugs, not caller errors).
inline void check_internal(bool ok, const std::string& msg) {
    if (!ok) throw std::logic_error(msg);
}

inline double to_double(const Rat& r) {
    return r.convert_to<double>();
}

}  // namespace specrad
