#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace unitk {

/// Exact integer used for group orders.
using BigInt = boost::multiprecision::cpp_int;

inline std::string to_string(const BigInt& x) { return x.str(); }

}  // namespace unitk
