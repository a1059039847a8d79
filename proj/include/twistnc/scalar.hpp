#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

namespace twistnc {

// Exact scalar for the algebra engine. Conversion from double is exact
// (every finite double is a dyadic rational), so float-mode inputs can be
// lifted into exact mode without loss.
using Rational = boost::multiprecision::cpp_rational;

template <class S>
inline constexpr bool is_exact_scalar = std::is_same_v<S, Rational>;

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.convert_to<double>(); }

inline double abs_value(double v) { return std::fabs(v); }
inline Rational abs_value(const Rational& v) { return v < 0 ? Rational(-v) : v; }

// materializes boost expression templates (e.g. abs_value(a - b))
template <class T>
    requires(!std::is_same_v<std::decay_t<T>, double> && !std::is_same_v<std::decay_t<T>, Rational>)
Rational abs_value(const T& expr)
{
    return abs_value(Rational(expr));
}

/// Parses "p/q", plain decimals and scientific notation into an exact rational.
Rational rational_from_string(std::string_view text);

/// Parses the same grammar as rational_from_string into a double.
double double_from_string(std::string_view text);

/// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double v);

inline std::string format_scalar(double v) { return format_double(v); }
inline std::string format_scalar(const Rational& v) { return v.str(); }

}  // namespace twistnc
