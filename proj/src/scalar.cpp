#include "twistnc/scalar.hpp"

#include <cctype>
#include <cstdlib>

namespace twistnc {

namespace {

using boost::multiprecision::cpp_int;

std::string_view trimmed(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_number(std::string_view text)
{
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
}

cpp_int parse_integer(std::string_view s, std::string_view whole)
{
    if (s.empty()) bad_number(whole);
    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) bad_number(whole);
    cpp_int value = 0;
    for (char ch : s) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) bad_number(whole);
        value = value * 10 + (ch - '0');
    }
    return negative ? -value : value;
}

cpp_int pow10(long e)
{
    cpp_int v = 1;
    for (long i = 0; i < e; ++i) v *= 10;
    return v;
}

}  // namespace

Rational rational_from_string(std::string_view text)
{
    const std::string_view s = trimmed(text);
    if (s.empty()) bad_number(text);

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        cpp_int num = parse_integer(s.substr(0, slash), text);
        cpp_int den = parse_integer(s.substr(slash + 1), text);
        if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }

    // [sign] digits [. digits] [e [sign] digits]
    std::string_view mantissa = s;
    long exponent = 0;
    if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
        mantissa = s.substr(0, epos);
        cpp_int e = parse_integer(s.substr(epos + 1), text);
        if (e > 30000 || e < -30000) bad_number(text);
        exponent = e.convert_to<long>();
    }
    std::string digits;
    long frac_digits = 0;
    bool negative = false, seen_dot = false, seen_digit = false;
    for (std::size_t i = 0; i < mantissa.size(); ++i) {
        const char ch = mantissa[i];
        if (i == 0 && (ch == '+' || ch == '-')) {
            negative = ch == '-';
        } else if (ch == '.') {
            if (seen_dot) bad_number(text);
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
            digits.push_back(ch);
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else {
            bad_number(text);
        }
    }
    if (!seen_digit) bad_number(text);

    cpp_int value = 0;
    for (char ch : digits) value = value * 10 + (ch - '0');
    if (negative) value = -value;

    const long net = exponent - frac_digits;
    Rational r(value);
    if (net > 0)
        r *= Rational(pow10(net));
    else if (net < 0)
        r /= Rational(pow10(-net));
    return r;
}

double double_from_string(std::string_view text)
{
    const std::string_view s = trimmed(text);
    if (s.empty()) bad_number(text);
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        const double num = double_from_string(s.substr(0, slash));
        const double den = double_from_string(s.substr(slash + 1));
        if (den == 0.0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        return num / den;
    }
    const std::string owned(s);
    char* end = nullptr;
    const double v = std::strtod(owned.c_str(), &end);
    if (end != owned.c_str() + owned.size()) bad_number(text);
    return v;
}

std::string format_double(double v)
{
    if (v == 0.0) return "0";  // fold away the sign of -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace twistnc
