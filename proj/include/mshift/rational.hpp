#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "mshift/error.hpp"

namespace mshift {

using Int = boost::multiprecision::cpp_int;

// Exact rational, always in lowest terms with positive denominator.
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(Int num, Int den) {
    if (den == 0) throw Error("rational with zero denominator");
    if (den < 0) {  // cpp_rational's two-argument constructor insists on den > 0
        num = -num;
        den = -den;
    }
    return Rational(num, den);
}

namespace detail {

inline bool parse_int_token(const std::string& s, Int& out) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (std::size_t k = i; k < s.size(); ++k)
        if (s[k] < '0' || s[k] > '9') return false;
    out = Int(s);
    return true;
}

}  // namespace detail

// Accepts "n", "n/m", and finite decimals like "0.25" (converted exactly).
// Anything else (scientific notation, repeating-decimal shorthand, junk) is rejected.
inline Rational parse_rational(const std::string& text) {
    std::size_t slash = text.find('/');
    if (slash != std::string::npos) {
        Int num, den;
        if (!detail::parse_int_token(text.substr(0, slash), num) ||
            !detail::parse_int_token(text.substr(slash + 1), den))
            throw ParseError("bad rational literal '" + text + "'");
        if (den == 0) throw ParseError("zero denominator in '" + text + "'");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        return Rational(num, den);
    }
    std::size_t dot = text.find('.');
    if (dot != std::string::npos) {
        std::string head = text.substr(0, dot), tail = text.substr(dot + 1);
        bool neg = false;
        if (!head.empty() && (head[0] == '+' || head[0] == '-')) {
            neg = head[0] == '-';
            head = head.substr(1);
        }
        if ((head.empty() && tail.empty()) ||
            head.find_first_not_of("0123456789") != std::string::npos ||
            tail.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError("bad decimal literal '" + text + "'");
        if (head.empty()) head = "0";
        Int num(head);
        Int den = 1;
        for (char c : tail) {
            num = num * 10 + (c - '0');
            den *= 10;
        }
        return Rational(neg ? -num : num, den);
    }
    Int num;
    if (!detail::parse_int_token(text, num)) throw ParseError("bad rational literal '" + text + "'");
    return Rational(num);
}

// Canonical form: "n" when integral, else "n/m".
inline std::string format_rational(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace mshift
