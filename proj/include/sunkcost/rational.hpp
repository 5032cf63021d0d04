#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sunkcost {

// All probabilities, costs, rewards and payoffs are exact rationals.
// cpp_rational keeps values canonical: reduced, positive denominator.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
/// Decimal string to integer; strips leading zeros so the cpp_int string
/// constructor never re-interprets the text as an octal literal.
inline Int parse_decimal_int(std::string s) {
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = s[0] == '-';
        s.erase(0, 1);
    }
    if (s.empty()) throw ParseError("missing digits");
    std::size_t first = s.find_first_not_of('0');
    s = first == std::string::npos ? "0" : s.substr(first);
    Int v(s);
    return neg ? Int(-v) : v;
}
}  // namespace detail

/// Parses "7", "-3/4" or a plain decimal like "0.76" into an exact rational.
inline Rat parse_rat(std::string_view text) {
    if (text.empty()) throw ParseError("empty rational literal");
    std::string s(text);
    auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            Int num = detail::parse_decimal_int(s.substr(0, slash));
            Int den = detail::parse_decimal_int(s.substr(slash + 1));
            if (den == 0) throw ParseError("zero denominator in '" + s + "'");
            return Rat(num, den);
        }
        auto dot = s.find('.');
        if (dot != std::string::npos) {
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            std::size_t frac_len = s.size() - dot - 1;
            if (frac_len == 0) throw ParseError("trailing dot in '" + s + "'");
            if (dot == 0 || (dot == 1 && (s[0] == '+' || s[0] == '-')))
                throw ParseError("missing integer part in '" + s + "'");
            Int den = 1;
            for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
            return Rat(detail::parse_decimal_int(digits), den);
        }
        return Rat(detail::parse_decimal_int(s));
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError("bad rational literal '" + s + "': " + e.what());
    }
}

/// Canonical textual form: "p/q", or just "p" when the denominator is 1.
inline std::string rat_to_string(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

/// Decimal rendering for display columns; never fed back into computation.
inline std::string rat_to_decimal(const Rat& r, int significant = 12) {
    if (r == 0) return "0";
    Int num = numerator(r);
    Int den = denominator(r);
    bool neg = num < 0;
    if (neg) num = -num;

    // Scale so the integer part of num/den has `significant` digits.
    int shift = 0;
    Int scaled_num = num;
    while (scaled_num / den == 0) {
        scaled_num *= 10;
        ++shift;
    }
    std::string lead = Int(scaled_num / den).str();
    int more = significant - static_cast<int>(lead.size());
    for (int i = 0; i < more; ++i) {
        scaled_num *= 10;
        ++shift;
    }
    // Round half away from zero at the last kept digit.
    Int q = (2 * scaled_num + den) / (2 * den);
    std::string digits = q.str();
    int exp10 = static_cast<int>(digits.size()) - 1 - shift;

    std::string out = neg ? "-" : "";
    if (exp10 >= 0 && exp10 < significant) {
        out += digits.substr(0, exp10 + 1);
        std::string frac = digits.substr(exp10 + 1);
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        if (!frac.empty()) out += "." + frac;
    } else if (exp10 < 0 && exp10 > -5) {
        out += "0.";
        for (int i = 0; i < -exp10 - 1; ++i) out += '0';
        while (!digits.empty() && digits.back() == '0') digits.pop_back();
        out += digits;
    } else {
        out += digits.substr(0, 1);
        std::string frac = digits.substr(1);
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        if (!frac.empty()) out += "." + frac;
        out += "e" + std::to_string(exp10);
    }
    return out;
}

/// base^exp for non-negative integer exponents.
inline Rat rat_pow(const Rat& base, unsigned exp) {
    Rat acc = 1;
    Rat b = base;
    unsigned e = exp;
    while (e > 0) {
        if (e & 1u) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

/// Largest rational r on the 1/M grid with r <= sqrt(x); M = ceil(1/precision).
/// The returned value satisfies sqrt(x) - r < precision.
inline Rat rat_sqrt_lower(const Rat& x, const Rat& precision) {
    if (x < 0) throw std::domain_error("sqrt of negative rational");
    if (precision <= 0) throw std::domain_error("non-positive precision");
    Int m = numerator(Rat(1) / precision) / denominator(Rat(1) / precision) + 1;
    Int a = numerator(x);
    Int b = denominator(x);
    // sqrt(a/b) = sqrt(a*b)/b, then snap down to the 1/(b*m) grid.
    Int s = sqrt(Int(a * b * m * m));
    return Rat(s, b * m);
}

/// Smallest grid rational r with r >= sqrt(x); companion of rat_sqrt_lower.
inline Rat rat_sqrt_upper(const Rat& x, const Rat& precision) {
    Rat lo = rat_sqrt_lower(x, precision);
    if (lo * lo == x) return lo;
    Int m = numerator(Rat(1) / precision) / denominator(Rat(1) / precision) + 1;
    return lo + Rat(1, denominator(x) * m);
}

/// Rational approximation of 1/e, accurate to well under 1e-30.
inline const Rat& inv_e() {
    static const Rat v = [] {
        Rat sum = 0;
        Rat term = 1;  // (-1)^k / k!
        for (int k = 1; k <= 32; ++k) {
            term /= k;
            if (k % 2 == 1)
                sum -= term;
            else
                sum += term;
        }
        return Rat(1) + sum;
    }();
    return v;
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

}  // namespace sunkcost
