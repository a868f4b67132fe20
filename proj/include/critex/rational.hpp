#ifndef CRITEX_RATIONAL_HPP
#define CRITEX_RATIONAL_HPP

// Exact rational scalar used for all exponent algebra.  Floating point enters
// only when a caller explicitly converts.

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

namespace critex {

using rat  = boost::multiprecision::cpp_rational;
using bigint = boost::multiprecision::cpp_int;

inline rat make_rat(long num, long den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    return rat(bigint(num), bigint(den));
}

// Parse "3", "-7/2", "0.75", "1e-3", "2.5e2" into an exact rational.
inline rat rat_from_string(std::string_view sv) {
    std::string s(sv);
    if (s.empty()) throw std::invalid_argument("empty rational literal");

    // cpp_int's string constructor follows integer-literal rules, so a
    // leading zero would flip it into octal; strip redundant zeros first
    auto to_bigint = [](std::string t) {
        bool neg = false;
        std::size_t p = 0;
        if (p < t.size() && (t[p] == '+' || t[p] == '-')) neg = (t[p++] == '-');
        while (p + 1 < t.size() && t[p] == '0') ++p;
        bigint v(t.substr(p));
        return neg ? bigint(-v) : v;
    };

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        bigint num = to_bigint(s.substr(0, slash));
        bigint den = to_bigint(s.substr(slash + 1));
        if (den == 0) throw std::domain_error("rational with zero denominator");
        return rat(num, den);
    }

    bool negative = false;
    std::size_t pos = 0;
    if (s[pos] == '+' || s[pos] == '-') {
        negative = (s[pos] == '-');
        ++pos;
    }

    std::string digits;       // mantissa digits with the point removed
    long frac_digits = 0;     // digits after the decimal point
    bool seen_point = false, seen_digit = false;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        if (c == '.') {
            if (seen_point) throw std::invalid_argument("malformed rational literal: " + s);
            seen_point = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            seen_digit = true;
            if (seen_point) ++frac_digits;
        } else if (c == 'e' || c == 'E') {
            break;
        } else {
            throw std::invalid_argument("malformed rational literal: " + s);
        }
    }
    if (!seen_digit) throw std::invalid_argument("malformed rational literal: " + s);

    long exp10 = 0;
    if (pos < s.size()) {  // exponent part
        ++pos;             // past 'e'
        if (pos >= s.size()) throw std::invalid_argument("malformed rational literal: " + s);
        exp10 = std::strtol(s.c_str() + pos, nullptr, 10);
        std::size_t check = pos;
        if (s[check] == '+' || s[check] == '-') ++check;
        if (check >= s.size()) throw std::invalid_argument("malformed rational literal: " + s);
        for (; check < s.size(); ++check)
            if (!std::isdigit(static_cast<unsigned char>(s[check])))
                throw std::invalid_argument("malformed rational literal: " + s);
    }

    bigint mantissa = to_bigint(digits.empty() ? std::string("0") : digits);
    long net = exp10 - frac_digits;
    rat value(mantissa);
    bigint ten(10);
    if (net > 0) {
        bigint scale = 1;
        for (long i = 0; i < net; ++i) scale *= ten;
        value *= rat(scale);
    } else if (net < 0) {
        bigint scale = 1;
        for (long i = 0; i < -net; ++i) scale *= ten;
        value /= rat(scale);
    }
    return negative ? rat(-value) : value;
}

inline std::string rat_to_string(const rat& q) {
    const bigint num = boost::multiprecision::numerator(q);
    const bigint den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline double rat_to_double(const rat& q) { return q.convert_to<double>(); }

// Exact conversion: every finite double is a dyadic rational.
inline rat rat_from_double(double x) { return rat(x); }

// q^e for integer e (exact).
inline rat rat_pow(const rat& q, long e) {
    if (e == 0) return rat(1);
    if (e < 0) {
        if (q == 0) throw std::domain_error("zero to a negative power");
        return rat(1) / rat_pow(q, -e);
    }
    rat acc(1), base = q;
    long k = e;
    while (k > 0) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

inline int rat_sign(const rat& q) { return q.sign(); }

} // namespace critex

#endif // CRITEX_RATIONAL_HPP
