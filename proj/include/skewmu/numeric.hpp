#ifndef SKEWMU_NUMERIC_HPP
#define SKEWMU_NUMERIC_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>

#include "skewmu/errors.hpp"

namespace skewmu {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline int bit_length(const BigInt& v) {
    if (v == 0) return 0;
    return static_cast<int>(boost::multiprecision::msb(boost::multiprecision::abs(v))) + 1;
}

// Convert possibly huge integers to double without overflowing the
// double exponent range: returns m * 2^e as (mantissa, exponent).
inline double to_double_scaled(const BigInt& v, int scalePow2) {
    if (v == 0) return 0.0;
    const bool neg = v < 0;
    BigInt a = boost::multiprecision::abs(v);
    int bits = bit_length(a);
    int shift = 0;
    if (bits > 62) {
        shift = bits - 62;
        a >>= shift;
    }
    double d = static_cast<double>(a);
    if (neg) d = -d;
    return std::ldexp(d, shift + scalePow2);
}

inline double to_double(const BigInt& v) { return to_double_scaled(v, 0); }

// log2 of a positive integer, accurate to ~2^-50 relative.
inline double log2_big(const BigInt& v) {
    if (v <= 0) throw ValidationError("log2_big: nonpositive argument");
    int bits = bit_length(v);
    if (bits <= 62) return std::log2(static_cast<double>(v));
    BigInt top = v >> (bits - 62);
    return std::log2(static_cast<double>(top)) + static_cast<double>(bits - 62);
}

inline double to_double(const BigRat& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (num == 0) return 0.0;
    // Scale so both parts fit comfortably in doubles.
    int nb = bit_length(num), db = bit_length(den);
    int s = std::max(nb, db) - 60;
    if (s < 0) s = 0;
    double dn = to_double_scaled(num, -s);
    double dd = to_double_scaled(den, -s);
    return dn / dd;
}

inline double log2_rat_abs(const BigRat& r) {
    const BigInt num = boost::multiprecision::abs(boost::multiprecision::numerator(r));
    const BigInt den = boost::multiprecision::denominator(r);
    if (num == 0) throw ValidationError("log2_rat_abs: zero argument");
    return log2_big(num) - log2_big(den);
}

inline BigInt pow_big(BigInt base, unsigned long e) {
    BigInt acc = 1;
    while (e) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

// Exact rational interval [lo, hi].  Construction-site comments say whether
// the endpoints themselves are attainable; most enclosures here are open
// (the endpoints correspond to excluded rational tails).
struct RatInterval {
    BigRat lo, hi;

    RatInterval() = default;
    RatInterval(BigRat l, BigRat h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) std::swap(lo, hi);
    }

    BigRat width() const { return hi - lo; }
    BigRat mid() const { return (lo + hi) / 2; }
    bool contains_zero() const { return lo <= 0 && hi >= 0; }
    bool strictly_positive() const { return lo > 0; }
    bool strictly_negative() const { return hi < 0; }
    int sign() const {
        if (strictly_positive()) return 1;
        if (strictly_negative()) return -1;
        return 0;
    }
    RatInterval abs() const {
        if (strictly_negative()) return RatInterval(-hi, -lo);
        if (strictly_positive()) return *this;
        return RatInterval(BigRat(0), std::max(hi, BigRat(-lo)));
    }

    friend RatInterval operator+(const RatInterval& a, const RatInterval& b) {
        return {a.lo + b.lo, a.hi + b.hi};
    }
    friend RatInterval operator-(const RatInterval& a, const RatInterval& b) {
        return {a.lo - b.hi, a.hi - b.lo};
    }
    friend RatInterval operator*(const BigRat& c, const RatInterval& a) {
        return c >= 0 ? RatInterval{c * a.lo, c * a.hi} : RatInterval{c * a.hi, c * a.lo};
    }
};

// Parse a decimal string ("0.414", "2.5", "-1e-3" not supported) to an
// exact rational.
inline BigRat rat_from_decimal(const std::string& s) {
    if (s.empty()) throw ValidationError("empty decimal string");
    size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') {
        neg = s[i] == '-';
        ++i;
    }
    BigInt num = 0;
    BigInt den = 1;
    bool seenDot = false, seenDigit = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c == '.') {
            if (seenDot) throw ValidationError("malformed decimal: " + s);
            seenDot = true;
        } else if (c >= '0' && c <= '9') {
            num = num * 10 + (c - '0');
            if (seenDot) den *= 10;
            seenDigit = true;
        } else if (c == '\'' || c == '_') {
            continue; // digit separators allowed
        } else {
            throw ValidationError("malformed decimal: " + s);
        }
    }
    if (!seenDigit) throw ValidationError("malformed decimal: " + s);
    BigRat r(num, den);
    return neg ? -r : r;
}

// Decimal string taken as a midpoint with half-ulp uncertainty in the last
// written digit.  "0.5" becomes (0.45..., 0.55...) only at the final digit:
// [0.5 - 1/20, 0.5 + 1/20] is too wide; we use half of the last place.
inline RatInterval interval_from_decimal(const std::string& s) {
    BigRat v = rat_from_decimal(s);
    BigInt den = 1;
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        size_t places = 0;
        for (size_t i = dot + 1; i < s.size(); ++i)
            if (s[i] >= '0' && s[i] <= '9') ++places;
        for (size_t i = 0; i < places; ++i) den *= 10;
    }
    BigRat halfUlp = BigRat(1, 2 * den);
    return RatInterval(v - halfUlp, v + halfUlp);
}

// Exact rational exponent, e.g. tau = 5/2 parsed from "2.5".
struct Rational {
    long num = 0;
    long den = 1;

    Rational() = default;
    Rational(long n, long d) : num(n), den(d) {
        if (d <= 0) throw ValidationError("Rational: nonpositive denominator");
        reduce();
    }
    static Rational from_decimal(const std::string& s) {
        BigRat r = rat_from_decimal(s);
        BigInt n = boost::multiprecision::numerator(r);
        BigInt d = boost::multiprecision::denominator(r);
        if (bit_length(n) > 62 || bit_length(d) > 62)
            throw ValidationError("Rational::from_decimal: too many digits: " + s);
        return Rational(static_cast<long>(n), static_cast<long>(d));
    }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  private:
    void reduce() {
        long a = num < 0 ? -num : num, b = den;
        while (b) {
            long t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            num /= a;
            den /= a;
        }
    }
};

} // namespace skewmu

#endif
