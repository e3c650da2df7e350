#ifndef SKEWMU_CIRCLE_HPP
#define SKEWMU_CIRCLE_HPP

#include <cmath>
#include <complex>
#include <string>

#include "skewmu/continued_fraction.hpp"
#include "skewmu/errors.hpp"
#include "skewmu/numeric.hpp"

namespace skewmu {

// Point of the circle R/Z held as a fixed-point fraction value/2^P together
// with an accumulated absolute error bound of errUlps/2^P.  Addition and
// integer multiplication are exact mod 1 on the grid, so errors only enter
// through inexact constructors and then scale linearly.
class CirclePoint {
  public:
    CirclePoint() = default;

    static CirclePoint zero(int bits) { return CirclePoint(BigInt(0), bits, BigInt(0)); }

    static CirclePoint from_raw(BigInt value, int bits, BigInt errUlps) {
        return CirclePoint(std::move(value), bits, std::move(errUlps));
    }

    // Nearest grid point; 1 ulp error unless the rational is exactly dyadic.
    static CirclePoint from_rat(const BigRat& r, int bits) {
        BigInt num = boost::multiprecision::numerator(r);
        BigInt den = boost::multiprecision::denominator(r);
        // reduce mod 1 first so the floor-based rounding below sees r >= 0
        num %= den;
        if (num < 0) num += den;
        BigInt big = num << (bits + 1);
        BigInt scaled2 = big / den; // floor(2^{P+1} r)
        bool exact = big % den == 0 && scaled2 % 2 == 0;
        BigInt v = (scaled2 + 1) >> 1; // round to nearest
        return CirclePoint(mod_pow2(v, bits), bits, exact ? BigInt(0) : BigInt(1));
    }

    static CirclePoint from_interval(const RatInterval& iv, int bits) {
        CirclePoint mid = from_rat(iv.mid(), bits);
        // Cover the half-width plus the rounding ulp.
        BigRat hw = iv.width() / 2;
        BigInt hwUlps = ceil_mul_pow2(hw, bits);
        return CirclePoint(mid.value_, bits, mid.errUlps_ + hwUlps);
    }

    static CirclePoint from_double(double x, int bits) {
        // Doubles are dyadic: exact when P is large enough.
        double f = x - std::floor(x);
        return from_rat(dyadic_of_double(f), bits);
    }

    const BigInt& value() const { return value_; }
    int bits() const { return bits_; }
    const BigInt& err_ulps() const { return errUlps_; }

    double err_abs() const { return to_double_scaled(errUlps_, -bits_); }

    bool within_budget() const {
        // Invariant err < 2^{-P/2}.
        return bit_length(errUlps_) <= bits_ - (bits_ + 1) / 2;
    }

    // Fraction in [0,1).
    double frac() const { return to_double_scaled(value_, -bits_); }

    // Representative in [-1/2, 1/2).
    double signed_frac() const {
        BigInt half = BigInt(1) << (bits_ - 1);
        if (value_ < half) return frac();
        return to_double_scaled(value_ - (BigInt(1) << bits_), -bits_);
    }

    // Distance to 0 in R/Z.
    double norm_dist() const { return std::fabs(signed_frac()); }

    BigRat to_rat() const { return BigRat(value_, BigInt(1) << bits_); }

    friend CirclePoint circle_add(const CirclePoint& x, const CirclePoint& y) {
        check_compat(x, y);
        return CirclePoint(mod_pow2(x.value_ + y.value_, x.bits_), x.bits_,
                           x.errUlps_ + y.errUlps_);
    }
    friend CirclePoint circle_sub(const CirclePoint& x, const CirclePoint& y) {
        check_compat(x, y);
        return CirclePoint(mod_pow2(x.value_ - y.value_, x.bits_), x.bits_,
                           x.errUlps_ + y.errUlps_);
    }
    friend CirclePoint circle_neg(const CirclePoint& x) {
        return CirclePoint(mod_pow2(-x.value_, x.bits_), x.bits_, x.errUlps_);
    }
    friend CirclePoint circle_mul_int(const CirclePoint& x, const BigInt& n) {
        return CirclePoint(mod_pow2(x.value_ * n, x.bits_), x.bits_,
                           x.errUlps_ * boost::multiprecision::abs(n));
    }

    friend bool operator==(const CirclePoint& a, const CirclePoint& b) {
        return a.bits_ == b.bits_ && a.value_ == b.value_;
    }

  private:
    CirclePoint(BigInt v, int bits, BigInt err)
        : value_(std::move(v)), bits_(bits), errUlps_(std::move(err)) {
        if (bits_ < 8) throw ValidationError("CirclePoint precision too small");
    }

    static BigInt mod_pow2(BigInt v, int bits) {
        BigInt m = BigInt(1) << bits;
        v %= m;
        if (v < 0) v += m;
        return v;
    }

    static BigInt ceil_mul_pow2(const BigRat& r, int bits) {
        BigInt num = boost::multiprecision::numerator(r) << bits;
        BigInt den = boost::multiprecision::denominator(r);
        BigInt q = num / den;
        if (q * den != num) ++q;
        return q;
    }

    static BigRat dyadic_of_double(double f) {
        int e = 0;
        double m = std::frexp(f, &e); // f = m * 2^e, |m| in [0.5,1)
        long long mant = static_cast<long long>(std::ldexp(m, 53));
        BigRat r(BigInt(mant), BigInt(1) << 53);
        if (e >= 0) r *= BigRat(BigInt(1) << e);
        else r /= BigRat(BigInt(1) << -e);
        return r;
    }

    static void check_compat(const CirclePoint& x, const CirclePoint& y) {
        if (x.bits_ != y.bits_)
            throw ValidationError("CirclePoint precision mismatch: " + std::to_string(x.bits_) +
                                  " vs " + std::to_string(y.bits_));
    }

    BigInt value_;
    int bits_ = 0;
    BigInt errUlps_;
};

// alpha as a circle point; the error covers the full enclosure.
inline CirclePoint alpha_point(const ContinuedFraction& cf, int bits) {
    return CirclePoint::from_interval(cf.alpha(), bits);
}
inline CirclePoint alpha_point(const ContinuedFraction& cf) {
    return alpha_point(cf, cf.precision_bits());
}

// Representative of x in [-alpha, 1-alpha), as an exact dyadic rational
// (error bound unchanged, reported separately by the caller from x).
struct Representative {
    BigRat value;    // in [-alpha, 1-alpha)
    bool ambiguous;  // true when x sits within its error of the cut 1-alpha
};

inline Representative representative(const CirclePoint& x, const ContinuedFraction& cf) {
    BigRat v = x.to_rat();
    BigRat errAbs = BigRat(x.err_ulps(), BigInt(1) << x.bits());
    // cut = 1 - alpha, enclosed.
    BigRat cutLo = 1 - cf.alpha().hi, cutHi = 1 - cf.alpha().lo;
    Representative rep;
    if (v + errAbs < cutLo) {
        rep.value = v;
        rep.ambiguous = false;
    } else if (v - errAbs > cutHi) {
        rep.value = v - 1;
        rep.ambiguous = false;
    } else {
        rep.value = v; // best effort
        rep.ambiguous = true;
    }
    return rep;
}

// e(theta) = exp(2 pi i theta) evaluated from the exact angle.
inline std::complex<double> unit_exp(double frac) {
    double ang = 6.283185307179586476925286766559 * frac;
    return {std::cos(ang), std::sin(ang)};
}
inline std::complex<double> unit_exp(const CirclePoint& x) { return unit_exp(x.frac()); }

// e(theta) - 1 computed without cancellation: e(t)-1 = 2 i sin(pi t) e(i pi t).
inline std::complex<double> unit_exp_m1(const CirclePoint& x) {
    double t = x.signed_frac();
    double s = std::sin(3.14159265358979323846264338328 * t);
    double c = std::cos(3.14159265358979323846264338328 * t);
    return {-2.0 * s * s, 2.0 * s * c};
}

// |e(theta) - 1| = 2|sin(pi theta)|.
inline double unit_exp_m1_abs(const CirclePoint& x) {
    return 2.0 * std::fabs(std::sin(3.14159265358979323846264338328 * x.signed_frac()));
}

} // namespace skewmu

#endif
