#ifndef SKEWMU_DYNAMICS_HPP
#define SKEWMU_DYNAMICS_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "skewmu/circle.hpp"
#include "skewmu/errors.hpp"
#include "skewmu/fourier.hpp"
#include "skewmu/numeric.hpp"
#include "skewmu/ostrowski.hpp"

namespace skewmu {

struct ValueErr {
    double value = 0.0;
    double err = 0.0;
};

namespace detail {

constexpr double kPi = 3.14159265358979323846264338328;

// frac(n * d) in [0,1), exact for dyadic d (any double is dyadic).
inline double frac_mul_dyadic(const BigInt& n, double d) {
    if (d == 0.0 || n == 0) return 0.0;
    int e = 0;
    double f = std::frexp(d, &e);
    long long mant = static_cast<long long>(std::ldexp(f, 53)); // d = mant 2^{e-53}
    int shift = 53 - e;
    if (shift <= 0) return 0.0; // n*d is an integer
    BigInt prod = n * mant;
    BigInt m = BigInt(1) << shift;
    prod %= m;
    if (prod < 0) prod += m;
    return to_double_scaled(prod, -shift);
}

// (e(num) - 1) / (e(den) - 1) = (sin(pi num)/sin(pi den)) e(i pi (num-den)),
// with angles known exactly as circle points.  Falls back to an exact
// fixed-point quotient when both angles are near the double underflow range.
inline std::complex<double> geom_ratio(const CirclePoint& num, const CirclePoint& den) {
    double a = num.signed_frac();
    double b = den.signed_frac();
    double sb = std::sin(kPi * b);
    double sa = std::sin(kPi * a);
    double mag;
    if (std::fabs(sb) < 1e-290) {
        if (std::fabs(sa) < 1e-3) {
            // ratio ~ a/b with O(a^2+b^2) relative slack; compute a/b exactly
            BigInt va = num.value(), vb = den.value();
            BigInt half = BigInt(1) << (num.bits() - 1);
            if (va >= half) va -= BigInt(1) << num.bits();
            if (vb >= half) vb -= BigInt(1) << den.bits();
            if (vb == 0) throw PrecisionError("geom_ratio: zero denominator angle");
            mag = to_double(BigRat(va, vb));
        } else {
            throw PrecisionError("geom_ratio: ratio exceeds double range");
        }
    } else {
        mag = sa / sb;
    }
    double phase = kPi * (a - b);
    return {mag * std::cos(phase), mag * std::sin(phase)};
}

inline void validate_window_digits(const SkewProduct& T, const OstrowskiDigits& d,
                                   int kMinusFloor = 2) {
    if (d.digits.empty()) return;
    if (d.min_support() < kMinusFloor)
        throw ValidationError("window digits must be supported at scales >= " +
                              std::to_string(kMinusFloor));
    if (d.max_support() > T.cf.depth() - 1)
        throw ValidationError("window digits exceed certified depth");
    for (const auto& [k, v] : d.digits)
        if (boost::multiprecision::abs(v) > T.cf.a(k))
            throw ValidationError("window digit |n_k| > a_k at k=" + std::to_string(k));
}

inline BigInt window_value(const OstrowskiDigits& d, const ContinuedFraction& cf) {
    BigInt n = 0;
    for (const auto& [k, v] : d.digits) n += v * cf.q(k);
    return n;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Birkhoff sums H_n(x) = sum_{l=0}^{n-1} h(x + l alpha)  (mirror for n < 0).

inline ValueErr birkhoff_exact(const SkewProduct& T, const CirclePoint& x, const BigInt& n,
                               const BigInt& stepBudget = BigInt(100000000),
                               double errBudget = std::numeric_limits<double>::infinity()) {
    BigInt steps = boost::multiprecision::abs(n);
    if (steps > stepBudget)
        throw ValidationError("birkhoff_exact: |n| exceeds the configured step budget");
    const bool neg = n < 0;
    CirclePoint pos = neg ? circle_add(x, circle_mul_int(T.alpha, n)) : x;
    double acc = 0.0;
    CirclePoint cur = pos;
    for (BigInt l = 0; l < steps; ++l) {
        acc += T.h.eval(cur);
        cur = circle_add(cur, T.alpha);
    }
    if (neg) acc = -acc;

    double nD = to_double(steps);
    double angErr = x.err_abs() + nD * T.alpha.err_abs();
    double slope = std::exp2(std::min(500.0, T.h.log2_deriv_bound()));
    double magBound = std::fabs(T.h.const_term()) + T.h.osc_bound();
    double err = nD * (slope * angErr + 8.0 * std::numeric_limits<double>::epsilon() *
                                            (magBound + 1.0) *
                                            (1.0 + static_cast<double>(T.h.coeffs().size())));
    if (err > errBudget)
        throw PrecisionError("birkhoff_exact: error bound " + std::to_string(err) +
                             " exceeds the budget; rebuild inputs at higher precision");
    return {acc, err};
}

// Closed form: n hhat(0) + sum_m hhat(m) (e(nm alpha)-1)/(e(m alpha)-1) e(mx).
inline ValueErr birkhoff_closed(const SkewProduct& T, const CirclePoint& x, const BigInt& n) {
    double acc = to_double(n) * T.h.const_term();
    double err = std::fabs(acc) * 4.0 * std::numeric_limits<double>::epsilon();
    for (const auto& e : T.h.coeffs()) {
        CirclePoint mAlpha = circle_mul_int(T.alpha, e.freq);
        CirclePoint nmAlpha = circle_mul_int(mAlpha, n);
        std::complex<double> ratio = detail::geom_ratio(nmAlpha, mAlpha);
        std::complex<double> phase = unit_exp(circle_mul_int(x, e.freq));
        acc += 2.0 * std::real(e.c * ratio * phase);
        double angErr = 2.0 * detail::kPi * (nmAlpha.err_abs() + mAlpha.err_abs() +
                                             to_double_scaled(x.err_ulps() * e.freq, -x.bits()));
        err += 2.0 * std::abs(e.c) * (std::abs(ratio) + 1.0) *
               (angErr + 8.0 * std::numeric_limits<double>::epsilon());
    }
    return {acc, err};
}

// Same sum reduced mod 1, with the n*hhat(0) part computed exactly.
inline double birkhoff_closed_mod1(const SkewProduct& T, const CirclePoint& x, const BigInt& n) {
    double acc = detail::frac_mul_dyadic(n, T.h.const_term());
    for (const auto& e : T.h.coeffs()) {
        CirclePoint mAlpha = circle_mul_int(T.alpha, e.freq);
        CirclePoint nmAlpha = circle_mul_int(mAlpha, n);
        std::complex<double> ratio = detail::geom_ratio(nmAlpha, mAlpha);
        std::complex<double> phase = unit_exp(circle_mul_int(x, e.freq));
        acc += 2.0 * std::real(e.c * ratio * phase);
    }
    acc = std::fmod(acc, 1.0);
    if (acc < 0) acc += 1.0;
    return acc;
}

// H*_n: the closed form restricted to frequencies below q_{kPlus+1}.
inline ValueErr truncated_H(const SkewProduct& T, const CirclePoint& x, const BigInt& n,
                            int kPlus) {
    if (kPlus + 1 > T.cf.depth() + 1)
        throw ValidationError("truncated_H: kPlus beyond certified depth");
    const BigInt& cut = T.cf.q(kPlus + 1);
    double acc = to_double(n) * T.h.const_term();
    double err = std::fabs(acc) * 4.0 * std::numeric_limits<double>::epsilon();
    for (const auto& e : T.h.coeffs()) {
        if (e.freq >= cut) continue;
        CirclePoint mAlpha = circle_mul_int(T.alpha, e.freq);
        CirclePoint nmAlpha = circle_mul_int(mAlpha, n);
        std::complex<double> ratio = detail::geom_ratio(nmAlpha, mAlpha);
        std::complex<double> phase = unit_exp(circle_mul_int(x, e.freq));
        acc += 2.0 * std::real(e.c * ratio * phase);
        err += 2.0 * std::abs(e.c) * (std::abs(ratio) + 1.0) *
               (16.0 * std::numeric_limits<double>::epsilon());
    }
    return {acc, err};
}

// ---------------------------------------------------------------------------
// Approximation ladder.

// H^(1): same-scale interactions only, with the window phase carried by
// e(m_k q_k (x + nbar_{k-1} alpha)).
inline double approx_H1(const SkewProduct& T, const OstrowskiDigits& nDigits,
                        const CirclePoint& x) {
    detail::validate_window_digits(T, nDigits);
    BigInt n = detail::window_value(nDigits, T.cf);
    double acc = to_double(n) * T.h.const_term();
    if (nDigits.digits.empty()) return acc;

    const int kMinus = nDigits.min_support();
    BigInt nbar = 0; // partial sum below the current scale
    for (int k = kMinus; k <= nDigits.max_support(); ++k) {
        BigInt nk = nDigits.digit(k);
        if (nk != 0) {
            for (const auto& e : T.h.coeffs()) {
                if (e.scale != k) continue;
                CirclePoint den = circle_mul_int(T.alpha, e.freq);           // m_k q_k alpha
                CirclePoint num = circle_mul_int(den, nk * T.cf.q(k));       // n_k m_k q_k^2 alpha
                std::complex<double> ratio = detail::geom_ratio(num, den);
                CirclePoint ph =
                    circle_mul_int(circle_add(x, circle_mul_int(T.alpha, nbar)), e.freq);
                acc += 2.0 * std::real(e.c * ratio * unit_exp(ph));
            }
        }
        nbar += nk * T.cf.q(k);
    }
    return acc;
}

// H^(2): both n and x expanded; evaluates
//   n hhat0 + sum_k sum_m hhat(m q_k) (e((n_k+x~_k) m q_k^2 a) - e(x~_k m q_k^2 a)) / (e(m q_k a)-1).
inline double approx_H2(const SkewProduct& T, const OstrowskiDigits& nDigits,
                        const OstrowskiDigits& xDigits) {
    detail::validate_window_digits(T, nDigits);
    BigInt n = detail::window_value(nDigits, T.cf);
    double acc = to_double(n) * T.h.const_term();
    if (nDigits.digits.empty()) return acc;

    for (int k = nDigits.min_support(); k <= nDigits.max_support(); ++k) {
        BigInt nk = nDigits.digit(k);
        BigInt xk = xDigits.digit(k);
        if (nk == 0) continue;
        for (const auto& e : T.h.coeffs()) {
            if (e.scale != k) continue;
            CirclePoint den = circle_mul_int(T.alpha, e.freq);
            CirclePoint delta = circle_mul_int(den, nk * T.cf.q(k)); // n_k m q_k^2 alpha
            CirclePoint base = circle_mul_int(den, xk * T.cf.q(k));  // x~_k m q_k^2 alpha
            // e(base+delta) - e(base) = e(base) (e(delta) - 1)
            std::complex<double> ratio = detail::geom_ratio(delta, den);
            acc += 2.0 * std::real(e.c * ratio * unit_exp(base));
        }
    }
    return acc;
}

// sum_k |n_k| q_k^{-(tau-1)}: the small-digit deviation bound of H from n hhat0.
inline double step_bound(const SkewProduct& T, const OstrowskiDigits& nDigits) {
    double s = 0.0;
    double tm1 = T.tau.value() - 1.0;
    for (const auto& [k, v] : nDigits.digits) {
        if (v == 0) continue;
        s += std::exp2(log2_big(boost::multiprecision::abs(v)) - tm1 * log2_big(T.cf.q(k)));
    }
    return s;
}

// ---------------------------------------------------------------------------
// Periodic increments phi_k and their lifts.

// Oscillatory part of phi~_k(l) (everything except l q_k hhat0).  Gathers the
// coefficients carrying scale tag k; the model generators tag every
// coefficient they emit.
inline double phi_osc(const SkewProduct& T, int k, const BigInt& l) {
    if (k < 1 || k > T.cf.depth() - 1) throw ValidationError("phi_osc: scale outside range");
    if (l == 0) return 0.0;
    double acc = 0.0;
    for (const auto& e : T.h.coeffs()) {
        if (e.scale != k) continue;
        CirclePoint den = circle_mul_int(T.alpha, e.freq);
        CirclePoint num = circle_mul_int(den, l * T.cf.q(k));
        acc += 2.0 * std::real(e.c * detail::geom_ratio(num, den));
    }
    return acc;
}

// Lifted phi~_k(l) = l q_k hhat0 + oscillation.  The linear part is computed
// in doubles; callers needing it mod 1 use phi_reduced.
inline double phi_tilde(const SkewProduct& T, int k, const BigInt& l) {
    return to_double(BigInt(l * T.cf.q(k))) * T.h.const_term() + phi_osc(T, k, l);
}

// phi_k(l mod a_k) in [0,1), with the linear angle l q_k hhat0 reduced exactly.
inline double phi_reduced(const SkewProduct& T, int k, const BigInt& l) {
    BigInt lm = l % T.cf.a(k);
    if (lm < 0) lm += T.cf.a(k);
    double v = detail::frac_mul_dyadic(lm * T.cf.q(k), T.h.const_term()) + phi_osc(T, k, lm);
    v = std::fmod(v, 1.0);
    if (v < 0) v += 1.0;
    return v;
}

// Materialized table of phi_k over one period.  For a_k beyond the cap the
// table stays lazy: values are computed per call through the evaluator.
struct PhiTable {
    int k = 0;
    BigInt qk, ak;
    bool materialized = false;
    std::vector<double> reduced; // phi_k(l), l = 0..a_k-1
    std::vector<double> lifted;  // phi~_k(l)
    const SkewProduct* T = nullptr;

    double reduced_at(const BigInt& l) const {
        if (materialized && l >= 0 && l < ak)
            return reduced[static_cast<size_t>(l)];
        return phi_reduced(*T, k, l);
    }
    double lifted_at(const BigInt& l) const {
        if (materialized && l >= 0 && l < ak)
            return lifted[static_cast<size_t>(l)];
        return phi_tilde(*T, k, l);
    }
};

inline PhiTable phi_table(const SkewProduct& T, int k, std::uint64_t maxMaterialize = 10000000) {
    if (k < 1 || k > T.cf.depth() - 1) throw ValidationError("phi_table: scale outside range");
    PhiTable tab;
    tab.k = k;
    tab.qk = T.cf.q(k);
    tab.ak = T.cf.a(k);
    tab.T = &T;
    if (tab.ak > maxMaterialize) return tab; // lazy
    size_t n = static_cast<size_t>(tab.ak);
    tab.reduced.resize(n);
    tab.lifted.resize(n);
    for (size_t l = 0; l < n; ++l) {
        tab.lifted[l] = phi_tilde(T, k, BigInt(l));
        tab.reduced[l] = phi_reduced(T, k, BigInt(l));
    }
    tab.materialized = true;
    return tab;
}

// sum_k (phi_k(n_k + x~_k) - phi_k(x~_k)) mod 1.
inline double phi_ladder(const SkewProduct& T, const OstrowskiDigits& nDigits,
                         const OstrowskiDigits& xDigits) {
    detail::validate_window_digits(T, nDigits);
    double acc = 0.0;
    for (const auto& [k, nk] : nDigits.digits) {
        BigInt xk = xDigits.digit(k);
        if (boost::multiprecision::abs(xk) > 2 * T.cf.a(k))
            throw ValidationError("phi_ladder: |x~_k| > 2 a_k");
        acc += phi_reduced(T, k, nk + xk) - phi_reduced(T, k, xk);
    }
    acc = std::fmod(acc, 1.0);
    if (acc < 0) acc += 1.0;
    return acc;
}

// ---------------------------------------------------------------------------
// Product decay diagnostic: partial products of |E_l e(phi_k(l))| over the
// resonant scales in [kMinus, kPlus].

struct ProductDecayRow {
    int k;
    double factor;         // |mean_l e(phi_k(l))|
    double partialProduct; // product of factors up to k
};

inline std::vector<ProductDecayRow> product_decay(const SkewProduct& T, int kMinus, int kPlus,
                                                  std::uint64_t scanBudget = (1ull << 26)) {
    if (kMinus < 1 || kPlus > T.cf.depth() - 1 || kMinus > kPlus)
        throw ValidationError("product_decay: bad scale range");
    std::vector<ProductDecayRow> rows;
    double partial = 1.0;
    for (int k = kMinus; k <= kPlus; ++k) {
        if (!is_resonant(T.cf, k, T.tau)) continue;
        if (T.cf.a(k) > scanBudget)
            throw BudgetError("product_decay: a_k exceeds scan budget at k=" + std::to_string(k));
        const std::uint64_t ak = static_cast<std::uint64_t>(T.cf.a(k));

        // incremental rotors per harmonic with periodic re-anchoring
        struct Harm {
            std::complex<double> c;
            std::complex<double> invDen;
            std::complex<double> z, w;
            CirclePoint delta;
        };
        std::vector<Harm> harms;
        for (const auto& e : T.h.coeffs()) {
            if (e.scale != k) continue;
            Harm hm;
            hm.c = e.c;
            CirclePoint den = circle_mul_int(T.alpha, e.freq);
            std::complex<double> dm1 = unit_exp_m1(den);
            if (std::abs(dm1) < 1e-290)
                throw PrecisionError("product_decay: denominator angle under double range");
            hm.invDen = 1.0 / dm1;
            hm.delta = circle_mul_int(den, T.cf.q(k)); // m q_k^2 alpha
            hm.z = {1.0, 0.0};
            hm.w = unit_exp(hm.delta);
            harms.push_back(hm);
        }
        CirclePoint linDelta =
            CirclePoint::from_double(detail::frac_mul_dyadic(T.cf.q(k), T.h.const_term()),
                                     T.precision);
        CirclePoint linAcc = CirclePoint::zero(T.precision);

        std::complex<double> sum = 0.0;
        double linAngle = 0.0;
        for (std::uint64_t l = 0; l < ak; ++l) {
            if ((l & 0x3FFF) == 0) { // re-anchor
                BigInt lb(l);
                for (auto& hm : harms) hm.z = unit_exp(circle_mul_int(hm.delta, lb));
                linAcc = circle_mul_int(linDelta, lb);
                linAngle = linAcc.frac();
            }
            double osc = 0.0;
            for (auto& hm : harms) osc += 2.0 * std::real(hm.c * (hm.z - 1.0) * hm.invDen);
            sum += unit_exp(linAngle + osc);
            for (auto& hm : harms) hm.z *= hm.w;
            linAngle += linDelta.frac();
            if (linAngle >= 1.0) linAngle -= 1.0;
        }
        double factor = std::abs(sum) / static_cast<double>(ak);
        partial *= factor;
        rows.push_back({k, factor, partial});
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Orbit evaluation with per-coefficient rotors and periodic re-anchoring
// from the closed form.

class OrbitEvaluator {
  public:
    static constexpr std::uint64_t kAnchorPeriod = 1u << 16;

    OrbitEvaluator(const SkewProduct& T, CirclePoint x0, double y0)
        : T_(&T), x0_(std::move(x0)), y0_(y0) {
        rot_.resize(T.h.coeffs().size());
        w_.resize(T.h.coeffs().size());
        anchor();
    }

    std::uint64_t n() const { return n_; }

    // x_n and y_n (both mod 1) of T^n(x0, y0).
    double x_frac() const { return xfrac_; }
    double y_frac() const { return yfrac_; }

    // h(x_n) from the current rotors.
    double h_now() const {
        double acc = T_->h.const_term();
        for (size_t i = 0; i < rot_.size(); ++i)
            acc += 2.0 * std::real(T_->h.coeffs()[i].c * rot_[i]);
        return acc;
    }

    void step() {
        double h = h_now();
        yfrac_ += h;
        yfrac_ -= std::floor(yfrac_);
        for (size_t i = 0; i < rot_.size(); ++i) rot_[i] *= w_[i];
        xfrac_ += alphaFrac_;
        if (xfrac_ >= 1.0) xfrac_ -= 1.0;
        ++n_;
        if (n_ % kAnchorPeriod == 0) anchor();
    }

  private:
    void anchor() {
        BigInt nb(n_);
        CirclePoint xn = circle_add(x0_, circle_mul_int(T_->alpha, nb));
        xfrac_ = xn.frac();
        alphaFrac_ = T_->alpha.frac();
        const auto& cs = T_->h.coeffs();
        for (size_t i = 0; i < cs.size(); ++i) {
            rot_[i] = unit_exp(circle_mul_int(xn, cs[i].freq));
            w_[i] = unit_exp(circle_mul_int(T_->alpha, cs[i].freq));
        }
        double yn = y0_ + birkhoff_closed_mod1(*T_, x0_, nb);
        yfrac_ = yn - std::floor(yn);
    }

    const SkewProduct* T_;
    CirclePoint x0_;
    double y0_ = 0.0;
    std::uint64_t n_ = 0;
    double xfrac_ = 0.0, yfrac_ = 0.0, alphaFrac_ = 0.0;
    std::vector<std::complex<double>> rot_, w_;
};

} // namespace skewmu

#endif
