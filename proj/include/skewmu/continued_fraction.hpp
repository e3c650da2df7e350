#ifndef SKEWMU_CONTINUED_FRACTION_HPP
#define SKEWMU_CONTINUED_FRACTION_HPP

#include <string>
#include <utility>
#include <vector>

#include "skewmu/errors.hpp"
#include "skewmu/numeric.hpp"

namespace skewmu {

// Partial quotients a_1, a_2, ..., a_K of alpha = [0; a_1, a_2, ...].
struct PartialQuotients {
    std::vector<BigInt> a; // a[i] holds a_{i+1}

    int count() const { return static_cast<int>(a.size()); }
    const BigInt& at(int k) const { // 1-based
        if (k < 1 || k > count()) throw ValidationError("partial quotient index out of range");
        return a[static_cast<size_t>(k - 1)];
    }
    void validate() const {
        if (count() < 2) throw ValidationError("need at least two partial quotients");
        for (const BigInt& q : a)
            if (q < 1) throw ValidationError("partial quotients must be >= 1");
    }
};

// Continued-fraction engine with exact convergent arithmetic.
//
// Indexing follows the convention p_k/q_k = [0; a_1, ..., a_{k-1}], so
//   p_1 = 0, q_1 = 1, p_2 = 1, q_2 = a_1,
//   p_{k+1} = a_k p_k + p_{k-1},  q_{k+1} = a_k q_k + q_{k-1}   (k >= 2).
// This differs by one from the more common q_k = [0; a_1..a_k] convention;
// all code and reports in this project use the convention above.
//
// theta_k = q_k alpha - p_k is stored as an exact rational enclosure derived
// from the alpha enclosure (never from floating subtraction).  Enclosures are
// open intervals: their endpoints correspond to rational tails of the
// expansion, which are excluded for the irrational alpha being represented.
class ContinuedFraction {
  public:
    static ContinuedFraction from_quotients(PartialQuotients quots, int precisionBits) {
        quots.validate();
        if (precisionBits < 64) throw ValidationError("precisionBits must be >= 64");
        ContinuedFraction cf;
        cf.quotients_ = std::move(quots);
        cf.precisionBits_ = precisionBits;
        cf.build();
        cf.check_invariants();
        return cf;
    }

    // Interval Euclidean algorithm: extract as many quotients as the
    // enclosure certifies (at most maxK), then delegate to from_quotients.
    static ContinuedFraction from_real(const RatInterval& enc, int maxK, int precisionBits) {
        if (!(enc.lo > 0 && enc.hi < 1))
            throw ValidationError("alpha enclosure must lie inside (0,1)");
        if (enc.lo >= enc.hi)
            throw ValidationError("alpha enclosure must have distinct endpoints");
        if (maxK < 2) throw ValidationError("maxK must be >= 2");

        PartialQuotients quots;
        BigRat lo = enc.lo, hi = enc.hi;
        while (quots.count() < maxK) {
            if (lo <= 0) break; // remainder may vanish: cannot certify further
            BigRat invLo = 1 / hi, invHi = 1 / lo;
            BigInt fLo = rat_floor(invLo), fHi = rat_floor(invHi);
            // The enclosure is open, so an exactly-integer upper end is not attained.
            if (fHi == invHi) --fHi;
            if (fLo != fHi) break; // quotient not determined by the enclosure
            if (fLo < 1) throw ValidationError("enclosure not inside (0,1)");
            quots.a.push_back(fLo);
            BigRat nlo = invLo - BigRat(fLo), nhi = invHi - BigRat(fHi);
            lo = nlo;
            hi = nhi;
        }
        if (quots.count() < 2)
            throw ValidationError(
                "enclosure too wide (or rational): cannot certify two partial quotients");
        return from_quotients(std::move(quots), precisionBits);
    }

    int depth() const { return quotients_.count(); } // K: certified depth
    int precision_bits() const { return precisionBits_; }
    const PartialQuotients& quotients() const { return quotients_; }

    const BigInt& a(int k) const { return quotients_.at(k); }
    const BigInt& p(int k) const { return conv_at(p_, k); }
    const BigInt& q(int k) const { return conv_at(q_, k); }
    // p,q available for k = 1..K+1; theta for k = 1..K+1 (theta_{K+1} has
    // uncertified sign: its enclosure touches zero).
    const RatInterval& theta(int k) const { return conv_at(theta_, k); }
    const RatInterval& alpha() const { return alpha_; }

    bool theta_sign_certified(int k) const { return k >= 1 && k <= depth(); }

    // |theta_k| as an enclosure (k <= K).
    RatInterval theta_abs(int k) const {
        if (!theta_sign_certified(k))
            throw PrecisionError("theta sign not certified at index " + std::to_string(k));
        return theta(k).abs();
    }

    std::string describe() const {
        return "[0; a_1..a_" + std::to_string(depth()) + "], q_" + std::to_string(depth() + 1) +
               " ~ 2^" + std::to_string(bit_length(q(depth() + 1)));
    }

  private:
    PartialQuotients quotients_;
    std::vector<BigInt> p_, q_;        // index 0 unused; filled for 1..K+1
    std::vector<RatInterval> theta_;   // same indexing
    RatInterval alpha_;
    int precisionBits_ = 0;

    static BigInt rat_floor(const BigRat& r) {
        BigInt n = boost::multiprecision::numerator(r);
        BigInt d = boost::multiprecision::denominator(r);
        BigInt q = n / d;
        if (n < 0 && q * d != n) --q;
        return q;
    }

    static const BigInt& conv_at(const std::vector<BigInt>& v, int k) {
        if (k < 1 || k >= static_cast<int>(v.size()))
            throw ValidationError("convergent index out of certified range");
        return v[static_cast<size_t>(k)];
    }
    static const RatInterval& conv_at(const std::vector<RatInterval>& v, int k) {
        if (k < 1 || k >= static_cast<int>(v.size()))
            throw ValidationError("theta index out of certified range");
        return v[static_cast<size_t>(k)];
    }

    void build() {
        const int K = depth();
        p_.assign(static_cast<size_t>(K) + 2, BigInt(0));
        q_.assign(static_cast<size_t>(K) + 2, BigInt(0));
        p_[1] = 0;
        q_[1] = 1;
        p_[2] = 1;
        q_[2] = a(1);
        for (int k = 2; k <= K; ++k) {
            p_[static_cast<size_t>(k) + 1] = a(k) * p_[static_cast<size_t>(k)] + p_[static_cast<size_t>(k) - 1];
            q_[static_cast<size_t>(k) + 1] = a(k) * q_[static_cast<size_t>(k)] + q_[static_cast<size_t>(k) - 1];
        }

        // Any irrational with quotient prefix a_1..a_K lies strictly between
        // [0;a_1..a_K] = p_{K+1}/q_{K+1} and [0;a_1..a_K,1] = (p_{K+1}+p_K)/(q_{K+1}+q_K).
        BigRat v1(p_[static_cast<size_t>(K) + 1], q_[static_cast<size_t>(K) + 1]);
        BigRat v2(p_[static_cast<size_t>(K) + 1] + p_[static_cast<size_t>(K)],
                  q_[static_cast<size_t>(K) + 1] + q_[static_cast<size_t>(K)]);
        alpha_ = RatInterval(v1, v2);

        theta_.assign(static_cast<size_t>(K) + 2, RatInterval{});
        for (int k = 1; k <= K + 1; ++k) {
            BigRat pk(p_[static_cast<size_t>(k)]);
            RatInterval t = BigRat(q_[static_cast<size_t>(k)]) * alpha_;
            theta_[static_cast<size_t>(k)] = RatInterval(t.lo - pk, t.hi - pk);
        }

        // Precision certificate: the fixed-point grid at precisionBits must
        // resolve |theta_K| with 64 guard bits, i.e. q_{K+1}+q_K < 2^(P-64).
        if (bit_length(q_[static_cast<size_t>(K) + 1] + q_[static_cast<size_t>(K)]) > precisionBits_ - 64)
            throw PrecisionError("quotient depth K=" + std::to_string(K) +
                                 " exceeds what precisionBits=" + std::to_string(precisionBits_) +
                                 " certifies; raise precision or lower K");
    }

    void check_invariants() const {
        const int K = depth();
        for (int k = 1; k <= K; ++k) {
            if (boost::multiprecision::gcd(p_[static_cast<size_t>(k)], q_[static_cast<size_t>(k)]) != 1)
                throw Error("convergent invariant violated: gcd(p_k,q_k) != 1");
            RatInterval tabs = theta(k).abs();
            if (theta(k).sign() == 0)
                throw Error("theta sign not determined at certified index");
            BigRat lower(BigInt(1), q_[static_cast<size_t>(k) + 1] + q_[static_cast<size_t>(k)]);
            BigRat upper(BigInt(1), q_[static_cast<size_t>(k) + 1]);
            // Open enclosures: endpoint equality is allowed, interior strict.
            if (!(tabs.lo >= lower && tabs.hi <= upper))
                throw Error("theta sandwich invariant violated at k=" + std::to_string(k));
            if (k >= 2 && theta(k).sign() == theta(k - 1).sign())
                throw Error("theta alternating-sign invariant violated");
        }
        for (int k = 1; k + 2 <= K + 1; ++k)
            if (q_[static_cast<size_t>(k) + 2] < 2 * q_[static_cast<size_t>(k)])
                throw Error("q_{k+2} >= 2 q_k invariant violated");
        for (int k = 1; k <= K + 1; ++k) {
            int e = k / 2 - 1;
            if (e > 0 && q_[static_cast<size_t>(k)] < (BigInt(1) << e))
                throw Error("exponential growth invariant violated");
        }
    }
};

// Resonance test q_{k+1} > q_k^{tau/2}, evaluated exactly for rational tau
// (decimal inputs are always rational).  A double-log comparison decides the
// easy cases; the exact integer-power comparison settles near-ties.
inline bool is_resonant(const ContinuedFraction& cf, int k, const Rational& tau) {
    if (k < 1 || k + 1 > cf.depth() + 1)
        throw ValidationError("resonance test needs q_{k+1} within certified range");
    const BigInt& qk = cf.q(k);
    const BigInt& qk1 = cf.q(k + 1);
    if (qk == 1) return qk1 > 1;
    double lhs = 2.0 * static_cast<double>(tau.den) * log2_big(qk1);
    double rhs = static_cast<double>(tau.num) * log2_big(qk);
    double margin = 1e-6 * (std::abs(lhs) + std::abs(rhs) + 1.0);
    if (lhs > rhs + margin) return true;
    if (lhs < rhs - margin) return false;
    return pow_big(qk1, 2 * static_cast<unsigned long>(tau.den)) >
           pow_big(qk, static_cast<unsigned long>(tau.num));
}

} // namespace skewmu

#endif
