#ifndef SKEWMU_OSTROWSKI_HPP
#define SKEWMU_OSTROWSKI_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "skewmu/circle.hpp"
#include "skewmu/continued_fraction.hpp"
#include "skewmu/errors.hpp"
#include "skewmu/numeric.hpp"

namespace skewmu {

// Ostrowski digit vector.  Integer kind: n = sum n_k q_k with
//   0 <= n_k <= a_k,  0 <= n_1 <= a_1 - 1,  n_k = 0 whenever n_{k+1} = a_{k+1}.
// Real kind: x = sum x~_k theta_k on the representative interval [-alpha, 1-alpha),
// same digit constraints plus "x~_k < a_k infinitely often", which a finite
// prefix can only witness as "not the lexicographically maximal prefix".
struct OstrowskiDigits {
    enum class Kind { Integer, Real };

    Kind kind = Kind::Integer;
    std::map<int, BigInt> digits; // nonzero digits only
    double tailErrBound = 0;      // real kind: |x - reconstructed prefix| bound
    int truncationDepth = 0;      // real kind: digits computed for k <= depth
    bool maxPrefixAmbiguous = false;

    BigInt digit(int k) const {
        auto it = digits.find(k);
        return it == digits.end() ? BigInt(0) : it->second;
    }
    void set_digit(int k, BigInt v) {
        if (v == 0) digits.erase(k);
        else digits[k] = std::move(v);
    }
    int min_support() const { return digits.empty() ? 0 : digits.begin()->first; }
    int max_support() const { return digits.empty() ? 0 : digits.rbegin()->first; }
};

// Window of scales [kMinus, kPlus].  The window approximations require
// kMinus >= 2; enumeration allows kMinus = 1 (the set I_1^k).
struct DigitWindow {
    int kMinus = 1;
    int kPlus = 1;

    DigitWindow() = default;
    DigitWindow(int lo, int hi) : kMinus(lo), kPlus(hi) {
        if (lo < 1 || hi < lo) throw ValidationError("bad digit window");
    }
};

inline bool is_valid(const OstrowskiDigits& d, const ContinuedFraction& cf) {
    if (!d.digits.empty() && d.min_support() < 1) return false;
    if (!d.digits.empty() && d.max_support() > cf.depth()) return false;
    for (const auto& [k, v] : d.digits) {
        if (v < 0) return false;
        if (k == 1) {
            if (v > cf.a(1) - 1) return false;
        } else if (v > cf.a(k)) {
            return false;
        }
        if (v == cf.a(k) && d.digit(k - 1) != 0 && k >= 2) return false;
    }
    return true;
}

// Greedy encoding, largest scale first; the digit constraints come out of the
// remainder bounds automatically.
inline OstrowskiDigits encode_int(const BigInt& n, const ContinuedFraction& cf) {
    if (n < 0) throw ValidationError("encode_int: negative input");
    const int K = cf.depth();
    if (n >= cf.q(K + 1))
        throw ValidationError("encode_int: n >= q_{K+1}, exceeds certified depth");
    OstrowskiDigits d;
    d.kind = OstrowskiDigits::Kind::Integer;
    BigInt rem = n;
    for (int k = K; k >= 1 && rem != 0; --k) {
        BigInt dig = rem / cf.q(k);
        if (dig != 0) {
            d.set_digit(k, dig);
            rem -= dig * cf.q(k);
        }
    }
    return d;
}

inline BigInt decode_int(const OstrowskiDigits& d, const ContinuedFraction& cf) {
    if (d.kind != OstrowskiDigits::Kind::Integer)
        throw ValidationError("decode_int: real-kind numeration cannot be decoded to an integer");
    if (!is_valid(d, cf)) throw ValidationError("decode_int: invalid digit vector");
    BigInt n = 0;
    for (const auto& [k, v] : d.digits) n += v * cf.q(k);
    return n;
}

inline BigInt partial_sum(const OstrowskiDigits& d, const ContinuedFraction& cf, int k) {
    BigInt n = 0;
    for (const auto& [j, v] : d.digits) {
        if (j > k) break;
        n += v * cf.q(j);
    }
    return n;
}

namespace detail {

// Cell boundary B_d = d*theta_k - theta_{k+1} (exact interval).  Within the
// remainder interval T_k, the canonical digit cells are delimited by the B_d,
// boundary points belonging to the smaller digit.
inline RatInterval cell_boundary(const ContinuedFraction& cf, int k, const BigInt& d) {
    return BigRat(d) * cf.theta(k) - cf.theta(k + 1);
}

inline BigInt digit_cap(const ContinuedFraction& cf, int k) {
    return k == 1 ? BigInt(cf.a(1) - 1) : cf.a(k);
}

} // namespace detail

// Deepest scale at which digit cells stay well separated from the alpha
// enclosure fog: boundary uncertainty at scale k is ~ q_{k+1} W(alpha) with
// W ~ q_{K+1}^{-2}, and the smallest cell is ~ 1/q_{k+2}, so we require
// bitlen(q_{k+1}) + bitlen(q_{k+2}) + guardBits <= 2 bitlen(q_{K+1}).
inline int max_reliable_encode_depth(const ContinuedFraction& cf, int guardBits = 20) {
    int cap = 2 * bit_length(cf.q(cf.depth() + 1)) - guardBits;
    int k = 0;
    while (k + 1 <= cf.depth() - 1 &&
           bit_length(cf.q(k + 2)) + (k + 3 <= cf.depth() + 1 ? bit_length(cf.q(k + 3))
                                                              : bit_length(cf.q(cf.depth() + 1))) <=
               cap)
        ++k;
    return std::max(1, k);
}

// Ostrowski numeration of a circle point, to scales 1..depth.
// Throws BoundaryAmbiguousError when x (within its error bound) straddles a
// digit-cell boundary; callers may rebuild x at higher precision.
inline OstrowskiDigits encode_real(const CirclePoint& x, const ContinuedFraction& cf, int depth) {
    if (depth < 1) throw ValidationError("encode_real: depth must be >= 1");
    if (depth > cf.depth() - 1)
        throw PrecisionError("encode_real: depth exceeds certified theta range (need depth <= K-1)");

    Representative rep = representative(x, cf);
    if (rep.ambiguous)
        throw BoundaryAmbiguousError("encode_real: point within error of the [-alpha,1-alpha) cut");
    BigRat err(x.err_ulps(), BigInt(1) << x.bits());
    RatInterval r(rep.value - err, rep.value + err);

    OstrowskiDigits out;
    out.kind = OstrowskiDigits::Kind::Real;
    out.truncationDepth = depth;

    for (int k = 1; k <= depth; ++k) {
        const RatInterval& th = cf.theta(k);
        const bool pos = th.sign() > 0; // odd k
        const BigInt cap = detail::digit_cap(cf, k);

        // Estimate the digit from midpoints, then certify with neighbors.
        BigRat est = (r.mid() + cf.theta(k + 1).mid()) / th.mid();
        BigInt d0 = boost::multiprecision::numerator(est) / boost::multiprecision::denominator(est);
        if (d0 < 0) d0 = 0;
        if (d0 > cap) d0 = cap;

        bool found = false;
        BigInt chosen = 0;
        for (BigInt d = std::max(BigInt(0), BigInt(d0 - 2)); d <= std::min(cap, BigInt(d0 + 2)); ++d) {
            RatInterval bd = detail::cell_boundary(cf, k, d);
            bool upperOk, lowerOk;
            if (pos) {
                upperOk = r.hi <= bd.lo;                                   // r <= B_d
                lowerOk = d == 0 || detail::cell_boundary(cf, k, BigInt(d - 1)).hi < r.lo;
            } else {
                upperOk = r.lo >= bd.hi;                                   // r >= B_d
                lowerOk = d == 0 || detail::cell_boundary(cf, k, BigInt(d - 1)).lo > r.hi;
            }
            if (upperOk && lowerOk) {
                chosen = d;
                found = true;
                break;
            }
        }
        if (!found)
            throw BoundaryAmbiguousError("encode_real: digit ambiguous at scale " +
                                         std::to_string(k) + "; raise precision");
        if (chosen != 0) {
            out.set_digit(k, chosen);
            r = r - BigRat(chosen) * th;
        }
    }

    // Remaining tail: |x - sum_{k<=depth} x~_k theta_k| <= max |r| + err slack.
    BigRat tail = std::max(BigRat(boost::multiprecision::abs(r.lo)),
                           BigRat(boost::multiprecision::abs(r.hi)));
    out.tailErrBound = to_double(tail);

    // Flag the lexicographically maximal prefix: it cannot witness
    // "x~_k < a_k infinitely often" at this truncation depth.
    {
        std::vector<BigInt> maxPrefix(static_cast<size_t>(depth) + 1);
        for (int k = depth; k >= 1; --k) {
            BigInt cap = detail::digit_cap(cf, k);
            maxPrefix[static_cast<size_t>(k)] = (k + 1 <= depth && maxPrefix[static_cast<size_t>(k) + 1] == cf.a(k + 1))
                                                    ? BigInt(0)
                                                    : cap;
        }
        bool isMax = true;
        for (int k = 1; k <= depth; ++k)
            if (out.digit(k) != maxPrefix[static_cast<size_t>(k)]) {
                isMax = false;
                break;
            }
        out.maxPrefixAmbiguous = isMax;
    }
    return out;
}

// Reconstruct sum x~_k theta_k as a circle point (exact: q_k alpha mod 1 terms).
inline CirclePoint reconstruct_point(const OstrowskiDigits& d, const ContinuedFraction& cf,
                                     const CirclePoint& alpha) {
    CirclePoint acc = CirclePoint::zero(alpha.bits());
    for (const auto& [k, v] : d.digits)
        acc = circle_add(acc, circle_mul_int(alpha, v * cf.q(k)));
    return acc;
}

// ---------------------------------------------------------------------------
// Interval sets I_{k-}^{k+}

// Number of valid digit strings supported on [kMinus, kPlus]:
//   S_{k+1} = a_{k+1} S_k + S_{k-1}  (digit < a: free; digit = a: forces 0 below)
inline BigInt interval_count(const ContinuedFraction& cf, const DigitWindow& w) {
    if (w.kPlus > cf.depth()) throw ValidationError("interval_count: window beyond certified depth");
    BigInt sPrev = 1; // S_{kMinus - 1}
    BigInt s = w.kMinus == 1 ? BigInt(cf.a(1)) : BigInt(cf.a(w.kMinus) + 1);
    for (int k = w.kMinus + 1; k <= w.kPlus; ++k) {
        BigInt next = cf.a(k) * s + sPrev;
        sPrev = s;
        s = next;
    }
    return s;
}

// Streams I_{k-}^{k+} in increasing order (digit odometer, low scale first).
class IntervalEnumerator {
  public:
    IntervalEnumerator(const ContinuedFraction& cf, const DigitWindow& w)
        : cf_(&cf), w_(w), digits_(static_cast<size_t>(w.kPlus - w.kMinus + 1), BigInt(0)) {
        if (w.kPlus + 1 > cf.depth() + 1)
            throw ValidationError("enumerate_interval: certified depth must exceed kPlus");
    }

    // Returns false when exhausted.  Emits the value and (optionally) digits.
    bool next(BigInt& value, OstrowskiDigits* out = nullptr) {
        if (!started_) {
            started_ = true;
        } else if (!advance()) {
            return false;
        }
        value = value_;
        if (out) {
            out->kind = OstrowskiDigits::Kind::Integer;
            out->digits.clear();
            for (int k = w_.kMinus; k <= w_.kPlus; ++k)
                if (dig(k) != 0) out->digits[k] = dig(k);
        }
        return true;
    }

  private:
    BigInt& dig(int k) { return digits_[static_cast<size_t>(k - w_.kMinus)]; }

    BigInt cap(int k) const {
        const BigInt& above =
            (k == w_.kPlus) ? zero_ : digits_[static_cast<size_t>(k + 1 - w_.kMinus)];
        if (k + 1 <= w_.kPlus && above == cf_->a(k + 1)) return 0;
        return detail::digit_cap(*cf_, k);
    }

    bool advance() {
        for (int k = w_.kMinus; k <= w_.kPlus; ++k) {
            if (dig(k) < cap(k)) {
                dig(k) += 1;
                value_ += cf_->q(k);
                return true;
            }
            value_ -= dig(k) * cf_->q(k);
            dig(k) = 0;
            // carry continues upward
        }
        return false;
    }

    const ContinuedFraction* cf_;
    DigitWindow w_;
    std::vector<BigInt> digits_;
    BigInt value_ = 0;
    BigInt zero_ = 0;
    bool started_ = false;
};

// ---------------------------------------------------------------------------
// Ensembles B_{k-}^{k+}: digits 0..a_k-1 at resonant scales inside the
// window, zero elsewhere (no adjacency constraint can trigger).

inline std::vector<int> resonant_indices(const ContinuedFraction& cf, const DigitWindow& w,
                                         const Rational& tau) {
    std::vector<int> ks;
    for (int k = w.kMinus; k <= w.kPlus; ++k)
        if (is_resonant(cf, k, tau)) ks.push_back(k);
    return ks;
}

inline BigInt ensemble_count(const ContinuedFraction& cf, const DigitWindow& w,
                             const Rational& tau) {
    BigInt c = 1;
    for (int k : resonant_indices(cf, w, tau)) c *= cf.a(k);
    return c;
}

class EnsembleEnumerator {
  public:
    EnsembleEnumerator(const ContinuedFraction& cf, const DigitWindow& w, const Rational& tau)
        : cf_(&cf), ks_(resonant_indices(cf, w, tau)), digits_(ks_.size(), BigInt(0)) {
        if (w.kPlus + 1 > cf.depth() + 1)
            throw ValidationError("enumerate_B: certified depth must exceed kPlus");
    }

    bool next(OstrowskiDigits& out) {
        if (!started_) {
            started_ = true;
        } else {
            size_t i = 0;
            for (; i < ks_.size(); ++i) {
                if (digits_[i] + 1 < cf_->a(ks_[i])) {
                    digits_[i] += 1;
                    break;
                }
                digits_[i] = 0;
            }
            if (i == ks_.size()) return false;
        }
        out.kind = OstrowskiDigits::Kind::Integer;
        out.digits.clear();
        for (size_t i = 0; i < ks_.size(); ++i)
            if (digits_[i] != 0) out.digits[ks_[i]] = digits_[i];
        return true;
    }

  private:
    const ContinuedFraction* cf_;
    std::vector<int> ks_;
    std::vector<BigInt> digits_;
    bool started_ = false;
};

// ---------------------------------------------------------------------------
// Quasi-periodic residues r(n) and their arcs D_r.

inline BigInt residue_of(const BigInt& n, const ContinuedFraction& cf, int kMinus) {
    if (kMinus < 1 || kMinus > cf.depth())
        throw ValidationError("residue: kMinus outside certified depth");
    OstrowskiDigits d = encode_int(n, cf);
    return partial_sum(d, cf, kMinus - 1);
}

// One arc of the circle; endpoints are integer multiples of alpha, stored as
// exact coefficients plus dyadic positions in the [-alpha, 1-alpha)
// representative coordinate (they never wrap there).
struct ResidueArc {
    BigInt r;          // residue value
    BigInt coefLo, coefHi; // endpoints are (coef * alpha) mod 1
    BigRat repLo, repHi;   // representative positions, lo < hi
    BigRat errLo, errHi;   // absolute position uncertainties
    bool closedLo = true, closedHi = false;
};

struct ResidueArcs {
    int kMinus = 0;
    std::vector<ResidueArc> arcs; // sorted by repLo, tiling [-alpha, 1-alpha)
};

inline ResidueArcs residue_arcs(const ContinuedFraction& cf, int kMinus, int precisionBits) {
    if (kMinus < 1 || kMinus > cf.depth() - 1)
        throw ValidationError("residue_arcs: need 1 <= kMinus <= K-1");
    ResidueArcs out;
    out.kMinus = kMinus;
    CirclePoint alpha = alpha_point(cf, precisionBits);

    if (kMinus == 1) {
        ResidueArc a;
        a.r = 0;
        a.coefLo = 0;
        a.coefHi = 0;
        a.repLo = -cf.alpha().hi;
        a.repHi = 1 - cf.alpha().lo;
        a.errLo = a.errHi = 0;
        out.arcs.push_back(std::move(a));
        return out;
    }

    // The arc of a prefix with value r and last digit d_{kMinus-1} is the
    // prefix point r*alpha shifted by the admissible tail set: the interval
    // between -theta_{kMinus} (attained) and either -theta_{kMinus-1} or, when
    // the last digit is nonzero, (a_{kMinus}-1) theta_{kMinus} - theta_{kMinus+1}.
    // Positions are computed as base + signed offsets so the arc containing
    // the domain edge keeps its coordinates inside [-alpha, 1-alpha].
    IntervalEnumerator en(cf, DigitWindow(1, kMinus - 1));
    BigInt r;
    OstrowskiDigits d;
    while (en.next(r, &d)) {
        ResidueArc a;
        a.r = r;
        CirclePoint basePt = circle_mul_int(alpha, r);
        Representative baseRep = representative(basePt, cf);
        BigRat baseErr(basePt.err_ulps(), BigInt(1) << basePt.bits());
        if (baseRep.ambiguous) baseErr += 1;

        BigInt lastDigit = d.digit(kMinus - 1);
        RatInterval end1 = BigRat(-1) * cf.theta(kMinus); // attained end
        RatInterval end2 = lastDigit == 0
                               ? BigRat(-1) * cf.theta(kMinus - 1)
                               : BigRat(cf.a(kMinus) - 1) * cf.theta(kMinus) -
                                     cf.theta(kMinus + 1);
        a.coefLo = r - cf.q(kMinus);
        a.coefHi = lastDigit == 0
                       ? BigInt(r - cf.q(kMinus - 1))
                       : BigInt(r + (cf.a(kMinus) - 1) * cf.q(kMinus) - cf.q(kMinus + 1));
        BigRat p1 = baseRep.value + end1.mid(), e1 = baseErr + end1.width() / 2;
        BigRat p2 = baseRep.value + end2.mid(), e2 = baseErr + end2.width() / 2;
        if (p1 < p2) {
            a.repLo = p1;
            a.errLo = e1;
            a.repHi = p2;
            a.errHi = e2;
            a.closedLo = true; // -theta_{kMinus} end attained
            a.closedHi = false;
        } else {
            std::swap(a.coefLo, a.coefHi);
            a.repLo = p2;
            a.errLo = e2;
            a.repHi = p1;
            a.errHi = e1;
            a.closedLo = false;
            a.closedHi = true;
        }
        out.arcs.push_back(std::move(a));
    }
    std::sort(out.arcs.begin(), out.arcs.end(),
              [](const ResidueArc& x, const ResidueArc& y) { return x.repLo < y.repLo; });
    return out;
}

struct ArcLocation {
    BigInt r;
    bool ambiguous = false;
};

inline ArcLocation locate(const ResidueArcs& arcs, const CirclePoint& w,
                          const ContinuedFraction& cf) {
    Representative rep = representative(w, cf);
    BigRat err(w.err_ulps(), BigInt(1) << w.bits());
    ArcLocation loc;
    if (rep.ambiguous) {
        loc.ambiguous = true;
        return loc;
    }
    // Binary search for the arc whose [repLo, repHi) contains the point.
    const auto& v = arcs.arcs;
    size_t lo = 0, hi = v.size();
    while (lo + 1 < hi) {
        size_t mid = (lo + hi) / 2;
        if (v[mid].repLo <= rep.value) lo = mid;
        else hi = mid;
    }
    const ResidueArc& a = v[lo];
    bool insideLo = rep.value - err > a.repLo + a.errLo;
    bool insideHi = rep.value + err < a.repHi - a.errHi;
    loc.r = a.r;
    loc.ambiguous = !(insideLo && insideHi);
    return loc;
}

// ---------------------------------------------------------------------------
// Digit-independence statistics.

// Total-variation distance between the joint law of the digits (n_{k_t})
// over uniform n in I_{k-}^{k+} and the product of uniforms on {0..a_{k_t}-1}.
inline double digit_joint_tv(const ContinuedFraction& cf, const DigitWindow& w,
                             const std::vector<int>& indices, std::uint64_t cap = (1ull << 28)) {
    if (indices.empty()) throw ValidationError("digit_joint_tv: empty index list");
    for (int k : indices)
        if (k < w.kMinus || k > w.kPlus)
            throw ValidationError("digit_joint_tv: index outside window");
    std::vector<int> idx = indices;
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
        throw ValidationError("digit_joint_tv: duplicate index");

    BigInt total = interval_count(cf, w);
    if (total > cap)
        throw BudgetError("digit_joint_tv: |I| = " + total.str() + " exceeds cap " +
                          std::to_string(cap));
    const double invTotal = 1.0 / to_double(total);

    double invUniform = 1.0;
    for (int k : idx) invUniform /= to_double(cf.a(k));

    const bool fullWindow =
        static_cast<int>(idx.size()) == w.kPlus - w.kMinus + 1 && idx.front() == w.kMinus;

    double sumAbs = 0.0;
    if (fullWindow) {
        // Each valid string is one element of I: iterate all digit cells,
        // classifying validity and uniform support on the fly.
        const int T = static_cast<int>(idx.size());
        std::vector<long> a(static_cast<size_t>(T)), cell(static_cast<size_t>(T), 0);
        double cells = 1.0;
        for (int t = 0; t < T; ++t) {
            BigInt ak = cf.a(idx[static_cast<size_t>(t)]);
            if (ak > 1000000) throw BudgetError("digit_joint_tv: a_k too large to scan");
            a[static_cast<size_t>(t)] = static_cast<long>(ak);
            cells *= static_cast<double>(a[static_cast<size_t>(t)] + 1);
        }
        if (cells > 4.0 * static_cast<double>(cap)) throw BudgetError("digit_joint_tv: cell count exceeds cap");
        const long a1cap = w.kMinus == 1 ? a[0] - 1 : a[0];
        bool done = false;
        while (!done) {
            bool valid = cell[0] <= a1cap;
            bool support = cell[0] < a[0];
            for (int t = 1; t < T && (valid || support); ++t) {
                if (cell[static_cast<size_t>(t)] == a[static_cast<size_t>(t)] &&
                    cell[static_cast<size_t>(t) - 1] != 0)
                    valid = false;
                if (cell[static_cast<size_t>(t)] >= a[static_cast<size_t>(t)]) support = false;
            }
            double emp = valid ? invTotal : 0.0;
            double uni = support ? invUniform : 0.0;
            sumAbs += std::fabs(emp - uni);
            // odometer
            int t = 0;
            for (; t < T; ++t) {
                if (cell[static_cast<size_t>(t)] < a[static_cast<size_t>(t)]) {
                    ++cell[static_cast<size_t>(t)];
                    break;
                }
                cell[static_cast<size_t>(t)] = 0;
            }
            done = t == T;
        }
        return 0.5 * sumAbs;
    }

    // General path: enumerate I and bucket the indexed digits.
    std::unordered_map<std::uint64_t, std::uint64_t> counts;
    IntervalEnumerator en(cf, w);
    BigInt val;
    OstrowskiDigits d;
    while (en.next(val, &d)) {
        std::uint64_t key = 0;
        for (int k : idx) {
            BigInt dg = d.digit(k);
            if (dg > 0xFFFFF) throw BudgetError("digit_joint_tv: digit too large to pack");
            key = (key << 20) | static_cast<std::uint64_t>(dg);
        }
        ++counts[key];
    }
    double covered = 0.0;
    for (const auto& [key, c] : counts) {
        bool support = true;
        std::uint64_t kk = key;
        for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
            std::uint64_t dg = kk & 0xFFFFF;
            kk >>= 20;
            if (BigInt(dg) >= cf.a(*it)) support = false;
        }
        double uni = support ? invUniform : 0.0;
        sumAbs += std::fabs(static_cast<double>(c) * invTotal - uni);
        if (support) covered += uni;
    }
    sumAbs += 1.0 - covered; // uniform mass on unoccupied cells
    return 0.5 * sumAbs;
}

// Fraction of ensemble tuples whose digit-block concatenation fails to be a
// valid numeration: 1 - |I_{k0}^{kT-1}| / prod_t |I_{k_t}^{k_{t+1}-1}|.
inline double concat_defect(const ContinuedFraction& cf, const std::vector<int>& cuts) {
    if (cuts.size() < 3) throw ValidationError("concat_defect: need at least two blocks");
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i] >= cuts[i + 1]) throw ValidationError("concat_defect: cuts must increase");
    BigInt whole = interval_count(cf, DigitWindow(cuts.front(), cuts.back() - 1));
    BigInt prod = 1;
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        prod *= interval_count(cf, DigitWindow(cuts[i], cuts[i + 1] - 1));
    return to_double(BigRat(prod - whole, prod));
}

} // namespace skewmu

#endif
