#ifndef SKEWMU_FOURIER_HPP
#define SKEWMU_FOURIER_HPP

#include <algorithm>
#include <complex>
#include <optional>
#include <random>
#include <vector>

#include "skewmu/circle.hpp"
#include "skewmu/continued_fraction.hpp"
#include "skewmu/errors.hpp"
#include "skewmu/numeric.hpp"

namespace skewmu {

// One positive frequency of a real-valued trigonometric model; the conjugate
// coefficient at -freq is implicit.  `scale` tags the continued-fraction
// scale k when freq = m_k q_k was generated that way (0 = untagged).
struct FourierCoeff {
    BigInt freq;              // > 0
    int scale = 0;
    std::complex<double> c;   // hat value at +freq
};

// Finitely supported Fourier data of a real-valued h:
//   h(x) = h0 + sum_{freq} 2 Re( c e(freq x) ),  |c(freq)| <= C freq^{-tau}.
// Real-valuedness (conjugate symmetry) is enforced by the representation;
// this is exactly homotopic triviality for the skew products built on top.
class FourierModel {
  public:
    FourierModel() = default;
    FourierModel(double constTerm, double tau) : constTerm_(constTerm), tau_(tau) {}

    double const_term() const { return constTerm_; }
    void set_const_term(double v) { constTerm_ = v; }
    double tau() const { return tau_; }
    void set_tau(double t) { tau_ = t; }

    const std::vector<FourierCoeff>& coeffs() const { return coeffs_; }
    bool empty() const { return coeffs_.empty(); }

    void add_coeff(BigInt freq, std::complex<double> c, int scale = 0) {
        if (freq <= 0) throw ValidationError("FourierModel: frequencies are stored positive");
        for (const auto& e : coeffs_)
            if (e.freq == freq)
                throw ValidationError("FourierModel: duplicate frequency " + freq.str());
        coeffs_.push_back({std::move(freq), scale, c});
        std::sort(coeffs_.begin(), coeffs_.end(),
                  [](const FourierCoeff& a, const FourierCoeff& b) { return a.freq < b.freq; });
    }

    std::complex<double> coeff_at(const BigInt& m) const {
        BigInt a = boost::multiprecision::abs(m);
        for (const auto& e : coeffs_)
            if (e.freq == a) return m > 0 ? e.c : std::conj(e.c);
        return {0.0, 0.0};
    }

    // log2 of the smallest C with |c| <= C freq^{-tau} over stored coeffs.
    double log2_decay_const() const {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& e : coeffs_) {
            double v = std::log2(std::abs(e.c)) + tau_ * log2_big(e.freq);
            best = std::max(best, v);
        }
        return best;
    }
    double decay_const() const { return std::exp2(log2_decay_const()); }

    bool decay_bound_holds(double C) const {
        double lc = std::log2(C);
        for (const auto& e : coeffs_)
            if (std::log2(std::abs(e.c)) > lc - tau_ * log2_big(e.freq) + 1e-9) return false;
        return true;
    }

    // Pointwise evaluation from the exact angle freq*x mod 1.
    double eval(const CirclePoint& x) const {
        double acc = constTerm_;
        for (const auto& e : coeffs_)
            acc += 2.0 * std::real(e.c * unit_exp(circle_mul_int(x, e.freq)));
        return acc;
    }

    // sum 2|c|: bound on |h - h0|.
    double osc_bound() const {
        double s = 0;
        for (const auto& e : coeffs_) s += 2.0 * std::abs(e.c);
        return s;
    }

    // sum 4 pi freq |c| as log2 (freq may exceed double range): bound on |h'|.
    double log2_deriv_bound() const {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& e : coeffs_) {
            double v = std::log2(4.0 * 3.14159265358979 * std::abs(e.c)) + log2_big(e.freq);
            best = std::max(best, v);
        }
        if (coeffs_.empty()) return best;
        return best + std::log2(static_cast<double>(coeffs_.size()));
    }

  private:
    double constTerm_ = 0.0;
    double tau_ = 2.5;
    std::vector<FourierCoeff> coeffs_;
};

// Resonant scales k with q_{k+1} > q_k^{tau/2} and the frequency set they
// induce, M = union_k { +- m_k q_k : 1 <= m_k <= a_k }.
struct ResonantSet {
    struct Entry {
        int k;
        BigInt qk;
        BigInt ak;
    };
    std::vector<Entry> entries;
    std::vector<BigInt> frequencies; // materialized positive freqs, capped
    Rational tau;

    bool contains(const BigInt& m) const {
        BigInt a = boost::multiprecision::abs(m);
        if (a == 0) return false;
        for (const auto& e : entries)
            if (a % e.qk == 0 && a / e.qk <= e.ak) return true;
        return false;
    }
};

inline ResonantSet resonant_set(const ContinuedFraction& cf, const Rational& tau, int depthK,
                                int freqCapPerScale = 16) {
    if (depthK > cf.depth()) throw ValidationError("resonant_set: depth exceeds certified range");
    ResonantSet M;
    M.tau = tau;
    for (int k = 1; k <= depthK; ++k) {
        if (!is_resonant(cf, k, tau)) continue;
        M.entries.push_back({k, cf.q(k), cf.a(k)});
        BigInt cap = std::min(cf.a(k), BigInt(freqCapPerScale));
        for (BigInt mk = 1; mk <= cap; ++mk) M.frequencies.push_back(mk * cf.q(k));
    }
    return M;
}

// Random-phase synthetic h supported on M (plus the constant term):
// |hhat(m_k q_k)| = amplitude (m_k q_k)^{-tau}, seeded phases.
// Harmonics per scale are capped (finite-support representation); collisions
// between scales (e.g. m_1 q_1 = q_2 when m_1 = a_1) go to the lower scale.
inline FourierModel synth_h(const ResonantSet& M, const Rational& tau, std::uint64_t seed,
                            double amplitude, int maxHarmonics = 4, double constTerm = 0.0) {
    FourierModel h(constTerm, tau.value());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (const auto& e : M.entries) {
        BigInt cap = std::min(e.ak, BigInt(maxHarmonics));
        for (BigInt mk = 1; mk <= cap; ++mk) {
            BigInt freq = mk * e.qk;
            double phase = unif(rng); // drawn even for skipped freqs: keeps streams aligned
            double lmag = std::log2(amplitude) - tau.value() * log2_big(freq);
            if (lmag < -900) continue; // below double range
            bool dup = false;
            for (const auto& c : h.coeffs())
                if (c.freq == freq) dup = true;
            if (dup) continue;
            h.add_coeff(freq, std::polar(std::exp2(lmag), 2.0 * 3.14159265358979323846 * phase),
                        e.k);
        }
    }
    return h;
}

// Trigonometric polynomial g for section-preserving experiments:
// |ghat(m_k q_k)| = rho m_k^{-tau} with seeded phases, supported on M so the
// induced coboundary h = g(.+alpha) - g stays inside the reduced frequency set.
inline FourierModel synth_section_g(const ResonantSet& M, const Rational& tau,
                                    std::uint64_t seed, double rho, int maxHarmonics = 2) {
    FourierModel g(0.0, tau.value());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (const auto& e : M.entries) {
        BigInt cap = std::min(e.ak, BigInt(maxHarmonics));
        for (BigInt mk = 1; mk <= cap; ++mk) {
            double phase = unif(rng);
            BigInt freq = mk * e.qk;
            bool dup = false;
            for (const auto& c : g.coeffs())
                if (c.freq == freq) dup = true;
            if (dup) continue;
            double mag = rho * std::pow(to_double(mk), -tau.value());
            g.add_coeff(freq, std::polar(mag, 2.0 * 3.14159265358979323846 * phase), e.k);
        }
    }
    return g;
}

// h expressed as a coboundary: h(x) = g(x+alpha) - g(x) + c, exactly in
// coefficients: hhat(m) = ghat(m) (e(m alpha) - 1).
struct CoboundarySpec {
    FourierModel g;
    double c = 0.0;
};

// Skew product T(x,y) = (x + alpha, y + h(x)) at a fixed working precision.
struct SkewProduct {
    ContinuedFraction cf;
    FourierModel h;
    Rational tau;
    int precision;
    CirclePoint alpha; // cached at `precision`
    std::optional<CoboundarySpec> coboundary;
    bool resonantSupportOnly = false; // support(hhat) inside M union {0}

    SkewProduct(ContinuedFraction cf_, FourierModel h_, Rational tau_, int precisionBits)
        : cf(std::move(cf_)), h(std::move(h_)), tau(tau_), precision(precisionBits),
          alpha(alpha_point(cf, precisionBits)) {
        ResonantSet M = resonant_set(cf, tau, cf.depth(), 1);
        resonantSupportOnly = true;
        for (const auto& e : h.coeffs())
            if (!M.contains(e.freq)) resonantSupportOnly = false;
    }
};

inline SkewProduct make_coboundary(const FourierModel& g, double c, const ContinuedFraction& cf,
                                   const Rational& tau, int precisionBits) {
    CirclePoint alpha = alpha_point(cf, precisionBits);
    FourierModel h(c, g.tau());
    for (const auto& e : g.coeffs()) {
        std::complex<double> factor = unit_exp_m1(circle_mul_int(alpha, e.freq));
        h.add_coeff(e.freq, e.c * factor, e.scale);
    }
    SkewProduct T(cf, std::move(h), tau, precisionBits);
    T.coboundary = CoboundarySpec{g, c};
    return T;
}

// Recover g from a coboundary h: ghat(m) = hhat(m) / (e(m alpha) - 1).
inline FourierModel coboundary_decode(const FourierModel& h, const ContinuedFraction& cf,
                                      int precisionBits) {
    CirclePoint alpha = alpha_point(cf, precisionBits);
    FourierModel g(0.0, h.tau());
    for (const auto& e : h.coeffs()) {
        CirclePoint ang = circle_mul_int(alpha, e.freq);
        if (ang.norm_dist() <= ang.err_abs())
            throw PrecisionError("coboundary_decode: ||m alpha|| not separated from 0");
        g.add_coeff(e.freq, e.c / unit_exp_m1(ang), e.scale);
    }
    return g;
}

// Conjugation killing non-resonant frequencies:
//   psi(x) = sum_{m not in M, m != 0} hhat(m) / (e(m alpha) - 1) e(m x).
// The returned tail bound certifies, via the convergence estimates
// (the q_k^{-(tau-2)} and q_k^{-tau/2} series with C = decay constant), that
// any deeper non-resonant frequencies of a C^tau completion of h would
// contribute less than eps; otherwise this throws.
struct PsiResult {
    FourierModel psi;
    double tailBound = 0.0;
};

inline PsiResult psi_conjugator(const FourierModel& h, const ContinuedFraction& cf,
                                const Rational& tau, double eps, int precisionBits) {
    if (eps <= 0) throw ValidationError("psi_conjugator: eps must be positive");
    ResonantSet M = resonant_set(cf, tau, cf.depth(), 1);
    CirclePoint alpha = alpha_point(cf, precisionBits);

    PsiResult out;
    out.psi = FourierModel(0.0, h.tau());
    int maxScaleSeen = 0;
    for (const auto& e : h.coeffs()) {
        // track the scale band the support reaches
        for (int k = cf.depth(); k >= 1; --k)
            if (e.freq >= cf.q(k)) {
                maxScaleSeen = std::max(maxScaleSeen, k);
                break;
            }
        if (M.contains(e.freq)) continue;
        CirclePoint ang = circle_mul_int(alpha, e.freq);
        if (ang.norm_dist() <= ang.err_abs())
            throw PrecisionError("psi_conjugator: ||m alpha|| enclosure reaches 0 at m = " +
                                 e.freq.str());
        out.psi.add_coeff(e.freq, e.c / unit_exp_m1(ang), e.scale);
    }

    // Tail certificate over scales beyond the stored support.
    const double C = std::exp2(std::min(900.0, h.log2_decay_const()));
    const double t = tau.value();
    double tail = 0.0;
    for (int k = std::max(2, maxScaleSeen + 1); k <= cf.depth(); ++k) {
        double lq = log2_big(cf.q(k));
        tail += C * std::exp2(-(t - 2.0) * lq);          // off-multiple band at scale k
        if (!is_resonant(cf, k, tau)) tail += C * std::exp2(-(t / 2.0) * lq);
    }
    // Geometric extrapolation past the certified depth, using q_{k+2} >= 2 q_k.
    {
        double lq = log2_big(cf.q(cf.depth()));
        double r1 = std::exp2(-(t - 2.0) / 2.0), r2 = std::exp2(-(t / 2.0) / 2.0);
        tail += C * std::exp2(-(t - 2.0) * lq) * r1 / (1 - r1);
        tail += C * std::exp2(-(t / 2.0) * lq) * r2 / (1 - r2);
    }
    out.tailBound = tail;
    if (!(tail < eps))
        throw PrecisionError("psi_conjugator: tail bound " + std::to_string(tail) +
                             " does not certify eps; extend support or depth");
    return out;
}

} // namespace skewmu

#endif
