#ifndef SKEWMU_MOEBIUS_HPP
#define SKEWMU_MOEBIUS_HPP

#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "skewmu/dynamics.hpp"
#include "skewmu/errors.hpp"
#include "skewmu/ostrowski.hpp"

namespace skewmu {

// mu(n) for 1 <= n <= N, built by a linear sieve.
class MoebiusTable {
  public:
    static MoebiusTable sieve(std::uint64_t N, std::uint64_t memoryBudgetBytes = (3ull << 30)) {
        if (N < 1) throw ValidationError("sieve: N must be >= 1");
        // mu array + composite bitmap + prime list
        std::uint64_t need = N + N / 8 + (N / 12) * 4 + (1 << 20);
        if (need > memoryBudgetBytes)
            throw BudgetError("sieve: memory estimate " + std::to_string(need) +
                              " exceeds budget");
        MoebiusTable t;
        t.N_ = N;
        t.mu_.assign(N + 1, 0);
        t.mu_[1] = 1;
        std::vector<bool> comp(N + 1, false);
        std::vector<std::uint32_t> primes;
        primes.reserve(static_cast<size_t>(N / 12) + 16);
        for (std::uint64_t i = 2; i <= N; ++i) {
            if (!comp[i]) {
                primes.push_back(static_cast<std::uint32_t>(i));
                t.mu_[i] = -1;
            }
            for (std::uint32_t p : primes) {
                std::uint64_t ip = i * p;
                if (ip > N) break;
                comp[ip] = true;
                if (i % p == 0) {
                    t.mu_[ip] = 0;
                    break;
                }
                t.mu_[ip] = static_cast<std::int8_t>(-t.mu_[i]);
            }
        }
        return t;
    }

    std::uint64_t limit() const { return N_; }
    int mu(std::uint64_t n) const {
        if (n < 1 || n > N_) throw ValidationError("mu: index out of table range");
        return mu_[n];
    }
    const std::int8_t* data() const { return mu_.data(); } // 1-indexed

    long mertens(std::uint64_t upTo) const {
        if (upTo > N_) throw ValidationError("mertens: beyond table limit");
        long s = 0;
        for (std::uint64_t n = 1; n <= upTo; ++n) s += mu_[n];
        return s;
    }

    // Binary layout: magic "MUTB", u32 version (=1), u64 N, both little-endian,
    // then ceil(N/4) bytes of 2-bit codes for n = 1..N in order:
    // 00 -> mu = 0, 01 -> mu = +1, 10 -> mu = -1.
    void save(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw ValidationError("save: cannot open " + path);
        f.write("MUTB", 4);
        std::uint32_t ver = 1;
        std::uint64_t n = N_;
        unsigned char hdr[12];
        for (int i = 0; i < 4; ++i) hdr[i] = static_cast<unsigned char>((ver >> (8 * i)) & 0xFF);
        for (int i = 0; i < 8; ++i) hdr[4 + i] = static_cast<unsigned char>((n >> (8 * i)) & 0xFF);
        f.write(reinterpret_cast<const char*>(hdr), 12);
        std::vector<unsigned char> packed((N_ + 3) / 4, 0);
        for (std::uint64_t i = 1; i <= N_; ++i) {
            unsigned code = mu_[i] == 0 ? 0u : (mu_[i] == 1 ? 1u : 2u);
            packed[(i - 1) >> 2] |= static_cast<unsigned char>(code << (((i - 1) & 3) * 2));
        }
        f.write(reinterpret_cast<const char*>(packed.data()),
                static_cast<std::streamsize>(packed.size()));
    }

    static MoebiusTable load(const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw ValidationError("load: cannot open " + path);
        char magic[4];
        f.read(magic, 4);
        if (!f || std::memcmp(magic, "MUTB", 4) != 0)
            throw ValidationError("load: bad magic in " + path);
        unsigned char hdr[12];
        f.read(reinterpret_cast<char*>(hdr), 12);
        if (!f) throw ValidationError("load: truncated header");
        std::uint32_t ver = 0;
        std::uint64_t n = 0;
        for (int i = 0; i < 4; ++i) ver |= static_cast<std::uint32_t>(hdr[i]) << (8 * i);
        for (int i = 0; i < 8; ++i) n |= static_cast<std::uint64_t>(hdr[4 + i]) << (8 * i);
        if (ver != 1) throw ValidationError("load: unsupported version");
        MoebiusTable t;
        t.N_ = n;
        t.mu_.assign(n + 1, 0);
        std::vector<unsigned char> packed((n + 3) / 4);
        f.read(reinterpret_cast<char*>(packed.data()), static_cast<std::streamsize>(packed.size()));
        if (!f) throw ValidationError("load: truncated payload");
        for (std::uint64_t i = 1; i <= n; ++i) {
            unsigned code = (packed[(i - 1) >> 2] >> (((i - 1) & 3) * 2)) & 3u;
            t.mu_[i] = code == 0 ? 0 : (code == 1 ? 1 : -1);
        }
        return t;
    }

  private:
    std::uint64_t N_ = 0;
    std::vector<std::int8_t> mu_;
};

// Rotation angles for correlation sums are exact circle points so that
// n * beta never loses precision over long ranges.
inline CirclePoint beta_from_decimal(const std::string& s, int bits) {
    return CirclePoint::from_rat(rat_from_decimal(s), bits);
}

// |E_{n<=N} w(n) e(beta n)| with w = mu (or all ones when table is null).
inline double exponential_average(const MoebiusTable* mu, std::uint64_t N,
                                  const CirclePoint& beta) {
    if (N < 1) throw ValidationError("exponential_average: N >= 1 required");
    if (mu && mu->limit() < N) throw ValidationError("exponential_average: table too small");
    std::complex<double> acc = 0.0;
    std::complex<double> rot = 1.0;
    const std::complex<double> w = unit_exp(beta);
    for (std::uint64_t n = 1; n <= N; ++n) {
        if ((n & 0x3FFF) == 0) rot = unit_exp(circle_mul_int(beta, BigInt(n)));
        else rot *= w;
        int weight = mu ? mu->mu(n) : 1;
        if (weight) acc += static_cast<double>(weight) * rot;
    }
    return std::abs(acc) / static_cast<double>(N);
}

inline double davenport_avg(const MoebiusTable& mu, std::uint64_t N, const CirclePoint& beta) {
    return exponential_average(&mu, N, beta);
}

// E_{L=0}^{N-1} | E_{n=1}^{R} w(L+n) e(beta n) |, windows clipped at the table
// end (the trailing windows use min(R, N-L) terms).
inline double short_interval_corr(const MoebiusTable* mu, std::uint64_t N, std::uint64_t R,
                                  const CirclePoint& beta) {
    if (R < 1 || N < 1) throw ValidationError("short_interval_corr: need N, R >= 1");
    if (R > N) throw ValidationError("short_interval_corr: need R <= N");
    if (mu && mu->limit() < N) throw ValidationError("short_interval_corr: table smaller than N");
    auto weight = [&](std::uint64_t n) -> double {
        return mu ? static_cast<double>(mu->mu(n)) : 1.0;
    };

    const std::complex<double> w1 = unit_exp(beta);
    auto rotAt = [&](std::uint64_t n) { return unit_exp(circle_mul_int(beta, BigInt(n))); };

    double total = 0.0;
    std::uint64_t countL = 0;

    // Sliding region: windows fully inside the table.
    std::complex<double> S = 0.0;
    {
        std::complex<double> rot = 1.0;
        for (std::uint64_t n = 1; n <= R; ++n) {
            rot *= w1;
            if ((n & 0xFFF) == 0) rot = rotAt(n);
            S += weight(n) * rot;
        }
    }
    const std::complex<double> wR1 = rotAt(R + 1);
    for (std::uint64_t L = 0; L + R <= N; ++L) {
        if ((L & 0xFFF) == 0xFFF) { // periodic fresh recompute to kill drift
            S = 0.0;
            std::complex<double> rot = 1.0;
            for (std::uint64_t n = 1; n <= R; ++n) {
                rot *= w1;
                S += weight(L + n) * rot;
            }
        }
        total += std::abs(S) / static_cast<double>(R);
        ++countL;
        // S(L+1) = e(-beta) [ S(L) - w(L+1) e(beta) + w(L+R+1) e(beta (R+1)) ]
        if (L + R + 1 <= N)
            S = std::conj(w1) * (S - weight(L + 1) * w1 + weight(L + R + 1) * wR1);
    }
    // Clipped tail: L = N-R+1 .. N-1.
    for (std::uint64_t L = (N >= R ? N - R + 1 : 0); L <= N - 1; ++L) {
        std::uint64_t cnt = N - L;
        std::complex<double> s = 0.0;
        std::complex<double> rot = 1.0;
        for (std::uint64_t n = 1; n <= cnt; ++n) {
            rot *= w1;
            s += weight(L + n) * rot;
        }
        total += std::abs(s) / static_cast<double>(cnt);
        ++countL;
    }
    return total / static_cast<double>(countL);
}

// Test characters e_{(zeta1, zeta2)}(x, y) = e(zeta1 x + zeta2 y).
struct TestFunction {
    long zeta1 = 0;
    long zeta2 = 0;

    TestFunction() = default;
    TestFunction(long z1, long z2) : zeta1(z1), zeta2(z2) {
        if (z2 < 0) throw ValidationError("TestFunction: zeta2 must be >= 0");
    }
};

// |E_{n<=N} w(n) e(zeta1 x_n + zeta2 y_n)| at the checkpoints given in Ns
// (ascending); w = mu, or all ones when `mu` is null.
inline std::vector<double> disjointness_profile(const SkewProduct& T, const CirclePoint& x,
                                                double y, const TestFunction& f,
                                                const MoebiusTable* mu,
                                                const std::vector<std::uint64_t>& Ns) {
    if (Ns.empty()) throw ValidationError("disjointness_profile: no checkpoints");
    for (size_t i = 1; i < Ns.size(); ++i)
        if (Ns[i] <= Ns[i - 1]) throw ValidationError("checkpoints must increase");
    std::uint64_t NMax = Ns.back();
    if (mu && mu->limit() < NMax) throw ValidationError("disjointness: table too small");
    if (!x.within_budget())
        throw PrecisionError("disjointness: x error budget exceeded; rebuild at higher precision");

    OrbitEvaluator orbit(T, x, y);
    std::complex<double> acc = 0.0;
    std::vector<double> out;
    size_t next = 0;
    for (std::uint64_t n = 1; n <= NMax; ++n) {
        orbit.step(); // now at T^n
        int w = mu ? mu->mu(n) : 1;
        if (w) {
            double ang = static_cast<double>(f.zeta1) * orbit.x_frac() +
                         static_cast<double>(f.zeta2) * orbit.y_frac();
            acc += static_cast<double>(w) * unit_exp(ang - std::floor(ang));
        }
        if (n == Ns[next]) {
            out.push_back(std::abs(acc) / static_cast<double>(n));
            ++next;
        }
    }
    return out;
}

inline double disjointness_stat(const SkewProduct& T, const CirclePoint& x, double y,
                                const TestFunction& f, const MoebiusTable& mu, std::uint64_t N) {
    return disjointness_profile(T, x, y, f, &mu, {N}).front();
}

// E_L | E_{n in I_1^{k+}} mu(L+n) e(zeta1 n alpha + zeta2 H_{r(n)}(x + L alpha)) | —
// the window-decomposed bound.  `y` is part of the test-function signature but
// the modulus removes it.
inline double window_decomp_stat(const SkewProduct& T, const CirclePoint& x, double /*y*/,
                                 const TestFunction& f, const MoebiusTable& mu, std::uint64_t N,
                                 int kMinus, int kPlus, std::uint64_t nmaxBudget = (1ull << 22)) {
    if (kMinus < 1 || kMinus > kPlus) throw ValidationError("window_decomp: bad window");
    if (kPlus + 1 > T.cf.depth()) throw ValidationError("window_decomp: window beyond depth");
    BigInt nmaxBig = T.cf.q(kPlus + 1);
    if (nmaxBig > nmaxBudget) throw BudgetError("window_decomp: q_{k_+ + 1} exceeds budget");
    const std::uint64_t nmax = static_cast<std::uint64_t>(nmaxBig);
    if (mu.limit() < N - 1 + nmax)
        throw ValidationError("window_decomp: mu table must reach N-1+q_{k_+ +1}");
    const std::uint64_t qkm = static_cast<std::uint64_t>(T.cf.q(kMinus));

    // r(n) and e(zeta1 n alpha) for n < nmax.
    std::vector<std::uint32_t> rtab(nmax);
    for (std::uint64_t n = 0; n < nmax; ++n)
        rtab[n] = static_cast<std::uint32_t>(residue_of(BigInt(n), T.cf, kMinus));
    std::vector<std::complex<double>> ztab(nmax);
    {
        CirclePoint zStep = circle_mul_int(T.alpha, BigInt(f.zeta1));
        std::complex<double> w = unit_exp(zStep), rot = 1.0;
        for (std::uint64_t n = 0; n < nmax; ++n) {
            if ((n & 0x3FFF) == 0) rot = unit_exp(circle_mul_int(zStep, BigInt(n)));
            ztab[n] = rot;
            rot *= w;
        }
    }

    // h(x + j alpha) for j = 0 .. N-1+qkm, and its prefix sums.
    std::vector<double> cum(N + qkm + 1, 0.0);
    {
        OrbitEvaluator orbit(T, x, 0.0);
        for (std::uint64_t j = 0; j < N + qkm; ++j) {
            cum[j + 1] = cum[j] + orbit.h_now();
            orbit.step();
        }
    }

    std::vector<std::complex<double>> ephase(qkm);
    double total = 0.0;
    for (std::uint64_t L = 0; L < N; ++L) {
        for (std::uint64_t r = 0; r < qkm; ++r) {
            double HrL = cum[L + r] - cum[L];
            double ang = static_cast<double>(f.zeta2) * HrL;
            ephase[r] = unit_exp(ang - std::floor(ang));
        }
        std::complex<double> inner = 0.0;
        const std::int8_t* m = mu.data() + L; // m[n] = mu(L+n), n >= 1 when L+n >= 1
        for (std::uint64_t n = 0; n < nmax; ++n) {
            std::uint64_t idx = L + n;
            if (idx < 1) continue;
            int w = m[n];
            if (w) inner += static_cast<double>(w) * ztab[n] * ephase[rtab[n]];
        }
        total += std::abs(inner) / static_cast<double>(nmax);
    }
    return total / static_cast<double>(N);
}

// ---------------------------------------------------------------------------
// Trigonometric-polynomial approximation of arc indicators (Jackson kernel).

struct ArcApproximation {
    double arcStart = 0.0; // arc [start, start+len) mod 1
    double arcLen = 0.0;
    int degree = 0;                            // A
    std::vector<std::complex<double>> coeffs;  // theta_xi for xi = -A..A, index xi+A
    double bandHalfWidth = 0.0;                // w: exceptional band around each edge
    double excLenBound = 0.0;                  // |U_-| + |U_+| <= 4w
    double supErrBound = 0.0;                  // sup |psi - 1_D| outside U

    std::complex<double> coeff(int xi) const {
        return coeffs[static_cast<size_t>(xi + degree)];
    }
    double eval(double t) const {
        std::complex<double> e1 = unit_exp(t);
        std::complex<double> rot = unit_exp(-degree * t + std::floor(degree * t));
        std::complex<double> acc = 0.0;
        for (int xi = -degree; xi <= degree; ++xi) {
            acc += coeff(xi) * rot;
            rot *= e1;
        }
        return std::real(acc);
    }
};

namespace detail {

// Jackson kernel J_m = c_m (sin(m pi t)/sin(pi t))^4, degree 2m-2,
// coefficients by triangle self-convolution; mass outside [-w,w] at most
// c_m / (24 w^3) with c_m = 3 / (m (2m^2+1)).
inline std::vector<double> jackson_coeffs(long m) {
    std::vector<double> tri(static_cast<size_t>(2 * m - 1));
    for (long j = -(m - 1); j <= m - 1; ++j)
        tri[static_cast<size_t>(j + m - 1)] = static_cast<double>(m - std::labs(j));
    long A = 2 * m - 2;
    std::vector<double> out(static_cast<size_t>(2 * A + 1), 0.0);
    for (long xi = -A; xi <= A; ++xi) {
        double s = 0.0;
        long jLo = std::max(-(m - 1), xi - (m - 1));
        long jHi = std::min(m - 1, xi + (m - 1));
        for (long j = jLo; j <= jHi; ++j)
            s += tri[static_cast<size_t>(j + m - 1)] * tri[static_cast<size_t>(xi - j + m - 1)];
        out[static_cast<size_t>(xi + A)] = s;
    }
    double norm = out[static_cast<size_t>(A)]; // = m(2m^2+1)/3
    for (double& v : out) v /= norm;
    return out;
}

inline double jackson_tail(long m, double w) {
    double cm = 3.0 / (static_cast<double>(m) * (2.0 * static_cast<double>(m) * m + 1.0));
    return cm / (24.0 * w * w * w);
}

} // namespace detail

inline ArcApproximation arc_indicator_trigpoly(double arcStart, double arcLen,
                                               const BigInt& qkMinus, double delta,
                                               long degreeCap = 400000,
                                               const std::vector<double>* sharedKernel = nullptr,
                                               long sharedM = 0) {
    if (!(arcLen > 0.0 && arcLen <= 1.0)) throw ValidationError("arc length must be in (0,1]");
    if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must be in (0,1)");
    double q = to_double(qkMinus);

    ArcApproximation out;
    out.arcStart = arcStart - std::floor(arcStart);
    out.arcLen = arcLen;

    if (arcLen == 1.0) { // full circle: psi == 1 exactly
        out.degree = 0;
        out.coeffs = {std::complex<double>(1.0, 0.0)};
        out.supErrBound = 0.0;
        out.excLenBound = 0.0;
        return out;
    }

    const double eps = delta / (16.0 * q);
    const double w = delta / (129.0 * q);
    out.bandHalfWidth = w;
    out.excLenBound = 4.0 * w;

    long m;
    if (sharedKernel) {
        m = sharedM;
    } else {
        m = static_cast<long>(std::ceil(std::cbrt(1.0 / (16.0 * eps)) / w)) + 1;
        while (detail::jackson_tail(m, w) > eps) m = m + m / 4 + 1;
    }
    long A = 2 * m - 2;
    if (A > degreeCap)
        throw BudgetError("arc_indicator_trigpoly: required degree " + std::to_string(A) +
                          " exceeds cap");
    out.degree = static_cast<int>(A);
    out.supErrBound = detail::jackson_tail(m, w);

    std::vector<double> kernel = sharedKernel ? *sharedKernel : detail::jackson_coeffs(m);
    out.coeffs.assign(static_cast<size_t>(2 * A + 1), {0.0, 0.0});
    const double a = out.arcStart, b = out.arcStart + out.arcLen;
    for (long xi = -A; xi <= A; ++xi) {
        std::complex<double> ind;
        if (xi == 0) {
            ind = arcLen;
        } else {
            // (e(-xi a) - e(-xi b)) / (2 pi i xi)
            double xa = -static_cast<double>(xi) * a, xb = -static_cast<double>(xi) * b;
            std::complex<double> num = unit_exp(xa - std::floor(xa)) - unit_exp(xb - std::floor(xb));
            ind = num / std::complex<double>(0.0, 2.0 * detail::kPi * static_cast<double>(xi));
        }
        out.coeffs[static_cast<size_t>(xi + A)] = ind * kernel[static_cast<size_t>(xi + A)];
    }
    return out;
}

// Batch version sharing one kernel across all arcs of a residue partition.
inline std::vector<ArcApproximation> arc_approximations(const ResidueArcs& arcs,
                                                        const BigInt& qkMinus, double delta,
                                                        long degreeCap = 400000) {
    double q = to_double(qkMinus);
    const double eps = delta / (16.0 * q);
    const double w = delta / (129.0 * q);
    long m = static_cast<long>(std::ceil(std::cbrt(1.0 / (16.0 * eps)) / w)) + 1;
    while (detail::jackson_tail(m, w) > eps) m = m + m / 4 + 1;
    if (2 * m - 2 > degreeCap) throw BudgetError("arc_approximations: degree exceeds cap");
    std::vector<double> kernel = detail::jackson_coeffs(m);
    std::vector<ArcApproximation> out;
    for (const auto& a : arcs.arcs) {
        double start = to_double(a.repLo);
        double len = to_double(BigRat(a.repHi - a.repLo));
        out.push_back(
            arc_indicator_trigpoly(start, len, qkMinus, delta, degreeCap, &kernel, m));
    }
    return out;
}

// B_0 = max_xi sum_r |theta_{r,xi}|.
inline double b0_bound(const std::vector<ArcApproximation>& set) {
    int A = 0;
    for (const auto& a : set) A = std::max(A, a.degree);
    double best = 0.0;
    for (int xi = -A; xi <= A; ++xi) {
        double s = 0.0;
        for (const auto& a : set)
            if (std::abs(xi) <= a.degree) s += std::abs(a.coeff(xi));
        best = std::max(best, s);
    }
    return best;
}

} // namespace skewmu

#endif
