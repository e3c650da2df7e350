#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "skewmu/fourier.hpp"
#include "skewmu/presets.hpp"
#include "skewmu/serialize.hpp"

using namespace skewmu;

namespace {
const Rational kTau(5, 2);
}

TEST_CASE("resonant_set on classic presets") {
    SECTION("golden keeps only small scales") {
        auto cf = preset_cf("golden", 30, 256);
        auto M = resonant_set(cf, kTau, 25);
        std::vector<int> ks;
        for (auto& e : M.entries) ks.push_back(e.k);
        REQUIRE(ks == std::vector<int>({2, 3, 4, 5}));
    }
    SECTION("tower-type growth is resonant at every tested scale") {
        auto cf = preset_cf("tower", 8, 1024);
        auto M = resonant_set(cf, kTau, 8);
        REQUIRE(M.entries.size() == 8);
    }
    SECTION("large tau empties the resonant set beyond k=1") {
        auto cf = preset_cf("silver", 20, 256);
        auto M = resonant_set(cf, Rational(100, 1), 19);
        for (auto& e : M.entries) REQUIRE(e.k == 1);
    }
    SECTION("membership test agrees with the materialized frequencies") {
        auto cf = preset_cf("liouville-1", 12, 256);
        auto M = resonant_set(cf, kTau, 10, 8);
        for (const auto& f : M.frequencies) {
            REQUIRE(M.contains(f));
            REQUIRE(M.contains(BigInt(-f)));
        }
        // q_3 + 1 is not of the form m_k q_k with m_k <= a_k for liouville-1
        REQUIRE(!M.contains(cf.q(3) + 1));
        REQUIRE(!M.contains(BigInt(0)));
    }
    SECTION("monotone in tau") {
        auto cf = preset_cf("liouville-2", 12, 384);
        auto lo = resonant_set(cf, Rational(21, 10), 10);
        auto hi = resonant_set(cf, Rational(4, 1), 10);
        REQUIRE(hi.entries.size() <= lo.entries.size());
    }
}

TEST_CASE("synth_h") {
    auto cf = preset_cf("golden", 30, 256);
    auto M = resonant_set(cf, kTau, 25);

    SECTION("empty resonant set gives the constant model") {
        ResonantSet empty;
        auto h = synth_h(empty, kTau, 1, 0.5, 4, 0.25);
        REQUIRE(h.coeffs().empty());
        auto x = CirclePoint::from_rat(BigRat(2, 7), 256);
        REQUIRE(h.eval(x) == 0.25);
    }
    SECTION("single frequency pair is a pure cosine") {
        ResonantSet one;
        one.entries.push_back({3, cf.q(3), cf.a(3)});
        auto h = synth_h(one, kTau, 9, 0.3, 1, 0.0);
        REQUIRE(h.coeffs().size() == 1);
        const auto& c = h.coeffs()[0];
        REQUIRE(c.freq == cf.q(3));
        double A = 0.3 * std::pow(to_double(cf.q(3)), -kTau.value());
        REQUIRE_THAT(std::abs(c.c), Catch::Matchers::WithinRel(A, 1e-12));
        // h(x) = 2 A cos(2 pi (q_3 x + phase))
        std::mt19937_64 rng(4);
        for (int i = 0; i < 20; ++i) {
            auto x = CirclePoint::from_rat(BigRat(rng() % 1000, 1009), 256);
            double expect = 2.0 * A *
                            std::cos(2.0 * 3.14159265358979323846 *
                                         (to_double(circle_mul_int(x, cf.q(3)).frac())) +
                                     std::arg(c.c));
            REQUIRE_THAT(h.eval(x), Catch::Matchers::WithinAbs(expect, 1e-12));
        }
    }
    SECTION("same seed reproduces coefficients") {
        auto h1 = synth_h(M, kTau, 77, 0.1, 3, 0.0);
        auto h2 = synth_h(M, kTau, 77, 0.1, 3, 0.0);
        REQUIRE(h1.coeffs().size() == h2.coeffs().size());
        for (size_t i = 0; i < h1.coeffs().size(); ++i) {
            REQUIRE(h1.coeffs()[i].freq == h2.coeffs()[i].freq);
            REQUIRE(h1.coeffs()[i].c == h2.coeffs()[i].c);
        }
        auto h3 = synth_h(M, kTau, 78, 0.1, 3, 0.0);
        bool same = true;
        for (size_t i = 0; i < h1.coeffs().size(); ++i)
            if (h1.coeffs()[i].c != h3.coeffs()[i].c) same = false;
        REQUIRE(!same);
    }
    SECTION("decay bound holds with C = amplitude") {
        auto h = synth_h(M, kTau, 5, 0.2, 3, 0.0);
        REQUIRE(h.decay_bound_holds(0.2000001));
        REQUIRE(h.log2_decay_const() <= std::log2(0.2) + 1e-9);
    }
}

TEST_CASE("psi_conjugator") {
    auto cf = preset_cf("golden", 30, 256);
    auto M = resonant_set(cf, kTau, 25);

    SECTION("fully resonant support leaves psi empty") {
        auto h = synth_h(M, kTau, 3, 0.1, 1, 0.0);
        auto res = psi_conjugator(h, cf, kTau, 0.5, 256);
        REQUIRE(res.psi.coeffs().empty());
        REQUIRE(res.tailBound < 0.5);
    }
    SECTION("single non-resonant frequency obeys the small-divisor bounds") {
        FourierModel h(0.0, kTau.value());
        h.add_coeff(BigInt(4), {0.01, 0.005}, 0); // 4 is not in M for golden
        REQUIRE(!M.contains(BigInt(4)));
        auto res = psi_conjugator(h, cf, kTau, 0.9, 256);
        REQUIRE(res.psi.coeffs().size() == 1);
        double psiAbs = std::abs(res.psi.coeffs()[0].c);
        double hAbs = std::abs(std::complex<double>(0.01, 0.005));
        double norm4 = circle_mul_int(alpha_point(cf), BigInt(4)).norm_dist();
        // 4 ||t|| <= |e(t)-1| <= 2 pi ||t||
        REQUIRE(psiAbs >= hAbs / (2.0 * 3.14159265358979323846 * norm4) * 0.999999);
        REQUIRE(psiAbs <= hAbs / (4.0 * norm4) * 1.000001);
    }
    SECTION("conjugation identity: h - h1 = psi(.+alpha) - psi") {
        FourierModel h(0.1, kTau.value());
        // resonant part
        h.add_coeff(cf.q(4), {0.02, -0.01}, 4);
        // non-resonant frequencies
        h.add_coeff(BigInt(4), {0.01, 0.004}, 0);
        h.add_coeff(BigInt(7), {-0.003, 0.002}, 0);
        auto res = psi_conjugator(h, cf, kTau, 0.9, 256);
        const auto& psi = res.psi;
        REQUIRE(psi.coeffs().size() == 2);
        // coefficient-level identity at every support frequency
        auto alpha = alpha_point(cf);
        for (const auto& e : h.coeffs()) {
            std::complex<double> lhs = e.c;
            std::complex<double> rec = psi.coeff_at(e.freq) *
                                       unit_exp_m1(circle_mul_int(alpha, e.freq));
            if (M.contains(e.freq)) {
                REQUIRE(std::abs(rec) == 0.0);
            } else {
                REQUIRE(std::abs(lhs - rec) <= 1e-15);
            }
        }
        // function-level check on sample points
        std::mt19937_64 rng(11);
        for (int i = 0; i < 50; ++i) {
            auto x = CirclePoint::from_rat(BigRat(rng() % 4093, 4093), 256);
            auto xa = circle_add(x, alpha);
            double lhs = h.eval(x) - (psi.eval(xa) - psi.eval(x));
            // what remains must be the resonant part plus the constant
            FourierModel h1(h.const_term(), h.tau());
            h1.add_coeff(cf.q(4), {0.02, -0.01}, 4);
            REQUIRE_THAT(lhs, Catch::Matchers::WithinAbs(h1.eval(x), 1e-12));
        }
    }
    SECTION("unresolvable small divisor is a precision failure") {
        auto lcf = preset_cf("liouville-3", 12, 384);
        FourierModel h(0.0, kTau.value());
        h.add_coeff(lcf.q(13), {0.01, 0.0}, 0); // ||q_13 alpha|| below the alpha resolution
        REQUIRE_THROWS_AS(psi_conjugator(h, lcf, kTau, 0.9, 384), PrecisionError);
    }
}

TEST_CASE("coboundary construction and decoding") {
    auto cf = preset_cf("liouville-2", 12, 384);
    auto M = resonant_set(cf, kTau, 10);

    SECTION("zero g gives the constant rotation") {
        FourierModel g(0.0, kTau.value());
        auto T = make_coboundary(g, 0.375, cf, kTau, 384);
        REQUIRE(T.h.coeffs().empty());
        REQUIRE(T.h.const_term() == 0.375);
        REQUIRE(T.coboundary.has_value());
    }
    SECTION("coefficients satisfy hhat = ghat (e(m alpha) - 1) and decode back") {
        auto g = synth_section_g(M, kTau, 21, 0.05, 2);
        auto T = make_coboundary(g, 0.0, cf, kTau, 384);
        REQUIRE(T.resonantSupportOnly);
        auto alpha = alpha_point(cf);
        for (const auto& e : T.h.coeffs()) {
            auto expect = g.coeff_at(e.freq) * unit_exp_m1(circle_mul_int(alpha, e.freq));
            REQUIRE(std::abs(e.c - expect) <= 1e-18 + 1e-12 * std::abs(e.c));
        }
        auto g2 = coboundary_decode(T.h, cf, 384);
        for (const auto& e : g.coeffs())
            REQUIRE(std::abs(g2.coeff_at(e.freq) - e.c) <= 1e-12 * std::abs(e.c) + 1e-18);
    }
}

TEST_CASE("fourier JSON round trip") {
    auto cf = preset_cf("golden", 20, 128);
    auto M = resonant_set(cf, kTau, 15);
    auto h = synth_h(M, kTau, 55, 0.1, 2, 0.125);
    Json j = fourier_to_json(h);
    auto back = fourier_from_json(j);
    REQUIRE(back.const_term() == h.const_term());
    REQUIRE(back.coeffs().size() == h.coeffs().size());
    for (size_t i = 0; i < h.coeffs().size(); ++i) {
        REQUIRE(back.coeffs()[i].freq == h.coeffs()[i].freq);
        REQUIRE(std::abs(back.coeffs()[i].c - h.coeffs()[i].c) <= 1e-15);
        REQUIRE(back.coeffs()[i].scale == h.coeffs()[i].scale);
    }
}

TEST_CASE("skew product hypothesis flag") {
    auto cf = preset_cf("golden", 30, 256);
    auto M = resonant_set(cf, kTau, 25);
    auto onM = synth_h(M, kTau, 2, 0.1, 1, 0.0);
    REQUIRE(SkewProduct(cf, onM, kTau, 256).resonantSupportOnly);
    FourierModel off(0.0, kTau.value());
    off.add_coeff(BigInt(4), {0.01, 0.0}, 0);
    REQUIRE(!SkewProduct(cf, off, kTau, 256).resonantSupportOnly);
}
