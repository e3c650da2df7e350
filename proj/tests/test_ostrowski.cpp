#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <unordered_map>

#include "skewmu/ostrowski.hpp"
#include "skewmu/presets.hpp"
#include "skewmu/serialize.hpp"

#include "oracles.hpp"

using namespace skewmu;

namespace {
OstrowskiDigits digitsOf(std::initializer_list<std::pair<int, long>> kv) {
    OstrowskiDigits d;
    for (auto& [k, v] : kv) d.set_digit(k, BigInt(v));
    return d;
}
} // namespace

TEST_CASE("encode_int examples") {
    auto fib = preset_cf("golden", 20, 128);
    auto d0 = encode_int(BigInt(0), fib);
    REQUIRE(d0.digits.empty());

    // 4 = q_2 + q_4 = 1 + 3; brute force over all valid vectors up to k=5
    // confirms this is the unique representation.
    auto d4 = encode_int(BigInt(4), fib);
    REQUIRE(d4.digit(2) == 1);
    REQUIRE(d4.digit(4) == 1);
    REQUIRE(d4.digits.size() == 2);
    {
        std::vector<std::vector<long>> all;
        oracles::enumerate_valid_digits({1, 1, 1, 1, 1}, 5, all);
        auto conv = oracles::convergents({1, 1, 1, 1, 1});
        int hits = 0;
        for (const auto& v : all) {
            BigInt s = 0;
            for (int k = 1; k <= 5; ++k) s += v[static_cast<size_t>(k - 1)] * conv.q[static_cast<size_t>(k)];
            if (s == 4) {
                ++hits;
                REQUIRE(v == std::vector<long>({0, 1, 0, 1, 0}));
            }
        }
        REQUIRE(hits == 1);
    }

    auto silver = preset_cf("silver", 20, 128);
    auto d11 = encode_int(BigInt(11), silver); // 11 = 2*5 + 1
    REQUIRE(d11.digit(3) == 2);
    REQUIRE(d11.digit(1) == 1);
    REQUIRE(d11.digits.size() == 2);
    REQUIRE(d11.digit(1) <= silver.a(1) - 1);
    REQUIRE(is_valid(d11, silver));

    REQUIRE_THROWS_AS(encode_int(silver.q(21), silver), ValidationError);
}

TEST_CASE("decode_int and partial_sum") {
    auto fib = preset_cf("golden", 20, 128);
    OstrowskiDigits zero;
    REQUIRE(decode_int(zero, fib) == 0);

    auto d = digitsOf({{2, 1}, {4, 1}});
    REQUIRE(decode_int(d, fib) == 4);
    REQUIRE(partial_sum(d, fib, 2) == 1);
    REQUIRE(partial_sum(d, fib, 4) == 4);

    OstrowskiDigits realKind;
    realKind.kind = OstrowskiDigits::Kind::Real;
    realKind.set_digit(2, BigInt(1));
    REQUIRE_THROWS_AS(decode_int(realKind, fib), ValidationError);

    auto invalid = digitsOf({{2, 1}, {3, 1}}); // n_2 must vanish when n_3 = a_3 = 1
    REQUIRE(!is_valid(invalid, fib));
    REQUIRE_THROWS_AS(decode_int(invalid, fib), ValidationError);
}

TEST_CASE("integer numeration is a bijection onto an initial segment") {
    for (const char* name : {"golden", "silver"}) {
        auto cf = preset_cf(name, 14, 128);
        std::vector<BigInt> a;
        for (int k = 1; k <= 12; ++k) a.push_back(cf.a(k));
        for (int kMax = 2; kMax <= 12; ++kMax) {
            std::vector<std::vector<long>> all;
            oracles::enumerate_valid_digits(a, kMax, all);
            std::set<BigInt> values;
            for (const auto& v : all) {
                BigInt s = 0;
                for (int k = 1; k <= kMax; ++k) s += v[static_cast<size_t>(k - 1)] * cf.q(k);
                values.insert(s);
            }
            REQUIRE(values.size() == all.size());            // injective
            REQUIRE(BigInt(all.size()) == cf.q(kMax + 1));   // onto {0..q_{k+1}-1}
            REQUIRE(*values.begin() == 0);
            REQUIRE(*values.rbegin() == cf.q(kMax + 1) - 1);
            REQUIRE(BigInt(all.size()) == interval_count(cf, DigitWindow(1, kMax)));
        }
        // encode_int agrees with the greedy oracle
        auto conv = oracles::convergents(a);
        for (long n = 0; n < 200; ++n) {
            auto lib = encode_int(BigInt(n), cf);
            auto orc = oracles::greedy_digits(BigInt(n), conv, 12);
            REQUIRE(lib.digits == orc);
            REQUIRE(decode_int(lib, cf) == n);
        }
    }
}

TEST_CASE("encode_real basic examples") {
    auto cf = preset_cf("golden", 32, 256);
    auto x0 = CirclePoint::zero(256);
    auto d0 = encode_real(x0, cf, 20);
    REQUIRE(d0.digits.empty());
    REQUIRE(d0.tailErrBound < 1e-60);

    // x = theta_3 exactly (as a circle point q_3 alpha mod 1)
    auto a = alpha_point(cf);
    auto th3 = circle_mul_int(a, cf.q(3));
    auto d3 = encode_real(th3, cf, 20);
    REQUIRE(d3.digit(3) == 1);
    REQUIRE(d3.digits.size() == 1);
}

TEST_CASE("encode_real reconstruction stays within tailErrBound") {
    auto cf = preset_cf("golden", 48, 256);
    auto cfHi = preset_cf("golden", 48, 512);
    auto aHi = alpha_point(cfHi, 512);
    REQUIRE(max_reliable_encode_depth(cf) >= 30);
    std::mt19937_64 rng(99);
    int skipped = 0;
    for (int i = 0; i < 1000; ++i) {
        BigInt v = 0;
        for (int limb = 0; limb < 4; ++limb) v = (v << 64) | rng();
        auto x = CirclePoint::from_raw(v, 256, BigInt(1));
        OstrowskiDigits d;
        try {
            d = encode_real(x, cf, 30);
        } catch (const BoundaryAmbiguousError&) {
            ++skipped; // genuinely within 2^-256 of a boundary: should be rare
            continue;
        }
        REQUIRE(d.kind == OstrowskiDigits::Kind::Real);
        REQUIRE(is_valid(d, cf));
        // doubled-precision reconstruction oracle
        CirclePoint rec = CirclePoint::zero(512);
        for (const auto& [k, dig] : d.digits)
            rec = circle_add(rec, circle_mul_int(aHi, dig * cfHi.q(k)));
        double diff = std::fabs(rec.frac() - x.frac());
        diff = std::min(diff, 1.0 - diff);
        // 1e-15 covers the 2^-53 rounding of the frac() conversions
        REQUIRE(diff <= d.tailErrBound + rec.err_abs() + x.err_abs() + 1e-15);
    }
    REQUIRE(skipped <= 2);
}

TEST_CASE("encode_real matches encode_int on orbit points") {
    for (const char* name : {"golden", "silver", "const-7"}) {
        auto cf = preset_cf(name, 24, 256);
        auto a = alpha_point(cf);
        std::mt19937_64 rng(7);
        for (int i = 0; i < 100; ++i) {
            BigInt n(rng() % 5000);
            auto w = circle_mul_int(a, n);
            auto dInt = encode_int(n, cf);
            auto dReal = encode_real(w, cf, 20);
            if (dInt.max_support() <= 20) {
                REQUIRE(dReal.digits == dInt.digits);
            }
        }
    }
}

TEST_CASE("encode_real flags the lexicographically maximal prefix") {
    auto cf = preset_cf("golden", 40, 256);
    // Just inside the domain's left end -alpha, whose digits are (0,1,0,1,...):
    // the lex-max valid prefix down to scales far beyond the tested depth.
    BigRat nudged = 1 - cf.alpha().mid() + BigRat(1, BigInt(1) << 40);
    auto nearEdge = CirclePoint::from_rat(nudged, 256);
    auto d = encode_real(nearEdge, cf, 12);
    for (int k = 2; k <= 12; k += 2) REQUIRE(d.digit(k) == 1);
    REQUIRE(d.maxPrefixAmbiguous);

    auto generic = CirclePoint::from_rat(BigRat(1, 5), 256);
    auto dg = encode_real(generic, cf, 12);
    REQUIRE(!dg.maxPrefixAmbiguous);

    // -alpha itself sits on the representative cut: ambiguous by construction.
    auto negAlpha = circle_neg(alpha_point(cf));
    REQUIRE_THROWS_AS(encode_real(negAlpha, cf, 12), BoundaryAmbiguousError);
}

TEST_CASE("encode_real boundary ambiguity is an explicit error") {
    auto cf = preset_cf("golden", 32, 256);
    // theta_25 with an error ball wider than the digit cells at scale ~17.
    auto pt = circle_mul_int(alpha_point(cf), cf.q(25));
    auto x = CirclePoint::from_raw(pt.value(), 256, BigInt(1) << 238);
    REQUIRE_THROWS_AS(encode_real(x, cf, 25), BoundaryAmbiguousError);
}

TEST_CASE("enumerate_interval examples and ordering") {
    auto fib = preset_cf("golden", 10, 128);
    SECTION("I_1^4 is {0..q_5-1} = {0..4}") {
        IntervalEnumerator en(fib, DigitWindow(1, 4));
        std::vector<long> got;
        BigInt v;
        while (en.next(v)) got.push_back(static_cast<long>(v));
        REQUIRE(got == std::vector<long>({0, 1, 2, 3, 4}));
        REQUIRE(fib.q(5) == 5);
    }
    SECTION("I_k^k is {0, q_k, ..., a_k q_k}") {
        auto silver = preset_cf("silver", 10, 128);
        IntervalEnumerator en(silver, DigitWindow(3, 3));
        std::vector<long> got;
        BigInt v;
        while (en.next(v)) got.push_back(static_cast<long>(v));
        REQUIRE(got == std::vector<long>({0, 5, 10})); // q_3 = 5, a_3 = 2
    }
    SECTION("window at k=1 uses the a_1-1 bound") {
        auto c5 = preset_cf("const-5", 10, 128);
        IntervalEnumerator en(c5, DigitWindow(1, 1));
        std::vector<long> got;
        BigInt v;
        while (en.next(v)) got.push_back(static_cast<long>(v));
        REQUIRE(got == std::vector<long>({0, 1, 2, 3, 4})); // {0..a_1-1} q_1
    }
    SECTION("general window matches brute-force filter and is increasing") {
        auto c3 = preset_cf("const-3", 10, 128);
        std::vector<BigInt> a;
        for (int k = 1; k <= 6; ++k) a.push_back(c3.a(k));
        auto conv = oracles::convergents(a);
        std::vector<long> expect;
        for (BigInt n = 0; n < c3.q(7); ++n) {
            auto d = oracles::greedy_digits(n, conv, 6);
            bool ok = true;
            for (const auto& [k, v] : d)
                if (k < 2 || k > 5) ok = false;
            if (ok) expect.push_back(static_cast<long>(n));
        }
        IntervalEnumerator en(c3, DigitWindow(2, 5));
        std::vector<long> got;
        BigInt v;
        OstrowskiDigits dd;
        while (en.next(v, &dd)) {
            got.push_back(static_cast<long>(v));
            REQUIRE(is_valid(dd, c3));
            REQUIRE(decode_int(dd, c3) == v);
        }
        REQUIRE(got == expect);
        REQUIRE(std::is_sorted(got.begin(), got.end()));
        REQUIRE(BigInt(got.size()) == interval_count(c3, DigitWindow(2, 5)));
    }
}

TEST_CASE("enumerate_B examples") {
    Rational tau(5, 2);
    SECTION("no resonant index: single zero vector") {
        auto fib = preset_cf("golden", 30, 256);
        REQUIRE(resonant_indices(fib, DigitWindow(8, 20), tau).empty());
        EnsembleEnumerator en(fib, DigitWindow(8, 20), tau);
        OstrowskiDigits d;
        int count = 0;
        while (en.next(d)) {
            ++count;
            REQUIRE(d.digits.empty());
        }
        REQUIRE(count == 1);
        REQUIRE(ensemble_count(fib, DigitWindow(8, 20), tau) == 1);
    }
    SECTION("one resonant index with a_k = 5 gives 5 vectors") {
        // const-5 alpha: q_2 = 5 > q_1^{1.25} = 1, deeper ratios shrink.
        auto c5 = preset_cf("const-5", 12, 128);
        auto ks = resonant_indices(c5, DigitWindow(1, 12), tau);
        REQUIRE(!ks.empty());
        DigitWindow w(ks[0], ks[0]);
        EnsembleEnumerator en(c5, w, tau);
        OstrowskiDigits d;
        int count = 0;
        while (en.next(d)) {
            ++count;
            REQUIRE(d.digit(ks[0]) <= 4);
        }
        REQUIRE(count == 5);
    }
    SECTION("golden resonance dies out") {
        auto fib = preset_cf("golden", 30, 256);
        auto ks = resonant_indices(fib, DigitWindow(1, 25), tau);
        REQUIRE(ks == std::vector<int>({2, 3, 4, 5}));
    }
}

TEST_CASE("residues and residue arcs") {
    auto fib = preset_cf("golden", 30, 256);
    SECTION("small n are their own residue") {
        for (long n = 0; n < static_cast<long>(fib.q(4)); ++n)
            REQUIRE(residue_of(BigInt(n), fib, 4) == n);
        REQUIRE(residue_of(fib.q(4), fib, 4) == 0);
    }
    SECTION("arc partition tiles the circle") {
        auto arcs = residue_arcs(fib, 6, 256);
        REQUIRE(BigInt(arcs.arcs.size()) == fib.q(6));
        BigRat total = 0;
        for (size_t i = 0; i < arcs.arcs.size(); ++i) {
            const auto& a = arcs.arcs[i];
            REQUIRE(a.repLo < a.repHi);
            if (i + 1 < arcs.arcs.size()) {
                BigRat gap = arcs.arcs[i + 1].repLo - a.repHi;
                REQUIRE(boost::multiprecision::abs(gap) < BigRat(1, BigInt(1) << 120));
            }
            total += a.repHi - a.repLo;
        }
        REQUIRE(boost::multiprecision::abs(total - 1) < BigRat(1, BigInt(1) << 120));
    }
    SECTION("arc membership agrees with the residue map") {
        auto arcs = residue_arcs(fib, 4, 256);
        auto a = alpha_point(fib);
        int ambiguous = 0;
        for (long n = 0; n < 2000; ++n) {
            auto w = circle_mul_int(a, BigInt(n));
            auto loc = locate(arcs, w, fib);
            if (loc.ambiguous) {
                ++ambiguous;
                continue;
            }
            REQUIRE(loc.r == residue_of(BigInt(n), fib, 4));
        }
        REQUIRE(ambiguous <= 2 * static_cast<long>(fib.q(4)));
    }
}

TEST_CASE("digit_joint_tv") {
    SECTION("singleton window: TV equals 1/(a_k+1)") {
        auto c9 = preset_cf("const-9", 8, 128);
        double tv = digit_joint_tv(c9, DigitWindow(3, 3), {3});
        REQUIRE_THAT(tv, Catch::Matchers::WithinAbs(1.0 / 10.0, 1e-12));
    }
    SECTION("degenerate one-element window is a point mass") {
        auto fib = preset_cf("golden", 10, 128);
        // I_2^2 for golden = {0, q_2} has 2 elements; use window [2,2] index 2
        double tv = digit_joint_tv(fib, DigitWindow(2, 2), {2});
        // emp uniform on {0,1}, uniform target is the point mass at 0
        REQUIRE_THAT(tv, Catch::Matchers::WithinAbs(0.5, 1e-12));
    }
    SECTION("fast path agrees with explicit enumeration") {
        auto c7 = preset_cf("const-7", 10, 128);
        DigitWindow w(2, 4);
        double fast = digit_joint_tv(c7, w, {2, 3, 4});
        // oracle: enumerate and bucket
        IntervalEnumerator en(c7, w);
        BigInt v;
        OstrowskiDigits d;
        std::map<std::tuple<long, long, long>, long> counts;
        long total = 0;
        while (en.next(v, &d)) {
            counts[{static_cast<long>(d.digit(2)), static_cast<long>(d.digit(3)),
                    static_cast<long>(d.digit(4))}]++;
            ++total;
        }
        double sum = 0, covered = 0;
        for (auto& [key, c] : counts) {
            auto [d2, d3, d4] = key;
            bool support = d2 < 7 && d3 < 7 && d4 < 7;
            double uni = support ? 1.0 / 343.0 : 0.0;
            sum += std::fabs(static_cast<double>(c) / total - uni);
            if (support) covered += uni;
        }
        sum += 1.0 - covered;
        REQUIRE_THAT(fast, Catch::Matchers::WithinAbs(0.5 * sum, 1e-12));
    }
    SECTION("distinct far-apart indices: TV <= 4 sum 1/a") {
        auto c50 = preset_cf("const-50", 10, 192);
        double tv = digit_joint_tv(c50, DigitWindow(2, 5), {2, 5});
        REQUIRE(tv <= 4.0 * (1.0 / 50 + 1.0 / 50));
        REQUIRE(tv > 0.0);
    }
    SECTION("TV decreases as a_k grows over {5, 50, 500}") {
        double tv5 = digit_joint_tv(preset_cf("const-5", 8, 128), DigitWindow(2, 4), {2, 3, 4});
        double tv50 = digit_joint_tv(preset_cf("const-50", 8, 192), DigitWindow(2, 4), {2, 3, 4});
        double tv500 = digit_joint_tv(preset_cf("const-500", 8, 256), DigitWindow(2, 4), {2, 3, 4});
        REQUIRE(tv50 < tv5);
        REQUIRE(tv500 < tv50);
    }
    SECTION("budget errors carry a size estimate") {
        auto c50 = preset_cf("const-50", 12, 256);
        REQUIRE_THROWS_AS(digit_joint_tv(c50, DigitWindow(2, 11), {2, 11}), BudgetError);
    }
}

TEST_CASE("digit vectors round-trip through JSON") {
    auto cf = preset_cf("silver", 12, 128);
    auto d = encode_int(BigInt(1234), cf);
    auto j = digits_to_json(d);
    auto back = digits_from_json(j);
    REQUIRE(back.digits == d.digits);
    REQUIRE(decode_int(back, cf) == 1234);
}

TEST_CASE("concatenation defect is small and positive") {
    auto c10 = preset_cf("const-10", 12, 128);
    double defect = concat_defect(c10, {2, 4, 6});
    REQUIRE(defect > 0.0);
    REQUIRE(defect <= 4.0 * (1.0 / 10.0));
    // three blocks
    double defect3 = concat_defect(c10, {2, 4, 6, 8});
    REQUIRE(defect3 <= 4.0 * (2.0 / 10.0));
}
