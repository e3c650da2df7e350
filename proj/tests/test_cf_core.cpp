#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "skewmu/circle.hpp"
#include "skewmu/continued_fraction.hpp"
#include "skewmu/presets.hpp"

#include "oracles.hpp"

using namespace skewmu;

namespace {
PartialQuotients quots(std::initializer_list<long> xs) {
    PartialQuotients pq;
    for (long x : xs) pq.a.push_back(BigInt(x));
    return pq;
}
} // namespace

TEST_CASE("convergent recurrence matches hand values and oracle") {
    auto cf = ContinuedFraction::from_quotients(quots({1, 1, 1, 1, 1}), 128);
    const long qExp[] = {1, 1, 2, 3, 5};
    const long pExp[] = {0, 1, 1, 2, 3};
    for (int k = 1; k <= 5; ++k) {
        REQUIRE(cf.q(k) == qExp[k - 1]);
        REQUIRE(cf.p(k) == pExp[k - 1]);
    }
    auto orc = oracles::convergents({1, 1, 1, 1, 1});
    for (int k = 1; k <= 6; ++k) {
        REQUIRE(cf.q(k) == orc.q[static_cast<size_t>(k)]);
        REQUIRE(cf.p(k) == orc.p[static_cast<size_t>(k)]);
    }

    auto cf2 = ContinuedFraction::from_quotients(quots({2, 2, 2, 2}), 128);
    const long q2Exp[] = {1, 2, 5, 12};
    const long p2Exp[] = {0, 1, 2, 5};
    for (int k = 1; k <= 4; ++k) {
        REQUIRE(cf2.q(k) == q2Exp[k - 1]);
        REQUIRE(cf2.p(k) == p2Exp[k - 1]);
    }
}

TEST_CASE("theta_1 enclosure sits in the sandwich for a=(1,1)") {
    auto cf = ContinuedFraction::from_quotients(quots({1, 1}), 128);
    REQUIRE(cf.q(1) == 1);
    REQUIRE(cf.q(2) == 1);
    auto t1 = cf.theta_abs(1);
    // (1/(q_2+q_1), 1/q_2) = (1/2, 1); enclosure is open so endpoint contact is fine
    REQUIRE(t1.lo >= BigRat(1, 2));
    REQUIRE(t1.hi <= BigRat(1));
}

TEST_CASE("diophantine invariants hold across presets") {
    // Construction itself asserts coprimality, the theta sandwich, sign
    // alternation, q_{k+2} >= 2 q_k and exponential growth.
    struct Row {
        const char* name;
        int K;
        int P;
    };
    const Row rows[] = {
        {"golden", 40, 256}, {"silver", 40, 256}, {"liouville-1", 40, 1024},
        {"liouville-3", 13, 384}, {"tower", 40, 2048},
    };
    for (const auto& r : rows) {
        auto cf = preset_cf(r.name, r.K, r.P);
        REQUIRE(cf.depth() == r.K);
        for (int k = 1; k + 2 <= r.K + 1; ++k) REQUIRE(cf.q(k + 2) >= 2 * cf.q(k));
        for (int k = 1; k <= r.K + 1; ++k) {
            int e = k / 2 - 1;
            if (e > 0) REQUIRE(cf.q(k) >= (BigInt(1) << e));
        }
        // alpha enclosure width <= 2 max |theta_K|
        REQUIRE(cf.alpha().width() <= 2 * cf.theta_abs(r.K).hi);
    }
}

TEST_CASE("from_real round-trips quotients") {
    for (const char* name : {"golden", "silver", "const-7", "liouville-1"}) {
        auto cf = preset_cf(name, 12, 512);
        auto back = ContinuedFraction::from_real(cf.alpha(), 12, 512);
        REQUIRE(back.depth() == 12);
        for (int k = 1; k <= 12; ++k) REQUIRE(back.a(k) == cf.a(k));
    }
}

TEST_CASE("from_real on algebraic enclosures") {
    // sqrt(2)-1 = [0; 2,2,2,...]
    auto s2 = oracles::sqrt_enclosure(2, 128);
    RatInterval enc(s2.lo - 1, s2.hi - 1);
    auto cf = ContinuedFraction::from_real(enc, 10, 128);
    REQUIRE(cf.depth() == 10);
    for (int k = 1; k <= 10; ++k) REQUIRE(cf.a(k) == 2);

    // (sqrt(5)-1)/2 = [0; 1,1,1,...]
    auto s5 = oracles::sqrt_enclosure(5, 128);
    RatInterval enc5((s5.lo - 1) / 2, (s5.hi - 1) / 2);
    auto cfg = ContinuedFraction::from_real(enc5, 10, 128);
    REQUIRE(cfg.depth() == 10);
    for (int k = 1; k <= 10; ++k) REQUIRE(cfg.a(k) == 1);
}

TEST_CASE("from_real rejects rationals and wide enclosures") {
    REQUIRE_THROWS_AS(ContinuedFraction::from_real(interval_from_decimal("0.5"), 8, 128),
                      ValidationError);
    // So wide not even a_1 is certified.
    REQUIRE_THROWS_AS(ContinuedFraction::from_real(RatInterval(BigRat(1, 10), BigRat(9, 10)), 8, 128),
                      ValidationError);
}

TEST_CASE("precision-insufficient depth is an explicit failure") {
    PartialQuotients pq;
    for (int k = 1; k <= 12; ++k) pq.a.push_back(BigInt(1) << 16);
    REQUIRE_THROWS_AS(ContinuedFraction::from_quotients(pq, 128), PrecisionError);
    REQUIRE_NOTHROW(ContinuedFraction::from_quotients(pq, 512));
}

TEST_CASE("circle arithmetic identities") {
    const int P = 128;
    auto x = CirclePoint::from_rat(BigRat(3, 7), P);
    auto z = CirclePoint::zero(P);
    REQUIRE(circle_add(x, z) == x);

    auto y = CirclePoint::from_rat(BigRat(4, 7), P); // 1 - x
    auto s = circle_add(x, y);
    // zero within 2 ulp
    BigInt v = s.value();
    BigInt m = BigInt(1) << P;
    BigInt dist = std::min(v, BigInt(m - v));
    REQUIRE(dist <= 2);
    REQUIRE(s.err_ulps() <= 2);
}

TEST_CASE("circle_mul_int lands q_k alpha inside the theta bounds") {
    auto cf = preset_cf("golden", 30, 256);
    auto a = alpha_point(cf);
    for (int k = 2; k <= 20; ++k) {
        auto pt = circle_mul_int(a, cf.q(k));
        double nd = pt.norm_dist();
        double lo = to_double(BigRat(1, cf.q(k + 1) + cf.q(k)));
        double hi = to_double(BigRat(1, cf.q(k + 1)));
        double slack = pt.err_abs() + 1e-30;
        REQUIRE(nd >= lo - slack);
        REQUIRE(nd <= hi + slack);
    }
}

TEST_CASE("fixed-point error tracking is sound against doubled precision") {
    auto cf128 = preset_cf("golden", 20, 128);
    auto cf256 = preset_cf("golden", 20, 256);
    auto aLow = alpha_point(cf128, 128);
    auto aHigh = alpha_point(cf256, 256);

    std::mt19937_64 rng(12345);
    BigInt qK = cf128.q(20);
    for (int i = 0; i < 10000; ++i) {
        BigInt n = BigInt(rng() % static_cast<uint64_t>(qK));
        auto low = circle_mul_int(aLow, n);
        auto high = circle_mul_int(aHigh, n);
        // compare as fractions mod 1
        double d = std::fabs(low.frac() - high.frac());
        d = std::min(d, 1.0 - d);
        REQUIRE(d <= low.err_abs() + high.err_abs() + 1e-18);
    }
}

TEST_CASE("representative picks [-alpha, 1-alpha)") {
    auto cf = preset_cf("golden", 20, 128);
    auto a = alpha_point(cf);
    // alpha itself: representative should be alpha - 1 (since alpha >= 1-alpha here)
    auto rep = representative(a, cf);
    REQUIRE(!rep.ambiguous);
    REQUIRE(rep.value < 0);
    REQUIRE(rep.value >= -cf.alpha().hi);
    // a point just below the cut stays put
    auto w = CirclePoint::from_rat(BigRat(1, 4), 128);
    auto repw = representative(w, cf);
    REQUIRE(!repw.ambiguous);
    REQUIRE(repw.value == BigRat(1, 4));
}
