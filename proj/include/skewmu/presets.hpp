#ifndef SKEWMU_PRESETS_HPP
#define SKEWMU_PRESETS_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "skewmu/continued_fraction.hpp"
#include "skewmu/errors.hpp"
#include "skewmu/numeric.hpp"

namespace skewmu {

// Named quotient generators.
//   golden       a_k = 1
//   silver       a_k = 2
//   const-C      a_k = C
//   liouville-D  a_k = 2^{D k}   (resonant regime for q_{k+1} > q_k^{tau/2})
//   tower        a_k = 2^{2^k}, exponent capped so the precision certifies K
inline PartialQuotients preset_quotients(const std::string& name, int K, int precisionBits) {
    if (K < 2) throw ValidationError("preset depth must be >= 2");
    PartialQuotients pq;
    pq.a.reserve(static_cast<size_t>(K));

    auto fillConst = [&](long c) {
        for (int k = 1; k <= K; ++k) pq.a.push_back(BigInt(c));
    };

    if (name == "golden") {
        fillConst(1);
    } else if (name == "silver") {
        fillConst(2);
    } else if (name.rfind("const-", 0) == 0) {
        long c = std::stol(name.substr(6));
        if (c < 1) throw ValidationError("const-C preset needs C >= 1");
        fillConst(c);
    } else if (name.rfind("liouville-", 0) == 0) {
        long d = std::stol(name.substr(10));
        if (d < 1) throw ValidationError("liouville-D preset needs D >= 1");
        for (int k = 1; k <= K; ++k) pq.a.push_back(BigInt(1) << static_cast<unsigned>(d * k));
    } else if (name == "tower") {
        // Keep sum of exponents within the precision certificate
        // (bit_length(q_{K+1}) <= P - 64, and log2 q_{K+1} ~ sum log2 a_k).
        long budget = precisionBits - 80;
        if (budget < K + 4) throw ValidationError("precision too small for tower preset");
        long cap = std::max<long>(1, (budget - 8) / K);
        long used = 0;
        for (int k = 1; k <= K; ++k) {
            long e = (k < 60) ? std::min<long>(cap, 1L << k) : cap;
            if (used + e > budget) e = std::max<long>(1, budget - used);
            used += e;
            pq.a.push_back(BigInt(1) << static_cast<unsigned>(e));
        }
    } else {
        throw ValidationError("unknown alpha preset: " + name);
    }
    return pq;
}

inline ContinuedFraction preset_cf(const std::string& name, int K, int precisionBits) {
    return ContinuedFraction::from_quotients(preset_quotients(name, K, precisionBits),
                                             precisionBits);
}

} // namespace skewmu

#endif
