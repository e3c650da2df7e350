#ifndef SKEWMU_SERIALIZE_HPP
#define SKEWMU_SERIALIZE_HPP

#include <cstdio>
#include <string>

#include <json.hpp>

#include "skewmu/continued_fraction.hpp"
#include "skewmu/fourier.hpp"
#include "skewmu/ostrowski.hpp"

namespace skewmu {

using Json = nlohmann::json;

// Decimal expansion of a rational with the given number of fractional digits
// (truncated toward zero).
inline std::string decimal_string(const BigRat& r, int digits) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    bool neg = num < 0;
    if (neg) num = -num;
    BigInt ip = num / den;
    BigInt rem = num % den;
    std::string s = (neg ? "-" : "") + ip.str() + ".";
    for (int i = 0; i < digits; ++i) {
        rem *= 10;
        BigInt d = rem / den;
        s += static_cast<char>('0' + static_cast<int>(d));
        rem %= den;
    }
    return s;
}

inline int decimal_digits_for_bits(int bits) {
    return static_cast<int>(bits * 0.30103) + 2;
}

inline Json enclosure_to_json(const RatInterval& iv, int bits) {
    int digits = decimal_digits_for_bits(bits);
    return Json{{"lo", decimal_string(iv.lo, digits)},
                {"hi", decimal_string(iv.hi, digits)},
                {"bits", bits}};
}

// Quotient sequences as arrays of decimal strings.
inline Json quotients_to_json(const PartialQuotients& pq) {
    Json arr = Json::array();
    for (const auto& a : pq.a) arr.push_back(a.str());
    return arr;
}

inline PartialQuotients quotients_from_json(const Json& arr) {
    PartialQuotients pq;
    for (const auto& v : arr) pq.a.push_back(BigInt(v.get<std::string>()));
    return pq;
}

inline Json cf_to_json(const ContinuedFraction& cf) {
    Json j;
    j["quotients"] = quotients_to_json(cf.quotients());
    Json p = Json::array(), q = Json::array();
    for (int k = 1; k <= cf.depth() + 1; ++k) {
        p.push_back(cf.p(k).str());
        q.push_back(cf.q(k).str());
    }
    j["p"] = p;
    j["q"] = q;
    j["alpha"] = enclosure_to_json(cf.alpha(), cf.precision_bits());
    Json thetas = Json::array();
    for (int k = 1; k <= cf.depth(); ++k)
        thetas.push_back(enclosure_to_json(cf.theta(k), cf.precision_bits()));
    j["theta"] = thetas;
    j["precision_bits"] = cf.precision_bits();
    j["depth"] = cf.depth();
    return j;
}

// Digit vectors as {"k": digit} maps.
inline Json digits_to_json(const OstrowskiDigits& d) {
    Json j = Json::object();
    for (const auto& [k, v] : d.digits) j[std::to_string(k)] = v.str();
    return j;
}

inline OstrowskiDigits digits_from_json(const Json& j,
                                        OstrowskiDigits::Kind kind = OstrowskiDigits::Kind::Integer) {
    OstrowskiDigits d;
    d.kind = kind;
    for (auto it = j.begin(); it != j.end(); ++it)
        d.set_digit(std::stoi(it.key()), BigInt(it.value().get<std::string>()));
    return d;
}

// Fourier models as a list of {m, re, im}; conjugate entries are emitted
// explicitly, plus the constant term at m = 0.  A "k" field carries the
// scale tag of generated coefficients.
inline Json fourier_to_json(const FourierModel& h) {
    Json arr = Json::array();
    arr.push_back(Json{{"m", "0"}, {"re", h.const_term()}, {"im", 0.0}});
    for (const auto& e : h.coeffs()) {
        arr.push_back(Json{{"m", e.freq.str()},
                           {"re", e.c.real()},
                           {"im", e.c.imag()},
                           {"k", e.scale}});
        arr.push_back(Json{{"m", ("-" + e.freq.str())},
                           {"re", e.c.real()},
                           {"im", -e.c.imag()},
                           {"k", e.scale}});
    }
    Json j;
    j["tau"] = h.tau();
    j["coeffs"] = arr;
    return j;
}

inline FourierModel fourier_from_json(const Json& j) {
    FourierModel h(0.0, j.at("tau").get<double>());
    for (const auto& e : j.at("coeffs")) {
        BigInt m(e.at("m").get<std::string>());
        double re = e.at("re").get<double>(), im = e.at("im").get<double>();
        int scale = e.contains("k") ? e.at("k").get<int>() : 0;
        if (m == 0) {
            h.set_const_term(re);
            continue;
        }
        if (m < 0) continue; // conjugate entries are implied; validated below
        h.add_coeff(m, {re, im}, scale);
    }
    // validate conjugate symmetry of the explicit entries
    for (const auto& e : j.at("coeffs")) {
        BigInt m(e.at("m").get<std::string>());
        if (m >= 0) continue;
        std::complex<double> expect = h.coeff_at(m);
        if (std::abs(expect - std::complex<double>(e.at("re").get<double>(),
                                                   e.at("im").get<double>())) > 1e-12)
            throw ValidationError("fourier_from_json: coefficients are not conjugate-symmetric");
    }
    return h;
}

// Fixed-format floating point for byte-identical reports.
inline std::string fmt_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace skewmu

#endif
