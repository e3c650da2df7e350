#ifndef SKEWMU_EXPERIMENTS_HPP
#define SKEWMU_EXPERIMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "skewmu/dynamics.hpp"
#include "skewmu/moebius.hpp"
#include "skewmu/presets.hpp"
#include "skewmu/serialize.hpp"

namespace skewmu {

// Flat key = value configuration.  All numeric values stay as decimal strings
// until use, so nothing is rounded before it reaches exact arithmetic.
class ExperimentConfig {
  public:
    ExperimentConfig() { set_defaults(); }

    static ExperimentConfig from_file(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw ValidationError("config: cannot open " + path);
        ExperimentConfig c;
        std::string line;
        int lineno = 0;
        while (std::getline(f, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            auto eq = line.find('=');
            if (eq == std::string::npos) {
                if (line.find_first_not_of(" \t\r") != std::string::npos)
                    throw ValidationError("config: malformed line " + std::to_string(lineno));
                continue;
            }
            c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
        return c;
    }

    void set(const std::string& key, const std::string& value) {
        if (!kv_.count(key)) throw ValidationError("config: unknown key '" + key + "'");
        kv_[key] = value;
    }
    const std::string& get(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) throw ValidationError("config: unknown key '" + key + "'");
        return it->second;
    }

    long get_long(const std::string& key) const {
        try {
            return std::stol(get(key));
        } catch (const std::exception&) {
            throw ValidationError("config: key '" + key + "' is not an integer: " + get(key));
        }
    }
    std::uint64_t get_u64(const std::string& key) const {
        try {
            return std::stoull(get(key));
        } catch (const std::exception&) {
            throw ValidationError("config: key '" + key + "' is not an integer: " + get(key));
        }
    }
    double get_double(const std::string& key) const {
        try {
            return std::stod(get(key));
        } catch (const std::exception&) {
            throw ValidationError("config: key '" + key + "' is not numeric: " + get(key));
        }
    }
    std::vector<std::string> get_list(const std::string& key) const {
        std::vector<std::string> out;
        std::stringstream ss(get(key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) out.push_back(item);
        }
        return out;
    }

    // FNV-1a over the canonical sorted key=value list.
    std::uint64_t hash() const {
        std::uint64_t h = 14695981039346656037ull;
        for (const auto& [k, v] : kv_) {
            for (char c : k + "=" + v + "\n") {
                h ^= static_cast<unsigned char>(c);
                h *= 1099511628211ull;
            }
        }
        return h;
    }
    std::string hash_hex() const {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
        return buf;
    }

    // --- derived objects -------------------------------------------------

    ContinuedFraction make_cf() const {
        const std::string spec = get("alpha");
        int P = static_cast<int>(get_long("precision"));
        int K = static_cast<int>(get_long("maxK"));
        if (P < 64) throw ValidationError("config: precision must be >= 64");
        if (spec.rfind("quotients:", 0) == 0) {
            PartialQuotients pq;
            std::stringstream ss(spec.substr(10));
            std::string item;
            while (std::getline(ss, item, ','))
                if (!trim(item).empty()) pq.a.push_back(BigInt(trim(item)));
            return ContinuedFraction::from_quotients(pq, P);
        }
        if (spec.rfind("decimal:", 0) == 0)
            return ContinuedFraction::from_real(interval_from_decimal(spec.substr(8)), K, P);
        return preset_cf(spec, K, P);
    }

    Rational make_tau() const {
        Rational tau = Rational::from_decimal(get("tau"));
        if (tau.value() <= 2.0) throw ValidationError("config: tau must exceed 2");
        return tau;
    }

    SkewProduct make_skew(const ContinuedFraction& cf) const {
        Rational tau = make_tau();
        int P = static_cast<int>(get_long("precision"));
        const std::string hs = get("h");
        int harmonics = static_cast<int>(get_long("harmonics"));
        double hConst = get_double("hConst");
        std::uint64_t seed = get_u64("seed");
        ResonantSet M = resonant_set(cf, tau, cf.depth() - 1);
        if (hs == "zero") {
            return SkewProduct(cf, FourierModel(hConst, tau.value()), tau, P);
        } else if (hs == "synthetic") {
            return SkewProduct(cf, synth_h(M, tau, seed, get_double("amplitude"), harmonics, hConst),
                               tau, P);
        } else if (hs == "coboundary") {
            FourierModel g = synth_section_g(M, tau, seed, get_double("gAmplitude"), harmonics);
            return make_coboundary(g, hConst, cf, tau, P);
        }
        throw ValidationError("config: h must be zero|synthetic|coboundary");
    }

    CirclePoint make_x(const ContinuedFraction& cf) const {
        return CirclePoint::from_rat(rat_from_decimal(get("x")), cf.precision_bits());
    }

  private:
    static std::string trim(const std::string& s) {
        auto b = s.find_first_not_of(" \t\r\n");
        auto e = s.find_last_not_of(" \t\r\n");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    }

    void set_defaults() {
        kv_ = {
            {"alpha", "golden"},     {"maxK", "30"},         {"precision", "256"},
            {"tau", "2.5"},          {"seed", "42"},         {"N", "100000"},
            {"R", "100,1000,10000"}, {"kMinus", "6"},        {"kPlus", "14"},
            {"kMinusList", "2,6,10"},{"indices", "6,7,8"},   {"zeta1", "1"},
            {"zeta2", "1"},          {"h", "synthetic"},     {"amplitude", "0.05"},
            {"harmonics", "3"},      {"hConst", "0.0"},      {"gAmplitude", "0.02"},
            {"x", "0.271828"},       {"y", "0.37"},          {"betas", "0.6180339887498949,0.3333343333333333,0.123456"},
            {"samples", "200"},      {"nLimit", "10000"},    {"delta", "0.5"},
            {"muFile", "mu.bin"},
        };
    }

    std::map<std::string, std::string> kv_;
};

namespace detail {

inline BigInt rand_below(std::mt19937_64& rng, const BigInt& bound) {
    if (bound <= 0) throw ValidationError("rand_below: bound must be positive");
    int bits = bit_length(bound);
    while (true) {
        BigInt v = 0;
        for (int got = 0; got < bits; got += 64) v = (v << 64) | rng();
        v &= (BigInt(1) << bits) - 1;
        if (v < bound) return v;
    }
}

// Random valid window digits: each digit uniform in [0, a_k], then the carry
// rule n_k = 0 when n_{k+1} = a_{k+1} is enforced downward.
inline OstrowskiDigits random_window_digits(std::mt19937_64& rng, const ContinuedFraction& cf,
                                            int kMinus, int kPlus) {
    OstrowskiDigits d;
    d.kind = OstrowskiDigits::Kind::Integer;
    for (int k = kPlus; k >= kMinus; --k) {
        BigInt cap = k == 1 ? BigInt(cf.a(1) - 1) : cf.a(k);
        BigInt v = rand_below(rng, cap + 1);
        if (k < kPlus && d.digit(k + 1) == cf.a(k + 1)) v = 0;
        d.set_digit(k, v);
    }
    return d;
}

inline OstrowskiDigits random_real_digits(std::mt19937_64& rng, const ContinuedFraction& cf,
                                          int depth) {
    OstrowskiDigits d = random_window_digits(rng, cf, 1, depth);
    d.kind = OstrowskiDigits::Kind::Real;
    d.truncationDepth = depth;
    return d;
}

struct CsvWriter {
    std::ofstream f;
    CsvWriter(const std::string& path, const std::string& header, const std::string& configHash,
              std::uint64_t seed) {
        f.open(path);
        if (!f) throw ValidationError("cannot open output file " + path);
        f << "# config_hash=" << configHash << " seed=" << seed << "\n";
        f << header << "\n";
    }
    template <class... Ts> void row(const Ts&... vals) {
        bool first = true;
        ((f << (first ? "" : ","), first = false, f << vals), ...);
        f << "\n";
    }
};

} // namespace detail

// ---------------------------------------------------------------------------
// Subcommand runners.  Each writes its report files under outDir and returns
// a one-line summary for the CLI.

inline std::string run_cf_info(const ExperimentConfig& cfg, const std::string& outDir) {
    auto cf = cfg.make_cf();
    Json j = cf_to_json(cf);
    Rational tau = cfg.make_tau();
    ResonantSet M = resonant_set(cf, tau, cf.depth() - 1);
    Json res = Json::array();
    for (const auto& e : M.entries)
        res.push_back(Json{{"k", e.k}, {"q_k", e.qk.str()}, {"a_k", e.ak.str()}});
    j["resonant"] = res;
    j["tau"] = tau.value();
    j["config_hash"] = cfg.hash_hex();
    std::ofstream f(outDir + "/cf_info.json");
    f << j.dump(2) << "\n";
    return "cf-info: depth " + std::to_string(cf.depth()) + ", " +
           std::to_string(M.entries.size()) + " resonant scales -> cf_info.json";
}

inline std::string run_ostrowski_check(const ExperimentConfig& cfg, const std::string& outDir) {
    auto cf = cfg.make_cf();
    std::uint64_t seed = cfg.get_u64("seed");
    std::mt19937_64 rng(seed);
    std::uint64_t nLimit = cfg.get_u64("nLimit");
    std::uint64_t roundtrips = 0;
    for (std::uint64_t i = 0; i < nLimit; ++i) {
        BigInt n = detail::rand_below(rng, cf.q(cf.depth() + 1));
        auto d = encode_int(n, cf);
        if (decode_int(d, cf) != n || !is_valid(d, cf))
            throw Error("ostrowski-check: roundtrip failed at n=" + n.str());
        ++roundtrips;
    }
    int depth = std::min(max_reliable_encode_depth(cf), 30);
    // sample numerations, serialized as {k: digit} maps
    Json samples = Json::array();
    for (std::uint64_t n : {std::uint64_t(0), std::uint64_t(4), nLimit / 2}) {
        auto d = encode_int(BigInt(n), cf);
        samples.push_back(Json{{"n", n}, {"digits", digits_to_json(d)}});
    }
    std::uint64_t recon = 0;
    double worstSlack = 0.0;
    for (int i = 0; i < 200; ++i) {
        BigInt v = detail::rand_below(rng, BigInt(1) << cf.precision_bits());
        auto x = CirclePoint::from_raw(v, cf.precision_bits(), BigInt(1));
        OstrowskiDigits d;
        try {
            d = encode_real(x, cf, depth);
        } catch (const BoundaryAmbiguousError&) {
            continue;
        }
        CirclePoint rec = reconstruct_point(d, cf, alpha_point(cf));
        double diff = std::fabs(rec.frac() - x.frac());
        diff = std::min(diff, 1.0 - diff);
        double slack = diff - (d.tailErrBound + rec.err_abs() + x.err_abs());
        worstSlack = std::max(worstSlack, slack);
        ++recon;
    }
    Json j{{"config_hash", cfg.hash_hex()},
           {"roundtrips", roundtrips},
           {"samples", samples},
           {"real_reconstructions", recon},
           {"worst_reconstruction_slack", worstSlack},
           {"ok", worstSlack <= 0.0}};
    std::ofstream f(outDir + "/ostrowski_check.json");
    f << j.dump(2) << "\n";
    return "ostrowski-check: " + std::to_string(roundtrips) + " roundtrips, " +
           std::to_string(recon) + " reconstructions -> ostrowski_check.json";
}

inline std::string run_indep_tv(const ExperimentConfig& cfg, const std::string& outDir) {
    auto cf = cfg.make_cf();
    DigitWindow w(static_cast<int>(cfg.get_long("kMinus")), static_cast<int>(cfg.get_long("kPlus")));
    std::vector<int> idx;
    for (const auto& s : cfg.get_list("indices")) idx.push_back(std::stoi(s));
    double tv = digit_joint_tv(cf, w, idx);
    double bound = 0.0;
    for (int k : idx) bound += 4.0 / to_double(cf.a(k));
    detail::CsvWriter csv(outDir + "/indep_tv.csv", "k_minus,k_plus,indices,tv,bound",
                          cfg.hash_hex(), cfg.get_u64("seed"));
    std::string idxs;
    for (size_t i = 0; i < idx.size(); ++i) idxs += (i ? ";" : "") + std::to_string(idx[i]);
    csv.row(w.kMinus, w.kPlus, idxs, fmt_g17(tv), fmt_g17(bound));
    return "indep-tv: tv=" + fmt_g17(tv) + " bound=" + fmt_g17(bound) + " -> indep_tv.csv";
}

inline std::string run_approx_ladder(const ExperimentConfig& cfg, const std::string& outDir) {
    auto cf = cfg.make_cf();
    auto T = cfg.make_skew(cf);
    std::uint64_t seed = cfg.get_u64("seed");
    std::mt19937_64 rng(seed);
    long samples = cfg.get_long("samples");
    int kPlus = static_cast<int>(cfg.get_long("kPlus"));
    detail::CsvWriter csv(outDir + "/approx_ladder.csv",
                          "k_minus,k_plus,n,x,exact,approx1,approx2,err1,err2", cfg.hash_hex(),
                          seed);
    std::string summary = "approx-ladder:";
    for (const auto& kms : cfg.get_list("kMinusList")) {
        int kMinus = std::stoi(kms);
        if (kMinus < 2 || kMinus > kPlus) throw ValidationError("approx-ladder: bad kMinus list");
        std::vector<double> errs2;
        for (long s = 0; s < samples; ++s) {
            auto nd = detail::random_window_digits(rng, cf, kMinus, kPlus);
            auto xd = detail::random_real_digits(rng, cf, cf.depth() - 1);
            CirclePoint x = reconstruct_point(xd, cf, T.alpha);
            BigInt n = decode_int(nd, cf);
            double exact = birkhoff_closed(T, x, n).value;
            double h1 = approx_H1(T, nd, x);
            double h2 = approx_H2(T, nd, xd);
            csv.row(kMinus, kPlus, n.str(), fmt_g17(x.frac()), fmt_g17(exact), fmt_g17(h1),
                    fmt_g17(h2), fmt_g17(std::fabs(exact - h1)), fmt_g17(std::fabs(exact - h2)));
            errs2.push_back(std::fabs(exact - h2));
        }
        std::sort(errs2.begin(), errs2.end());
        summary += " med|H-H2|(k-=" + kms + ")=" + fmt_g17(errs2[errs2.size() / 2]);
    }
    return summary + " -> approx_ladder.csv";
}

inline std::string run_trunc_decay(const ExperimentConfig& cfg, const std::string& outDir) {
    auto cf = cfg.make_cf();
    auto T = cfg.make_skew(cf);
    std::uint64_t seed = cfg.get_u64("seed");
    std::mt19937_64 rng(seed);
    long samples = cfg.get_long("samples");
    int kLo = static_cast<int>(cfg.get_long("kMinus"));
    int kHi = static_cast<int>(cfg.get_long("kPlus"));
    detail::CsvWriter csv(outDir + "/trunc_decay.csv", "k_plus,log2_q_next,max_err",
                          cfg.hash_hex(), seed);
    std::vector<double> xs, ys;
    for (int kPlus = kLo; kPlus <= kHi; ++kPlus) {
        double maxErr = 0.0;
        for (long s = 0; s < samples; ++s) {
            OstrowskiDigits nd;
            if (s == 0) { // deterministic near-maximal n
                nd.kind = OstrowskiDigits::Kind::Integer;
                BigInt next = 0;
                for (int k = kPlus; k >= 2; --k) {
                    BigInt v = (k < kPlus && next == cf.a(k + 1)) ? BigInt(0) : cf.a(k);
                    nd.set_digit(k, v);
                    next = v;
                }
            } else {
                nd = detail::random_window_digits(rng, cf, 2, kPlus);
            }
            BigInt n = decode_int(nd, cf);
            BigInt v = detail::rand_below(rng, BigInt(1) << cf.precision_bits());
            auto x = CirclePoint::from_raw(v, cf.precision_bits(), BigInt(1));
            double full = birkhoff_closed(T, x, n).value;
            double trunc = truncated_H(T, x, n, kPlus).value;
            maxErr = std::max(maxErr, std::fabs(full - trunc));
        }
        double lx = log2_big(cf.q(kPlus + 1));
        csv.row(kPlus, fmt_g17(lx), fmt_g17(maxErr));
        if (maxErr > 0) {
            xs.push_back(lx);
            ys.push_back(std::log2(maxErr));
        }
    }
    // least-squares slope of log2 maxErr against log2 q_{k_+ +1}
    double slope = 0.0;
    if (xs.size() >= 2) {
        double mx = 0, my = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= static_cast<double>(xs.size());
        my /= static_cast<double>(xs.size());
        double num = 0, den = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            num += (xs[i] - mx) * (ys[i] - my);
            den += (xs[i] - mx) * (xs[i] - mx);
        }
        slope = num / den;
    }
    Json j{{"config_hash", cfg.hash_hex()}, {"slope", slope},
           {"expected", -(T.tau.value() - 1.0)}};
    std::ofstream f(outDir + "/trunc_decay.json");
    f << j.dump(2) << "\n";
    return "trunc-decay: slope=" + fmt_g17(slope) + " (expected ~" +
           fmt_g17(-(T.tau.value() - 1.0)) + ") -> trunc_decay.csv";
}

inline std::string run_phi_product(const ExperimentConfig& cfg, const std::string& outDir) {
    auto cf = cfg.make_cf();
    auto T = cfg.make_skew(cf);
    int kMinus = static_cast<int>(cfg.get_long("kMinus"));
    int kPlus = static_cast<int>(cfg.get_long("kPlus"));
    {
        std::ofstream f(outDir + "/h_model.json");
        f << fourier_to_json(T.h).dump(2) << "\n";
    }
    auto rows = product_decay(T, kMinus, kPlus);
    detail::CsvWriter csv(outDir + "/phi_product.csv", "k,factor,partial_product", cfg.hash_hex(),
                          cfg.get_u64("seed"));
    for (const auto& r : rows) csv.row(r.k, fmt_g17(r.factor), fmt_g17(r.partialProduct));

    // Empirical ensemble constant z and variance of X = e(sum phi_k(n_k))
    // over B_{k-}^{k+} (sampled).
    std::mt19937_64 rng(cfg.get_u64("seed"));
    auto ks = resonant_indices(cf, DigitWindow(kMinus, kPlus), T.tau);
    std::complex<double> zsum = 0.0;
    const int trials = 4096;
    std::vector<std::complex<double>> xs;
    for (int t = 0; t < trials; ++t) {
        double ang = 0.0;
        for (int k : ks) ang += phi_reduced(T, k, detail::rand_below(rng, cf.a(k)));
        xs.push_back(unit_exp(ang - std::floor(ang)));
        zsum += xs.back();
    }
    std::complex<double> z = zsum / static_cast<double>(trials);
    double var = 0.0;
    for (const auto& v : xs) var += std::norm(v - z);
    var /= static_cast<double>(trials);
    double dev = 0.0;
    for (const auto& v : xs)
        if (std::abs(v - z) >= 0.25) dev += 1.0;
    dev /= static_cast<double>(trials);
    Json j{{"config_hash", cfg.hash_hex()},
           {"z_re", z.real()},
           {"z_im", z.imag()},
           {"variance", var},
           {"prob_dev_ge_quarter", dev},
           {"final_partial_product", rows.empty() ? 1.0 : rows.back().partialProduct}};
    std::ofstream f(outDir + "/phi_product.json");
    f << j.dump(2) << "\n";
    return "phi-product: " + std::to_string(rows.size()) + " resonant scales, final partial=" +
           fmt_g17(rows.empty() ? 1.0 : rows.back().partialProduct) + " -> phi_product.csv";
}

inline std::string run_residue_arcs(const ExperimentConfig& cfg, const std::string& outDir) {
    auto cf = cfg.make_cf();
    int kMinus = static_cast<int>(cfg.get_long("kMinus"));
    auto arcs = residue_arcs(cf, kMinus, cf.precision_bits());
    auto alpha = alpha_point(cf);
    std::uint64_t nLimit = cfg.get_u64("nLimit");
    std::uint64_t match = 0, mismatch = 0, ambiguous = 0;
    for (std::uint64_t n = 0; n < nLimit; ++n) {
        auto loc = locate(arcs, circle_mul_int(alpha, BigInt(n)), cf);
        if (loc.ambiguous) {
            ++ambiguous;
            continue;
        }
        if (loc.r == residue_of(BigInt(n), cf, kMinus)) ++match;
        else ++mismatch;
    }
    Json arr = Json::array();
    int digits = decimal_digits_for_bits(64);
    for (const auto& a : arcs.arcs)
        arr.push_back(Json{{"r", a.r.str()},
                           {"coef_lo", a.coefLo.str()},
                           {"coef_hi", a.coefHi.str()},
                           {"rep_lo", decimal_string(a.repLo, digits)},
                           {"rep_hi", decimal_string(a.repHi, digits)},
                           {"closed_lo", a.closedLo},
                           {"closed_hi", a.closedHi}});
    Json j{{"config_hash", cfg.hash_hex()}, {"k_minus", kMinus},   {"arcs", arr},
           {"checked", nLimit},             {"match", match},      {"mismatch", mismatch},
           {"ambiguous", ambiguous}};
    std::ofstream f(outDir + "/residue_arcs.json");
    f << j.dump(2) << "\n";
    return "residue-arcs: " + std::to_string(arcs.arcs.size()) + " arcs, " +
           std::to_string(match) + "/" + std::to_string(nLimit) + " matched, " +
           std::to_string(mismatch) + " mismatched -> residue_arcs.json";
}

inline std::string run_mu_sieve(const ExperimentConfig& cfg, const std::string& outDir) {
    std::uint64_t N = cfg.get_u64("N");
    auto mu = MoebiusTable::sieve(N);
    std::string path = outDir + "/" + cfg.get("muFile");
    mu.save(path);
    Json j{{"config_hash", cfg.hash_hex()},
           {"N", N},
           {"mertens", mu.mertens(N)},
           {"file", path}};
    std::ofstream f(outDir + "/mu_sieve.json");
    f << j.dump(2) << "\n";
    return "mu-sieve: N=" + std::to_string(N) + " mertens=" + std::to_string(mu.mertens(N)) +
           " -> " + path;
}

namespace detail {

struct BetaSpec {
    std::string numField, denField;
    CirclePoint point;
};

inline BetaSpec parse_beta(const std::string& s, int bits) {
    BetaSpec b;
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt num(s.substr(0, slash)), den(s.substr(slash + 1));
        if (den <= 0) throw ValidationError("beta: bad rational " + s);
        b.numField = num.str();
        b.denField = den.str();
        b.point = CirclePoint::from_rat(BigRat(num, den), bits);
    } else {
        b.numField = s;
        b.denField = "float";
        b.point = CirclePoint::from_rat(rat_from_decimal(s), bits);
    }
    return b;
}

} // namespace detail

inline std::string run_davenport(const ExperimentConfig& cfg, const std::string& outDir) {
    std::uint64_t N = cfg.get_u64("N");
    auto mu = MoebiusTable::sieve(N);
    int bits = static_cast<int>(cfg.get_long("precision"));
    detail::CsvWriter csv(outDir + "/davenport.csv", "N,R,beta_num,beta_den_or_float,value",
                          cfg.hash_hex(), cfg.get_u64("seed"));
    std::string summary = "davenport:";
    for (const auto& bs : cfg.get_list("betas")) {
        auto beta = detail::parse_beta(bs, bits);
        double last = 0.0;
        std::uint64_t lastN = 0;
        for (std::uint64_t n = std::min<std::uint64_t>(10000, N);; n *= 10) {
            if (n > N) n = N;
            if (n == lastN) break;
            last = davenport_avg(mu, n, beta.point);
            lastN = n;
            csv.row(n, 0, beta.numField, beta.denField, fmt_g17(last));
            if (n == N) break;
        }
        summary += " |S(" + bs.substr(0, 8) + ")|=" + fmt_g17(last);
    }
    return summary + " -> davenport.csv";
}

inline std::string run_mrt_corr(const ExperimentConfig& cfg, const std::string& outDir) {
    std::uint64_t N = cfg.get_u64("N");
    auto mu = MoebiusTable::sieve(N);
    int bits = static_cast<int>(cfg.get_long("precision"));
    detail::CsvWriter csv(outDir + "/mrt_corr.csv", "N,R,beta_num,beta_den_or_float,value",
                          cfg.hash_hex(), cfg.get_u64("seed"));
    std::string summary = "mrt-corr:";
    bool first = true;
    for (const auto& bs : cfg.get_list("betas")) {
        auto beta = detail::parse_beta(bs, bits);
        for (const auto& rs : cfg.get_list("R")) {
            std::uint64_t R = std::stoull(rs);
            double v = short_interval_corr(&mu, N, R, beta.point);
            csv.row(N, R, beta.numField, beta.denField, fmt_g17(v));
            if (first) summary += " (R=" + rs + ")=" + fmt_g17(v);
        }
        first = false;
    }
    return summary + " -> mrt_corr.csv";
}

inline std::string run_disjointness(const ExperimentConfig& cfg, const std::string& outDir) {
    auto cf = cfg.make_cf();
    auto T = cfg.make_skew(cf);
    std::uint64_t N = cfg.get_u64("N");
    auto mu = MoebiusTable::sieve(N);
    TestFunction f(cfg.get_long("zeta1"), cfg.get_long("zeta2"));
    CirclePoint x = cfg.make_x(cf);
    double y = cfg.get_double("y");
    std::vector<std::uint64_t> ns;
    for (std::uint64_t n = 10000; n < N; n *= 10) ns.push_back(n);
    if (ns.empty() || ns.back() != N) ns.push_back(N);
    auto prof = disjointness_profile(T, x, y, f, &mu, ns);
    auto ones = disjointness_profile(T, x, y, TestFunction(0, f.zeta2 ? f.zeta2 : 1), nullptr, ns);
    detail::CsvWriter csv(outDir + "/disjointness.csv", "N,zeta1,zeta2,value,all_ones_control",
                          cfg.hash_hex(), cfg.get_u64("seed"));
    for (size_t i = 0; i < ns.size(); ++i)
        csv.row(ns[i], f.zeta1, f.zeta2, fmt_g17(prof[i]), fmt_g17(ones[i]));
    return "disjointness: value(N=" + std::to_string(N) + ")=" + fmt_g17(prof.back()) +
           " control=" + fmt_g17(ones.back()) + " -> disjointness.csv";
}

inline std::string run_window_decomp(const ExperimentConfig& cfg, const std::string& outDir) {
    auto cf = cfg.make_cf();
    auto T = cfg.make_skew(cf);
    std::uint64_t N = cfg.get_u64("N");
    int kMinus = static_cast<int>(cfg.get_long("kMinus"));
    int kPlus = static_cast<int>(cfg.get_long("kPlus"));
    BigInt nmax = cf.q(kPlus + 1);
    auto mu = MoebiusTable::sieve(N + static_cast<std::uint64_t>(nmax));
    TestFunction f(cfg.get_long("zeta1"), cfg.get_long("zeta2"));
    CirclePoint x = cfg.make_x(cf);
    double y = cfg.get_double("y");
    double lhs = disjointness_stat(T, x, y, f, mu, N);
    double wd = window_decomp_stat(T, x, y, f, mu, N, kMinus, kPlus);
    double slack = 2.0 * (to_double(nmax) / static_cast<double>(N) +
                          1.0 / to_double(cf.a(kMinus))) + 0.05;
    detail::CsvWriter csv(outDir + "/window_decomp.csv",
                          "N,k_minus,k_plus,zeta1,zeta2,lhs,window_stat,rhs_bound,holds",
                          cfg.hash_hex(), cfg.get_u64("seed"));
    csv.row(N, kMinus, kPlus, f.zeta1, f.zeta2, fmt_g17(lhs), fmt_g17(wd), fmt_g17(wd + slack),
            (lhs <= wd + slack ? 1 : 0));
    return "window-decomp: lhs=" + fmt_g17(lhs) + " bound=" + fmt_g17(wd + slack) + " holds=" +
           (lhs <= wd + slack ? std::string("yes") : std::string("no")) + " -> window_decomp.csv";
}

inline std::string run_subcommand(const std::string& sub, const ExperimentConfig& cfg,
                                  const std::string& outDir) {
    std::filesystem::create_directories(outDir);
    if (sub == "cf-info") return run_cf_info(cfg, outDir);
    if (sub == "ostrowski-check") return run_ostrowski_check(cfg, outDir);
    if (sub == "indep-tv") return run_indep_tv(cfg, outDir);
    if (sub == "approx-ladder") return run_approx_ladder(cfg, outDir);
    if (sub == "trunc-decay") return run_trunc_decay(cfg, outDir);
    if (sub == "phi-product") return run_phi_product(cfg, outDir);
    if (sub == "residue-arcs") return run_residue_arcs(cfg, outDir);
    if (sub == "mu-sieve") return run_mu_sieve(cfg, outDir);
    if (sub == "davenport") return run_davenport(cfg, outDir);
    if (sub == "mrt-corr") return run_mrt_corr(cfg, outDir);
    if (sub == "disjointness") return run_disjointness(cfg, outDir);
    if (sub == "window-decomp") return run_window_decomp(cfg, outDir);
    throw ValidationError("unknown subcommand: " + sub);
}

} // namespace skewmu

#endif
