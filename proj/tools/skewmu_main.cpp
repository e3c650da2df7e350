// skewmu: continued fractions, Ostrowski numeration, skew-product Birkhoff
// sums and Moebius correlation experiments from the command line.
//
// Exit codes: 0 success, 2 validation error, 3 precision failure.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skewmu/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"skew-product / Moebius correlation laboratory"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string configPath, outDir = ".";
    std::string seedOverride, precisionOverride;
    app.add_option("--config", configPath, "flat key=value config file");
    app.add_option("--seed", seedOverride, "override config seed (u64)");
    app.add_option("--out", outDir, "output directory (default: .)");
    app.add_option("--precision", precisionOverride, "override precision bits");

    const std::vector<std::string> subs = {
        "cf-info",      "ostrowski-check", "indep-tv",  "approx-ladder",
        "trunc-decay",  "phi-product",     "residue-arcs", "mu-sieve",
        "davenport",    "mrt-corr",        "disjointness", "window-decomp"};
    std::vector<std::pair<CLI::App*, std::string>> subApps;
    std::vector<std::vector<std::string>> overrides(subs.size());
    for (size_t i = 0; i < subs.size(); ++i) {
        CLI::App* s = app.add_subcommand(subs[i]);
        s->add_option("--set", overrides[i], "extra key=value overrides")->take_all();
        subApps.push_back({s, subs[i]});
    }

    CLI11_PARSE(app, argc, argv);

    try {
        skewmu::ExperimentConfig cfg = configPath.empty()
                                           ? skewmu::ExperimentConfig()
                                           : skewmu::ExperimentConfig::from_file(configPath);
        if (!seedOverride.empty()) cfg.set("seed", seedOverride);
        if (!precisionOverride.empty()) cfg.set("precision", precisionOverride);

        for (size_t i = 0; i < subApps.size(); ++i) {
            if (!subApps[i].first->parsed()) continue;
            for (const auto& kv : overrides[i]) {
                auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw skewmu::ValidationError("--set expects key=value, got: " + kv);
                cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
            }
            std::string summary = skewmu::run_subcommand(subApps[i].second, cfg, outDir);
            std::printf("%s\n", summary.c_str());
            return 0;
        }
        throw skewmu::ValidationError("no subcommand given");
    } catch (const skewmu::PrecisionError& e) {
        std::fprintf(stderr, "precision failure: %s\n", e.what());
        return 3;
    } catch (const skewmu::ValidationError& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
