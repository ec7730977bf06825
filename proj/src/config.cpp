#include "moblab/config.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "moblab/errors.hpp"
#include "moblab/phase.hpp"

namespace moblab {

long GlobalConfig::bits_for(int k, double n_max) const {
    if (prec_bits > 0) return std::max<long>(prec_bits, 64);
    return std::max<long>(256, PhaseReal::recommended_bits(k, n_max)) + 64;
}

GlobalConfig load_config(const std::string& path) {
    GlobalConfig cfg;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ArgumentError("cannot open config file: " + path);
        nlohmann::json j;
        in >> j;
        if (j.contains("prec_bits")) cfg.prec_bits = j.at("prec_bits").get<long>();
        if (j.contains("budget_terms")) cfg.budget_terms = j.at("budget_terms").get<i64>();
        if (j.contains("c1")) cfg.c1 = j.at("c1").get<double>();
        if (j.contains("eps")) cfg.eps = j.at("eps").get<double>();
        if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    }
    if (const char* t = std::getenv("MOBLAB_THREADS")) cfg.threads = std::atoi(t);
    if (const char* b = std::getenv("MOBLAB_PREC_BITS")) cfg.prec_bits = std::atol(b);
    if (cfg.budget_terms < 1) throw ArgumentError("budget_terms must be >= 1");
    if (cfg.prec_bits != 0 && cfg.prec_bits < 64) throw ArgumentError("prec_bits must be >= 64");
    return cfg;
}

}  // namespace moblab
