#include "rctsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace rctsim {

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::perfect_csir_genie: return "perfect_csir_genie";
        case Scheme::three_way: return "three_way";
        case Scheme::orthogonal_baseline: return "orthogonal_baseline";
        case Scheme::perfect_csit: return "perfect_csit";
    }
    return "unknown";
}

std::string scheme_output_label(Scheme s) {
    if (s == Scheme::three_way) return "three_way_surrogate_bound";
    return scheme_name(s);
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "perfect_csir_genie") return Scheme::perfect_csir_genie;
    if (name == "three_way") return Scheme::three_way;
    if (name == "orthogonal_baseline") return Scheme::orthogonal_baseline;
    if (name == "perfect_csit") return Scheme::perfect_csit;
    throw ConfigError("unknown scheme '" + name + "'");
}

double SystemConfig::rate_nats(double pbar) const {
    return rate_offset_bits * M_LN2 + g_m * std::log(pbar);
}

int SystemConfig::training_symbols(Scheme scheme) const {
    switch (scheme) {
        case Scheme::perfect_csir_genie: return L_B_tau;
        case Scheme::three_way: return L_A_tau1 + L_B_tau + L_A_tau2;
        case Scheme::orthogonal_baseline: return r * L_B_tau;
        case Scheme::perfect_csit: return L_B_tau;  // Eq.-style prelog of the genie comparator
    }
    return 0;
}

double SystemConfig::alpha(Scheme scheme) const {
    return static_cast<double>(L_c - training_symbols(scheme)) / L_c;
}

void SystemConfig::validate(Scheme scheme) const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (r < 1) fail("r must be >= 1 (got " + std::to_string(r) + ")");
    if (L_c < 2) fail("L_c must be >= 2 (got " + std::to_string(L_c) + ")");
    if (L_B_tau < 1) fail("L_B_tau must be >= 1");
    if (scheme == Scheme::three_way) {
        if (L_A_tau1 < 1) fail("L_A_tau1 must be >= 1 for three_way");
        if (L_A_tau2 < 1) fail("L_A_tau2 must be >= 1 for three_way");
    }
    if (training_symbols(scheme) >= L_c)
        fail("training occupies " + std::to_string(training_symbols(scheme)) +
             " symbols but L_c = " + std::to_string(L_c) + " for scheme " +
             scheme_name(scheme));

    if (scheme != Scheme::perfect_csit) {
        if (!(s >= 1.0) || !(s < r))
            fail("inversion exponent s must satisfy 1 <= s < r; got s = " +
                 std::to_string(s) + ", r = " + std::to_string(r));
        const double l_max = (scheme == Scheme::three_way) ? static_cast<double>(r)
                                                           : static_cast<double>(r) + 1.0;
        if (!(l >= 0.0) || !(l <= l_max))
            fail("below-threshold exponent l must be in [0, " + std::to_string(l_max) +
                 "] for scheme " + scheme_name(scheme) + "; got " + std::to_string(l));
    }

    const double a = alpha(scheme);
    if (!(g_m >= 0.0) || !(g_m < a))
        fail("multiplexing gain g_m must satisfy 0 <= g_m < alpha = " +
             std::to_string(a) + " for scheme " + scheme_name(scheme) + "; got " +
             std::to_string(g_m));
}

void SystemConfig::validate_all() const {
    if (schemes.empty()) throw ConfigError("no schemes selected");
    for (Scheme sc : schemes) validate(sc);
    if (!pbar_grid.empty() &&
        !std::is_sorted(pbar_grid.begin(), pbar_grid.end()))
        throw ConfigError("pbar grid must be increasing");
    for (double p : pbar_grid)
        if (!(p > 0.0)) throw ConfigError("pbar grid values must be positive");
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string SystemConfig::canonical_string() const {
    std::ostringstream os;
    os << "r=" << r << ";L_c=" << L_c << ";L_B_tau=" << L_B_tau
       << ";L_A_tau1=" << L_A_tau1 << ";L_A_tau2=" << L_A_tau2
       << ";s=" << fmt_double(s) << ";l=" << fmt_double(l)
       << ";g_m=" << fmt_double(g_m)
       << ";rate_offset_bits=" << fmt_double(rate_offset_bits) << ";schemes=";
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        if (i) os << ",";
        os << scheme_name(schemes[i]);
    }
    os << ";pbar_grid=";
    for (std::size_t i = 0; i < pbar_grid.size(); ++i) {
        if (i) os << ",";
        os << fmt_double(pbar_grid[i]);
    }
    os << ";g_grid=";
    for (std::size_t i = 0; i < g_grid.size(); ++i) {
        if (i) os << ",";
        os << fmt_double(g_grid[i]);
    }
    os << ";seed=" << seed << ";max_trials=" << max_trials
       << ";target_rel_ci=" << fmt_double(target_rel_ci);
    return os.str();
}

std::uint64_t SystemConfig::config_hash() const {
    // FNV-1a 64.
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canonical_string()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double start, step, stop;
        char c1, c2;
        std::istringstream is(text);
        if (!(is >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':')
            throw ConfigError("bad grid spec '" + text + "' (want start:step:stop)");
        if (!(step > 0.0)) throw ConfigError("grid step must be positive");
        for (int k = 0;; ++k) {
            const double v = start + k * step;
            if (v > stop + step * 1e-9) break;
            out.push_back(v);
        }
        return out;
    }
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

namespace {

struct IniData {
    std::map<std::string, std::string> values;  // "section.key" -> value
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

IniData parse_ini(std::istream& in, const std::string& origin) {
    IniData data;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        data.values[section + "." + key] = value;
    }
    return data;
}

}  // namespace

SystemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    IniData ini = parse_ini(in, path);

    SystemConfig cfg;
    auto take = [&](const std::string& key) -> const std::string* {
        auto it = ini.values.find(key);
        if (it == ini.values.end()) return nullptr;
        return &it->second;
    };
    auto get_int = [&](const std::string& key, int& dst) {
        if (const auto* v = take(key)) dst = std::stoi(*v);
    };
    auto get_u64 = [&](const std::string& key, std::uint64_t& dst) {
        if (const auto* v = take(key)) dst = std::stoull(*v);
    };
    auto get_double = [&](const std::string& key, double& dst) {
        if (const auto* v = take(key)) dst = std::stod(*v);
    };

    try {
        get_int("system.r", cfg.r);
        get_int("system.L_c", cfg.L_c);
        get_int("system.L_B_tau", cfg.L_B_tau);
        get_int("system.L_A_tau1", cfg.L_A_tau1);
        get_int("system.L_A_tau2", cfg.L_A_tau2);
        get_double("policy.s", cfg.s);
        get_double("policy.l", cfg.l);
        get_double("rate.g_m", cfg.g_m);
        get_double("rate.rate_offset_bits", cfg.rate_offset_bits);
        if (const auto* v = take("run.schemes")) {
            cfg.schemes.clear();
            std::istringstream is(*v);
            std::string item;
            while (std::getline(is, item, ','))
                if (!trim(item).empty()) cfg.schemes.push_back(scheme_from_name(trim(item)));
        }
        if (const auto* v = take("run.pbar_grid_db")) {
            cfg.pbar_grid.clear();
            for (double db : parse_grid(*v))
                cfg.pbar_grid.push_back(std::pow(10.0, db / 10.0));
        }
        if (const auto* v = take("run.pbar_grid")) {
            cfg.pbar_grid = parse_grid(*v);
        }
        if (const auto* v = take("run.g_grid")) cfg.g_grid = parse_grid(*v);
        get_u64("run.seed", cfg.seed);
        get_u64("run.max_trials", cfg.max_trials);
        get_double("run.target_rel_ci", cfg.target_rel_ci);
        get_int("run.workers", cfg.workers);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error in ") + path + ": " + e.what());
    }
    return cfg;
}

}  // namespace rctsim
