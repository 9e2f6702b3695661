#include "rough/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "rough/errors.hpp"
#include "rough/records.hpp"

namespace rough {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double to_double(const std::string& v, const std::string& where) {
    const char* begin = v.c_str();
    char* end = nullptr;
    const double x = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ConfigError(where + ": cannot parse '" + v + "' as a number");
    return x;
}

long long to_ll(const std::string& v, const std::string& where) {
    const char* begin = v.c_str();
    char* end = nullptr;
    const long long x = std::strtoll(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw ConfigError(where + ": cannot parse '" + v + "' as an integer");
    return x;
}

int to_int(const std::string& v, const std::string& where) {
    return static_cast<int>(to_ll(v, where));
}

bool to_bool(const std::string& v, const std::string& where) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(where + ": cannot parse '" + v + "' as a boolean");
}

std::vector<std::string> split_commas(const std::string& v) {
    std::vector<std::string> parts;
    std::string cur;
    std::stringstream ss(v);
    while (std::getline(ss, cur, ',')) parts.push_back(trim(cur));
    return parts;
}

// "a..b" inclusive range or a comma list.
std::vector<int> to_int_list(const std::string& v, const std::string& where) {
    const auto dots = v.find("..");
    std::vector<int> out;
    if (dots != std::string::npos) {
        const int a = to_int(trim(v.substr(0, dots)), where);
        const int b = to_int(trim(v.substr(dots + 2)), where);
        if (a > b) throw ConfigError(where + ": empty range '" + v + "'");
        for (int i = a; i <= b; ++i) out.push_back(i);
        return out;
    }
    for (const std::string& part : split_commas(v)) out.push_back(to_int(part, where));
    if (out.empty()) throw ConfigError(where + ": empty list");
    return out;
}

std::vector<std::uint64_t> to_seed_list(const std::string& v, const std::string& where) {
    const auto dots = v.find("..");
    std::vector<std::uint64_t> out;
    if (dots != std::string::npos) {
        const long long a = to_ll(trim(v.substr(0, dots)), where);
        const long long b = to_ll(trim(v.substr(dots + 2)), where);
        if (a < 0 || a > b) throw ConfigError(where + ": bad seed range '" + v + "'");
        for (long long i = a; i <= b; ++i) out.push_back(static_cast<std::uint64_t>(i));
        return out;
    }
    for (const std::string& part : split_commas(v)) {
        const long long s = to_ll(part, where);
        if (s < 0) throw ConfigError(where + ": seeds must be nonnegative");
        out.push_back(static_cast<std::uint64_t>(s));
    }
    if (out.empty()) throw ConfigError(where + ": empty list");
    return out;
}

std::vector<double> to_double_list(const std::string& v, const std::string& where) {
    std::vector<double> out;
    for (const std::string& part : split_commas(v)) out.push_back(to_double(part, where));
    if (out.empty()) throw ConfigError(where + ": empty list");
    return out;
}

const std::set<std::string> kKinds = {"converge", "l2rates",  "ldp1d",
                                      "tailrates", "expgood", "rde-wz"};

const std::set<std::string> kSections = {"experiment", "model", "metric", "capacity",
                                         "sweep",      "rde",   "mc",     "output"};

struct KindKeys {
    std::set<std::string> required;
    std::set<std::string> optional;
};

KindKeys keys_for(const std::string& kind) {
    KindKeys k;
    const auto model_opt = [&] { k.optional.insert({"model.scale", "model.dim"}); };
    if (kind == "converge") {
        k.required = {"model.h", "metric.p", "metric.gamma", "metric.n_max",
                      "sweep.m", "sweep.level", "mc.seeds"};
        model_opt();
        k.optional.insert("metric.hl_constant");
    } else if (kind == "l2rates") {
        k.required = {"model.h", "sweep.m", "sweep.n", "mc.samples", "mc.seeds"};
        model_opt();
        k.optional.insert("sweep.level");
    } else if (kind == "ldp1d") {
        k.required = {"capacity.b", "capacity.q", "capacity.N", "sweep.eps"};
    } else if (kind == "tailrates" || kind == "expgood") {
        k.required = {"model.h",          "metric.p",          "metric.gamma",
                      "metric.n_max",     "capacity.i",        "capacity.N",
                      "capacity.q",       "capacity.lambda",   "sweep.m_emp",
                      "sweep.eps",        "sweep.lambda_lo",   "sweep.lambda_hi",
                      "sweep.lambda_points", "sweep.level",    "mc.seeds",
                      "mc.samples"};
        if (kind == "tailrates") k.required.insert("sweep.m");
        model_opt();
        k.optional.insert({"capacity.theta", "capacity.n_tilde", "capacity.c1",
                           "capacity.c2"});
    } else if (kind == "rde-wz") {
        k.required = {"model.h", "rde.state_dim", "rde.x0", "sweep.m", "sweep.level",
                      "mc.seeds"};
        model_opt();
        k.optional.insert("rde.substeps");
    }
    return k;
}

int max_of(const std::vector<int>& v) { return *std::max_element(v.begin(), v.end()); }
int min_of(const std::vector<int>& v) { return *std::min_element(v.begin(), v.end()); }

constexpr int kMaxSampleLevel = 14;

}  // namespace

IniSections parse_ini(const std::string& text) {
    IniSections out;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
            out[section];  // register even if empty
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        auto [it, inserted] = out[section].emplace(key, value);
        if (!inserted)
            throw ConfigError("duplicate key " + section + "." + key);
    }
    return out;
}

VectorFieldSet RdeSpec::build_fields() const {
    VectorFieldSet fields(state_dim, drive_dim);
    for (int a = 0; a < drive_dim; ++a)
        for (int c = 0; c < state_dim; ++c) {
            std::vector<PolyTerm> terms = parse_polynomial(field_text[a][c], state_dim);
            for (PolyTerm& t : terms) fields.add_term(a, c, t.coeff, std::move(t.exponents));
        }
    return fields;
}

std::string ExperimentConfig::hash_hex() const { return hex64(hash); }

TailParams ExperimentConfig::tail_params(int m) const {
    TailParams tp;
    tp.h = model.hurst;
    tp.p = metric.p;
    tp.theta = theta;
    tp.n_tilde = n_tilde;
    tp.degree = cap_degree;
    tp.level = cap_level;
    tp.m = m;
    tp.lambda = cap_lambda;
    tp.c1 = cap_c1;
    tp.c2 = cap_c2;
    return tp;
}

std::vector<double> ExperimentConfig::lambda_sweep() const {
    std::vector<double> out;
    out.reserve(lambda_points);
    const double ratio = lambda_hi / lambda_lo;
    for (int j = 0; j < lambda_points; ++j)
        out.push_back(lambda_lo *
                      std::pow(ratio, static_cast<double>(j) / (lambda_points - 1)));
    return out;
}

ExperimentConfig parse_config_text(const std::string& text) {
    const IniSections ini = parse_ini(text);

    for (const auto& [sec, kv] : ini)
        if (!kSections.count(sec)) throw ConfigError("unknown section [" + sec + "]");

    const auto get = [&](const std::string& sec, const std::string& key) -> const std::string* {
        auto s = ini.find(sec);
        if (s == ini.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        return &k->second;
    };

    ExperimentConfig cfg;
    const std::string* kind = get("experiment", "kind");
    if (!kind) throw ConfigError("missing required key experiment.kind");
    if (!kKinds.count(*kind)) throw ConfigError("unknown experiment kind '" + *kind + "'");
    cfg.kind = *kind;

    const KindKeys keys = keys_for(cfg.kind);
    const auto allowed = [&](const std::string& full) {
        return keys.required.count(full) || keys.optional.count(full);
    };
    for (const auto& [sec, kv] : ini) {
        if (sec == "experiment") {
            for (const auto& [key, value] : kv)
                if (key != "kind") throw ConfigError("unknown key experiment." + key);
            continue;
        }
        if (sec == "output") {
            for (const auto& [key, value] : kv)
                if (key != "path" && key != "json")
                    throw ConfigError("unknown key output." + key);
            continue;
        }
        for (const auto& [key, value] : kv) {
            const std::string full = sec + "." + key;
            if (sec == "rde" && key.rfind("field.", 0) == 0) {
                if (cfg.kind != "rde-wz")
                    throw ConfigError("key " + full + " is not used by experiment kind '" +
                                      cfg.kind + "'");
                continue;  // validated against dimensions below
            }
            if (allowed(full)) continue;
            static const std::set<std::string> kAllKeys = {
                "model.h",        "model.scale",      "model.dim",
                "metric.p",       "metric.gamma",     "metric.n_max",
                "metric.hl_constant",
                "capacity.i",     "capacity.N",       "capacity.q",
                "capacity.theta", "capacity.n_tilde", "capacity.b",
                "capacity.lambda", "capacity.c1",     "capacity.c2",
                "sweep.m",        "sweep.m_emp",      "sweep.n",
                "sweep.eps",      "sweep.lambda_lo",  "sweep.lambda_hi",
                "sweep.lambda_points", "sweep.level",
                "rde.state_dim",  "rde.x0",           "rde.substeps",
                "mc.seeds",       "mc.samples"};
            if (kAllKeys.count(full))
                throw ConfigError("key " + full + " is not used by experiment kind '" +
                                  cfg.kind + "'");
            throw ConfigError("unknown key " + full);
        }
    }
    for (const std::string& full : keys.required) {
        const auto dot = full.find('.');
        if (!get(full.substr(0, dot), full.substr(dot + 1)))
            throw ConfigError("missing required key " + full + " for experiment kind '" +
                              cfg.kind + "'");
    }

    // [model]
    if (const std::string* v = get("model", "h")) cfg.model.hurst = to_double(*v, "model.h");
    if (const std::string* v = get("model", "scale"))
        cfg.model.scale = to_double(*v, "model.scale");
    if (const std::string* v = get("model", "dim")) {
        cfg.dim = to_int(*v, "model.dim");
        if (cfg.dim < 1) throw ConfigError("model.dim must be >= 1");
    }
    if (get("model", "h")) cfg.model.validate();  // names the h > 1/4 constraint

    // [metric]
    if (const std::string* v = get("metric", "p")) cfg.metric.p = to_double(*v, "metric.p");
    if (const std::string* v = get("metric", "gamma"))
        cfg.metric.gamma = to_double(*v, "metric.gamma");
    if (const std::string* v = get("metric", "n_max"))
        cfg.metric.n_max = to_int(*v, "metric.n_max");
    if (const std::string* v = get("metric", "hl_constant"))
        cfg.metric.hl_constant = to_double(*v, "metric.hl_constant");
    if (get("metric", "p")) {
        cfg.metric.validate();  // names the gamma > p - 1 constraint
        if (!(cfg.model.hurst * cfg.metric.p > 1.0))
            throw ConfigError("violates hp > 1: h = " + std::to_string(cfg.model.hurst) +
                              ", p = " + std::to_string(cfg.metric.p));
    }

    // [capacity]
    if (const std::string* v = get("capacity", "i")) cfg.cap_level = to_int(*v, "capacity.i");
    if (const std::string* v = get("capacity", "N")) cfg.cap_degree = to_int(*v, "capacity.N");
    if (const std::string* v = get("capacity", "q")) cfg.cap_q = to_double(*v, "capacity.q");
    if (const std::string* v = get("capacity", "b")) cfg.cap_b = to_double(*v, "capacity.b");
    if (const std::string* v = get("capacity", "lambda"))
        cfg.cap_lambda = to_double(*v, "capacity.lambda");
    if (const std::string* v = get("capacity", "c1")) cfg.cap_c1 = to_double(*v, "capacity.c1");
    if (const std::string* v = get("capacity", "c2")) cfg.cap_c2 = to_double(*v, "capacity.c2");

    // [sweep]
    if (const std::string* v = get("sweep", "m")) cfg.m_list = to_int_list(*v, "sweep.m");
    if (const std::string* v = get("sweep", "m_emp")) cfg.m_emp = to_int_list(*v, "sweep.m_emp");
    if (const std::string* v = get("sweep", "n")) cfg.n_list = to_int_list(*v, "sweep.n");
    if (const std::string* v = get("sweep", "eps"))
        cfg.eps_list = to_double_list(*v, "sweep.eps");
    if (const std::string* v = get("sweep", "lambda_lo"))
        cfg.lambda_lo = to_double(*v, "sweep.lambda_lo");
    if (const std::string* v = get("sweep", "lambda_hi"))
        cfg.lambda_hi = to_double(*v, "sweep.lambda_hi");
    if (const std::string* v = get("sweep", "lambda_points"))
        cfg.lambda_points = to_int(*v, "sweep.lambda_points");
    if (const std::string* v = get("sweep", "level")) cfg.level = to_int(*v, "sweep.level");

    // [mc]
    if (const std::string* v = get("mc", "seeds")) cfg.seeds = to_seed_list(*v, "mc.seeds");
    if (const std::string* v = get("mc", "samples")) {
        cfg.samples = to_int(*v, "mc.samples");
        if (cfg.samples < 1) throw ConfigError("mc.samples must be >= 1");
    }

    // [output]
    if (const std::string* v = get("output", "path")) cfg.out_path = *v;
    if (const std::string* v = get("output", "json"))
        cfg.json_mirror = to_bool(*v, "output.json");

    // [rde]
    if (cfg.kind == "rde-wz") {
        cfg.rde.state_dim = to_int(*get("rde", "state_dim"), "rde.state_dim");
        if (cfg.rde.state_dim < 1) throw ConfigError("rde.state_dim must be >= 1");
        cfg.rde.drive_dim = cfg.dim;
        const std::vector<double> x0 = to_double_list(*get("rde", "x0"), "rde.x0");
        if (static_cast<int>(x0.size()) != cfg.rde.state_dim)
            throw ConfigError("rde.x0 must list exactly state_dim values");
        cfg.rde.x0 = Eigen::Map<const Eigen::VectorXd>(x0.data(), x0.size());
        if (const std::string* v = get("rde", "substeps")) {
            cfg.rde.substeps = to_int(*v, "rde.substeps");
            if (cfg.rde.substeps < 1) throw ConfigError("rde.substeps must be >= 1");
        }
        cfg.rde.field_text.assign(cfg.rde.drive_dim,
                                  std::vector<std::string>(cfg.rde.state_dim, ""));
        for (const auto& [key, value] : ini.at("rde")) {
            if (key.rfind("field.", 0) != 0) continue;
            const std::string tail = key.substr(6);
            const auto dot = tail.find('.');
            if (dot == std::string::npos)
                throw ConfigError("rde." + key + ": expected field.<alpha>.<component>");
            const int alpha = to_int(tail.substr(0, dot), "rde." + key);
            const int comp = to_int(tail.substr(dot + 1), "rde." + key);
            if (alpha < 1 || alpha > cfg.rde.drive_dim)
                throw ConfigError("rde." + key + ": field index out of range 1.." +
                                  std::to_string(cfg.rde.drive_dim));
            if (comp < 1 || comp > cfg.rde.state_dim)
                throw ConfigError("rde." + key + ": component index out of range 1.." +
                                  std::to_string(cfg.rde.state_dim));
            cfg.rde.field_text[alpha - 1][comp - 1] = value;
        }
        cfg.rde.build_fields();  // surfaces polynomial and degree errors at load time
    }

    // Kind-specific cross checks.
    const auto check_level = [&](int needed) {
        if (cfg.level < needed)
            throw ConfigError("sweep.level must be >= " + std::to_string(needed) +
                              " for this sweep");
        if (cfg.level > kMaxSampleLevel)
            throw ConfigError("sweep.level must be <= " + std::to_string(kMaxSampleLevel));
    };

    if (cfg.kind == "converge") {
        if (min_of(cfg.m_list) < 1) throw ConfigError("sweep.m entries must be >= 1");
        check_level(max_of(cfg.m_list) + 1);
        if (cfg.metric.n_max < max_of(cfg.m_list) + 1)
            throw ConfigError("metric.n_max must be >= max(sweep.m) + 1");
        if (cfg.metric.n_max > cfg.level)
            throw ConfigError("metric.n_max must be <= sweep.level");
        if (cfg.metric.n_max > kMaxDpGridLevel)
            throw ConfigError("metric.n_max must be <= " + std::to_string(kMaxDpGridLevel) +
                              " (the exact d_p grid limit)");
    } else if (cfg.kind == "l2rates") {
        if (min_of(cfg.m_list) < 1) throw ConfigError("sweep.m entries must be >= 1");
        if (min_of(cfg.n_list) < 1) throw ConfigError("sweep.n entries must be >= 1");
        const int derived = std::max(max_of(cfg.m_list) + 1, max_of(cfg.n_list));
        if (cfg.level == 0) cfg.level = derived;
        check_level(derived);
    } else if (cfg.kind == "ldp1d") {
        if (!(cfg.cap_q > 2.0))
            throw ConfigError("violates q > 2 (required by the capacity upper bound)");
        if (!(cfg.cap_b > 0.0)) throw ConfigError("capacity.b must be positive");
        if (cfg.cap_degree < 0) throw ConfigError("capacity.N must be >= 0");
        if (cfg.eps_list.size() < 3)
            throw ConfigError("sweep.eps needs at least 3 entries for the limit fit");
        for (double e : cfg.eps_list)
            if (!(e > 0.0)) throw ConfigError("sweep.eps entries must be positive");
    } else if (cfg.kind == "tailrates" || cfg.kind == "expgood") {
        if (!(cfg.cap_q > 2.0))
            throw ConfigError("violates q > 2 (required by the capacity context)");
        const std::string* theta_raw = get("capacity", "theta");
        if (!theta_raw || *theta_raw == "mid")
            cfg.theta = theta_midpoint(cfg.model.hurst, cfg.metric.p);
        else
            cfg.theta = to_double(*theta_raw, "capacity.theta");
        const std::string* nt_raw = get("capacity", "n_tilde");
        if (!nt_raw || *nt_raw == "auto")
            cfg.n_tilde = n_tilde_min(cfg.model.hurst, cfg.metric.p, cfg.theta, cfg.cap_degree);
        else
            cfg.n_tilde = to_int(*nt_raw, "capacity.n_tilde");
        cfg.tail_params(0).validate();  // names the theta-interval and n_tilde constraints
        if (cfg.kind == "tailrates") {
            if (cfg.m_list.size() < 2)
                throw ConfigError("sweep.m needs at least 2 entries for slope checks");
            if (min_of(cfg.m_list) < 0) throw ConfigError("sweep.m entries must be >= 0");
        }
        if (!(cfg.lambda_lo > 0.0) || !(cfg.lambda_hi > cfg.lambda_lo))
            throw ConfigError("sweep.lambda_lo/lambda_hi must satisfy 0 < lo < hi");
        if (cfg.lambda_points < 2) throw ConfigError("sweep.lambda_points must be >= 2");
        if (min_of(cfg.m_emp) < 1) throw ConfigError("sweep.m_emp entries must be >= 1");
        check_level(std::max(max_of(cfg.m_emp) + 1, cfg.metric.n_max));
        for (double e : cfg.eps_list)
            if (!(e > 0.0)) throw ConfigError("sweep.eps entries must be positive");
    } else if (cfg.kind == "rde-wz") {
        if (min_of(cfg.m_list) < 1) throw ConfigError("sweep.m entries must be >= 1");
        check_level(max_of(cfg.m_list) + 1);
    }

    // Canonical hash over everything except [output].
    std::string canon;
    for (const auto& [sec, kv] : ini) {
        if (sec == "output") continue;
        for (const auto& [key, value] : kv) canon += sec + "." + key + "=" + value + "\n";
    }
    cfg.hash = fnv1a64(canon);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace rough
