#include "flrwwave/params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace flrw {

void validate_flrw(const FLRWParams& f) {
    std::vector<std::string> bad;
    if (f.n < 2) bad.push_back("n >= 2 required for the FLRW mapping");
    if (!(f.w > -1.0) || !(f.w <= 1.0))
        bad.push_back("w must lie in (-1, 1] (w = -1 deferred)");
    if (!(f.c_scale > 0.0)) bad.push_back("c_scale > 0 required");
    if (!bad.empty()) {
        std::string msg = "invalid FLRW parameters:";
        for (const auto& b : bad) msg += " " + b + ";";
        throw std::invalid_argument(msg);
    }
}

ModelParams flrw_to_model(const FLRWParams& f, double p, double epsilon,
                          double R, Nonlinearity nl) {
    validate_flrw(f);
    ModelParams m;
    m.n = f.n;
    if (f.w == 2.0 / f.n - 1.0) {
        // Boundary regime, mapped exactly (the theorems split discretely there).
        m.alpha = 1.0;
        m.mu = f.n;
    } else {
        m.alpha = 2.0 / (f.n * (1.0 + f.w));
        m.mu = 2.0 / (1.0 + f.w);
    }
    m.p = p;
    m.epsilon = epsilon;
    m.R = R;
    m.nonlinearity = nl;
    return validate(m);
}

Regime classify_regime(const FLRWParams& f) {
    validate_flrw(f);
    const double wb = 2.0 / f.n - 1.0;
    if (f.w < wb) return Regime::Accelerating;
    if (f.w == wb) return Regime::Boundary;
    return Regime::Decelerating;
}

double scale_factor(double t, const FLRWParams& f) {
    validate_flrw(f);
    if (!(t > 0.0)) throw std::invalid_argument("scale_factor requires t > 0");
    return f.c_scale * std::pow(t, 2.0 / (f.n * (1.0 + f.w)));
}

double lightcone_radius(double t, double alpha) {
    if (!(t >= 1.0)) throw std::invalid_argument("lightcone_radius requires t >= 1");
    if (!(alpha >= 0.0)) throw std::invalid_argument("lightcone_radius requires alpha >= 0");
    if (alpha == 1.0) return std::log(t);
    if (alpha < 1.0) return (std::pow(t, 1.0 - alpha) - 1.0) / (1.0 - alpha);
    return (1.0 - std::pow(t, 1.0 - alpha)) / (alpha - 1.0);
}

const ModelParams& validate(const ModelParams& m) {
    std::vector<std::string> bad;
    if (m.n < 1) bad.push_back("n >= 1 required");
    if (!(m.alpha >= 0.0)) bad.push_back("alpha >= 0 required");
    if (!(m.mu >= 0.0)) bad.push_back("mu >= 0 required");
    if (!(m.p > 1.0)) bad.push_back("p > 1 required");
    if (!(m.epsilon > 0.0)) bad.push_back("epsilon > 0 required");
    if (!(m.R > 0.0)) bad.push_back("R > 0 required");
    if (!bad.empty()) {
        std::string msg = "invalid model parameters:";
        for (const auto& b : bad) msg += " " + b + ";";
        throw std::invalid_argument(msg);
    }
    return m;
}

bool in_theorem_scope(const ModelParams& m) { return m.n >= 2; }

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': bad number '" + v + "'");
    }
}

}  // namespace

ParsedConfig parse_config_text(const std::string& text) {
    ParsedConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "n") {
            cfg.model.n = static_cast<int>(to_double(key, val));
        } else if (key == "alpha") {
            cfg.model.alpha = to_double(key, val);
        } else if (key == "mu") {
            cfg.model.mu = to_double(key, val);
        } else if (key == "p") {
            cfg.model.p = to_double(key, val);
        } else if (key == "epsilon") {
            cfg.model.epsilon = to_double(key, val);
        } else if (key == "R") {
            cfg.model.R = to_double(key, val);
        } else if (key == "nonlinearity") {
            if (val == "ut") cfg.model.nonlinearity = Nonlinearity::TimeDerivative;
            else if (val == "grad") cfg.model.nonlinearity = Nonlinearity::SpaceDerivative;
            else throw std::invalid_argument("nonlinearity must be 'ut' or 'grad'");
        } else if (key == "w") {
            cfg.from_w = true;
            cfg.w = to_double(key, val);
        } else {
            cfg.extra[key] = val;
        }
    }
    if (cfg.from_w) {
        FLRWParams f{cfg.model.n, cfg.w, 1.0};
        const ModelParams mapped =
            flrw_to_model(f, cfg.model.p, cfg.model.epsilon, cfg.model.R,
                          cfg.model.nonlinearity);
        cfg.model.alpha = mapped.alpha;
        cfg.model.mu = mapped.mu;
    }
    validate(cfg.model);
    return cfg;
}

ParsedConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace flrw
