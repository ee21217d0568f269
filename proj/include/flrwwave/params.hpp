#ifndef FLRWWAVE_PARAMS_HPP
#define FLRWWAVE_PARAMS_HPP

#include <map>
#include <string>

namespace flrw {

enum class Nonlinearity { TimeDerivative, SpaceDerivative };

/// Parameters of the reduced problem u_tt - t^{-2a} Lap u + (mu/t) u_t = N(u).
struct ModelParams {
    int n = 3;                  // spatial dimension
    double alpha = 0.0;         // propagation-speed decay exponent
    double mu = 0.0;            // damping coefficient
    double p = 2.0;             // nonlinearity power
    double epsilon = 0.01;      // data size
    double R = 1.0;             // initial support radius
    Nonlinearity nonlinearity = Nonlinearity::TimeDerivative;
};

/// FLRW parameterization: scale factor a(t) = c t^{2/(n(1+w))}, -1 < w <= 1.
struct FLRWParams {
    int n = 3;
    double w = 1.0;
    double c_scale = 1.0;
};

enum class Regime { Accelerating, Boundary, Decelerating };

// Mapping to the reduced problem: alpha = 2/(n(1+w)), mu = 2/(1+w).
ModelParams flrw_to_model(const FLRWParams& f, double p, double epsilon,
                          double R, Nonlinearity nl);

Regime classify_regime(const FLRWParams& f);

double scale_factor(double t, const FLRWParams& f);

// A(t) = int_1^t s^{-alpha} ds, with the log branch exactly at alpha = 1.
double lightcone_radius(double t, double alpha);

// Throws std::invalid_argument listing every violated invariant.
const ModelParams& validate(const ModelParams& m);
void validate_flrw(const FLRWParams& f);

// True when the blow-up theorems cover this dimension (n >= 2); n = 1 is
// admitted by validate() for solver checks only.
bool in_theorem_scope(const ModelParams& m);

// Flat "key = value" configuration (UTF-8, '#' comments).
// Recognized keys: n, alpha, mu, p, epsilon, R, nonlinearity {ut, grad},
// w (optional, overrides alpha/mu via the FLRW mapping).
// Extra keys are returned untouched for downstream consumers.
struct ParsedConfig {
    ModelParams model;
    bool from_w = false;
    double w = 0.0;
    std::map<std::string, std::string> extra;
};

ParsedConfig parse_config_text(const std::string& text);
ParsedConfig load_config_file(const std::string& path);

}  // namespace flrw

#endif
