#ifndef FLRWWAVE_SWEEP_HPP
#define FLRWWAVE_SWEEP_HPP

#include <optional>
#include <string>
#include <vector>

#include "flrwwave/lifespan.hpp"
#include "flrwwave/solver.hpp"

namespace flrw {

struct SweepPoint {
    double epsilon = 0.0;
    double T_num = 0.0;
    bool blew_up = false;   // false: censored at the horizon
    bool converged = false; // threshold-sensitivity check passed
};

struct FitResult {
    double slope = 0.0;      // of ln T_num against ln(1/eps)
    double intercept = 0.0;
    double r2 = 0.0;
    int points = 0;
};

struct SweepResult {
    std::vector<SweepPoint> points;  // sorted by decreasing epsilon
    std::optional<FitResult> fit;
    std::optional<LifespanBound> predicted;
    std::vector<std::string> notes;
};

// Runs one simulation per epsilon (concurrently; results ordered by epsilon).
// Per-run horizon: 40x the predicted bound value when it is a power law,
// else base.t_max; dr refined so the horizon spans >= 1000 steps.
// Requires epsilons strictly decreasing.
SweepResult run_sweep(const SolverConfig& base, const std::vector<double>& epsilons);

// Ordinary least squares on the usable (blew-up, converged) points;
// requires >= 4 of them and non-degenerate abscissas.
FitResult fit_scaling(const std::vector<SweepPoint>& points);

struct ComparisonReport {
    bool quantitative = false;  // power-law prediction available with a fit
    double gamma_fit = 0.0;
    double predicted_k = 0.0;
    double ratio = 0.0;         // gamma_fit / predicted_k
    bool slope_ok = false;      // within +-25 percent
    bool one_sided_ok = false;  // T_num <= bound_value(eps) * slack, all points
    double slack = 0.0;
    std::vector<std::string> notes;
};

// Consistency (not sharpness) check against the theorem bound; the default
// slack absorbs the unknown constant C.
ComparisonReport compare_prediction(const SweepResult& result, double slack = 1e3);

}  // namespace flrw

#endif
