#ifndef FLRWWAVE_SOLVER_HPP
#define FLRWWAVE_SOLVER_HPP

#include <vector>

#include "flrwwave/params.hpp"

namespace flrw {

// C^2 compactly supported profile: exp(1 - 1/(1-s^2)) for |s| < 1, else 0.
double bump(double s);

struct SolverConfig {
    ModelParams model;
    double dr = 0.01;
    double r_max = 0.0;  // <= 0: auto, R + lightcone_radius(t_max) + 10 dr
    double cfl = 0.5;
    double t_max = 10.0;
    double threshold = 1e6;  // blow-up detection level on sup|u_t|
    bool linear = false;     // disable the nonlinearity (validation runs)
    bool u1_zero = false;    // replace the default u_t(1,.) profile by zero
    int diag_every = 16;     // diagnostics cadence in steps
};

struct FieldState {
    double t = 1.0;
    std::vector<double> u;
    std::vector<double> v;  // u_t
    long steps = 0;
    bool blown_up = false;
    double dt_scale = 1.0;   // halving factor near blow-up
    double prev_sup_v = 0.0; // sup|v| before the previous step
};

struct DiagRecord {
    double t = 0.0;
    double int_u = 0.0;   // int u dx
    double int_ut = 0.0;  // int u_t dx (the proofs' F(t))
    double sup_v = 0.0;
    double support_radius = 0.0;
};

struct SimOutcome {
    bool blew_up = false;
    double T_num = 0.0;
    double max_sup_v = 0.0;
    bool tnum_converged = false;      // threshold x100 shifts T_num by < 1%
    double sensitivity_shift = 0.0;   // relative shift under threshold x100
    double max_support_violation = 0.0;
    std::vector<DiagRecord> series;
};

// Builds the initial state: u0 = eps bump(r/R)^2, u1 = eps (2 bump(r/R)^2 +
// bump(r/R)) (or zero with u1_zero), and enforces the sign hypotheses of the
// active blow-up theorem (the u1 >= u0 requirement relaxes to u1 >= 0 for the
// time-derivative nonlinearity below the first-order threshold p_0).
FieldState init(const SolverConfig& cfg);

// One explicit 4-stage step of u_t = v, v_t = t^{-2 alpha}(u_rr +
// (n-1) u_r / r) - (mu/t) v + N with N = |v|^p or |u_r|^p.
void step(FieldState& state, const SolverConfig& cfg);

DiagRecord diagnostics(const FieldState& state, const SolverConfig& cfg);

// Max |u| beyond radius R + lightcone_radius(t) + 3 dr.
double support_check(const FieldState& state, const SolverConfig& cfg);

SimOutcome run(const SolverConfig& cfg);

// Exact radial solution for the n=3, alpha=0, mu=0 linear problem via the
// d'Alembert formula for w = r u with odd extension.
double dalembert_reference(const SolverConfig& cfg, double t, double r);

// Observed convergence order of the linear solver at dr, dr/2, dr/4 against
// the d'Alembert reference; cfg must be the n=3, alpha=0, mu=0 linear setup.
double convergence_order(const SolverConfig& cfg);

}  // namespace flrw

#endif
