#ifndef FLRWWAVE_KATO_HPP
#define FLRWWAVE_KATO_HPP

#include <cstdint>

namespace flrw {

enum class KatoOrder {
    FirstOrder,      // F' + (mu/t) F >= A1 (t+R)^{-q} (ln t)^{-r} F^p
    SecondOrder,     // F'' + (mu/t) F' >= A1 (t+R)^{-q} F^p
    SecondOrderLog,  // F'' + (mu/t) F' >= A1 (t+R)^{-2} F^p, F >= A0 (ln t/T1)^b
    SecondOrderLogQ  // F'' + (mu/t) F' >= A1 (ln t)^{-q} F^p
};

struct KatoProblem {
    KatoOrder order = KatoOrder::FirstOrder;
    double p = 2.0;
    double a = 0.0;
    double b = 0.0;
    double c = 1.0;
    double q = 0.0;
    double r = 0.0;
    double mu = 0.0;
    double A0 = 1.0;
    double A1 = 1.0;
    double R = 1.0;
    double T0 = 1.0;
    double T1 = 1.0;
};

struct KatoIteration {
    int j = 0;
    double a_j = 0.0;
    double b_j = 0.0;
    double c_j = 0.0;
    double log_D_j = 0.0;  // natural log; D_j grows doubly exponentially
};

// The iteration exponent controlling the lifespan bound.  Positivity is the
// lemma hypothesis.
double exponent_M(const KatoProblem& prob);

// Recursions a_{j+1} = p a_j + mu + q, b_{j+1} = p b_j + r,
// c_{j+1} = p c_j + mu + 1, D_{j+1} = A1 C_{R,q} D_j^p / (p c_j + mu + 1).
KatoIteration iterate(const KatoProblem& prob, int j);
// Solved forms a_j = p^j (a + (mu+q)/(p-1)) - (mu+q)/(p-1) etc.
KatoIteration closed_form(const KatoProblem& prob, int j);

// E = min(0, ln B)/(p-1) - ln p * p/(p-1)^2 + ln A0,
// B = {c + (mu+1)/(p-1)}^{-1} A1 (1+R)^{-q}.
double growth_E(const KatoProblem& prob);

/// Symbolic lifespan bound with the C = 1 convention (shapes shared with the
/// theorem-level bounds).
struct KatoBound {
    enum class Kind { PowerLaw, Exponential, ImplicitPowerLog } kind;
    // PowerLaw:         T <= A0^{-(p-1)/M}              (exponent k on A0)
    // Exponential:      T <= exp(A0^{-rate})
    // ImplicitPowerLog: T^s (ln T)^{-l} <= A0^{-m}
    double k = 0.0;
    double rate = 0.0;
    double s = 0.0, l = 0.0, m = 0.0;
};

KatoBound lifespan_bound(const KatoProblem& prob);

struct DivergenceResult {
    bool found = false;
    double time = 0.0;
};

// Smallest t > T1 + 1 where the iteration bracket
//   E + (c + (mu+1)/(p-1)) ln(t-T1) - (a + (mu+q)/(p-1)) ln t
//     - (b + r/(p-1)) ln(ln t)
// reaches delta, located by bisection.  FirstOrder only.
DivergenceResult divergence_time(const KatoProblem& prob, double delta = 0.1,
                                 double horizon = 1e12);

struct OracleResult {
    bool blew_up = false;
    double time = 0.0;
};

// Integrates the saturated-equality ODE of condition (ii) from (T0, F0[, F0p])
// with adaptive step halving; blow-up when F exceeds `threshold`.
OracleResult ode_oracle(const KatoProblem& prob, double F0, double F0p = 0.0,
                        double horizon = 1e8, double threshold = 1e12);

double bracket_value(const KatoProblem& prob, double t);

}  // namespace flrw

#endif
