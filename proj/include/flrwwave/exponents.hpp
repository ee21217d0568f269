#ifndef FLRWWAVE_EXPONENTS_HPP
#define FLRWWAVE_EXPONENTS_HPP

#include <optional>

namespace flrw {

/// Positive root of the blow-up quadratic, or AllP when the quadratic is
/// positive for every p > 1 (leading coefficient <= 0).
struct RootDescriptor {
    bool all_p = false;
    double value = 0.0;  // meaningful only when !all_p

    static RootDescriptor finite(double v) { return {false, v}; }
    static RootDescriptor all() { return {true, 0.0}; }
};

/// Every critical exponent and threshold parameter for one (n, alpha, mu).
struct ExponentSet {
    int n = 0;
    double alpha = 0.0;
    double mu = 0.0;

    double p_G = 0.0;        // Minkowski Glassey exponent 1 + 2/(n-1)
    double p_G_prime = 0.0;  // generalized Glassey exponent
    double p_0 = 0.0;        // first-order threshold
    RootDescriptor p_c_prime;
    std::optional<double> p_0_prime;  // empty when its denominator <= 0
    double p_F_prime = 0.0;  // heatlike threshold

    // Comparison curves for the |u|^p equation.
    RootDescriptor p_c_ref;
    double p_F_ref = 0.0;

    double mu_crossing = 0.0;  // p_G' = p_0 here
    double mu_star = 0.0;      // p_c' = p_F' here
    double mu_zero = 0.0;      // p_c' = p_0' here
};

// Quadratic -p^2 (n+1+(mu-a)/(1-a)) + p (n+1+(mu+3a)/(1-a)) + 2; requires a < 1.
double gamma_prime(int n, double p, double alpha, double mu);

// Comparison quadratic for the |u|^p equation (leading block n-1 instead of n+1).
double gamma_ref(int n, double p, double alpha, double mu);

RootDescriptor p_c_prime(int n, double alpha, double mu);
RootDescriptor p_c_ref(int n, double alpha, double mu);

double p_glassey(double d);  // p_G(d) = 1 + 2/(d-1), real argument
double p_glassey_prime(int n, double alpha, double mu);
double p_zero(int n, double alpha, double mu);
std::optional<double> p_zero_prime(int n, double alpha, double mu);
double p_fujita_prime(int n, double alpha);
double p_fujita_ref(int n, double alpha);

double mu_crossing(int n, double alpha);  // alpha(n+2) - (n+1)
double mu_star(int n, double alpha);
double mu_zero(int n, double alpha);

ExponentSet threshold_set(int n, double alpha, double mu);

// FLRW specialization.
double gamma0_prime(int n, double p, double w);

struct CriticalW {
    double value = 0.0;
    bool in_range = false;  // whether value lies in (-1, 1]
};

// Larger root of the quadratic whose solution makes p_F'(n,w) = p_c'(n,w).
CriticalW critical_w(int n);

// threshold_set on the mapped (alpha, mu); requires derived alpha < 1.
ExponentSet flrw_thresholds(int n, double w);

}  // namespace flrw

#endif
