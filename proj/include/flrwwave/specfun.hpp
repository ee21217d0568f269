#ifndef FLRWWAVE_SPECFUN_HPP
#define FLRWWAVE_SPECFUN_HPP

#include "flrwwave/params.hpp"

namespace flrw {

/// Quadrature context for K_nu(t) = int_0^inf e^{-t cosh z} cosh(nu z) dz.
/// When built from ModelParams, nu = (mu-1)/(2(1-alpha)) and alpha feeds the
/// argument map s(t) = t^{1-alpha}/(1-alpha) used by ratio_bound.
struct BesselContext {
    double nu = 0.0;
    double alpha = 0.0;
    double tol = 1e-12;
};

// Requires alpha <= 0.95 (quadrature conditioning degrades as alpha -> 1).
BesselContext bessel_context(const ModelParams& m);

double bessel_k(const BesselContext& ctx, double t);

struct BesselDerivs {
    double K = 0.0;
    double Kp = 0.0;   // dK/dt
    double Kpp = 0.0;  // d^2K/dt^2
};

// Derivatives by differentiating the integrand (factors -cosh z, cosh^2 z).
BesselDerivs bessel_k_derivs(const BesselContext& ctx, double t);

/// Relative residuals of the defining identities:
///   ode:        t^2 K'' + t K' - (t^2 + nu^2) K = 0
///   recurrence: K' = (nu/t) K - K_{nu+1}
///   asymptotic: K_nu(t) sqrt(2t/pi) e^t - 1  (the large-t correction)
struct IdentityResiduals {
    double ode = 0.0;
    double recurrence = 0.0;
    double asymptotic = 0.0;
};

IdentityResiduals identity_residuals(const BesselContext& ctx, double t);

// Certified upper bound M >= 1 for K_{nu+1}(s(t))/K_nu(s(t)) over t >= t_min,
// from a dense log-grid maximum plus an analytic tail bound (ratio -> 1).
double ratio_bound(const BesselContext& ctx, double t_min);

// Surface area of the unit sphere S^{n-1} in R^n.
double unit_sphere_area(int n);

// int_{|omega|=1} e^{x.omega} dS_omega as a function of r = |x|;
// closed form 4 pi sinh(r)/r for n = 3, polar-angle quadrature otherwise.
double sphere_integral(int n, double r);

/// Admissibility of the exponent q in the weighted test-function family:
/// lower_bound: q > -(mu+alpha)/2; integrable: q + (mu-1)/2 - (1-alpha)|nu| > -1.
struct QAdmissibility {
    bool lower_bound = false;
    bool integrable = false;
    double nu = 0.0;
    bool ok() const { return lower_bound && integrable; }
};

QAdmissibility q_admissible(double q, const ModelParams& m);

struct TestFunction {
    enum class Kind { Phi, PhiQ };
    Kind kind = Kind::Phi;
    ModelParams m;
    double q = 0.0;  // PhiQ only
    double nu = 0.0;
};

TestFunction make_phi(const ModelParams& m);
// Throws std::domain_error naming the violated admissibility condition.
TestFunction make_phi_q(const ModelParams& m, double q);

// lambda(t) = t^{(1-mu)/2} K_nu(t^{1-alpha}/(1-alpha)).
double lambda_value(const ModelParams& m, double t);

struct LambdaDerivs {
    double l = 0.0;
    double lp = 0.0;
    double lpp = 0.0;
};

LambdaDerivs lambda_derivs(const ModelParams& m, double t);

// phi(t,x) = lambda(t) sphere_integral(n, |x|); an exact solution of the
// adjoint equation phi_tt - t^{-2 alpha} Delta phi + (mu/t) phi_t = 0.
double phi(const TestFunction& tf, double t, double r);

// Relative residual of the adjoint equation at (t, r), using Delta phi = phi.
double phi_pde_residual(const TestFunction& tf, double t, double r);

// phi_t / phi = lambda'/lambda; equals -t^{-alpha} K_{nu+1}(s)/K_nu(s).
double phi_t_over_phi(const TestFunction& tf, double t);
// Relative mismatch between the two expressions above.
double phi_t_ratio_residual(const TestFunction& tf, double t);

// [int_{|x| <= A(t)+R} phi dx] / (t+R)^{{(1-alpha)(n-1)-(mu-alpha)}/2}.
double phi_integral_ratio(const TestFunction& tf, double t, double R);

// phi_q(t,x) = int_0^1 lambda(eta t) sphere_integral(n, eta^{1-alpha} |x|)
//              eta^{q-1+mu} d eta.
double phi_q(const TestFunction& tf, double t, double r);
// d/dt of phi_q, computed with the analytic lambda derivative.
double phi_q_dt(const TestFunction& tf, double t, double r);

// phi_q divided by its two-sided envelope; the envelope switches branch at
// q = {(n-1)(1-alpha) - (mu+alpha)}/2.  Requires r <= A(t) + R with
// R <= 1/(2(1-alpha)) so that t^{1-alpha} - (1-alpha) r stays positive.
double phi_q_envelope_ratio(const TestFunction& tf, double t, double r);

}  // namespace flrw

#endif
