#include "flrwwave/specfun.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace flrw {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 16-point Gauss-Legendre rule on [-1, 1] (positive half; symmetric).
constexpr double kGlX[8] = {
    0.09501250983763744, 0.28160355077925891, 0.45801677765722739,
    0.61787624440264375, 0.75540440835500303, 0.86563120238783174,
    0.94457502307323258, 0.98940093499164993};
constexpr double kGlW[8] = {
    0.18945061045506850, 0.18260341504492359, 0.16915651939500254,
    0.14959598881657673, 0.12462897125553387, 0.09515851168249278,
    0.06225352393864789, 0.02715245941175409};

template <class F>
double gl_panel(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 8; ++i)
        sum += kGlW[i] * (f(c + h * kGlX[i]) + f(c - h * kGlX[i]));
    return h * sum;
}

template <class F>
double composite(const F& f, double a, double b, int panels) {
    double sum = 0.0;
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) sum += gl_panel(f, a + i * h, a + (i + 1) * h);
    return sum;
}

// Doubling refinement until successive composite estimates agree to tol.
template <class F>
double adaptive(const F& f, double a, double b, double tol, const char* what) {
    double prev = composite(f, a, b, 2);
    for (int n = 4; n <= 8192; n *= 2) {
        const double cur = composite(f, a, b, n);
        const double err = std::abs(cur - prev);
        if (err <= tol * std::max(std::abs(cur), 1e-300)) return cur;
        prev = cur;
    }
    std::ostringstream os;
    os << what << ": quadrature did not converge (achieved relative error "
       << std::abs(prev) << " scale)";
    throw std::runtime_error(os.str());
}

// Truncation point: t cosh(z) - |nu| z >= 46 makes the integrand < 1e-20.
double z_cutoff(double t, double anu) {
    double z = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double arg = std::max((46.0 + anu * z) / t, 1.0);
        const double nz = std::acosh(arg);
        if (std::abs(nz - z) < 1e-9) { z = nz; break; }
        z = nz;
    }
    return z + 1.0;
}

struct KTriple {
    double K, Kp, Kpp;
};

// K_nu(t) and its first two t-derivatives in one quadrature pass.
KTriple bessel_triple(double nu, double t, double tol) {
    if (!(t > 0.0)) throw std::domain_error("bessel_k: t > 0 required");
    const double anu = std::abs(nu);
    const double zmax = z_cutoff(t, anu);

    auto make = [&](int power) {
        return [nu, t, power](double z) {
            const double ch = std::cosh(z);
            double f = std::exp(-t * ch) * std::cosh(nu * z);
            for (int i = 0; i < power; ++i) f *= ch;
            return f;
        };
    };
    KTriple out;
    out.K = adaptive(make(0), 0.0, zmax, tol, "bessel_k");
    out.Kp = -adaptive(make(1), 0.0, zmax, tol, "bessel_k'");
    out.Kpp = adaptive(make(2), 0.0, zmax, tol, "bessel_k''");
    return out;
}

double argument_map(double alpha, double t) {
    return std::pow(t, 1.0 - alpha) / (1.0 - alpha);
}

}  // namespace

BesselContext bessel_context(const ModelParams& m) {
    if (!(m.alpha < 1.0))
        throw std::domain_error("bessel_context: alpha < 1 required");
    if (m.alpha > 0.95)
        throw std::domain_error(
            "bessel_context: verification capped at alpha <= 0.95 "
            "(quadrature conditioning)");
    BesselContext ctx;
    ctx.nu = (m.mu - 1.0) / (2.0 * (1.0 - m.alpha));
    ctx.alpha = m.alpha;
    return ctx;
}

double bessel_k(const BesselContext& ctx, double t) {
    if (!(t > 0.0)) throw std::domain_error("bessel_k: t > 0 required");
    const double anu = std::abs(ctx.nu);
    const double zmax = z_cutoff(t, anu);
    auto f = [&](double z) {
        return std::exp(-t * std::cosh(z)) * std::cosh(ctx.nu * z);
    };
    return adaptive(f, 0.0, zmax, ctx.tol, "bessel_k");
}

BesselDerivs bessel_k_derivs(const BesselContext& ctx, double t) {
    const KTriple kt = bessel_triple(ctx.nu, t, ctx.tol);
    return {kt.K, kt.Kp, kt.Kpp};
}

IdentityResiduals identity_residuals(const BesselContext& ctx, double t) {
    const BesselDerivs d = bessel_k_derivs(ctx, t);
    const double nu = ctx.nu;
    IdentityResiduals out;

    const double ode_lhs = t * t * d.Kpp + t * d.Kp - (t * t + nu * nu) * d.K;
    const double ode_scale = t * t * std::abs(d.Kpp) + t * std::abs(d.Kp) +
                             (t * t + nu * nu) * d.K;
    out.ode = std::abs(ode_lhs) / ode_scale;

    BesselContext up = ctx;
    up.nu = nu + 1.0;
    const double Knext = bessel_k(up, t);
    const double rec_lhs = d.Kp - (nu / t * d.K - Knext);
    const double rec_scale = std::abs(d.Kp) + std::abs(nu / t * d.K) + Knext;
    out.recurrence = std::abs(rec_lhs) / rec_scale;

    out.asymptotic = d.K * std::sqrt(2.0 * t / kPi) * std::exp(t) - 1.0;
    return out;
}

double ratio_bound(const BesselContext& ctx, double t_min) {
    if (!(t_min >= 1.0)) throw std::domain_error("ratio_bound: t_min >= 1 required");
    if (!(ctx.alpha < 1.0)) throw std::domain_error("ratio_bound: alpha < 1 required");
    BesselContext up = ctx;
    up.nu = ctx.nu + 1.0;
    const double s_min = argument_map(ctx.alpha, t_min);
    const double s_max = std::max(1e4, 100.0 * s_min);
    const int grid = 512;
    double best = 1.0;
    for (int i = 0; i <= grid; ++i) {
        const double s =
            s_min * std::exp(std::log(s_max / s_min) * i / grid);
        const double r = bessel_k(up, s) / bessel_k(ctx, s);
        best = std::max(best, r);
    }
    // Tail: for s >= s_max the ratio is below (a + sqrt(a^2 + s^2))/s with
    // a = |nu| + 1, a decreasing function of s, so its value at s_max covers
    // the whole tail.
    const double a = std::abs(ctx.nu) + 1.0;
    const double tail = (a + std::sqrt(a * a + s_max * s_max)) / s_max;
    return std::max(best, tail);
}

double unit_sphere_area(int n) {
    if (n < 1) throw std::domain_error("unit_sphere_area: n >= 1 required");
    return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double sphere_integral(int n, double r) {
    if (n < 2) throw std::domain_error("sphere_integral: n >= 2 required");
    if (!(r >= 0.0)) throw std::domain_error("sphere_integral: r >= 0 required");
    if (n == 3) {
        if (r < 1e-6) return 4.0 * kPi * (1.0 + r * r / 6.0);
        return 4.0 * kPi * std::sinh(r) / r;
    }
    const double sigma = unit_sphere_area(n - 1);
    auto f = [&](double th) {
        return std::exp(r * std::cos(th)) * std::pow(std::sin(th), n - 2);
    };
    return sigma * adaptive(f, 0.0, kPi, 1e-12, "sphere_integral");
}

QAdmissibility q_admissible(double q, const ModelParams& m) {
    if (!(m.alpha < 1.0))
        throw std::domain_error("q_admissible: alpha < 1 required");
    QAdmissibility out;
    out.nu = (m.mu - 1.0) / (2.0 * (1.0 - m.alpha));
    out.lower_bound = q > -(m.mu + m.alpha) / 2.0;
    out.integrable =
        q + (m.mu - 1.0) / 2.0 - (1.0 - m.alpha) * std::abs(out.nu) > -1.0;
    return out;
}

TestFunction make_phi(const ModelParams& m) {
    validate(m);
    const BesselContext ctx = bessel_context(m);
    TestFunction tf;
    tf.kind = TestFunction::Kind::Phi;
    tf.m = m;
    tf.nu = ctx.nu;
    return tf;
}

TestFunction make_phi_q(const ModelParams& m, double q) {
    validate(m);
    const BesselContext ctx = bessel_context(m);
    const QAdmissibility adm = q_admissible(q, m);
    if (!adm.lower_bound)
        throw std::domain_error(
            "make_phi_q: inadmissible q (requires q > -(mu+alpha)/2)");
    if (!adm.integrable)
        throw std::domain_error(
            "make_phi_q: inadmissible q (requires q + (mu-1)/2 - "
            "(1-alpha)|nu| > -1 for endpoint integrability)");
    TestFunction tf;
    tf.kind = TestFunction::Kind::PhiQ;
    tf.m = m;
    tf.q = q;
    tf.nu = ctx.nu;
    return tf;
}

double lambda_value(const ModelParams& m, double t) {
    const BesselContext ctx = bessel_context(m);
    const double s = argument_map(m.alpha, t);
    return std::pow(t, 0.5 * (1.0 - m.mu)) * bessel_k(ctx, s);
}

LambdaDerivs lambda_derivs(const ModelParams& m, double t) {
    const BesselContext ctx = bessel_context(m);
    const double beta = 0.5 * (1.0 - m.mu);
    const double s = argument_map(m.alpha, t);
    const double sp = std::pow(t, -m.alpha);             // ds/dt
    const double spp = -m.alpha * std::pow(t, -m.alpha - 1.0);
    const BesselDerivs d = bessel_k_derivs(ctx, s);
    const double tb = std::pow(t, beta);
    LambdaDerivs out;
    out.l = tb * d.K;
    out.lp = beta * tb / t * d.K + tb * d.Kp * sp;
    out.lpp = beta * (beta - 1.0) * tb / (t * t) * d.K +
              2.0 * beta * tb / t * d.Kp * sp +
              tb * (d.Kpp * sp * sp + d.Kp * spp);
    return out;
}

double phi(const TestFunction& tf, double t, double r) {
    if (tf.kind == TestFunction::Kind::PhiQ) return phi_q(tf, t, r);
    return lambda_value(tf.m, t) * sphere_integral(tf.m.n, r);
}

double phi_pde_residual(const TestFunction& tf, double t, double r) {
    if (tf.kind != TestFunction::Kind::Phi)
        throw std::domain_error("phi_pde_residual: Phi test function required");
    if (!(t >= 1.0)) throw std::domain_error("phi_pde_residual: t >= 1 required");
    const ModelParams& m = tf.m;
    const LambdaDerivs d = lambda_derivs(m, t);
    const double speed2 = std::pow(t, -2.0 * m.alpha);
    // Delta phi = phi, so the angular factor divides out of the residual.
    const double lhs = d.lpp + m.mu / t * d.lp - speed2 * d.l;
    const double scale =
        std::abs(d.lpp) + std::abs(m.mu / t * d.lp) + speed2 * std::abs(d.l);
    (void)r;
    return std::abs(lhs) / scale;
}

double phi_t_over_phi(const TestFunction& tf, double t) {
    const LambdaDerivs d = lambda_derivs(tf.m, t);
    return d.lp / d.l;
}

double phi_t_ratio_residual(const TestFunction& tf, double t) {
    const ModelParams& m = tf.m;
    const BesselContext ctx = bessel_context(m);
    BesselContext up = ctx;
    up.nu = ctx.nu + 1.0;
    const double s = argument_map(m.alpha, t);
    const double closed =
        -std::pow(t, -m.alpha) * bessel_k(up, s) / bessel_k(ctx, s);
    const double direct = phi_t_over_phi(tf, t);
    return std::abs(direct - closed) / std::abs(closed);
}

double phi_integral_ratio(const TestFunction& tf, double t, double R) {
    if (tf.kind != TestFunction::Kind::Phi)
        throw std::domain_error("phi_integral_ratio: Phi test function required");
    if (!(t >= 1.0) || !(R > 0.0))
        throw std::domain_error("phi_integral_ratio: t >= 1 and R > 0 required");
    const ModelParams& m = tf.m;
    const double rad = lightcone_radius(t, m.alpha) + R;
    const double lam = lambda_value(m, t);
    auto f = [&](double r) {
        return sphere_integral(m.n, r) * std::pow(r, m.n - 1);
    };
    const double vol =
        unit_sphere_area(m.n) * adaptive(f, 0.0, rad, 1e-10, "phi_integral");
    const double expo =
        0.5 * ((1.0 - m.alpha) * (m.n - 1) - (m.mu - m.alpha));
    return lam * vol / std::pow(t + R, expo);
}

namespace {

// Core factor of the eta-integrand: lambda(eta t) (or eta lambda'(eta t) in
// derivative mode) times the angular integral at radius eta^{1-alpha} r.
double phi_q_core(const TestFunction& tf, double t, double r, double eta,
                  bool dt_mode) {
    if (eta < 1e-290) return 0.0;
    const ModelParams& m = tf.m;
    double base;
    if (dt_mode) {
        base = eta * lambda_derivs(m, eta * t).lp;
    } else {
        base = lambda_value(m, eta * t);
    }
    const double val =
        base * sphere_integral(m.n, std::pow(eta, 1.0 - m.alpha) * r);
    return std::isfinite(val) ? val : 0.0;
}

// int_0^1 of the weighted integrand, with the endpoint weight eta^{q-1+mu}
// flattened by eta = sigma^{1/(q+mu)} when q+mu > 0, and the remaining
// (integrable) singularity resolved on a dyadic mesh toward 0.
double phi_q_integral(const TestFunction& tf, double t, double r, bool dt_mode) {
    const double q = tf.q;
    const double mu = tf.m.mu;
    const double qmu = q + mu;
    const double tol = 1e-11;

    auto integrand = [&](double x) {
        if (qmu > 0.0) {
            const double eta = std::pow(x, 1.0 / qmu);
            return phi_q_core(tf, t, r, eta, dt_mode) / qmu;
        }
        return phi_q_core(tf, t, r, x, dt_mode) *
               std::pow(x, q - 1.0 + mu);
    };

    double total = 0.0;
    double hi = 1.0;
    for (int k = 0; k < 600; ++k) {
        const double lo = 0.5 * hi;
        const double panel =
            gl_panel(integrand, lo, 0.5 * (lo + hi)) +
            gl_panel(integrand, 0.5 * (lo + hi), hi);
        if (!std::isfinite(panel)) break;
        total += panel;
        if (k > 8 && std::abs(panel) < tol * std::abs(total)) break;
        hi = lo;
    }
    return total;
}

}  // namespace

double phi_q(const TestFunction& tf, double t, double r) {
    if (tf.kind != TestFunction::Kind::PhiQ)
        throw std::domain_error("phi_q: PhiQ test function required");
    if (!(t >= 1.0) || !(r >= 0.0))
        throw std::domain_error("phi_q: t >= 1 and r >= 0 required");
    return phi_q_integral(tf, t, r, false);
}

double phi_q_dt(const TestFunction& tf, double t, double r) {
    if (tf.kind != TestFunction::Kind::PhiQ)
        throw std::domain_error("phi_q_dt: PhiQ test function required");
    return phi_q_integral(tf, t, r, true);
}

double phi_q_envelope_ratio(const TestFunction& tf, double t, double r) {
    if (tf.kind != TestFunction::Kind::PhiQ)
        throw std::domain_error("phi_q_envelope_ratio: PhiQ test function required");
    const ModelParams& m = tf.m;
    const double a = m.alpha;
    const double q = tf.q;
    const double T = std::pow(t, 1.0 - a);
    const double inner = T - (1.0 - a) * r;
    if (!(inner > 0.0))
        throw std::domain_error(
            "phi_q_envelope_ratio: point outside the light cone domain");
    const double e1 = (q + (m.mu + a) / 2.0) / (1.0 - a);
    const double q_split = 0.5 * ((m.n - 1) * (1.0 - a) - (m.mu + a));
    const double head = std::pow(t, 0.5 * (-m.mu + a));
    double env;
    if (q < q_split) {
        env = head * std::pow(T + r, -e1);
    } else {
        env = head * std::pow(T + r, -0.5 * (m.n - 1)) *
              std::pow(inner, 0.5 * (m.n - 1) - e1);
    }
    return phi_q(tf, t, r) / env;
}

}  // namespace flrw
