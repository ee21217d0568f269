#include "flrwwave/exponents.hpp"

#include <cmath>
#include <stdexcept>

namespace flrw {

namespace {

void require_alpha_lt1(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::domain_error("requires 0 <= alpha < 1");
}

// Larger root of A p^2 - B p - C = 0 with A > 0, C > 0.  B and the
// discriminant root have the same sign under the + branch, so no
// cancellation occurs.
double stable_positive_root(double A, double B, double C) {
    const double disc = B * B + 4.0 * A * C;
    return (B + std::sqrt(disc)) / (2.0 * A);
}

RootDescriptor quadratic_root(double lead, double lin, double con) {
    // Quadratic is -lead p^2 + lin p + con.
    if (lead <= 0.0) return RootDescriptor::all();
    return RootDescriptor::finite(stable_positive_root(lead, lin, con));
}

}  // namespace

double gamma_prime(int n, double p, double alpha, double mu) {
    require_alpha_lt1(alpha);
    const double s = 1.0 - alpha;
    const double lead = n + 1 + (mu - alpha) / s;
    const double lin = n + 1 + (mu + 3.0 * alpha) / s;
    return -p * p * lead + p * lin + 2.0;
}

double gamma_ref(int n, double p, double alpha, double mu) {
    require_alpha_lt1(alpha);
    const double s = 1.0 - alpha;
    const double lead = n - 1 + (mu - alpha) / s;
    const double lin = n + 1 + (mu + 3.0 * alpha) / s;
    return -p * p * lead + p * lin + 2.0;
}

RootDescriptor p_c_prime(int n, double alpha, double mu) {
    require_alpha_lt1(alpha);
    const double s = 1.0 - alpha;
    return quadratic_root(n + 1 + (mu - alpha) / s,
                          n + 1 + (mu + 3.0 * alpha) / s, 2.0);
}

RootDescriptor p_c_ref(int n, double alpha, double mu) {
    require_alpha_lt1(alpha);
    const double s = 1.0 - alpha;
    return quadratic_root(n - 1 + (mu - alpha) / s,
                          n + 1 + (mu + 3.0 * alpha) / s, 2.0);
}

double p_glassey(double d) {
    if (!(d > 1.0)) throw std::domain_error("p_G(d) requires d > 1");
    return 1.0 + 2.0 / (d - 1.0);
}

double p_glassey_prime(int n, double alpha, double mu) {
    require_alpha_lt1(alpha);
    return 1.0 + 2.0 / ((1.0 - alpha) * (n - 1) + mu + alpha);
}

double p_zero(int n, double alpha, double mu) {
    require_alpha_lt1(alpha);
    return 1.0 + 1.0 / (n * (1.0 - alpha) + mu);
}

std::optional<double> p_zero_prime(int n, double alpha, double mu) {
    require_alpha_lt1(alpha);
    const double den = (n + 1) * (1.0 - alpha) + mu - 1.0;
    if (den <= 0.0) return std::nullopt;
    return 1.0 + (1.0 + alpha) / den;
}

double p_fujita_prime(int n, double alpha) {
    require_alpha_lt1(alpha);
    return 1.0 + (1.0 + alpha) / ((n + 1) * (1.0 - alpha));
}

double p_fujita_ref(int n, double alpha) {
    require_alpha_lt1(alpha);
    return 1.0 + 2.0 / (n * (1.0 - alpha));
}

double mu_crossing(int n, double alpha) {
    return alpha * (n + 2) - (n + 1);
}

double mu_star(int n, double alpha) {
    const double s = 1.0 - alpha;
    const double k = (n + 1) * s;
    return k + alpha - 2.0 * (n + 1) * s * s / (k + 1.0 + alpha);
}

double mu_zero(int n, double alpha) {
    return -(n - 1) * (1.0 - alpha) + std::sqrt(3.0 * alpha * alpha - 4.0 * alpha + 2.0);
}

ExponentSet threshold_set(int n, double alpha, double mu) {
    require_alpha_lt1(alpha);
    if (n < 2) throw std::domain_error("threshold_set requires n >= 2");
    ExponentSet e;
    e.n = n;
    e.alpha = alpha;
    e.mu = mu;
    e.p_G = p_glassey(static_cast<double>(n));
    e.p_G_prime = p_glassey_prime(n, alpha, mu);
    e.p_0 = p_zero(n, alpha, mu);
    e.p_c_prime = p_c_prime(n, alpha, mu);
    e.p_0_prime = p_zero_prime(n, alpha, mu);
    e.p_F_prime = p_fujita_prime(n, alpha);
    e.p_c_ref = p_c_ref(n, alpha, mu);
    e.p_F_ref = p_fujita_ref(n, alpha);
    e.mu_crossing = flrw::mu_crossing(n, alpha);
    e.mu_star = flrw::mu_star(n, alpha);
    e.mu_zero = flrw::mu_zero(n, alpha);
    return e;
}

double gamma0_prime(int n, double p, double w) {
    if (!(w > -1.0) || !(w <= 1.0))
        throw std::domain_error("gamma0_prime requires -1 < w <= 1");
    const double twoa = 4.0 / (n * (1.0 + w));  // = 2 alpha
    return -p * p * (n + 1 - twoa) + p * (n + 1 + twoa) + 2.0 - twoa;
}

CriticalW critical_w(int n) {
    if (n < 2) throw std::domain_error("critical_w requires n >= 2");
    const double nn = n;
    const double A = nn * nn * nn * (nn + 1);
    const double B = 2.0 * nn * (nn * nn * (nn + 1) - (3 * nn + 4) * (nn - 1));
    const double C = nn * nn * nn * (nn + 1) - 2.0 * nn * (3 * nn + 4) * (nn - 1) +
                     8.0 * (nn * nn - nn - 1);
    const double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) throw std::domain_error("critical_w: no real root");
    // Larger root; use the stable form when B and sqrt(disc) would cancel.
    const double sq = std::sqrt(disc);
    double root;
    if (B <= 0.0)
        root = (-B + sq) / (2.0 * A);
    else
        root = -2.0 * C / (B + sq);
    CriticalW out;
    out.value = root;
    out.in_range = (root > -1.0 && root <= 1.0);
    return out;
}

ExponentSet flrw_thresholds(int n, double w) {
    if (!(w > -1.0) || !(w <= 1.0))
        throw std::domain_error("flrw_thresholds requires -1 < w <= 1");
    const double alpha = 2.0 / (n * (1.0 + w));
    const double mu = 2.0 / (1.0 + w);
    if (!(alpha < 1.0))
        throw std::domain_error(
            "flrw_thresholds: derived alpha >= 1 (accelerating regime); the "
            "alpha < 1 thresholds are undefined there");
    return threshold_set(n, alpha, mu);
}

}  // namespace flrw
