#include "flrwwave/kato.hpp"

#include <cmath>
#include <stdexcept>

namespace flrw {

namespace {

void check_common(const KatoProblem& prob) {
    if (!(prob.p > 1.0)) throw std::domain_error("kato: p > 1 required");
    if (!(prob.A0 > 0.0 && prob.A1 > 0.0 && prob.R > 0.0))
        throw std::domain_error("kato: A0, A1, R > 0 required");
    if (!(prob.mu >= 0.0)) throw std::domain_error("kato: mu >= 0 required");
}

double log_CRq(const KatoProblem& prob) {
    return -prob.q * std::log1p(prob.R);
}

}  // namespace

double exponent_M(const KatoProblem& prob) {
    check_common(prob);
    switch (prob.order) {
        case KatoOrder::FirstOrder:
            return (prob.p - 1.0) * (prob.c - prob.a) - prob.q + 1.0;
        case KatoOrder::SecondOrder:
            return (prob.p - 1.0) * (prob.b - prob.a) - prob.q + 2.0;
        case KatoOrder::SecondOrderLogQ:
            return (prob.p - 1.0) * (prob.c - prob.a) + 2.0;
        case KatoOrder::SecondOrderLog:
            throw std::domain_error("exponent_M: not defined for the log-lower-bound lemma");
    }
    throw std::logic_error("unreachable");
}

KatoIteration iterate(const KatoProblem& prob, int j) {
    check_common(prob);
    if (j < 0 || j > 10000) throw std::domain_error("kato: 0 <= j <= 1e4 required");
    KatoIteration it;
    it.a_j = prob.a;
    it.b_j = prob.b;
    it.c_j = prob.c;
    it.log_D_j = std::log(prob.A0);
    const double lcrq = log_CRq(prob);
    for (int k = 0; k < j; ++k) {
        const double log_D_next = std::log(prob.A1) + lcrq + prob.p * it.log_D_j -
                                  std::log(prob.p * it.c_j + prob.mu + 1.0);
        it.a_j = prob.p * it.a_j + prob.mu + prob.q;
        it.b_j = prob.p * it.b_j + prob.r;
        it.c_j = prob.p * it.c_j + prob.mu + 1.0;
        it.log_D_j = log_D_next;
    }
    it.j = j;
    return it;
}

KatoIteration closed_form(const KatoProblem& prob, int j) {
    check_common(prob);
    if (j < 0 || j > 10000) throw std::domain_error("kato: 0 <= j <= 1e4 required");
    const double p = prob.p;
    const double pj = std::pow(p, j);
    const double sa = (prob.mu + prob.q) / (p - 1.0);
    const double sb = prob.r / (p - 1.0);
    const double sc = (prob.mu + 1.0) / (p - 1.0);
    KatoIteration it;
    it.j = j;
    it.a_j = pj * (prob.a + sa) - sa;
    it.b_j = pj * (prob.b + sb) - sb;
    it.c_j = pj * (prob.c + sc) - sc;
    // ln D_j from unrolling D_{k+1} = A1 C_Rq D_k^p / c_{k+1}:
    //   ln D_j = p^j ln A0 + sum_{k=0}^{j-1} p^k { ln(A1 C_Rq) - ln c_{j-k} }.
    const double lb = std::log(prob.A1) + log_CRq(prob);
    double acc = 0.0;
    for (int k = 0; k < j; ++k) {
        const double c_next = std::pow(p, j - k) * (prob.c + sc) - sc;
        acc += std::pow(p, k) * (lb - std::log(c_next));
    }
    it.log_D_j = pj * std::log(prob.A0) + acc;
    return it;
}

double growth_E(const KatoProblem& prob) {
    check_common(prob);
    const double p = prob.p;
    const double logB = std::log(prob.A1) + log_CRq(prob) -
                        std::log(prob.c + (prob.mu + 1.0) / (p - 1.0));
    // sum_{k>=0} k p^{-k} = p/(p-1)^2
    const double series = p / ((p - 1.0) * (p - 1.0));
    return std::min(0.0, logB) / (p - 1.0) - series * std::log(p) + std::log(prob.A0);
}

KatoBound lifespan_bound(const KatoProblem& prob) {
    check_common(prob);
    const double p = prob.p;
    KatoBound out;
    switch (prob.order) {
        case KatoOrder::FirstOrder: {
            const double M = exponent_M(prob);
            if (!(M > 0.0)) throw std::domain_error("kato: M = (p-1)(c-a)-q+1 must be > 0");
            const double l = prob.b + prob.r / (p - 1.0);
            if (l == 0.0) {
                out.kind = KatoBound::Kind::PowerLaw;
                out.k = (p - 1.0) / M;
            } else {
                out.kind = KatoBound::Kind::ImplicitPowerLog;
                out.s = M / (p - 1.0);
                out.l = l;
                out.m = 1.0;
            }
            return out;
        }
        case KatoOrder::SecondOrder: {
            const double M = exponent_M(prob);
            if (!(M > 0.0)) throw std::domain_error("kato: M = (p-1)(b-a)-q+2 must be > 0");
            out.kind = KatoBound::Kind::PowerLaw;
            out.k = (p - 1.0) / M;
            return out;
        }
        case KatoOrder::SecondOrderLog: {
            if (!(prob.b > 0.0)) throw std::domain_error("kato: b > 0 required");
            out.kind = KatoBound::Kind::Exponential;
            const double den = (prob.mu <= 1.0) ? prob.b * (p - 1.0) + 2.0
                                                : prob.b * (p - 1.0) + 1.0;
            out.rate = (p - 1.0) / den;
            return out;
        }
        case KatoOrder::SecondOrderLogQ: {
            const double M = exponent_M(prob);
            if (!(M > 0.0)) throw std::domain_error("kato: M = (p-1)(c-a)+2 must be > 0");
            const double l = prob.b + prob.q / (p - 1.0);
            if (l == 0.0) {
                out.kind = KatoBound::Kind::PowerLaw;
                out.k = (p - 1.0) / M;
            } else {
                out.kind = KatoBound::Kind::ImplicitPowerLog;
                out.s = M / (p - 1.0);
                out.l = l;
                out.m = 1.0;
            }
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

double bracket_value(const KatoProblem& prob, double t) {
    const double p = prob.p;
    const double E = growth_E(prob);
    return E + (prob.c + (prob.mu + 1.0) / (p - 1.0)) * std::log(t - prob.T1) -
           (prob.a + (prob.mu + prob.q) / (p - 1.0)) * std::log(t) -
           (prob.b + prob.r / (p - 1.0)) * std::log(std::log(t));
}

DivergenceResult divergence_time(const KatoProblem& prob, double delta, double horizon) {
    if (prob.order != KatoOrder::FirstOrder)
        throw std::domain_error("divergence_time: first-order problems only");
    const double M = exponent_M(prob);
    if (!(M > 0.0)) throw std::domain_error("divergence_time: M > 0 required");
    double lo = prob.T1 + 1.0;
    if (bracket_value(prob, lo) >= delta) return {true, lo};
    double hi = lo;
    // Bracket is increasing in t for t > T1 + 1 when M > 0.
    while (bracket_value(prob, hi) < delta) {
        hi = prob.T1 + 2.0 * (hi - prob.T1);
        if (hi > horizon) return {false, 0.0};
    }
    for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (bracket_value(prob, mid) < delta ? lo : hi) = mid;
    }
    return {true, hi};
}

namespace {

struct OdeState {
    double F;
    double Fp;  // unused for first order
};

}  // namespace

OracleResult ode_oracle(const KatoProblem& prob, double F0, double F0p,
                        double horizon, double threshold) {
    check_common(prob);
    const bool second = prob.order == KatoOrder::SecondOrder ||
                        prob.order == KatoOrder::SecondOrderLog ||
                        prob.order == KatoOrder::SecondOrderLogQ;
    if (!(F0 > 0.0)) throw std::domain_error("ode_oracle: F(T0) > 0 required");
    if (second && !(F0p > 0.0))
        throw std::domain_error("ode_oracle: F'(T0) > 0 required for second order");
    if (prob.r > 0.0 && !(prob.T0 > 1.0))
        throw std::domain_error("ode_oracle: r > 0 needs T0 > 1 (log weight)");

    const double p = prob.p;
    auto forcing = [&](double t) {
        double w = prob.A1;
        switch (prob.order) {
            case KatoOrder::FirstOrder:
                w *= std::pow(t + prob.R, -prob.q);
                if (prob.r > 0.0) w *= std::pow(std::log(t), -prob.r);
                break;
            case KatoOrder::SecondOrder:
                w *= std::pow(t + prob.R, -prob.q);
                break;
            case KatoOrder::SecondOrderLog:
                w *= std::pow(t + prob.R, -2.0);
                break;
            case KatoOrder::SecondOrderLogQ:
                if (prob.q > 0.0) w *= std::pow(std::log(t), -prob.q);
                break;
        }
        return w;
    };
    auto rhs = [&](double t, const OdeState& s) {
        OdeState d;
        const double nl = forcing(t) * std::pow(std::abs(s.F), p);
        if (second) {
            d.F = s.Fp;
            d.Fp = -prob.mu / t * s.Fp + nl;
        } else {
            d.F = -prob.mu / t * s.F + nl;
            d.Fp = 0.0;
        }
        return d;
    };

    double t = prob.T0;
    OdeState s{F0, F0p};
    double dt = 1e-3 * std::max(1.0, t);
    const double eta = 0.01;  // per-step relative growth target
    while (t < horizon) {
        if (!std::isfinite(s.F) || s.F > threshold) return {true, t};
        // Characteristic time scale of the fastest variable.
        const OdeState d0 = rhs(t, s);
        double scale = eta * t;
        if (d0.F != 0.0) scale = std::min(scale, eta * std::abs(s.F / d0.F));
        if (second && d0.Fp != 0.0 && s.Fp != 0.0)
            scale = std::min(scale, eta * std::abs(s.Fp / d0.Fp));
        dt = std::min(2.0 * dt, std::max(scale, 1e-300));
        for (;;) {
            const OdeState k1 = d0;
            auto shift = [&](const OdeState& k, double h) {
                return OdeState{s.F + h * k.F, s.Fp + h * k.Fp};
            };
            const OdeState k2 = rhs(t + 0.5 * dt, shift(k1, 0.5 * dt));
            const OdeState k3 = rhs(t + 0.5 * dt, shift(k2, 0.5 * dt));
            const OdeState k4 = rhs(t + dt, shift(k3, dt));
            OdeState ns{s.F + dt / 6.0 * (k1.F + 2 * k2.F + 2 * k3.F + k4.F),
                        s.Fp + dt / 6.0 * (k1.Fp + 2 * k2.Fp + 2 * k3.Fp + k4.Fp)};
            if (std::isfinite(ns.F) && std::abs(ns.F) > 2.0 * std::abs(s.F) &&
                dt > 1e-14 * t) {
                dt *= 0.5;  // halve when F doubles within a step
                continue;
            }
            if (dt <= 1e-14 * t) return {true, t};  // dt underflow near blow-up
            s = ns;
            t += dt;
            break;
        }
    }
    return {false, 0.0};
}

}  // namespace flrw
