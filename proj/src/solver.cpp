#include "flrwwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flrwwave/exponents.hpp"
#include "flrwwave/specfun.hpp"

namespace flrw {

double bump(double s) {
    const double a = std::abs(s);
    if (a >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - a * a));
}

namespace {

struct Grid {
    int N;        // last index; r_i = i dr, i = 0..N
    double dr;
    double r_max;
};

Grid make_grid(const SolverConfig& cfg) {
    if (!(cfg.dr > 0.0)) throw std::invalid_argument("solver: dr > 0 required");
    if (!(cfg.t_max > 1.0)) throw std::invalid_argument("solver: t_max > 1 required");
    double r_max = cfg.r_max;
    const double needed = cfg.model.R + lightcone_radius(cfg.t_max, cfg.model.alpha) +
                          10.0 * cfg.dr;
    if (r_max <= 0.0) r_max = needed;
    if (r_max < needed)
        throw std::invalid_argument(
            "solver: r_max must cover R + lightcone_radius(t_max) + 10 dr");
    Grid g;
    g.dr = cfg.dr;
    g.N = static_cast<int>(std::ceil(r_max / cfg.dr));
    g.r_max = g.N * cfg.dr;
    return g;
}

double sup_abs(const std::vector<double>& a) {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

// d/dt of (u, v) at time t into (du, dv).
void rhs(const SolverConfig& cfg, const Grid& g, double t,
         const std::vector<double>& u, const std::vector<double>& v,
         std::vector<double>& du, std::vector<double>& dv) {
    const int n = cfg.model.n;
    const double inv_dr2 = 1.0 / (g.dr * g.dr);
    const double speed2 = std::pow(t, -2.0 * cfg.model.alpha);
    const double damp = cfg.model.mu / t;
    const double p = cfg.model.p;
    const bool td = cfg.model.nonlinearity == Nonlinearity::TimeDerivative;
    const int N = g.N;

    for (int i = 0; i <= N; ++i) {
        double lap;
        if (i == 0) {
            lap = n * 2.0 * (u[1] - u[0]) * inv_dr2;  // even symmetry at r=0
        } else if (i == N) {
            lap = 0.0;  // Dirichlet boundary, never reached by the cone
        } else {
            const double urr = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_dr2;
            const double ur = (u[i + 1] - u[i - 1]) / (2.0 * g.dr);
            lap = urr + (n - 1) * ur / (i * g.dr);
        }
        double nl = 0.0;
        if (!cfg.linear) {
            if (td) {
                if (v[i] != 0.0) nl = std::pow(std::abs(v[i]), p);
            } else if (i > 0 && i < N) {
                const double ur = (u[i + 1] - u[i - 1]) / (2.0 * g.dr);
                if (ur != 0.0) nl = std::pow(std::abs(ur), p);
            }
        }
        du[i] = v[i];
        dv[i] = speed2 * lap - damp * v[i] + nl;
    }
    du[N] = 0.0;
    dv[N] = 0.0;
}

struct Scratch {
    std::vector<double> k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v, tu, tv;
    void resize(size_t n) {
        for (auto* a : {&k1u, &k1v, &k2u, &k2v, &k3u, &k3v, &k4u, &k4v, &tu, &tv})
            a->resize(n);
    }
};

double profile_u0(const SolverConfig& cfg, double r) {
    const double b = bump(r / cfg.model.R);
    return cfg.model.epsilon * b * b;
}

double profile_u1(const SolverConfig& cfg, double r) {
    if (cfg.u1_zero) return 0.0;
    const double b = bump(r / cfg.model.R);
    return cfg.model.epsilon * (2.0 * b * b + b);
}

}  // namespace

FieldState init(const SolverConfig& cfg) {
    validate(cfg.model);
    const Grid g = make_grid(cfg);
    FieldState st;
    st.t = 1.0;
    st.u.resize(g.N + 1);
    st.v.resize(g.N + 1);
    for (int i = 0; i <= g.N; ++i) {
        const double r = i * g.dr;
        st.u[i] = profile_u0(cfg, r);
        st.v[i] = profile_u1(cfg, r);
    }

    // Sign hypotheses of the active theorem.
    if (!cfg.linear && cfg.model.epsilon > 0.0) {
        bool need_order = false;  // u1 >= u0 (on top of u1 >= u0 >= 0)
        if (cfg.model.nonlinearity == Nonlinearity::TimeDerivative) {
            need_order = true;
            if (cfg.model.alpha < 1.0 &&
                cfg.model.p < p_zero(cfg.model.n, cfg.model.alpha, cfg.model.mu))
                need_order = false;  // relaxed hypothesis below p_0
        }
        for (int i = 0; i <= g.N; ++i) {
            if (st.u[i] < 0.0 || st.v[i] < 0.0)
                throw std::invalid_argument(
                    "init: data must be nonnegative for the blow-up theorems");
            if (need_order && st.v[i] < st.u[i])
                throw std::invalid_argument(
                    "init: time-derivative nonlinearity requires u_t(1,.) >= "
                    "u(1,.) >= 0 at this p");
        }
    }
    st.prev_sup_v = sup_abs(st.v);
    return st;
}

void step(FieldState& state, const SolverConfig& cfg) {
    if (state.blown_up) throw std::logic_error("step: state already blown up");
    const Grid g = make_grid(cfg);
    const size_t sz = state.u.size();
    thread_local Scratch sc;
    sc.resize(sz);

    const double sup_v = sup_abs(state.v);
    if (state.prev_sup_v > 0.0 && sup_v >= 2.0 * state.prev_sup_v)
        state.dt_scale *= 0.5;  // sup|v| doubled within the previous step
    state.prev_sup_v = sup_v;

    const double t = state.t;
    double dt = cfg.cfl * g.dr * std::min(std::pow(t, cfg.model.alpha), 1.0) *
                state.dt_scale;
    if (dt < 1e-12) {
        state.blown_up = true;  // dt underflow backstop (repeated halving)
        return;
    }
    if (dt > cfg.t_max - t) {
        dt = cfg.t_max - t;  // land exactly on the horizon
        if (dt < 1e-12) {    // negligible remainder, not a blow-up signal
            state.t = cfg.t_max;
            return;
        }
    }

    auto axpy = [&](std::vector<double>& out, const std::vector<double>& base,
                    const std::vector<double>& k, double h) {
        for (size_t i = 0; i < sz; ++i) out[i] = base[i] + h * k[i];
    };

    rhs(cfg, g, t, state.u, state.v, sc.k1u, sc.k1v);
    axpy(sc.tu, state.u, sc.k1u, 0.5 * dt);
    axpy(sc.tv, state.v, sc.k1v, 0.5 * dt);
    rhs(cfg, g, t + 0.5 * dt, sc.tu, sc.tv, sc.k2u, sc.k2v);
    axpy(sc.tu, state.u, sc.k2u, 0.5 * dt);
    axpy(sc.tv, state.v, sc.k2v, 0.5 * dt);
    rhs(cfg, g, t + 0.5 * dt, sc.tu, sc.tv, sc.k3u, sc.k3v);
    axpy(sc.tu, state.u, sc.k3u, dt);
    axpy(sc.tv, state.v, sc.k3v, dt);
    rhs(cfg, g, t + dt, sc.tu, sc.tv, sc.k4u, sc.k4v);

    bool finite = true;
    for (size_t i = 0; i < sz; ++i) {
        state.u[i] += dt / 6.0 * (sc.k1u[i] + 2 * sc.k2u[i] + 2 * sc.k3u[i] + sc.k4u[i]);
        state.v[i] += dt / 6.0 * (sc.k1v[i] + 2 * sc.k2v[i] + 2 * sc.k3v[i] + sc.k4v[i]);
        if (!std::isfinite(state.u[i]) || !std::isfinite(state.v[i])) finite = false;
    }
    state.t = t + dt;
    state.steps += 1;
    if (!finite) state.blown_up = true;
}

DiagRecord diagnostics(const FieldState& state, const SolverConfig& cfg) {
    const Grid g = make_grid(cfg);
    const int n = cfg.model.n;
    const double sigma = unit_sphere_area(n);
    DiagRecord d;
    d.t = state.t;
    double iu = 0.0, iv = 0.0;
    for (int i = 0; i <= g.N; ++i) {
        const double w = (i == 0 || i == g.N) ? 0.5 : 1.0;
        const double rw = std::pow(i * g.dr, n - 1) * g.dr * w;
        iu += state.u[i] * rw;
        iv += state.v[i] * rw;
    }
    d.int_u = sigma * iu;
    d.int_ut = sigma * iv;
    d.sup_v = sup_abs(state.v);
    for (int i = g.N; i >= 0; --i) {
        if (std::abs(state.u[i]) > 1e-12 || std::abs(state.v[i]) > 1e-12) {
            d.support_radius = i * g.dr;
            break;
        }
    }
    return d;
}

double support_check(const FieldState& state, const SolverConfig& cfg) {
    const Grid g = make_grid(cfg);
    const double edge =
        cfg.model.R + lightcone_radius(state.t, cfg.model.alpha) + 3.0 * g.dr;
    double worst = 0.0;
    for (int i = 0; i <= g.N; ++i)
        if (i * g.dr > edge) worst = std::max(worst, std::abs(state.u[i]));
    return worst;
}

namespace {

// Integrate an existing state further until sup|v| crosses `level` (or the
// horizon/dt floor); returns the crossing time, or 0 if none.
double continue_until(FieldState st, const SolverConfig& cfg, double level) {
    while (st.t < cfg.t_max) {
        if (sup_abs(st.v) > level || st.blown_up) return st.t;
        step(st, cfg);
    }
    return st.blown_up ? st.t : 0.0;
}

}  // namespace

SimOutcome run(const SolverConfig& cfg) {
    FieldState st = init(cfg);
    SimOutcome out;
    FieldState at_detect;
    while (st.t < cfg.t_max) {
        const double sup_v = sup_abs(st.v);
        out.max_sup_v = std::max(out.max_sup_v, sup_v);
        if (sup_v > cfg.threshold || st.blown_up) {
            out.blew_up = true;
            out.T_num = st.t;
            at_detect = st;
            break;
        }
        if (st.steps % cfg.diag_every == 0) {
            out.series.push_back(diagnostics(st, cfg));
            out.max_support_violation =
                std::max(out.max_support_violation, support_check(st, cfg));
        }
        step(st, cfg);
    }
    if (!out.blew_up) {
        out.series.push_back(diagnostics(st, cfg));
        out.max_support_violation =
            std::max(out.max_support_violation, support_check(st, cfg));
        return out;
    }
    // Threshold sensitivity: rerun the tail with threshold x100.
    const double t2 = continue_until(at_detect, cfg, cfg.threshold * 100.0);
    if (t2 > 0.0) {
        out.sensitivity_shift = (t2 - out.T_num) / out.T_num;
        out.tnum_converged = out.sensitivity_shift < 0.01;
    }
    return out;
}

double dalembert_reference(const SolverConfig& cfg, double t, double r) {
    if (cfg.model.n != 3 || cfg.model.alpha != 0.0 || cfg.model.mu != 0.0 ||
        !cfg.linear)
        throw std::domain_error(
            "dalembert_reference: linear n=3, alpha=0, mu=0 setup required");
    const double s = t - 1.0;
    auto F = [&](double rho) {  // odd extension of r u0(r)
        return rho * profile_u0(cfg, std::abs(rho));
    };
    auto H = [&](double x) {  // int_0^{|x|} rho u1(rho) d rho  (even)
        const double ax = std::min(std::abs(x), cfg.model.R);
        if (ax <= 0.0) return 0.0;
        // 64-interval Simpson rule is ample for the smooth bump profile.
        const int m = 64;
        const double h = ax / m;
        double acc = 0.0;
        for (int i = 0; i <= m; ++i) {
            const double rho = i * h;
            const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            acc += w * rho * profile_u1(cfg, rho);
        }
        return acc * h / 3.0;
    };
    const double rr = (r < 1e-9) ? 1e-6 : r;
    return (F(rr + s) + F(rr - s)) / (2.0 * rr) +
           (H(rr + s) - H(std::abs(rr - s))) / (2.0 * rr);
}

double convergence_order(const SolverConfig& cfg) {
    if (cfg.model.n != 3 || cfg.model.alpha != 0.0 || cfg.model.mu != 0.0 ||
        !cfg.linear)
        throw std::domain_error(
            "convergence_order: linear n=3, alpha=0, mu=0 setup required");
    double errs[3];
    for (int k = 0; k < 3; ++k) {
        SolverConfig c = cfg;
        c.dr = cfg.dr / (1 << k);
        FieldState st = init(c);
        while (st.t < c.t_max && !st.blown_up) step(st, c);
        const Grid g = make_grid(c);
        double e = 0.0;
        for (int i = 1; i <= g.N; ++i)
            e = std::max(e, std::abs(st.u[i] -
                                     dalembert_reference(c, st.t, i * g.dr)));
        errs[k] = e;
    }
    if (errs[2] == 0.0) return 2.0;  // zero data: exact at all resolutions
    return std::log2(errs[1] / errs[2]);
}

}  // namespace flrw
