#include "flrwwave/lifespan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace flrw {

namespace {

bool near(double p, double thr) {
    return std::abs(p - thr) <= kCriticalTol * std::max(1.0, std::abs(thr));
}

LifespanBound power(BoundSource src, double k, std::string cond, bool applicable) {
    LifespanBound b;
    b.source = src;
    b.kind = BoundKind::PowerLaw;
    b.k = k;
    b.condition = std::move(cond);
    b.applicable = applicable;
    return b;
}

LifespanBound exponential(BoundSource src, double rate, std::string cond, bool applicable) {
    LifespanBound b;
    b.source = src;
    b.kind = BoundKind::Exponential;
    b.rate = rate;
    b.condition = std::move(cond);
    b.applicable = applicable;
    return b;
}

LifespanBound implicit(BoundSource src, double s, double l, double m,
                       std::string cond, bool applicable) {
    LifespanBound b;
    b.source = src;
    b.kind = BoundKind::ImplicitPowerLog;
    b.s = s;
    b.l = l;
    b.m = m;
    b.condition = std::move(cond);
    b.applicable = applicable;
    return b;
}

}  // namespace

std::string bound_source_name(BoundSource s) {
    switch (s) {
        case BoundSource::GlasseySubcritical: return "glassey-subcritical";
        case BoundSource::GlasseyCritical: return "glassey-critical";
        case BoundSource::ZeroOrderSubcritical: return "zero-order-subcritical";
        case BoundSource::TdLogLifespan: return "td-log-lifespan";
        case BoundSource::TdAcceleratedPower: return "td-accelerated-power";
        case BoundSource::WaveSubcritical: return "wavelike-subcritical";
        case BoundSource::SecondarySubcritical: return "secondary-subcritical";
        case BoundSource::WaveCritical: return "wavelike-critical";
        case BoundSource::HeatSubcritical: return "heatlike-subcritical";
        case BoundSource::HeatCritical: return "heatlike-critical";
        case BoundSource::SdLogLifespan: return "sd-log-lifespan";
        case BoundSource::SdAcceleratedPower: return "sd-accelerated-power";
    }
    return "?";
}

std::string region_label_name(RegionLabel r) {
    switch (r) {
        case RegionLabel::G: return "G";
        case RegionLabel::O: return "O";
        case RegionLabel::C: return "C";
        case RegionLabel::F: return "F";
        case RegionLabel::A: return "A";
        case RegionLabel::NoBlowupResult: return "none";
    }
    return "?";
}

double LifespanBound::effective_k() const {
    switch (kind) {
        case BoundKind::PowerLaw: return k;
        case BoundKind::ImplicitPowerLog: return m / s;
        case BoundKind::Exponential: return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

std::vector<LifespanBound> applicable_bounds(const ModelParams& m) {
    validate(m);
    std::vector<LifespanBound> out;
    const int n = m.n;
    const double alpha = m.alpha;
    const double mu = m.mu;
    const double p = m.p;

    if (m.nonlinearity == Nonlinearity::TimeDerivative) {
        if (alpha < 1.0) {
            const double pg = p_glassey_prime(n, alpha, mu);
            const double p0 = p_zero(n, alpha, mu);
            const double D = (1.0 - alpha) * (n - 1) + mu + alpha;
            const bool sub = p < pg && !near(p, pg);
            out.push_back(power(BoundSource::GlasseySubcritical,
                                sub ? (p - 1.0) / (1.0 - D * (p - 1.0) / 2.0) : 0.0,
                                "1 < p < p_G'(n,alpha,mu)", sub));
            out.push_back(exponential(BoundSource::GlasseyCritical, p - 1.0,
                                      "p = p_G'(n,alpha,mu)", near(p, pg)));
            const bool sub0 = p < p0 && !near(p, p0);
            LifespanBound b0 =
                power(BoundSource::ZeroOrderSubcritical,
                      sub0 ? (p - 1.0) / (1.0 - (p - 1.0) * (n * (1.0 - alpha) + mu)) : 0.0,
                      "1 < p < p_0(n,alpha,mu)", sub0);
            b0.weak_data_ok = true;
            out.push_back(b0);
        } else {
            const bool ok = (mu == 0.0) || p < 1.0 + 1.0 / mu;
            if (alpha == 1.0) {
                LifespanBound b = implicit(BoundSource::TdLogLifespan,
                                           1.0 - mu * (p - 1.0), n * (p - 1.0), p - 1.0,
                                           "alpha = 1, 1 < p < 1 + 1/mu", ok);
                b.weak_data_ok = true;
                out.push_back(b);
            } else {
                LifespanBound b =
                    power(BoundSource::TdAcceleratedPower,
                          ok ? (p - 1.0) / (1.0 - mu * (p - 1.0)) : 0.0,
                          "alpha > 1, 1 < p < 1 + 1/mu", ok);
                b.weak_data_ok = true;
                out.push_back(b);
            }
        }
    } else {  // SpaceDerivative
        if (alpha < 1.0) {
            const RootDescriptor pc = p_c_prime(n, alpha, mu);
            const double pF = p_fujita_prime(n, alpha);
            const auto p0p = p_zero_prime(n, alpha, mu);
            const double g = gamma_prime(n, p, alpha, mu);

            const bool wave_sub =
                pc.all_p || (p < pc.value && !near(p, pc.value));
            out.push_back(power(BoundSource::WaveSubcritical,
                                wave_sub ? 2.0 * p * (p - 1.0) / ((1.0 - alpha) * g) : 0.0,
                                "1 < p < p_c'(n,alpha,mu)", wave_sub));

            const double c1 = 1.0 - mu - (n + 1) * (1.0 - alpha);
            const bool sec_sub = p0p.has_value() && p < *p0p && !near(p, *p0p);
            out.push_back(power(BoundSource::SecondarySubcritical,
                                sec_sub ? (p - 1.0) / (c1 * (p - 1.0) + 1.0 + alpha) : 0.0,
                                "1 < p < p_0'(n,alpha,mu)", sec_sub));

            bool wave_crit = !pc.all_p && near(p, pc.value) &&
                             m.R <= 1.0 / (2.0 * (1.0 - alpha));
            if (wave_crit) {
                if (n >= 3)
                    wave_crit = pc.value > pF;
                else
                    wave_crit = alpha > 2.0 / 7.0 && pc.value > std::max(pF, 2.0);
            }
            out.push_back(exponential(BoundSource::WaveCritical, p * (p - 1.0),
                                      "p = p_c'(n,alpha,mu) > p_F'(n,alpha)", wave_crit));

            const bool heat_sub = p < pF && !near(p, pF);
            out.push_back(power(
                BoundSource::HeatSubcritical,
                heat_sub ? (p - 1.0) / (2.0 - (n * (p - 1.0) + p) * (1.0 - alpha)) : 0.0,
                "1 < p < p_F'(n,alpha)", heat_sub));

            const double crit_rate = (mu <= 1.0) ? p * (p - 1.0) / (p + 1.0) : p - 1.0;
            out.push_back(exponential(BoundSource::HeatCritical, crit_rate,
                                      "p = p_F'(n,alpha)", near(p, pF)));
        } else if (alpha == 1.0) {
            out.push_back(implicit(BoundSource::SdLogLifespan, 2.0,
                                   p + n * (p - 1.0), p - 1.0, "alpha = 1, p > 1", true));
        } else {
            out.push_back(power(BoundSource::SdAcceleratedPower, (p - 1.0) / 2.0,
                                "alpha > 1, p > 1", true));
        }
    }
    return out;
}

LifespanBound best_bound(const std::vector<LifespanBound>& bounds) {
    const LifespanBound* best = nullptr;
    for (const auto& b : bounds) {
        if (!b.applicable) continue;
        if (!best || b.effective_k() < best->effective_k()) best = &b;
    }
    if (!best) throw std::domain_error("best_bound: no applicable bound");
    return *best;
}

RegionResult classify_region(const ModelParams& m) {
    RegionResult res;
    const auto bounds = applicable_bounds(m);
    bool any = std::any_of(bounds.begin(), bounds.end(),
                           [](const LifespanBound& b) { return b.applicable; });
    if (!any) return res;
    const LifespanBound w = best_bound(bounds);
    res.winner = w;
    if (m.alpha >= 1.0) {
        res.label = RegionLabel::A;
        return res;
    }
    switch (w.source) {
        case BoundSource::GlasseySubcritical:
        case BoundSource::GlasseyCritical:
            res.label = RegionLabel::G;
            break;
        case BoundSource::ZeroOrderSubcritical:
        case BoundSource::SecondarySubcritical:
            res.label = RegionLabel::O;
            break;
        case BoundSource::WaveSubcritical:
        case BoundSource::WaveCritical:
            res.label = RegionLabel::C;
            break;
        case BoundSource::HeatSubcritical:
        case BoundSource::HeatCritical:
            res.label = RegionLabel::F;
            break;
        default:
            res.label = RegionLabel::A;
            break;
    }
    return res;
}

BoundValue bound_value(const LifespanBound& b, double epsilon) {
    if (!(epsilon > 0.0)) throw std::domain_error("bound_value: epsilon > 0 required");
    if (!b.applicable) throw std::domain_error("bound_value: bound not applicable");
    BoundValue out;
    switch (b.kind) {
        case BoundKind::PowerLaw:
            out.value = std::pow(epsilon, -b.k);
            return out;
        case BoundKind::Exponential:
            out.value = std::exp(std::pow(epsilon, -b.rate));
            return out;
        case BoundKind::ImplicitPowerLog: {
            out.implicit = true;
            if (b.s <= 0.0) {
                out.nonunique = true;
                return out;
            }
            // Solve s x - l ln x = -m ln(eps) for x = ln T on the increasing
            // branch x > max(1, l/s).
            const double rhs = -b.m * std::log(epsilon);
            const double x0 = std::max(1.0, b.l / b.s) + 1e-12;
            auto g = [&](double x) { return b.s * x - b.l * std::log(x); };
            if (g(x0) >= rhs) {
                out.value = std::exp(x0);
                return out;
            }
            double lo = x0, hi = x0;
            while (g(hi) < rhs) hi *= 2.0;
            for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
                const double mid = 0.5 * (lo + hi);
                (g(mid) < rhs ? lo : hi) = mid;
            }
            out.value = std::exp(0.5 * (lo + hi));
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

KatoProblem kato_instantiation(BoundSource src, const ModelParams& m) {
    const int n = m.n;
    const double alpha = m.alpha;
    const double mu = m.mu;
    const double p = m.p;
    KatoProblem k;
    k.p = p;
    k.mu = mu;
    k.A0 = std::pow(m.epsilon, p);
    k.A1 = 1.0;
    k.R = m.R;
    k.T0 = 1.0;
    k.T1 = 2.0;
    switch (src) {
        case BoundSource::ZeroOrderSubcritical:
            k.order = KatoOrder::FirstOrder;
            k.q = n * (1.0 - alpha) * (p - 1.0);
            k.a = mu * (p + 1.0) + k.q;
            k.b = k.r = 0.0;
            k.c = mu + 1.0;
            return k;
        case BoundSource::TdLogLifespan:
            k.order = KatoOrder::FirstOrder;
            k.q = 0.0;
            k.a = mu * (p + 1.0);
            k.b = k.r = n * (p - 1.0);
            k.c = mu + 1.0;
            k.T0 = 2.0;
            return k;
        case BoundSource::TdAcceleratedPower:
            k.order = KatoOrder::FirstOrder;
            k.q = 0.0;
            k.a = mu * (p + 1.0);
            k.b = k.r = 0.0;
            k.c = mu + 1.0;
            return k;
        case BoundSource::WaveSubcritical:
            k.order = KatoOrder::SecondOrder;
            k.q = (p + n * (p - 1.0)) * (1.0 - alpha);
            k.a = mu * (1.0 + p / 2.0) + (1.0 - alpha) * (n - 1) * p / 2.0 +
                  p * (1.0 - alpha);
            k.b = mu + alpha * p / 2.0 + (1.0 - alpha) * (n - 1) + 2.0;
            return k;
        case BoundSource::SecondarySubcritical:
            k.order = KatoOrder::SecondOrder;
            k.q = (p + n * (p - 1.0)) * (1.0 - alpha);
            k.a = k.q + p * mu;
            k.b = p + 2.0;
            return k;
        case BoundSource::HeatSubcritical:
            k.order = KatoOrder::SecondOrder;
            k.q = (p + n * (p - 1.0)) * (1.0 - alpha);
            k.a = mu + k.q;
            k.b = mu + 2.0;
            return k;
        case BoundSource::HeatCritical:
            k.order = KatoOrder::SecondOrderLog;
            k.b = 1.0;
            k.T1 = 2.0;
            return k;
        case BoundSource::SdLogLifespan:
            k.order = KatoOrder::SecondOrderLogQ;
            k.a = mu;
            k.b = k.q = p + n * (p - 1.0);
            k.c = mu + 2.0;
            k.T0 = 2.0;
            return k;
        case BoundSource::SdAcceleratedPower:
            k.order = KatoOrder::SecondOrderLogQ;
            k.a = mu;
            k.b = k.q = 0.0;
            k.c = mu + 2.0;
            return k;
        default:
            throw std::domain_error(
                "kato_instantiation: bound is not proved via a Kato lemma");
    }
}

namespace {

void emit_curve(std::vector<CurvePoint>& curves, const std::string& name, double x,
                double p, const GridSpec& spec) {
    if (!(p >= 1.0) || !(p <= spec.p_max)) return;
    curves.push_back({name, x, p});
}

void vertical_curve(std::vector<CurvePoint>& curves, const std::string& name,
                    double x, const GridSpec& spec, int samples = 64) {
    if (x < spec.x_min || x > spec.x_max) return;
    for (int i = 0; i <= samples; ++i) {
        const double p = spec.p_min + (spec.p_max - spec.p_min) * i / samples;
        curves.push_back({name, x, p});
    }
}

ModelParams grid_point(const GridSpec& spec, double x, double p) {
    ModelParams m;
    m.p = p;
    m.epsilon = 0.01;
    m.R = spec.R;
    m.nonlinearity = spec.nonlinearity;
    m.n = spec.n;
    if (spec.axis == GridSpec::Axis::Mu) {
        m.alpha = spec.alpha;
        m.mu = x;
    } else {
        m.alpha = 2.0 / (spec.n * (1.0 + x));
        m.mu = 2.0 / (1.0 + x);
    }
    return m;
}

}  // namespace

RegionGrid region_grid(const GridSpec& spec) {
    if (spec.resolution < 1) throw std::domain_error("region_grid: resolution >= 1");
    if (!(spec.x_min <= spec.x_max) || !(spec.p_min < spec.p_max))
        throw std::domain_error("region_grid: invalid ranges");
    if (spec.axis == GridSpec::Axis::W && !(spec.x_min > -1.0))
        throw std::domain_error("region_grid: w range must stay above -1");
    RegionGrid out;
    const int res = spec.resolution;
    for (int i = 0; i < res; ++i) {
        const double x = spec.x_min + (spec.x_max - spec.x_min) * (i + 0.5) / res;
        for (int j = 0; j < res; ++j) {
            const double p = spec.p_min + (spec.p_max - spec.p_min) * (j + 0.5) / res;
            const ModelParams m = grid_point(spec, x, p);
            const RegionResult r = classify_region(m);
            GridRow row;
            row.x = x;
            row.p = p;
            row.region = r.label;
            if (r.winner) {
                switch (r.winner->kind) {
                    case BoundKind::PowerLaw: row.bound_kind = "power"; break;
                    case BoundKind::Exponential: row.bound_kind = "exp"; break;
                    case BoundKind::ImplicitPowerLog: row.bound_kind = "power-log"; break;
                }
                row.value = (r.winner->kind == BoundKind::Exponential)
                                ? r.winner->rate
                                : r.winner->effective_k();
            } else {
                row.bound_kind = "none";
            }
            out.rows.push_back(row);
        }
    }

    // Boundary curves for plotting.
    const int cs = 400;
    const int n = spec.n;
    if (spec.axis == GridSpec::Axis::Mu) {
        const double alpha = spec.alpha;
        for (int i = 0; i <= cs; ++i) {
            const double mu = spec.x_min + (spec.x_max - spec.x_min) * i / cs;
            if (spec.nonlinearity == Nonlinearity::TimeDerivative) {
                emit_curve(out.curves, "p_G_prime", mu, p_glassey_prime(n, alpha, mu), spec);
                emit_curve(out.curves, "p_0", mu, p_zero(n, alpha, mu), spec);
            } else {
                const auto pc = p_c_prime(n, alpha, mu);
                if (!pc.all_p) emit_curve(out.curves, "p_c_prime", mu, pc.value, spec);
                if (auto p0p = p_zero_prime(n, alpha, mu))
                    emit_curve(out.curves, "p_0_prime", mu, *p0p, spec);
                emit_curve(out.curves, "p_F_prime", mu, p_fujita_prime(n, alpha), spec);
                const double doc = (n + 1) * (1.0 - alpha) + mu + alpha - 2.0;
                if (doc > 0.0)
                    emit_curve(out.curves, "oc_threshold", mu, 2.0 * (1.0 - alpha) / doc, spec);
                const double dfc = (n + 1) * (1.0 - alpha) - mu + alpha;
                if (dfc > 0.0)
                    emit_curve(out.curves, "fc_threshold", mu, 2.0 * (1.0 - alpha) / dfc, spec);
            }
        }
        if (spec.nonlinearity == Nonlinearity::TimeDerivative) {
            vertical_curve(out.curves, "mu_crossing", mu_crossing(n, alpha), spec);
        } else {
            vertical_curve(out.curves, "mu_star", mu_star(n, alpha), spec);
            vertical_curve(out.curves, "mu_zero", mu_zero(n, alpha), spec);
        }
    } else {
        const double wb = 2.0 / n - 1.0;
        for (int i = 0; i <= cs; ++i) {
            const double w = spec.x_min + (spec.x_max - spec.x_min) * i / cs;
            const double alpha = 2.0 / (n * (1.0 + w));
            const double mu = 2.0 / (1.0 + w);
            if (w <= wb) {
                if (spec.nonlinearity == Nonlinearity::TimeDerivative)
                    emit_curve(out.curves, "td_accel_threshold", w, 1.0 + 1.0 / mu, spec);
                continue;
            }
            if (spec.nonlinearity == Nonlinearity::TimeDerivative) {
                emit_curve(out.curves, "p_G_prime", w, p_glassey_prime(n, alpha, mu), spec);
            } else {
                const auto pc = p_c_prime(n, alpha, mu);
                if (!pc.all_p) emit_curve(out.curves, "p_c_prime", w, pc.value, spec);
                emit_curve(out.curves, "p_F_prime", w, p_fujita_prime(n, alpha), spec);
                const double dfc = (n + 1) * (1.0 - alpha) - mu + alpha;
                if (dfc > 0.0)
                    emit_curve(out.curves, "fc_threshold", w, 2.0 * (1.0 - alpha) / dfc, spec);
            }
        }
        vertical_curve(out.curves, "w_boundary", wb, spec);
        if (spec.nonlinearity == Nonlinearity::SpaceDerivative) {
            const CriticalW ws = critical_w(n);
            if (ws.in_range) vertical_curve(out.curves, "w_star", ws.value, spec);
        }
    }
    return out;
}

GridSpec figure_spec(int figure) {
    GridSpec s;
    s.n = 3;
    s.p_min = 1.0;
    s.p_max = 4.0;
    s.resolution = 60;
    switch (figure) {
        case 1:
            s.axis = GridSpec::Axis::Mu;
            s.alpha = 0.2;
            s.nonlinearity = Nonlinearity::TimeDerivative;
            s.x_min = 0.0; s.x_max = 3.0;
            return s;
        case 2:
            s.axis = GridSpec::Axis::Mu;
            s.alpha = 0.9;
            s.nonlinearity = Nonlinearity::TimeDerivative;
            s.x_min = 0.0; s.x_max = 1.0;
            return s;
        case 3:
            s.axis = GridSpec::Axis::Mu;
            s.alpha = 0.0;
            s.nonlinearity = Nonlinearity::SpaceDerivative;
            s.x_min = 0.0; s.x_max = 3.0;
            return s;
        case 4:
            s.axis = GridSpec::Axis::Mu;
            s.alpha = 0.3;
            s.nonlinearity = Nonlinearity::SpaceDerivative;
            s.x_min = 0.0; s.x_max = 3.0;
            return s;
        case 5:
            s.axis = GridSpec::Axis::Mu;
            s.alpha = 0.7;
            s.nonlinearity = Nonlinearity::SpaceDerivative;
            s.x_min = 0.0; s.x_max = 3.0;
            return s;
        case 6:
            s.axis = GridSpec::Axis::W;
            s.nonlinearity = Nonlinearity::TimeDerivative;
            s.x_min = -0.99; s.x_max = 1.0;
            return s;
        case 7:
            s.axis = GridSpec::Axis::W;
            s.nonlinearity = Nonlinearity::SpaceDerivative;
            s.x_min = -0.99; s.x_max = 1.0;
            return s;
        default:
            throw std::domain_error("figure_spec: figure must be 1..7");
    }
}

}  // namespace flrw
