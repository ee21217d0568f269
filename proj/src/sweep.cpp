#include "flrwwave/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace flrw {

namespace {

std::optional<LifespanBound> predict(const ModelParams& m) {
    try {
        return best_bound(applicable_bounds(m));
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

SolverConfig per_eps_config(const SolverConfig& base,
                            const std::optional<LifespanBound>& pred,
                            double eps) {
    SolverConfig c = base;
    c.model.epsilon = eps;
    if (pred && pred->kind == BoundKind::PowerLaw) {
        const double expected = bound_value(*pred, eps).value;
        c.t_max = std::max(base.t_max, 40.0 * expected);
        // Keep the expected horizon resolved by >= 1000 time steps.
        const double dr_cap = (expected - 1.0) / (1000.0 * c.cfl);
        if (dr_cap > 0.0) c.dr = std::min(base.dr, dr_cap);
    }
    c.r_max = 0.0;  // re-derive from the adjusted horizon
    return c;
}

}  // namespace

SweepResult run_sweep(const SolverConfig& base, const std::vector<double>& epsilons) {
    if (epsilons.empty()) throw std::invalid_argument("run_sweep: no epsilons");
    for (size_t i = 1; i < epsilons.size(); ++i)
        if (!(epsilons[i] < epsilons[i - 1]))
            throw std::invalid_argument("run_sweep: epsilons must be strictly decreasing");

    SweepResult out;
    out.predicted = predict(base.model);
    out.points.resize(epsilons.size());

    std::vector<std::thread> workers;
    workers.reserve(epsilons.size());
    std::vector<std::string> errors(epsilons.size());
    for (size_t i = 0; i < epsilons.size(); ++i) {
        workers.emplace_back([&, i] {
            try {
                const SolverConfig c = per_eps_config(base, out.predicted, epsilons[i]);
                const SimOutcome sim = run(c);
                SweepPoint& pt = out.points[i];
                pt.epsilon = epsilons[i];
                pt.blew_up = sim.blew_up;
                pt.T_num = sim.T_num;
                pt.converged = sim.tnum_converged;
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (const auto& e : errors)
        if (!e.empty()) throw std::runtime_error("run_sweep: " + e);

    int usable = 0, censored = 0;
    for (const auto& pt : out.points) {
        if (pt.blew_up && pt.converged) ++usable;
        if (!pt.blew_up) ++censored;
    }
    if (censored > 0) {
        std::ostringstream os;
        os << censored << " run(s) censored at the horizon";
        out.notes.push_back(os.str());
    }
    // Monotonicity: T_num nondecreasing as epsilon decreases (2% jitter).
    for (size_t i = 1; i < out.points.size(); ++i) {
        const SweepPoint& a = out.points[i - 1];
        const SweepPoint& b = out.points[i];
        if (a.blew_up && b.blew_up && b.T_num < a.T_num * 0.98) {
            std::ostringstream os;
            os << "monotonicity violation: T(" << b.epsilon << ") = " << b.T_num
               << " < T(" << a.epsilon << ") = " << a.T_num;
            out.notes.push_back(os.str());
        }
    }
    if (usable >= 4) {
        out.fit = fit_scaling(out.points);
    } else {
        std::ostringstream os;
        os << "fit skipped: only " << usable << " usable point(s)";
        out.notes.push_back(os.str());
    }
    return out;
}

FitResult fit_scaling(const std::vector<SweepPoint>& points) {
    std::vector<double> xs, ys;
    for (const auto& pt : points) {
        if (!(pt.blew_up && pt.converged)) continue;
        xs.push_back(std::log(1.0 / pt.epsilon));
        ys.push_back(std::log(pt.T_num));
    }
    const int n = static_cast<int>(xs.size());
    if (n < 4) throw std::invalid_argument("fit_scaling: >= 4 usable points required");
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) { mx += xs[i]; my += ys[i]; }
    mx /= n; my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx <= 1e-12 * n)
        throw std::invalid_argument("fit_scaling: degenerate abscissas");
    FitResult fit;
    fit.points = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

ComparisonReport compare_prediction(const SweepResult& result, double slack) {
    ComparisonReport rep;
    rep.slack = slack;
    if (!result.predicted) {
        rep.notes.push_back("no applicable theorem bound; qualitative report only");
        return rep;
    }
    const LifespanBound& b = *result.predicted;
    if (b.kind != BoundKind::PowerLaw) {
        rep.notes.push_back(
            "predicted bound is not a power law; qualitative report only");
        return rep;
    }
    rep.predicted_k = b.k;
    rep.one_sided_ok = true;
    for (const auto& pt : result.points) {
        if (!pt.blew_up) continue;
        const double cap = bound_value(b, pt.epsilon).value * slack;
        if (pt.T_num > cap) {
            rep.one_sided_ok = false;
            std::ostringstream os;
            os << "one-sided bound violated at eps = " << pt.epsilon << ": T_num = "
               << pt.T_num << " > " << cap;
            rep.notes.push_back(os.str());
        }
    }
    if (!result.fit) {
        rep.notes.push_back("no fit available; slope comparison skipped");
        return rep;
    }
    rep.quantitative = true;
    rep.gamma_fit = result.fit->slope;
    rep.ratio = rep.gamma_fit / rep.predicted_k;
    rep.slope_ok = std::abs(rep.ratio - 1.0) <= 0.25;
    return rep;
}

}  // namespace flrw
