#include "flrwwave/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "flrwwave/exponents.hpp"
#include "flrwwave/kato.hpp"
#include "flrwwave/lifespan.hpp"
#include "flrwwave/params.hpp"
#include "flrwwave/solver.hpp"
#include "flrwwave/specfun.hpp"
#include "flrwwave/sweep.hpp"

namespace flrw::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct GlobalOpts {
    std::string out = ".";
    bool quiet = false;
    long seed = 12345;
};

std::ostream& numfmt(std::ostream& os) {
    os << std::setprecision(12);
    return os;
}

void write_text(const GlobalOpts& g, const std::string& name, const std::string& text) {
    fs::create_directories(g.out);
    std::ofstream f(fs::path(g.out) / name);
    if (!f) throw std::runtime_error("cannot write " + name + " in " + g.out);
    f << text;
}

std::string nonlinearity_name(Nonlinearity nl) {
    return nl == Nonlinearity::TimeDerivative ? "ut" : "grad";
}

/// Model-parameter flags shared by most subcommands; a config file (flat
/// key=value or a previously emitted manifest.json) provides defaults and
/// explicit flags override it.
struct ModelFlags {
    std::string config;
    int n = -1;
    double alpha = -1.0, mu = -1.0, p = -1.0, epsilon = -1.0, R = -1.0;
    double w = std::numeric_limits<double>::quiet_NaN();
    std::string nonlinearity;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config, "config file (key=value or manifest.json)");
        cmd->add_option("--n", n, "spatial dimension");
        cmd->add_option("--alpha", alpha, "propagation-speed decay exponent");
        cmd->add_option("--mu", mu, "damping coefficient");
        cmd->add_option("--p", p, "nonlinearity power");
        cmd->add_option("--epsilon", epsilon, "data size");
        cmd->add_option("--R", R, "initial support radius");
        cmd->add_option("--w", w, "equation-of-state constant (overrides alpha/mu)");
        cmd->add_option("--nonlinearity", nonlinearity, "ut or grad");
    }

    ParsedConfig resolve() const {
        ParsedConfig pc;
        if (!config.empty()) pc = load_config_any(config);
        if (n > 0) pc.model.n = n;
        if (alpha >= 0.0) pc.model.alpha = alpha;
        if (mu >= 0.0) pc.model.mu = mu;
        if (p > 0.0) pc.model.p = p;
        if (epsilon >= 0.0) pc.model.epsilon = epsilon;
        if (R > 0.0) pc.model.R = R;
        if (!nonlinearity.empty()) {
            if (nonlinearity == "ut")
                pc.model.nonlinearity = Nonlinearity::TimeDerivative;
            else if (nonlinearity == "grad")
                pc.model.nonlinearity = Nonlinearity::SpaceDerivative;
            else
                throw std::invalid_argument("nonlinearity must be ut or grad");
        }
        if (!std::isnan(w)) {
            FLRWParams f;
            f.n = pc.model.n;
            f.w = w;
            validate_flrw(f);
            const ModelParams mapped = flrw_to_model(
                f, pc.model.p, pc.model.epsilon, pc.model.R, pc.model.nonlinearity);
            pc.model = mapped;
            pc.from_w = true;
            pc.w = w;
        }
        return pc;
    }

    // Accepts the flat key=value format or a manifest.json re-fed as config.
    static ParsedConfig load_config_any(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw std::runtime_error("cannot open config " + path);
        std::stringstream buf;
        buf << f.rdbuf();
        const std::string text = buf.str();
        const size_t first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '{') {
            const json j = json::parse(text);
            std::string kv;
            for (const auto& [key, value] : j.items()) {
                if (key == "command" || key == "seed") continue;
                std::ostringstream os;
                os << numfmt;
                if (value.is_string())
                    os << key << " = " << value.get<std::string>() << "\n";
                else if (value.is_boolean())
                    os << key << " = " << (value.get<bool>() ? 1 : 0) << "\n";
                else if (value.is_number())
                    os << key << " = " << value.get<double>() << "\n";
                kv += os.str();
            }
            return parse_config_text(kv);
        }
        return parse_config_text(text);
    }
};

json model_json(const ModelParams& m) {
    return json{{"n", m.n},
                {"alpha", m.alpha},
                {"mu", m.mu},
                {"p", m.p},
                {"epsilon", m.epsilon},
                {"R", m.R},
                {"nonlinearity", nonlinearity_name(m.nonlinearity)}};
}

void write_manifest(const GlobalOpts& g, const std::string& command, json extra) {
    extra["command"] = command;
    extra["seed"] = g.seed;
    write_text(g, "manifest.json", extra.dump(2) + "\n");
}

double config_num(const ParsedConfig& pc, const std::string& key, double fallback) {
    const auto it = pc.extra.find(key);
    if (it == pc.extra.end()) return fallback;
    return std::stod(it->second);
}

SolverConfig solver_config(const ParsedConfig& pc) {
    SolverConfig c;
    c.model = pc.model;
    c.dr = config_num(pc, "dr", c.dr);
    c.r_max = config_num(pc, "r_max", c.r_max);
    c.cfl = config_num(pc, "cfl", c.cfl);
    c.t_max = config_num(pc, "t_max", c.t_max);
    c.threshold = config_num(pc, "threshold", c.threshold);
    c.linear = config_num(pc, "linear", 0.0) != 0.0;
    c.u1_zero = config_num(pc, "u1_zero", 0.0) != 0.0;
    return c;
}

json solver_json(const SolverConfig& c) {
    json j = model_json(c.model);
    j["dr"] = c.dr;
    j["r_max"] = c.r_max;
    j["cfl"] = c.cfl;
    j["t_max"] = c.t_max;
    j["threshold"] = c.threshold;
    j["linear"] = c.linear ? 1 : 0;
    j["u1_zero"] = c.u1_zero ? 1 : 0;
    return j;
}

// --- subcommands ---

int cmd_exponents(const GlobalOpts& g, const ModelFlags& mf) {
    const ParsedConfig pc = mf.resolve();
    const ModelParams& m = pc.model;
    std::ostringstream os;
    os << numfmt;
    if (m.alpha < 1.0) {
        const ExponentSet e = threshold_set(m.n, m.alpha, m.mu);
        os << "n " << e.n << "\nalpha " << e.alpha << "\nmu " << e.mu << "\n";
        os << "p_G " << e.p_G << "\n";
        os << "p_G_prime " << e.p_G_prime << "\n";
        os << "p_0 " << e.p_0 << "\n";
        if (e.p_c_prime.all_p)
            os << "p_c_prime all\n";
        else
            os << "p_c_prime " << e.p_c_prime.value << "\n";
        if (e.p_0_prime)
            os << "p_0_prime " << *e.p_0_prime << "\n";
        else
            os << "p_0_prime none\n";
        os << "p_F_prime " << e.p_F_prime << "\n";
        if (e.p_c_ref.all_p)
            os << "p_c_ref all\n";
        else
            os << "p_c_ref " << e.p_c_ref.value << "\n";
        os << "p_F_ref " << e.p_F_ref << "\n";
        os << "mu_crossing " << e.mu_crossing << "\n";
        os << "mu_star " << e.mu_star << "\n";
        os << "mu_zero " << e.mu_zero << "\n";
    } else {
        os << "n " << m.n << "\nalpha " << m.alpha << "\nmu " << m.mu << "\n";
        os << "accelerating regime: power thresholds p_G', p_0, p_c', p_F' "
              "are defined only for alpha < 1\n";
        if (m.mu > 0.0) os << "blowup_for_p_below " << 1.0 + 1.0 / m.mu << "\n";
    }
    if (pc.from_w) {
        const CriticalW ws = critical_w(m.n);
        os << "w " << pc.w << "\n";
        os << "w_star " << ws.value << (ws.in_range ? "" : " (outside (-1,1])") << "\n";
    }
    if (!g.quiet) std::cout << os.str();
    write_manifest(g, "exponents", model_json(m));
    return 0;
}

int cmd_bounds(const GlobalOpts& g, const ModelFlags& mf) {
    const ParsedConfig pc = mf.resolve();
    const ModelParams& m = pc.model;
    const auto bounds = applicable_bounds(m);
    std::ostringstream csv, os;
    csv << numfmt;
    os << numfmt;
    csv << "source,kind,applicable,k,rate,s,l,m,value\n";
    for (const auto& b : bounds) {
        std::string kind;
        double value = 0.0;
        switch (b.kind) {
            case BoundKind::PowerLaw: kind = "power"; break;
            case BoundKind::Exponential: kind = "exp"; break;
            case BoundKind::ImplicitPowerLog: kind = "power-log"; break;
        }
        if (b.applicable) {
            const BoundValue bv = bound_value(b, m.epsilon);
            value = bv.value;
        }
        csv << bound_source_name(b.source) << "," << kind << ","
            << (b.applicable ? 1 : 0) << "," << b.k << "," << b.rate << ","
            << b.s << "," << b.l << "," << b.m << "," << value << "\n";
    }
    bool any = false;
    for (const auto& b : bounds) any = any || b.applicable;
    if (any) {
        const LifespanBound best = best_bound(bounds);
        os << "best " << bound_source_name(best.source) << "\n";
        const RegionResult rr = classify_region(m);
        os << "region " << region_label_name(rr.label) << "\n";
        const BoundValue bv = bound_value(best, m.epsilon);
        os << "lifespan_bound " << bv.value
           << (bv.implicit ? " (implicit)" : "") << "\n";
    } else {
        os << "no applicable blow-up bound at this parameter point\n";
    }
    if (!g.quiet) std::cout << os.str();
    write_text(g, "bounds.csv", csv.str());
    write_manifest(g, "bounds", model_json(m));
    return 0;
}

int cmd_regions(const GlobalOpts& g, int figure, int resolution) {
    GridSpec spec = figure_spec(figure);
    if (resolution > 0) spec.resolution = resolution;
    const RegionGrid grid = region_grid(spec);
    std::ostringstream gcsv, ccsv;
    gcsv << numfmt;
    ccsv << numfmt;
    gcsv << "x,p,region,bound_kind,value\n";
    for (const auto& row : grid.rows)
        gcsv << row.x << "," << row.p << "," << region_label_name(row.region)
             << "," << row.bound_kind << "," << row.value << "\n";
    ccsv << "name,x,p\n";
    for (const auto& cp : grid.curves)
        ccsv << cp.name << "," << cp.x << "," << cp.p << "\n";
    write_text(g, "grid.csv", gcsv.str());
    write_text(g, "curves.csv", ccsv.str());
    if (!g.quiet)
        std::cout << "figure " << figure << ": " << grid.rows.size()
                  << " cells, " << grid.curves.size() << " curve points\n";
    write_manifest(g, "regions",
                   json{{"figure", figure}, {"resolution", spec.resolution}});
    return 0;
}

int cmd_bessel(const GlobalOpts& g, double nu, double t) {
    BesselContext ctx;
    ctx.nu = nu;
    const BesselDerivs d = bessel_k_derivs(ctx, t);
    const IdentityResiduals res = identity_residuals(ctx, t);
    std::ostringstream os;
    os << numfmt;
    os << "K " << d.K << "\nK_prime " << d.Kp << "\nK_second " << d.Kpp << "\n";
    os << "ode_residual " << res.ode << "\nrecurrence_residual " << res.recurrence
       << "\nasymptotic_gap " << res.asymptotic << "\n";
    if (!g.quiet) std::cout << os.str();
    write_manifest(g, "bessel", json{{"nu", nu}, {"t", t}});
    return 0;
}

int cmd_testfn(const GlobalOpts& g, const ModelFlags& mf, double q, bool has_q,
               double t0) {
    const ParsedConfig pc = mf.resolve();
    const ModelParams& m = pc.model;
    std::ostringstream csv;
    csv << numfmt;
    csv << "check,a,b,value\n";

    const BesselContext ctx = bessel_context(m);
    for (double t : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        const IdentityResiduals res = identity_residuals(ctx, t);
        csv << "bessel_ode," << ctx.nu << "," << t << "," << res.ode << "\n";
        csv << "bessel_recurrence," << ctx.nu << "," << t << ","
            << res.recurrence << "\n";
    }
    const TestFunction tf = make_phi(m);
    for (double t : {1.0, 2.0, 5.0, 10.0}) {
        for (double r : {0.0, 0.5, 1.0, 2.0}) {
            csv << "phi_pde_residual," << t << "," << r << ","
                << phi_pde_residual(tf, t, r) << "\n";
        }
        csv << "phi_t_ratio_residual," << t << ",0,"
            << phi_t_ratio_residual(tf, t) << "\n";
    }
    for (double t : {1.0, 2.0, 5.0, 10.0, 50.0, 100.0})
        csv << "integral_ratio," << t << "," << m.R << ","
            << phi_integral_ratio(tf, t, m.R) << "\n";
    csv << "ratio_bound,1,0," << ratio_bound(ctx, 1.0) << "\n";

    if (has_q) {
        const TestFunction tq = make_phi_q(m, q);
        for (double t : {t0, 2.0 * t0, 4.0 * t0}) {
            const double A = lightcone_radius(t, m.alpha);
            for (double r : {0.0, 0.5 * A, A}) {
                csv << "phi_q_envelope_ratio," << t << "," << r << ","
                    << phi_q_envelope_ratio(tq, t, r) << "\n";
            }
        }
        for (double r : {0.0, 0.5 * m.R, m.R})
            csv << "phi_q_dt_initial,1," << r << "," << phi_q_dt(tq, 1.0, r) << "\n";
    }
    write_text(g, "testfn.csv", csv.str());
    if (!g.quiet) std::cout << "test-function residual report written\n";
    json man = model_json(m);
    if (has_q) man["q"] = q;
    man["t0"] = t0;
    write_manifest(g, "testfn-check", man);
    return 0;
}

int cmd_kato(const GlobalOpts& g, const KatoProblem& prob, int j, bool oracle,
             double F0, double F0p) {
    std::ostringstream os;
    os << numfmt;
    if (prob.order != KatoOrder::SecondOrderLog)
        os << "M " << exponent_M(prob) << "\n";
    const KatoBound b = lifespan_bound(prob);
    switch (b.kind) {
        case KatoBound::Kind::PowerLaw:
            os << "bound power k " << b.k << "\n";
            break;
        case KatoBound::Kind::Exponential:
            os << "bound exp rate " << b.rate << "\n";
            break;
        case KatoBound::Kind::ImplicitPowerLog:
            os << "bound power-log s " << b.s << " l " << b.l << " m " << b.m << "\n";
            break;
    }
    const KatoIteration rec = iterate(prob, j);
    const KatoIteration cf = closed_form(prob, j);
    os << "iterate_j " << j << " a " << rec.a_j << " b " << rec.b_j << " c "
       << rec.c_j << " logD " << rec.log_D_j << "\n";
    os << "closed_form_gap "
       << std::abs(rec.log_D_j - cf.log_D_j) +
              std::abs(rec.a_j - cf.a_j) + std::abs(rec.b_j - cf.b_j) +
              std::abs(rec.c_j - cf.c_j)
       << "\n";
    os << "E " << growth_E(prob) << "\n";
    if (prob.order == KatoOrder::FirstOrder) {
        const DivergenceResult dr = divergence_time(prob);
        if (dr.found)
            os << "divergence_time " << dr.time << "\n";
        else
            os << "divergence_time beyond-horizon\n";
    }
    if (oracle) {
        const OracleResult orc = ode_oracle(prob, F0, F0p);
        os << "oracle_blowup " << (orc.blew_up ? 1 : 0) << " t " << orc.time << "\n";
    }
    if (!g.quiet) std::cout << os.str();
    write_manifest(g, "kato",
                   json{{"p", prob.p}, {"a", prob.a}, {"b", prob.b},
                        {"c", prob.c}, {"q", prob.q}, {"r", prob.r},
                        {"mu", prob.mu}, {"A0", prob.A0}, {"A1", prob.A1},
                        {"R", prob.R}, {"T0", prob.T0}, {"T1", prob.T1}});
    return 0;
}

int cmd_simulate(const GlobalOpts& g, const ModelFlags& mf) {
    const ParsedConfig pc = mf.resolve();
    const SolverConfig cfg = solver_config(pc);
    const SimOutcome out = run(cfg);
    std::ostringstream csv;
    csv << numfmt;
    csv << "t,int_u,int_ut,sup_v,support_radius\n";
    for (const auto& d : out.series)
        csv << d.t << "," << d.int_u << "," << d.int_ut << "," << d.sup_v << ","
            << d.support_radius << "\n";
    write_text(g, "timeseries.csv", csv.str());
    json summary;
    summary["blew_up"] = out.blew_up;
    summary["T_num"] = out.T_num;
    summary["max_sup_v"] = out.max_sup_v;
    summary["tnum_converged"] = out.tnum_converged;
    summary["sensitivity_shift"] = out.sensitivity_shift;
    summary["max_support_violation"] = out.max_support_violation;
    summary["params"] = solver_json(cfg);
    write_text(g, "summary.json", summary.dump(2) + "\n");
    if (!g.quiet) {
        std::cout << numfmt << "blew_up " << out.blew_up << "\n";
        if (out.blew_up)
            std::cout << "T_num " << out.T_num << " converged "
                      << out.tnum_converged << "\n";
    }
    write_manifest(g, "simulate", solver_json(cfg));
    return 0;
}

int cmd_sweep(const GlobalOpts& g, const ModelFlags& mf, const std::string& eps_list) {
    const ParsedConfig pc = mf.resolve();
    const SolverConfig base = solver_config(pc);
    std::vector<double> eps;
    std::stringstream ss(eps_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) eps.push_back(std::stod(tok));
    const SweepResult res = run_sweep(base, eps);
    const ComparisonReport rep = compare_prediction(res);

    std::ostringstream csv;
    csv << numfmt;
    csv << "epsilon,T_num,blew_up,converged\n";
    for (const auto& pt : res.points)
        csv << pt.epsilon << "," << pt.T_num << "," << (pt.blew_up ? 1 : 0)
            << "," << (pt.converged ? 1 : 0) << "\n";
    write_text(g, "sweep.csv", csv.str());

    json fitj;
    if (res.fit) {
        fitj["slope"] = res.fit->slope;
        fitj["intercept"] = res.fit->intercept;
        fitj["r2"] = res.fit->r2;
        fitj["points"] = res.fit->points;
    }
    fitj["predicted_k"] = rep.predicted_k;
    fitj["one_sided_ok"] = rep.one_sided_ok;
    std::string verdict = "qualitative";
    if (rep.quantitative)
        verdict = rep.slope_ok ? "consistent"
                               : (rep.one_sided_ok ? "warn" : "inconsistent");
    fitj["verdict"] = verdict;
    json notes = json::array();
    for (const auto& n : res.notes) notes.push_back(n);
    for (const auto& n : rep.notes) notes.push_back(n);
    fitj["notes"] = notes;
    write_text(g, "fit.json", fitj.dump(2) + "\n");
    if (!g.quiet) {
        std::cout << numfmt << "verdict " << verdict << "\n";
        if (res.fit)
            std::cout << "slope " << res.fit->slope << " predicted_k "
                      << rep.predicted_k << "\n";
    }
    json man = solver_json(base);
    man["eps"] = eps_list;
    write_manifest(g, "sweep", man);
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"blow-up calculus and numerics for damped wave equations "
                 "with decaying propagation speed"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--out", g.out, "output directory")->capture_default_str();
    app.add_flag("--quiet", g.quiet, "suppress stdout report");
    app.add_option("--seed", g.seed, "random seed echoed into manifests");

    ModelFlags mf_exp, mf_bounds, mf_testfn, mf_sim, mf_sweep;

    auto* c_exp = app.add_subcommand("exponents", "critical exponents and thresholds");
    mf_exp.attach(c_exp);

    auto* c_bounds = app.add_subcommand("bounds", "lifespan bounds at one point");
    mf_bounds.attach(c_bounds);

    int figure = 1, resolution = -1;
    auto* c_reg = app.add_subcommand("regions", "region grid + boundary curves");
    c_reg->add_option("--figure", figure, "preset 1..7")->required();
    c_reg->add_option("--resolution", resolution, "cells per axis");

    double nu = 0.0, tval = 1.0;
    auto* c_bes = app.add_subcommand("bessel", "modified Bessel K evaluation");
    c_bes->add_option("--nu", nu, "order")->required();
    c_bes->add_option("--t", tval, "argument")->required();

    auto* c_tf = app.add_subcommand("testfn-check", "test-function residual report");
    mf_testfn.attach(c_tf);
    double qval = 0.0, t0 = 5.0;
    auto* qopt = c_tf->add_option("--q", qval, "weighted-family exponent");
    c_tf->add_option("--t0", t0, "envelope verification onset");

    auto* c_kato = app.add_subcommand("kato", "blow-up iteration machinery");
    KatoProblem prob;
    std::string order = "first";
    c_kato->add_option("--order", order, "first|second|second-log|second-logq");
    c_kato->add_option("--p", prob.p, "power");
    c_kato->add_option("--a", prob.a, "exponent a");
    c_kato->add_option("--b", prob.b, "exponent b");
    c_kato->add_option("--c", prob.c, "exponent c");
    c_kato->add_option("--q", prob.q, "weight exponent q");
    c_kato->add_option("--r", prob.r, "log-weight exponent r");
    c_kato->add_option("--mu", prob.mu, "damping mu");
    c_kato->add_option("--A0", prob.A0, "initial level A0");
    c_kato->add_option("--A1", prob.A1, "forcing constant A1");
    c_kato->add_option("--R", prob.R, "support radius R");
    c_kato->add_option("--T0", prob.T0, "start time");
    c_kato->add_option("--T1", prob.T1, "shift time");
    int jval = 10;
    bool oracle = false;
    double F0 = 1.0, F0p = 1.0;
    c_kato->add_option("--j", jval, "iteration index to report");
    c_kato->add_flag("--oracle", oracle, "integrate the saturated ODE");
    c_kato->add_option("--F0", F0, "oracle initial value");
    c_kato->add_option("--F0p", F0p, "oracle initial derivative");

    auto* c_sim = app.add_subcommand("simulate", "single radial simulation");
    mf_sim.attach(c_sim);

    auto* c_sw = app.add_subcommand("sweep", "epsilon sweep with scaling fit");
    mf_sweep.attach(c_sw);
    std::string eps_list = "0.8,0.4,0.2,0.1,0.05";
    c_sw->add_option("--eps", eps_list, "comma-separated, strictly decreasing");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (c_exp->parsed()) return cmd_exponents(g, mf_exp);
        if (c_bounds->parsed()) return cmd_bounds(g, mf_bounds);
        if (c_reg->parsed()) return cmd_regions(g, figure, resolution);
        if (c_bes->parsed()) return cmd_bessel(g, nu, tval);
        if (c_tf->parsed()) return cmd_testfn(g, mf_testfn, qval, qopt->count() > 0, t0);
        if (c_kato->parsed()) {
            if (order == "first") prob.order = KatoOrder::FirstOrder;
            else if (order == "second") prob.order = KatoOrder::SecondOrder;
            else if (order == "second-log") prob.order = KatoOrder::SecondOrderLog;
            else if (order == "second-logq") prob.order = KatoOrder::SecondOrderLogQ;
            else throw std::invalid_argument("unknown --order " + order);
            return cmd_kato(g, prob, jval, oracle, F0, F0p);
        }
        if (c_sim->parsed()) return cmd_simulate(g, mf_sim);
        if (c_sw->parsed()) return cmd_sweep(g, mf_sweep, eps_list);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace flrw::cli
