#pragma once

/*
 * Config-driven experiment pipelines.
 *
 * Each kind parses its inputs from a Config, runs the relevant modules, and
 * produces (a) a diagnostics CSV with the frozen column order
 *   t,mass_u,energy_u,kinetic_K,H,variance_I,virial_V,pohozaev_P,grad_sq,
 *   sup_norm,weighted_pot,boundary_frac,dt
 * all printed with %.17g, and (b) a JSON summary embedding the resolved
 * config, the closed-form bounds, and the verdict of every enabled check.
 * JSON cannot carry nonfinite numbers, so inf/nan become the strings "inf",
 * "-inf", "nan". Everything is deterministic: same config, byte-identical
 * artifacts, also under a parallel sweep (rows are collected by index).
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "dinls/bounds.hpp"
#include "dinls/config.hpp"
#include "dinls/dynamics.hpp"
#include "dinls/functionals.hpp"
#include "dinls/grid.hpp"
#include "dinls/groundstate.hpp"
#include "dinls/initdata.hpp"
#include "dinls/model.hpp"
#include "dinls/scattering.hpp"

namespace dinls {

using ojson = nlohmann::ordered_json;

/** JSON value for a double; nonfinite values become strings. */
inline ojson jnum(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    return v;
}

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = std::numeric_limits<double>::quiet_NaN();
    double limit = std::numeric_limits<double>::quiet_NaN();
    std::string note;
};

struct ExperimentResult {
    int status = 0;  // 0 all checks passed, 1 a check failed (2 = error, set by the caller)
    std::vector<CheckResult> checks;
    ojson summary;
};

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline ModelParams parse_model(const Config& cfg) {
    ModelParams p;
    p.N = cfg.get_int("model.N");
    p.s = cfg.get_int("model.s", 1);
    p.b = cfg.get_double("model.b");
    p.alpha = cfg.get_double("model.alpha");
    p.mu = {cfg.get_double("model.mu_re", 0.0), cfg.get_double("model.mu_im", 0.0)};
    p.a = {cfg.get_double("model.a_re", 0.0), cfg.get_double("model.a_im", 0.0)};
    return p;
}

inline Grid parse_grid(const Config& cfg, const ModelParams& p) {
    return make_grid(p.N, cfg.get_int("grid.n"), cfg.get_double("grid.L"));
}

inline PropagatorConfig parse_prop(const Config& cfg) {
    PropagatorConfig c;
    c.dt0 = cfg.get_double("prop.dt0", c.dt0);
    c.dt_floor = cfg.get_double("prop.dt_floor", c.dt_floor);
    c.grad_max = cfg.get_double("prop.grad_max", c.grad_max);
    c.sup_max = cfg.get_double("prop.sup_max", c.sup_max);
    c.adapt = cfg.get_bool("prop.adapt", c.adapt);
    c.record_every = cfg.get_int("prop.record_every", c.record_every);
    c.c_adapt = cfg.get_double("prop.c_adapt", c.c_adapt);
    c.boundary_tol = cfg.get_double("prop.boundary_tol", c.boundary_tol);
    return c;
}

inline RecipeKind parse_recipe_kind(const Config& cfg) {
    const std::string k = cfg.get_string("recipe.kind", "gaussian");
    if (k == "gaussian") return RecipeKind::gaussian;
    if (k == "chirped_bump") return RecipeKind::chirped_bump;
    if (k == "scaled_lambda") return RecipeKind::scaled_lambda;
    if (k == "sigma_zero_energy") return RecipeKind::sigma_zero_energy;
    if (k == "sigma_window") return RecipeKind::sigma_window;
    throw std::runtime_error(cfg.name() + ": recipe.kind: unknown recipe '" + k + "'");
}

inline DataRecipe parse_recipe(const Config& cfg) {
    DataRecipe r;
    r.kind = parse_recipe_kind(cfg);
    r.amplitude = cfg.get_double("recipe.amplitude", r.amplitude);
    r.width = cfg.get_double("recipe.width", r.width);
    r.chirp = cfg.get_double("recipe.chirp", r.chirp);
    r.scale_mult = cfg.get_double("recipe.scale_mult", r.scale_mult);
    return r;
}

struct RunSetup {
    ModelParams p;
    Grid g;
    PropagatorConfig prop;
    DataRecipe recipe;
    double T = 0.0;
    Field u0;
};

inline RunSetup build_setup(const Config& cfg) {
    RunSetup s;
    s.p = parse_model(cfg);
    s.g = parse_grid(cfg, s.p);
    s.prop = parse_prop(cfg);
    s.recipe = parse_recipe(cfg);
    s.T = cfg.get_double("run.T");
    const Fft fft(s.g.dim, s.g.n);
    const SingularWeight w = weight_array(s.g, s.p.b, 0.5 * s.g.h);
    s.u0 = realize(s.recipe, s.p, s.g, w, fft);
    return s;
}

inline void write_records_csv(const std::string& path,
                              const std::vector<DiagnosticsRecord>& rs) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (f == nullptr) throw std::runtime_error(path + ": cannot open for writing");
    std::fputs(
        "t,mass_u,energy_u,kinetic_K,H,variance_I,virial_V,pohozaev_P,"
        "grad_sq,sup_norm,weighted_pot,boundary_frac,dt\n",
        f);
    for (const auto& r : rs)
        std::fprintf(f,
                     "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                     "%.17g,%.17g,%.17g,%.17g\n",
                     r.t, r.mass_u, r.energy_u, r.kinetic_K, r.H, r.variance_I, r.virial_V,
                     r.pohozaev_P, r.grad_sq, r.sup_norm, r.weighted_pot, r.boundary_frac,
                     r.dt);
    std::fclose(f);
}

inline ojson config_to_json(const Config& cfg) {
    ojson j = ojson::object();
    for (const auto& e : cfg.entries()) j[e.key] = e.raw;
    return j;
}

inline ojson model_to_json(const ModelParams& p) {
    ojson j;
    j["N"] = p.N;
    j["s"] = p.s;
    j["b"] = p.b;
    j["alpha"] = p.alpha;
    j["mu_re"] = p.mu.real();
    j["mu_im"] = p.mu.imag();
    j["a_re"] = p.a.real();
    j["a_im"] = p.a.imag();
    const ExponentSet e = exponent_set(p);
    ojson d;
    d["theta"] = jnum(e.theta);
    d["gamma_pair"] = jnum(e.gamma_pair);
    d["rho_pair"] = jnum(e.rho_pair);
    d["gamma_blow"] = jnum(e.gamma_blow);
    d["kappa"] = jnum(e.kappa);
    d["beta"] = jnum(e.beta);
    d["mass_critical_alpha"] = jnum(mass_critical_alpha(p));
    d["critical_alpha"] = jnum(critical_alpha(p));
    j["exponents"] = d;
    return j;
}

inline ojson interval_to_json(const GammaInterval& gi) {
    ojson j;
    j["lo"] = jnum(gi.lo);
    j["hi"] = jnum(gi.hi);
    j["closed_hi"] = gi.closed_hi;
    return j;
}

inline ojson bounds_to_json(const BoundsReport& br) {
    ojson j;
    j["lifespan_lower"] = jnum(br.lifespan_lower);
    j["damping_threshold_global"] = jnum(br.damping_threshold_global);
    j["blow_case"] = to_string(br.blow_case);
    j["gamma_interval"] = interval_to_json(br.gamma_interval);
    j["blowup_upper"] = jnum(br.blowup_upper);
    j["calibration_C"] = jnum(br.calibration_C);
    return j;
}

inline ojson recipe_to_json(const DataRecipe& r) {
    ojson j;
    j["kind"] = to_string(r.kind);
    j["amplitude"] = r.amplitude;
    j["width"] = r.width;
    j["chirp"] = r.chirp;
    j["scale"] = jnum(r.scale);
    j["E0"] = jnum(r.E0);
    j["V0"] = jnum(r.V0);
    j["I0"] = jnum(r.I0);
    j["mass"] = jnum(r.mass);
    j["grad_sq"] = jnum(r.grad_sq);
    return j;
}

inline ojson trajectory_to_json(const Trajectory& traj) {
    ojson j;
    const char* oc = traj.outcome == Outcome::completed        ? "completed"
                     : traj.outcome == Outcome::blowup_declared ? "blowup_declared"
                                                                : "domain_exceeded";
    j["outcome"] = oc;
    j["t_final"] = jnum(traj.t_final);
    j["t_blow"] = jnum(traj.t_blow);
    j["stop_reason"] = traj.stop_reason;
    j["accepted_steps"] = traj.accepted_steps;
    j["records"] = traj.records.size();
    return j;
}

inline ojson checks_to_json(const std::vector<CheckResult>& checks) {
    ojson j = ojson::object();
    for (const auto& c : checks) {
        ojson e;
        e["pass"] = c.pass;
        e["measured"] = jnum(c.measured);
        e["limit"] = jnum(c.limit);
        if (!c.note.empty()) e["note"] = c.note;
        j[c.name] = e;
    }
    return j;
}

inline void finish(ExperimentResult& res, const Config& cfg, bool strict) {
    const std::vector<std::string> unknown = cfg.unknown_keys();
    ojson warn = ojson::array();
    for (const auto& k : unknown) warn.push_back("unknown key '" + k + "'");
    res.summary["warnings"] = warn;
    if (strict && !unknown.empty()) {
        CheckResult c;
        c.name = "no_unknown_keys";
        c.pass = false;
        c.measured = static_cast<double>(unknown.size());
        c.limit = 0.0;
        c.note = "strict mode: " + unknown.front();
        res.checks.push_back(c);
    }
    bool all = true;
    for (const auto& c : res.checks) all = all && c.pass;
    res.summary["checks"] = checks_to_json(res.checks);
    res.summary["pass"] = all;
    res.status = all ? 0 : 1;
}

inline void write_summary(const ExperimentResult& res, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (f == nullptr) throw std::runtime_error(path + ": cannot open for writing");
    const std::string text = res.summary.dump(2);
    std::fwrite(text.data(), 1, text.size(), f);
    std::fputc('\n', f);
    std::fclose(f);
}

/** Max relative deviation of the mass column from e^{-2 Re(a) t} M0. */
inline double mass_law_deviation(const std::vector<DiagnosticsRecord>& rs, double ra) {
    if (rs.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double m0 = rs.front().mass_u;
    if (!(m0 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    double worst = 0.0;
    for (const auto& r : rs)
        worst = std::max(worst,
                         std::abs(r.mass_u - std::exp(-2.0 * ra * r.t) * m0) / m0);
    return worst;
}

/** Max relative drift of H from its initial value. */
inline double h_drift(const std::vector<DiagnosticsRecord>& rs) {
    if (rs.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double h0 = rs.front().H;
    const double scale = std::max(std::abs(h0), 1e-300);
    double worst = 0.0;
    for (const auto& r : rs) worst = std::max(worst, std::abs(r.H - h0) / scale);
    return worst;
}

}  // namespace detail

/** Jobs actually used: min of the request, the DINLS_THREADS cap and the
 *  number of work items, at least 1. */
inline int effective_jobs(int requested, std::size_t items) {
    int j = std::max(1, requested);
    if (const char* env = std::getenv("DINLS_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) j = std::min(j, cap);
    }
    if (items > 0 && items < static_cast<std::size_t>(j)) j = static_cast<int>(items);
    return j;
}

inline ExperimentResult run_simulate(const Config& cfg, const std::string& out_dir) {
    detail::RunSetup s = detail::build_setup(cfg);
    const Trajectory traj = run(s.p, s.u0, s.T, s.prop);
    detail::write_records_csv(
        out_dir + "/" + cfg.get_string("out.csv", "diagnostics.csv"), traj.records);

    ExperimentResult res;
    res.summary["kind"] = "simulate";
    res.summary["config"] = detail::config_to_json(cfg);
    res.summary["model"] = detail::model_to_json(s.p);
    res.summary["recipe"] = detail::recipe_to_json(s.recipe);
    res.summary["trajectory"] = detail::trajectory_to_json(traj);

    if (cfg.get_bool("check.completed", true)) {
        CheckResult c;
        c.name = "completed";
        c.pass = traj.outcome == Outcome::completed;
        c.measured = traj.t_final;
        c.limit = s.T;
        if (!c.pass) c.note = traj.stop_reason;
        res.checks.push_back(c);
    }
    // exact dissipation law for real mu; the splitting keeps it to rounding
    // in the linear case and to scheme order otherwise
    if (s.p.mu.imag() == 0.0 && cfg.get_bool("check.mass_law", true)) {
        CheckResult c;
        c.name = "mass_law";
        c.limit = cfg.get_double("check.mass_law_tol",
                                 s.p.mu == std::complex<double>(0.0, 0.0) ? 1e-10 : 1e-8);
        c.measured = detail::mass_law_deviation(traj.records, s.p.a.real());
        c.pass = c.measured < c.limit;
        res.checks.push_back(c);
    }
    if (cfg.get_bool("check.h_drift", false)) {
        CheckResult c;
        c.name = "h_drift";
        c.limit = cfg.get_double("check.h_drift_tol", 1e-6);
        c.measured = detail::h_drift(traj.records);
        c.pass = c.measured < c.limit;
        res.checks.push_back(c);
    }
    return res;
}

inline ExperimentResult run_blowup_verify(const Config& cfg, const std::string& out_dir) {
    detail::RunSetup s = detail::build_setup(cfg);
    const double zt = cfg.get_double("bounds.zero_tol", 0.0);
    VirialData vd;
    vd.E0 = s.recipe.E0;
    vd.V0 = s.recipe.V0;
    vd.I0 = s.recipe.I0;
    vd.gamma = gamma_from_damping(s.p, s.p.a.real());

    BoundsReport br;
    const BlowClassification cls = blow_case_classify(vd.E0, vd.V0, vd.I0, zt);
    br.blow_case = effective_blow_case(vd, zt);
    br.gamma_interval = cls.gamma_interval;
    br.blowup_upper = blowup_upper(vd, zt);

    const Trajectory traj = run(s.p, s.u0, s.T, s.prop);
    detail::write_records_csv(
        out_dir + "/" + cfg.get_string("out.csv", "diagnostics.csv"), traj.records);

    ExperimentResult res;
    res.summary["kind"] = "blowup-verify";
    res.summary["config"] = detail::config_to_json(cfg);
    res.summary["model"] = detail::model_to_json(s.p);
    res.summary["recipe"] = detail::recipe_to_json(s.recipe);
    res.summary["bounds"] = detail::bounds_to_json(br);
    res.summary["bounds"]["gamma"] = jnum(vd.gamma);
    res.summary["bounds"]["gamma_split"] = jnum(cls.gamma_split);
    res.summary["trajectory"] = detail::trajectory_to_json(traj);

    {
        CheckResult c;
        c.name = "blowup_declared";
        c.pass = traj.outcome == Outcome::blowup_declared;
        c.measured = std::isnan(traj.t_blow) ? traj.t_final : traj.t_blow;
        c.limit = s.T;
        if (!c.pass) c.note = "outcome did not reach the blow-up thresholds";
        res.checks.push_back(c);
    }
    {
        CheckResult c;
        c.name = "within_upper_bound";
        c.measured = traj.t_blow;
        c.limit = br.blowup_upper;
        c.pass = traj.outcome == Outcome::blowup_declared && traj.t_blow <= br.blowup_upper;
        res.checks.push_back(c);
    }
    return res;
}

inline ExperimentResult run_lifespan_verify(const Config& cfg, const std::string& out_dir) {
    detail::RunSetup s = detail::build_setup(cfg);
    const double C = cfg.get_double("run.C", 1.0);
    const std::string variant = cfg.get_string("lifespan.variant", "general");

    const Fft fft(s.g.dim, s.g.n);
    const double norm =
        (variant == "2d" || s.p.s == 1) ? h1_norm(s.u0, fft) : std::sqrt(mass(s.u0));

    BoundsReport br;
    br.calibration_C = C;
    if (variant == "2d") {
        const Lifespan2dResult r2 = lifespan_lower_2d_opt(s.p, norm, C);
        br.lifespan_lower = r2.T;
    } else if (variant == "general") {
        br.lifespan_lower = lifespan_lower(s.p, norm, C);
        br.damping_threshold_global = global_damping_threshold(s.p, norm, C);
    } else {
        throw std::runtime_error(cfg.name() + ": lifespan.variant: expected 'general' or '2d', got '" +
                                 variant + "'");
    }

    const Trajectory traj = run(s.p, s.u0, s.T, s.prop);
    detail::write_records_csv(
        out_dir + "/" + cfg.get_string("out.csv", "diagnostics.csv"), traj.records);
    const bool completed = traj.outcome == Outcome::completed;
    const double valid_time = completed ? s.T : traj.t_final;

    ExperimentResult res;
    res.summary["kind"] = "lifespan-verify";
    res.summary["config"] = detail::config_to_json(cfg);
    res.summary["model"] = detail::model_to_json(s.p);
    res.summary["recipe"] = detail::recipe_to_json(s.recipe);
    res.summary["bounds"] = detail::bounds_to_json(br);
    res.summary["bounds"]["norm_u0"] = jnum(norm);
    res.summary["trajectory"] = detail::trajectory_to_json(traj);
    res.summary["valid_time"] = jnum(valid_time);

    CheckResult c;
    c.name = "survives_lower_bound";
    c.limit = br.lifespan_lower;
    c.measured = valid_time;
    if (std::isinf(br.lifespan_lower)) {
        c.pass = completed;
        if (!c.pass) c.note = "bound promises global existence but the run stopped early";
    } else {
        const double horizon = std::min(br.lifespan_lower, s.T);
        c.pass = valid_time >= horizon * (1.0 - 1e-12);
        if (completed && s.T < br.lifespan_lower)
            c.note = "run horizon ends before the bound; no violation observable";
    }
    res.checks.push_back(c);
    return res;
}

inline ExperimentResult run_scatter_verify(const Config& cfg, const std::string& out_dir) {
    detail::RunSetup s = detail::build_setup(cfg);
    const double fit_lo = cfg.get_double("scatter.fit_lo", 0.50);
    const double fit_hi = cfg.get_double("scatter.fit_hi", 0.85);
    if (!(0.0 < fit_lo && fit_lo < fit_hi && fit_hi <= 1.0))
        throw std::runtime_error(cfg.name() + ": scatter.fit_lo/fit_hi: need 0 < lo < hi <= 1");

    // snapshot comb: 0.25 T .. T in steps of 0.05 T covers the default fit
    // window with 8 points and the final third with 7
    std::vector<double> samples;
    for (int k = 5; k <= 20; ++k) {
        const double t = s.T * 0.05 * k;
        s.prop.snapshot_times.push_back(t);
        if (k >= 14) samples.push_back(t);
    }

    const Trajectory traj = run(s.p, s.u0, s.T, s.prop);
    detail::write_records_csv(
        out_dir + "/" + cfg.get_string("out.csv", "diagnostics.csv"), traj.records);

    ExperimentResult res;
    res.summary["kind"] = "scatter-verify";
    res.summary["config"] = detail::config_to_json(cfg);
    res.summary["model"] = detail::model_to_json(s.p);
    res.summary["recipe"] = detail::recipe_to_json(s.recipe);
    res.summary["trajectory"] = detail::trajectory_to_json(traj);

    {
        CheckResult c;
        c.name = "completed";
        c.pass = traj.outcome == Outcome::completed;
        c.measured = traj.t_final;
        c.limit = s.T;
        if (!c.pass) c.note = traj.stop_reason;
        res.checks.push_back(c);
    }
    if (traj.outcome != Outcome::completed) {
        res.summary["scatter"] = "trajectory ended early, no asymptotic analysis";
        return res;
    }

    const Fft fft(s.g.dim, s.g.n);
    const ScatterReport rep = scattering_state(traj, samples, s.p, fft);
    const RateFit fit =
        decay_rate_fit(traj, s.p, rep.u_plus, fit_lo * s.T, fit_hi * s.T, fft);

    ojson sc;
    sc["verdict"] = to_string(rep.verdict);
    sc["predicted_rate"] = jnum(rep.predicted_rate);
    sc["fitted_rate"] = jnum(fit.lambda);
    sc["rate_below_floor"] = fit.below_floor;
    sc["u_plus_h1"] = jnum(h1_norm(rep.u_plus, fft));
    ojson times = ojson::array(), tail = ojson::array();
    for (double t : rep.sample_times) times.push_back(jnum(t));
    for (double d : rep.cauchy_tail) tail.push_back(jnum(d));
    sc["sample_times"] = times;
    sc["cauchy_tail"] = tail;
    try {
        const KappaMonitorReport km = kappa_monitor(traj, s.p);
        ojson kj;
        kj["kappa"] = jnum(km.kappa);
        kj["damped_grad_to_zero"] = km.damped_to_zero;
        kj["kappa_damped_grad_to_zero"] = km.kappa_damped_to_zero;
        sc["kappa_monitor"] = kj;
    } catch (const std::invalid_argument& e) {
        sc["kappa_monitor"] = std::string("skipped: ") + e.what();
    }
    res.summary["scatter"] = sc;

    {
        CheckResult c;
        c.name = "scatters";
        c.pass = rep.verdict == ScatterVerdict::scatters;
        c.measured = rep.cauchy_tail.back();
        c.limit = 1e-5 * detail::initial_h1(traj);
        res.checks.push_back(c);
    }
    if (rep.predicted_rate > 0.0 && !fit.below_floor) {
        CheckResult c;
        c.name = "rate_in_band";
        c.limit = cfg.get_double("check.rate_band", 0.25);
        c.measured = std::abs(fit.lambda / rep.predicted_rate - 1.0);
        c.pass = c.measured <= c.limit;
        c.note = "relative deviation of the fitted decay rate";
        res.checks.push_back(c);
    }
    return res;
}

inline ExperimentResult run_groundstate(const Config& cfg, const std::string& out_dir) {
    const int N = cfg.get_int("model.N");
    const double b = cfg.get_double("model.b");
    const double R = cfg.get_double("gs.R", 20.0);
    const double tol = cfg.get_double("gs.tol", 1e-15);
    const int nodes = cfg.get_int("gs.nodes", 4000);

    const RadialProfile prof = solve_ground_state(N, b, R, tol, nodes);
    write_profile_csv(prof, out_dir + "/" + cfg.get_string("out.csv", "profile.csv"));
    const double resid = ode_residual_sup(prof);

    ExperimentResult res;
    res.summary["kind"] = "groundstate";
    res.summary["config"] = detail::config_to_json(cfg);
    ojson gj;
    gj["N"] = N;
    gj["b"] = b;
    gj["alpha"] = prof.alpha_gs;
    gj["R"] = R;
    gj["nodes"] = nodes;
    gj["Q0"] = jnum(prof.Q0);
    gj["mass"] = jnum(prof.mass);
    gj["q_mass"] = jnum(q_mass(prof));
    gj["ode_residual_sup"] = jnum(resid);
    res.summary["groundstate"] = gj;

    {
        CheckResult c;
        c.name = "residual_small";
        c.limit = cfg.get_double("gs.residual_tol", 1e-7);
        c.measured = resid;
        c.pass = c.measured < c.limit;
        res.checks.push_back(c);
    }
    {
        CheckResult c;
        c.name = "monotone_decreasing";
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < prof.Q.size(); ++i)
            worst = std::max(worst, prof.Q[i + 1] - prof.Q[i]);
        c.measured = worst;
        c.limit = 0.0;
        c.pass = worst < 0.0;
        res.checks.push_back(c);
    }
    if (N == 1 && b == 0.0) {
        // closed form 3^{1/4} / sqrt(cosh(2r)) for the quintic line soliton
        CheckResult c;
        c.name = "quintic_closed_form";
        c.limit = cfg.get_double("gs.closed_form_tol", 1e-5);
        double worst = 0.0;
        for (std::size_t i = 0; i < prof.r.size(); ++i) {
            const double exact = std::pow(3.0, 0.25) / std::sqrt(std::cosh(2.0 * prof.r[i]));
            worst = std::max(worst, std::abs(prof.Q[i] - exact));
        }
        c.measured = worst;
        c.pass = worst < c.limit;
        res.checks.push_back(c);
    }
    return res;
}

struct SweepRow {
    double value = 0.0;
    std::string outcome = "error";
    double t_blow = std::numeric_limits<double>::quiet_NaN();
    double bound = std::numeric_limits<double>::quiet_NaN();
    double margin = std::numeric_limits<double>::quiet_NaN();
    double crit_C = std::numeric_limits<double>::quiet_NaN();  // calibration constraint
    std::string error;
};

namespace detail {

/** Largest C whose life-span lower bound still respects the observation,
 *  i.e. lifespan_lower(C) <= t_obs; bisected on log10 C in [-30, 30]. */
inline double calibration_constraint(const ModelParams& p, double norm, double t_obs) {
    auto lower = [&](double lg) { return lifespan_lower(p, norm, std::pow(10.0, lg)); };
    double lo = -30.0, hi = 30.0;
    if (lower(hi) > t_obs) return std::pow(10.0, hi);  // even huge C claims less: no constraint
    if (lower(lo) <= t_obs) return std::pow(10.0, lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (lower(mid) <= t_obs ? hi : lo) = mid;
    }
    return std::pow(10.0, hi);
}

inline void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (f == nullptr) throw std::runtime_error(path + ": cannot open for writing");
    std::fputs("value,outcome,t_blow,bound,margin\n", f);
    for (const auto& r : rows)
        std::fprintf(f, "%.17g,%s,%.17g,%.17g,%.17g\n", r.value, r.outcome.c_str(), r.t_blow,
                     r.bound, r.margin);
    std::fclose(f);
}

}  // namespace detail

/**
 * @brief Sweep one axis (a, alpha, b, amplitude) over a value list.
 *
 * Each value runs an independent experiment; failures are recorded in the
 * row and the sweep continues. mode=blowup compares declared blow-up times
 * against the closed-form upper bound (margin = t_blow / bound, <= 1 is
 * consistent); mode=lifespan compares the survived time against the life-span
 * lower bound (margin = survived / bound, >= 1 is consistent). With
 * sweep.calibrate=true the calibration constant C is tightened to the largest
 * value every observed blow-up permits, so all margins end up >= 1.
 */
inline ExperimentResult run_sweep(const Config& cfg, const std::string& out_dir, int jobs) {
    const std::string axis = cfg.get_string("sweep.axis");
    std::string axis_key;
    if (axis == "a")
        axis_key = "model.a_re";
    else if (axis == "alpha")
        axis_key = "model.alpha";
    else if (axis == "b")
        axis_key = "model.b";
    else if (axis == "amplitude")
        axis_key = "recipe.amplitude";
    else
        throw std::runtime_error(cfg.name() +
                                 ": sweep.axis: expected a, alpha, b or amplitude, got '" +
                                 axis + "'");
    const std::vector<double> values = cfg.get_double_list("sweep.values");
    const std::string mode = cfg.get_string("sweep.mode", "blowup");
    if (mode != "blowup" && mode != "lifespan")
        throw std::runtime_error(cfg.name() + ": sweep.mode: expected 'blowup' or 'lifespan', got '" +
                                 mode + "'");
    const bool calibrate = cfg.get_bool("sweep.calibrate", false);
    const double C = cfg.get_double("run.C", 1.0);
    const double zt = cfg.get_double("bounds.zero_tol", 0.0);
    if (calibrate && mode != "lifespan")
        throw std::runtime_error(cfg.name() + ": sweep.calibrate requires sweep.mode = lifespan");

    // mark the per-run keys consumed even for an empty sweep, so strict mode
    // flags only genuinely unknown keys (Config copies share that bookkeeping)
    try {
        detail::build_setup(cfg);
    } catch (const std::exception&) {
    }

    std::vector<SweepRow> rows(values.size());
    auto run_one = [&](std::size_t i) {
        SweepRow row;
        row.value = values[i];
        try {
            Config sub = cfg;
            sub.set(axis_key, detail::fmt17(values[i]));
            detail::RunSetup s = detail::build_setup(sub);
            const Fft fft(s.g.dim, s.g.n);
            const double norm = (s.p.s == 1) ? h1_norm(s.u0, fft) : std::sqrt(mass(s.u0));

            const Trajectory traj = run(s.p, s.u0, s.T, s.prop);
            row.outcome = traj.outcome == Outcome::completed        ? "completed"
                          : traj.outcome == Outcome::blowup_declared ? "blowup_declared"
                                                                     : "domain_exceeded";
            row.t_blow = traj.t_blow;

            if (mode == "blowup") {
                VirialData vd{s.recipe.E0, s.recipe.V0, s.recipe.I0,
                              gamma_from_damping(s.p, s.p.a.real())};
                row.bound = blowup_upper(vd, zt);
                if (traj.outcome == Outcome::blowup_declared)
                    row.margin = traj.t_blow / row.bound;
            } else {
                row.bound = lifespan_lower(s.p, norm, C);
                const double survived =
                    traj.outcome == Outcome::completed ? s.T : traj.t_final;
                row.margin = survived / std::min(row.bound, s.T);
                if (calibrate && traj.outcome == Outcome::blowup_declared)
                    row.crit_C = detail::calibration_constraint(s.p, norm, traj.t_blow);
            }
        } catch (const std::exception& e) {
            row.outcome = "error";
            row.error = e.what();
        }
        rows[i] = row;
    };

    const int nj = effective_jobs(jobs, values.size());
    if (nj <= 1) {
        for (std::size_t i = 0; i < values.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= values.size()) break;
                run_one(i);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 1; t < nj; ++t) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
    }

    double calibrated_C = C;
    if (calibrate) {
        for (const auto& r : rows)
            if (!std::isnan(r.crit_C)) calibrated_C = std::max(calibrated_C, r.crit_C);
        // recompute bounds and margins under the calibrated constant
        for (auto& r : rows) {
            if (!r.error.empty()) continue;
            Config sub = cfg;
            sub.set(axis_key, detail::fmt17(r.value));
            detail::RunSetup s = detail::build_setup(sub);
            const Fft fft(s.g.dim, s.g.n);
            const double norm = (s.p.s == 1) ? h1_norm(s.u0, fft) : std::sqrt(mass(s.u0));
            r.bound = lifespan_lower(s.p, norm, calibrated_C);
            const double survived = r.outcome == "completed" ? s.T : r.t_blow;
            r.margin = survived / std::min(r.bound, s.T);
        }
    }

    detail::write_sweep_csv(out_dir + "/" + cfg.get_string("out.csv", "sweep.csv"), rows);

    ExperimentResult res;
    res.summary["kind"] = "sweep";
    res.summary["config"] = detail::config_to_json(cfg);
    res.summary["axis"] = axis;
    res.summary["mode"] = mode;
    res.summary["jobs"] = nj;
    if (calibrate) res.summary["calibrated_C"] = jnum(calibrated_C);
    ojson rj = ojson::array();
    for (const auto& r : rows) {
        ojson e;
        e["value"] = jnum(r.value);
        e["outcome"] = r.outcome;
        e["t_blow"] = jnum(r.t_blow);
        e["bound"] = jnum(r.bound);
        e["margin"] = jnum(r.margin);
        if (!r.error.empty()) e["error"] = r.error;
        rj.push_back(e);
    }
    res.summary["rows"] = rj;

    {
        CheckResult c;
        c.name = "sweep_clean";
        int nerr = 0;
        for (const auto& r : rows)
            if (!r.error.empty()) ++nerr;
        c.measured = nerr;
        c.limit = 0.0;
        c.pass = nerr == 0;
        res.checks.push_back(c);
    }
    if (calibrate) {
        CheckResult c;
        c.name = "margins_after_calibration";
        double worst = std::numeric_limits<double>::infinity();
        for (const auto& r : rows)
            if (!std::isnan(r.margin)) worst = std::min(worst, r.margin);
        c.measured = worst;
        c.limit = 1.0;
        c.pass = worst >= 1.0 - 1e-9;
        res.checks.push_back(c);
    }
    return res;
}

/**
 * @brief Dispatch on `kind`, write artifacts under out_dir, return the
 * result with status 0 iff every enabled check passed. Module errors
 * propagate to the caller as exceptions.
 */
inline ExperimentResult run_experiment(const Config& cfg, const std::string& out_dir,
                                       int jobs = 1, bool strict = false) {
    std::filesystem::create_directories(out_dir);
    const std::string kind = cfg.get_string("kind");
    ExperimentResult res;
    if (kind == "simulate")
        res = run_simulate(cfg, out_dir);
    else if (kind == "blowup-verify")
        res = run_blowup_verify(cfg, out_dir);
    else if (kind == "lifespan-verify")
        res = run_lifespan_verify(cfg, out_dir);
    else if (kind == "scatter-verify")
        res = run_scatter_verify(cfg, out_dir);
    else if (kind == "groundstate")
        res = run_groundstate(cfg, out_dir);
    else if (kind == "sweep")
        res = run_sweep(cfg, out_dir, jobs);
    else
        throw std::runtime_error(cfg.name() + ": kind: unknown experiment kind '" + kind + "'");
    detail::finish(res, cfg, strict);
    detail::write_summary(res, out_dir + "/" + cfg.get_string("out.json", "summary.json"));
    return res;
}

}  // namespace dinls
