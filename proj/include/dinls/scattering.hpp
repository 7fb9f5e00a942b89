#pragma once

// Post-processing of completed trajectories. A run that disperses should have
// pulled-back profiles w(t) = e^{-it Lap} v(t) forming a Cauchy sequence in
// H^1; the last profile is the candidate asymptotic state u_plus, and the
// residual ||v(t) - e^{it Lap} u_plus||_{H^1} should shrink like
// e^{-alpha Re(a) t}. Everything here works on immutable snapshots, so the
// verdict logic is deliberately conservative: a finite run can support
// scattering but never prove it, and anything that fails the monotone-tail
// test is reported as inconclusive rather than refuted.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "dinls/dynamics.hpp"
#include "dinls/functionals.hpp"
#include "dinls/grid.hpp"
#include "dinls/model.hpp"

namespace dinls {

/** (||f||_2^2 + ||grad f||_2^2)^{1/2}, gradient evaluated spectrally. */
inline double h1_norm(const Field& f, const Fft& fft) {
    return std::sqrt(mass(f) + spectral_gradient_sq_norm(f, fft));
}

inline double h1_norm(const Field& f) {
    const Fft fft(f.grid.dim, f.grid.n);
    return h1_norm(f, fft);
}

/** e^{-it Lap} applied to a snapshot: undoes the free flow up to time t. */
inline Field inverse_free_profile(const Field& f, double t, const Fft& fft) {
    return free_propagate(f, -t, fft);
}

inline Field inverse_free_profile(const Field& f, double t) {
    const Fft fft(f.grid.dim, f.grid.n);
    return free_propagate(f, -t, fft);
}

enum class ScatterVerdict { scatters, inconclusive };

inline const char* to_string(ScatterVerdict v) {
    return v == ScatterVerdict::scatters ? "scatters" : "inconclusive";
}

struct ScatterReport {
    Field u_plus;                      // pulled-back profile at the last sample
    std::vector<double> sample_times;  // times actually used
    std::vector<double> cauchy_tail;   // H^1 gaps between consecutive profiles
    double fitted_rate = std::numeric_limits<double>::quiet_NaN();
    double predicted_rate = 0.0;  // alpha * Re(a)
    ScatterVerdict verdict = ScatterVerdict::inconclusive;
};

namespace detail {

inline Field field_diff(const Field& a, const Field& b) {
    if (a.v.size() != b.v.size())
        throw std::invalid_argument("field_diff: size mismatch");
    Field d = a;
    for (std::size_t i = 0; i < d.v.size(); ++i) d.v[i] -= b.v[i];
    return d;
}

inline const Field* find_snapshot(const Trajectory& traj, double t) {
    for (const auto& [ts, f] : traj.snapshots)
        if (std::abs(ts - t) <= 1e-9 * std::max(1.0, std::abs(t))) return &f;
    return nullptr;
}

/** ||v_0||_{H^1} from the t = 0 diagnostics record (u = v at t = 0). */
inline double initial_h1(const Trajectory& traj) {
    if (traj.records.empty())
        throw std::invalid_argument("trajectory has no diagnostics records");
    const DiagnosticsRecord& r0 = traj.records.front();
    return std::sqrt(r0.mass_u + r0.grad_sq);
}

}  // namespace detail

/**
 * @brief Extract the candidate asymptotic state and judge the Cauchy tail.
 *
 * The trajectory must have completed (a run that stopped early cannot
 * scatter) and must hold stored snapshots at every requested time, at least
 * four of which lie in the final third of the run. The verdict is "scatters"
 * only when the consecutive H^1 gaps are nonincreasing and the last gap is
 * below 1e-5 times the initial H^1 norm; gaps already at rounding level are
 * treated as ties so that an exactly free flow is not rejected for noise.
 */
inline ScatterReport scattering_state(const Trajectory& traj,
                                      const std::vector<double>& sample_times,
                                      const ModelParams& p, const Fft& fft) {
    if (traj.outcome != Outcome::completed)
        throw std::runtime_error("scattering_state: trajectory ended early, no asymptotic state");
    if (sample_times.size() < 2)
        throw std::invalid_argument("scattering_state: need at least 2 sample times");

    std::vector<double> times = sample_times;
    std::sort(times.begin(), times.end());
    int in_final_third = 0;
    for (double t : times)
        if (t >= 2.0 / 3.0 * traj.t_final - 1e-12) ++in_final_third;
    if (in_final_third < 4)
        throw std::invalid_argument(
            "scattering_state: need at least 4 samples in the final third of the run");

    std::vector<Field> profiles;
    profiles.reserve(times.size());
    for (double t : times) {
        const Field* snap = detail::find_snapshot(traj, t);
        if (snap == nullptr)
            throw std::invalid_argument("scattering_state: no stored snapshot at t = " +
                                        std::to_string(t));
        profiles.push_back(inverse_free_profile(*snap, t, fft));
    }

    const double ref = detail::initial_h1(traj);
    ScatterReport rep;
    rep.sample_times = times;
    rep.predicted_rate = p.alpha * p.a.real();
    rep.cauchy_tail.reserve(times.size() - 1);
    for (std::size_t j = 0; j + 1 < profiles.size(); ++j)
        rep.cauchy_tail.push_back(
            h1_norm(detail::field_diff(profiles[j + 1], profiles[j]), fft));
    rep.u_plus = std::move(profiles.back());

    const double noise = 1e-12 * ref;
    bool monotone = true;
    for (std::size_t j = 0; j + 1 < rep.cauchy_tail.size(); ++j) {
        const double cur = rep.cauchy_tail[j];
        const double nxt = rep.cauchy_tail[j + 1];
        if (nxt > cur && nxt > noise) {
            monotone = false;
            break;
        }
    }
    if (monotone && rep.cauchy_tail.back() < 1e-5 * ref)
        rep.verdict = ScatterVerdict::scatters;
    return rep;
}

inline ScatterReport scattering_state(const Trajectory& traj,
                                      const std::vector<double>& sample_times,
                                      const ModelParams& p) {
    const Fft fft(traj.final_state.grid.dim, traj.final_state.grid.n);
    return scattering_state(traj, sample_times, p, fft);
}

struct RateFit {
    double lambda = std::numeric_limits<double>::quiet_NaN();
    double predicted = 0.0;    // alpha * Re(a)
    bool below_floor = false;  // residuals underflow: decay faster than measurable
    std::vector<double> times;
    std::vector<double> log_residual;
};

/**
 * @brief Least-squares exponential rate of ||v(t) - e^{it Lap} u_plus||_{H^1}.
 *
 * Uses every stored snapshot with time in [t_lo, t_hi]; at least six are
 * required. When all residuals sit below 1e-13 (relative to the larger of 1
 * and ||u_plus||_{H^1}) there is nothing to fit and below_floor is set:
 * the decay is faster than this grid can measure. Individual samples at the
 * floor are excluded from the fit rather than polluting it with log(0).
 */
inline RateFit decay_rate_fit(const Trajectory& traj, const ModelParams& p,
                              const Field& u_plus, double t_lo, double t_hi,
                              const Fft& fft) {
    if (!(t_lo < t_hi)) throw std::invalid_argument("decay_rate_fit: empty window");

    RateFit fit;
    fit.predicted = p.alpha * p.a.real();
    const double floor = 1e-13 * std::max(1.0, h1_norm(u_plus, fft));

    int in_window = 0;
    for (const auto& [ts, f] : traj.snapshots) {
        if (ts < t_lo - 1e-12 || ts > t_hi + 1e-12) continue;
        ++in_window;
        const double r =
            h1_norm(detail::field_diff(f, free_propagate(u_plus, ts, fft)), fft);
        if (r < floor) continue;
        fit.times.push_back(ts);
        fit.log_residual.push_back(std::log(r));
    }
    if (in_window < 6)
        throw std::invalid_argument("decay_rate_fit: need at least 6 snapshots in the window");
    if (fit.times.size() < 2) {
        fit.below_floor = true;
        return fit;
    }

    const std::size_t n = fit.times.size();
    double st = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        st += fit.times[i];
        sy += fit.log_residual[i];
    }
    const double tbar = st / static_cast<double>(n);
    const double ybar = sy / static_cast<double>(n);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (fit.times[i] - tbar) * (fit.log_residual[i] - ybar);
        den += (fit.times[i] - tbar) * (fit.times[i] - tbar);
    }
    fit.lambda = -num / den;
    return fit;
}

struct KappaMonitorReport {
    double kappa = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> t;
    std::vector<double> damped_grad;        // e^{-Re(a) t} ||grad u(t)||
    std::vector<double> kappa_damped_grad;  // e^{-kappa Re(a) t} ||grad u(t)||
    bool damped_to_zero = false;
    bool kappa_damped_to_zero = false;
};

namespace detail {

/** Heuristic "tends to zero": final value under 1% of the first and
 *  nonincreasing over the final third of the run. */
inline bool appears_to_vanish(const std::vector<double>& t, const std::vector<double>& val,
                              double t_final) {
    if (val.size() < 2) return false;
    if (!(val.back() < 0.01 * val.front())) return false;
    const double cut = 2.0 / 3.0 * t_final;
    for (std::size_t j = 0; j + 1 < val.size(); ++j) {
        if (t[j] < cut) continue;
        if (val[j + 1] > val[j] * (1.0 + 1e-12)) return false;
    }
    return true;
}

}  // namespace detail

/**
 * @brief Damped-gradient decay monitors over a recorded trajectory.
 *
 * Evaluates e^{-Re(a) t} ||grad u(t)|| and e^{-kappa Re(a) t} ||grad u(t)||
 * at every diagnostics record, kappa = (4-2b-(N-2)alpha)/(N alpha-4+2b).
 * Requires the focusing window (4-2b)/N < alpha (and alpha <= (4-2b)/(N-2)
 * for N >= 3), where kappa is positive. Purely heuristic: a finite sample of
 * a liminf statement, nothing more.
 */
inline KappaMonitorReport kappa_monitor(const Trajectory& traj, const ModelParams& p) {
    if (!(p.alpha > mass_critical_alpha(p)))
        throw std::invalid_argument("kappa_monitor: alpha must exceed (4-2b)/N");
    if (p.N >= 3 && p.alpha > critical_alpha(p))
        throw std::invalid_argument("kappa_monitor: alpha must not exceed (4-2b)/(N-2)");
    if (traj.records.size() < 2)
        throw std::invalid_argument("kappa_monitor: need at least 2 diagnostics records");

    KappaMonitorReport rep;
    rep.kappa = kappa_beta(p).kappa;
    const double ra = p.a.real();
    for (const auto& r : traj.records) {
        const double g = std::sqrt(std::max(0.0, r.grad_sq));
        rep.t.push_back(r.t);
        rep.damped_grad.push_back(std::exp(-ra * r.t) * g);
        rep.kappa_damped_grad.push_back(std::exp(-rep.kappa * ra * r.t) * g);
    }
    rep.damped_to_zero = detail::appears_to_vanish(rep.t, rep.damped_grad, traj.t_final);
    rep.kappa_damped_to_zero =
        detail::appears_to_vanish(rep.t, rep.kappa_damped_grad, traj.t_final);
    return rep;
}

}  // namespace dinls
