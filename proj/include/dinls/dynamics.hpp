#pragma once

/*
 * Time evolution of the gauge-transformed equation
 *
 *   i dv/dt + Lap v + mu h(t) |x|^{-b} |v|^alpha v = 0,   h(t) = e^{-alpha a t},
 *
 * by Strang split-step spectral marching, plus an independent Picard-Duhamel
 * integrator for cross-validation. Evolving v instead of u = e^{-at} v keeps
 * the damping exact: every reported u-quantity is recovered from v by a scalar
 * gauge factor.
 *
 * The free half-steps adjacent to interior nonlinear substeps are merged into
 * single spectral multiplications, so an interior step costs one forward and
 * one inverse transform. Blow-up is declared, never proven: a run stops when
 * the gradient norm or sup norm crosses its threshold, the adaptive step
 * reaches its floor, or the pointwise nonlinear update overflows.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dinls/fft.hpp"
#include "dinls/functionals.hpp"
#include "dinls/grid.hpp"
#include "dinls/model.hpp"

namespace dinls {

struct PropagatorConfig {
    double dt0 = 1e-3;
    double dt_floor = 1e-10;
    double grad_max = 0.0;  // <= 0: auto, 1e6 x initial gradient norm
    double sup_max = 0.0;   // <= 0: auto, 1e6 x initial sup norm
    bool adapt = true;
    int record_every = 1;
    double c_adapt = 0.5;       // dt = min(dt0, c_adapt / (1 + sup^alpha W_max))
    double boundary_tol = 1e-6; // domain_exceeded above this outer-shell mass fraction
    std::vector<double> snapshot_times;
};

enum class Outcome { completed, blowup_declared, domain_exceeded };

struct Trajectory {
    std::vector<double> times;
    std::vector<DiagnosticsRecord> records;
    Field final_state;  // the transformed state v at the last valid time
    Outcome outcome = Outcome::completed;
    double t_final = 0.0;
    double t_blow = std::numeric_limits<double>::quiet_NaN();
    std::string stop_reason;  // "grad_threshold", "sup_threshold", "dt_floor", "overflow", ""
    long accepted_steps = 0;
    std::vector<std::pair<double, Field>> snapshots;  // v at requested times
};

/** h(t) = e^{-alpha a t}; real for real a. */
inline std::complex<double> gauge_factor(std::complex<double> a, double alpha, double t) {
    return std::exp(-alpha * a * t);
}

/** u(t) = e^{-at} v(t). */
inline Field gauge_to_u(const Field& v, std::complex<double> a, double t) {
    Field u = v;
    const std::complex<double> f = std::exp(-a * t);
    for (auto& z : u.v) z *= f;
    return u;
}

/** Exact free flow e^{i tau Lap}: multiplication by e^{-i|k|^2 tau}. */
inline Field free_propagate(const Field& f, double tau, const Fft& fft) {
    Field out = f;
    if (tau == 0.0) return out;
    const std::vector<double> ksq = wavenumber_sq_array(f.grid);
    fft.forward(out.v);
    for (std::size_t i = 0; i < out.v.size(); ++i)
        out.v[i] *= std::polar(1.0, -ksq[i] * tau);
    fft.backward(out.v);
    return out;
}

inline Field free_propagate(const Field& f, double tau) {
    const Fft fft(f.grid.dim, f.grid.n);
    return free_propagate(f, tau, fft);
}

namespace detail {

inline double amplitude_pow(const std::complex<double>& z, double alpha) {
    return (alpha == 2.0) ? std::norm(z) : std::pow(std::abs(z), alpha);
}

/**
 * In-place nonlinear substep over [t, t+tau]: the pointwise ODE
 * dw/ds = i mu h(s) W |w|^alpha w. Real mu and real a preserve |w|, so the
 * substep is an exact phase rotation with the closed-form
 * int_t^{t+tau} h = e^{-alpha a t} (1 - e^{-alpha a tau})/(alpha a)
 * (tau e^{-alpha a t} at a = 0). Otherwise one classical 4th-order explicit
 * step integrates the ODE. Returns false on overflow.
 */
inline bool nonlinear_update(Field& f, double t, double tau, const ModelParams& p,
                             const SingularWeight& w) {
    if (tau == 0.0) return true;
    if (p.mu == std::complex<double>(0.0, 0.0)) return true;
    const double ea = p.alpha * p.a.real();
    const bool exact = (p.mu.imag() == 0.0 && p.a.imag() == 0.0);
    if (exact) {
        const double J = (ea == 0.0) ? tau
                                     : std::exp(-ea * t) * (-std::expm1(-ea * tau)) / ea;
        const double muJ = p.mu.real() * J;
        for (std::size_t i = 0; i < f.v.size(); ++i) {
            const double theta = muJ * w.w[i] * amplitude_pow(f.v[i], p.alpha);
            if (!std::isfinite(theta)) return false;
            f.v[i] *= std::polar(1.0, theta);
        }
        return true;
    }
    const std::complex<double> ca = p.alpha * p.a;
    const std::complex<double> h0 = std::exp(-ca * t);
    const std::complex<double> h1 = std::exp(-ca * (t + 0.5 * tau));
    const std::complex<double> h2 = std::exp(-ca * (t + tau));
    for (std::size_t i = 0; i < f.v.size(); ++i) {
        const double wi = w.w[i];
        auto rhs = [&](const std::complex<double>& h, const std::complex<double>& z) {
            return std::complex<double>(0.0, 1.0) * p.mu * h * wi *
                   amplitude_pow(z, p.alpha) * z;
        };
        const std::complex<double> z = f.v[i];
        const std::complex<double> k1 = rhs(h0, z);
        const std::complex<double> k2 = rhs(h1, z + 0.5 * tau * k1);
        const std::complex<double> k3 = rhs(h1, z + 0.5 * tau * k2);
        const std::complex<double> k4 = rhs(h2, z + tau * k3);
        const std::complex<double> out = z + tau / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(out.real()) || !std::isfinite(out.imag())) return false;
        f.v[i] = out;
    }
    return true;
}

}  // namespace detail

/** Nonlinear substep as a pure function; *overflow (optional) reports blow-up. */
inline Field nonlinear_step(const Field& f, double t, double tau, const ModelParams& p,
                            const SingularWeight& w, bool* overflow = nullptr) {
    if (tau < 0.0) throw std::invalid_argument("nonlinear_step: tau must be nonnegative");
    Field out = f;
    const bool ok = detail::nonlinear_update(out, t, tau, p, w);
    if (overflow) *overflow = !ok;
    return out;
}

/** One Strang step over [t, t+dt]: half free, full nonlinear, half free. */
inline Field strang_step(const Field& f, double t, double dt, const ModelParams& p,
                         const SingularWeight& w, const Fft& fft, bool* overflow = nullptr) {
    if (dt < 0.0) throw std::invalid_argument("strang_step: dt must be nonnegative");
    if (overflow) *overflow = false;
    if (dt == 0.0) return f;
    Field out = free_propagate(f, 0.5 * dt, fft);
    const bool ok = detail::nonlinear_update(out, t, dt, p, w);
    if (overflow) *overflow = !ok;
    if (!ok) return out;
    return free_propagate(out, 0.5 * dt, fft);
}

inline Field strang_step(const Field& f, double t, double dt, const ModelParams& p,
                         const SingularWeight& w, bool* overflow = nullptr) {
    const Fft fft(f.grid.dim, f.grid.n);
    return strang_step(f, t, dt, p, w, fft, overflow);
}

/**
 * @brief March v from u0 to time T, recording diagnostics every record_every
 * accepted steps and at every snapshot time.
 *
 * The adaptive step is dt = min(dt0, c_adapt / (1 + ||v||_inf^alpha W_max)),
 * never below dt_floor except for the final clip onto a record boundary.
 * Records carry u-quantities (recovered by exact gauge scalars) together with
 * the variance/virial/Pohozaev triple of v. Blow-up is declared with
 * t_blow = the last accepted time; the boundary-mass monitor turns the outcome
 * into domain_exceeded instead.
 */
inline Trajectory run(const ModelParams& p, const Field& u0, double T,
                      const PropagatorConfig& cfg) {
    if (!(T > 0.0)) throw std::invalid_argument("run: T must be positive");
    if (!(cfg.dt0 > 0.0) || !(cfg.dt_floor > 0.0) || cfg.dt_floor >= cfg.dt0)
        throw std::invalid_argument("run: need 0 < dt_floor < dt0");
    if (cfg.record_every < 1) throw std::invalid_argument("run: record_every must be >= 1");
    if (!(cfg.c_adapt > 0.0)) throw std::invalid_argument("run: c_adapt must be positive");
    if (p.N != u0.grid.dim) throw std::invalid_argument("run: params.N != grid.dim");
    if (!(p.alpha > 0.0) || p.b < 0.0)
        throw std::invalid_argument("run: need alpha > 0 and b >= 0");

    const Grid& g = u0.grid;
    const Fft fft(g.dim, g.n);
    const SingularWeight w = weight_array(g, p.b, 0.5 * g.h);
    const std::vector<double> ksq = wavenumber_sq_array(g);
    const std::vector<double> r2 = radius_sq_array(g);
    const double cell = g.cell();
    const double inv_total = 1.0 / static_cast<double>(g.total());
    const double ra = p.a.real();
    const double mur = p.mu.real();
    const double pcoeff = (p.N * p.alpha + 2.0 * p.b) / (4.0 * (p.alpha + 2.0));
    const double eps = 1e-12 * std::max(1.0, T);
    const double inf = std::numeric_limits<double>::infinity();

    Trajectory traj;
    traj.final_state = u0;
    Field& v = traj.final_state;
    HSeries hs(p);

    std::vector<double> snaps;
    for (double s : cfg.snapshot_times)
        if (s > eps && s <= T + eps) snaps.push_back(std::min(s, T));
    std::sort(snaps.begin(), snaps.end());
    snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());
    std::size_t si = 0;

    const double grad0 = std::sqrt(spectral_gradient_sq_norm(v, fft));
    double grad_thresh = (cfg.grad_max > 0.0) ? cfg.grad_max : 1e6 * grad0;
    if (grad_thresh <= 0.0) grad_thresh = inf;
    const double sup0 = sup_norm(v);
    double sup_thresh = (cfg.sup_max > 0.0) ? cfg.sup_max : 1e6 * sup0;
    if (sup_thresh <= 0.0) sup_thresh = inf;

    auto apply_free = [&](double tau) {
        fft.forward(v.v);
        for (std::size_t i = 0; i < v.v.size(); ++i)
            v.v[i] *= std::polar(1.0, -ksq[i] * tau);
        fft.backward(v.v);
    };
    auto choose_dt = [&](double sup) {
        if (!cfg.adapt) return cfg.dt0;
        return std::min(cfg.dt0,
                        cfg.c_adapt / (1.0 + std::pow(sup, p.alpha) * w.cap()));
    };
    auto make_record = [&](double t, double dt_used) {
        DiagnosticsRecord r;
        r.t = t;
        r.dt = dt_used;
        std::vector<std::complex<double>> hat = v.v;
        fft.forward(hat);
        double grad_v = 0.0;
        for (std::size_t i = 0; i < hat.size(); ++i) grad_v += ksq[i] * std::norm(hat[i]);
        grad_v *= cell * inv_total;
        double virial_v = 0.0;
        {
            std::vector<std::complex<double>> tmp(hat.size());
            int id[3];
            for (int d = 0; d < g.dim; ++d) {
                for (std::size_t i = 0; i < hat.size(); ++i) {
                    g.unpack(i, id);
                    tmp[i] = std::complex<double>(0.0, g.k[id[d]]) * hat[i];
                }
                fft.backward(tmp);
                for (std::size_t i = 0; i < tmp.size(); ++i) {
                    g.unpack(i, id);
                    virial_v += g.x[id[d]] * std::imag(tmp[i] * std::conj(v.v[i]));
                }
            }
            virial_v *= cell;
        }
        double mass_v = 0.0, pot_v = 0.0, var_v = 0.0, sup_v = 0.0;
        double shell = 0.0, total = 0.0;
        const double edge = 0.9 * g.L;
        int id[3];
        for (std::size_t i = 0; i < v.v.size(); ++i) {
            const double m = std::norm(v.v[i]);
            mass_v += m;
            var_v += r2[i] * m;
            pot_v += w.w[i] * detail::amplitude_pow(v.v[i], p.alpha) * m;
            sup_v = std::max(sup_v, std::abs(v.v[i]));
            total += m;
            g.unpack(i, id);
            for (int d = 0; d < g.dim; ++d)
                if (std::abs(g.x[id[d]]) >= edge) {
                    shell += m;
                    break;
                }
        }
        mass_v *= cell;
        var_v *= cell;
        pot_v *= cell;

        const double decay2 = std::exp(-2.0 * ra * t);
        const double decay_a = std::exp(-p.alpha * ra * t);
        const double grad_u = decay2 * grad_v;
        const double pot_u = decay2 * decay_a * pot_v;
        r.mass_u = decay2 * mass_v;
        r.grad_sq = grad_u;
        r.sup_norm = std::exp(-ra * t) * sup_v;
        r.weighted_pot = pot_u;
        r.energy_u = 0.5 * grad_u - mur / (p.alpha + 2.0) * pot_u;
        r.kinetic_K = grad_u - mur * pot_u;
        r.H = hs.push(t, grad_v, pot_v);
        r.variance_I = var_v;
        r.virial_V = virial_v;
        r.pohozaev_P = 0.5 * grad_v - decay_a * pcoeff * pot_v;
        r.boundary_frac = (total > 0.0) ? shell / total : 0.0;
        return r;
    };
    auto push_record = [&](const DiagnosticsRecord& r) {
        traj.times.push_back(r.t);
        traj.records.push_back(r);
    };

    double t = 0.0;
    double dt_next = choose_dt(sup0);
    {
        const DiagnosticsRecord r0 = make_record(0.0, dt_next);
        push_record(r0);
        if (std::sqrt(r0.grad_sq) >= grad_thresh) {
            traj.outcome = Outcome::blowup_declared;
            traj.stop_reason = "grad_threshold";
            traj.t_blow = 0.0;
            return traj;
        }
        if (r0.boundary_frac > cfg.boundary_tol) {
            traj.outcome = Outcome::domain_exceeded;
            return traj;
        }
    }

    Field last_good = v;
    double last_good_t = 0.0;

    while (t < T - eps) {
        const double t_stop = (si < snaps.size()) ? std::min(T, snaps[si]) : T;
        int in_group = 0;
        double dt_cur = std::min(dt_next, t_stop - t);
        bool declared = false;

        apply_free(0.5 * dt_cur);
        while (true) {
            if (!detail::nonlinear_update(v, t, dt_cur, p, w)) {
                v = last_good;
                traj.t_final = last_good_t;
                traj.outcome = Outcome::blowup_declared;
                traj.stop_reason = "overflow";
                traj.t_blow = t;
                return traj;
            }
            t += dt_cur;
            ++in_group;
            ++traj.accepted_steps;
            const double sup = sup_norm(v);
            if (sup >= sup_thresh) {
                apply_free(0.5 * dt_cur);
                traj.outcome = Outcome::blowup_declared;
                traj.stop_reason = "sup_threshold";
                traj.t_blow = t;
                declared = true;
                break;
            }
            dt_next = choose_dt(sup);
            if (in_group == cfg.record_every || t >= t_stop - eps) {
                apply_free(0.5 * dt_cur);
                break;
            }
            double dt_new = std::min(dt_next, t_stop - t);
            if (dt_next < cfg.dt_floor) {
                apply_free(0.5 * dt_cur);
                traj.outcome = Outcome::blowup_declared;
                traj.stop_reason = "dt_floor";
                traj.t_blow = t;
                declared = true;
                break;
            }
            apply_free(0.5 * (dt_cur + dt_new));
            dt_cur = dt_new;
        }

        const DiagnosticsRecord r = make_record(t, dt_cur);
        push_record(r);
        if (declared) {
            traj.t_final = t;
            return traj;
        }
        if (std::sqrt(r.grad_sq) >= grad_thresh) {
            traj.outcome = Outcome::blowup_declared;
            traj.stop_reason = "grad_threshold";
            traj.t_blow = t;
            traj.t_final = t;
            return traj;
        }
        if (r.boundary_frac > cfg.boundary_tol) {
            traj.outcome = Outcome::domain_exceeded;
            traj.t_final = t;
            return traj;
        }
        if (si < snaps.size() && t >= snaps[si] - eps) {
            traj.snapshots.emplace_back(snaps[si], v);
            ++si;
        }
        if (dt_next < cfg.dt_floor) {
            traj.outcome = Outcome::blowup_declared;
            traj.stop_reason = "dt_floor";
            traj.t_blow = t;
            traj.t_final = t;
            return traj;
        }
        last_good = v;
        last_good_t = t;
    }
    traj.t_final = t;
    return traj;
}

/**
 * @brief Independent integrator: fixed-point iteration of the Duhamel map
 * v(t) = e^{it Lap} u0 + i mu int_0^t e^{i(t-s) Lap} [h(s) W |v|^alpha v](s) ds
 * on quad_points+1 uniform nodes over [0, T_small], trapezoid rule in s.
 * Converges only while the map contracts; callers keep T_small small.
 */
inline Field picard_iterate(const ModelParams& p, const Field& u0, double T_small,
                            int quad_points, int max_iter, double tol) {
    if (!(T_small > 0.0)) throw std::invalid_argument("picard_iterate: T_small must be positive");
    if (quad_points < 1) throw std::invalid_argument("picard_iterate: quad_points must be >= 1");
    if (max_iter < 1) throw std::invalid_argument("picard_iterate: max_iter must be >= 1");
    if (p.N != u0.grid.dim) throw std::invalid_argument("picard_iterate: params.N != grid.dim");

    const Grid& g = u0.grid;
    const Fft fft(g.dim, g.n);
    const SingularWeight w = weight_array(g, p.b, 0.5 * g.h);
    const std::vector<double> ksq = wavenumber_sq_array(g);
    const int K = quad_points;
    const double ds = T_small / K;
    const std::size_t n = u0.v.size();

    std::vector<std::complex<double>> u0_hat = u0.v;
    fft.forward(u0_hat);

    // Free-flow initial guess at every node.
    std::vector<std::vector<std::complex<double>>> V(K + 1);
    for (int j = 0; j <= K; ++j) {
        V[j] = u0_hat;
        const double sj = j * ds;
        for (std::size_t i = 0; i < n; ++i) V[j][i] *= std::polar(1.0, -ksq[i] * sj);
        fft.backward(V[j]);
    }

    const std::complex<double> imu = std::complex<double>(0.0, 1.0) * p.mu;
    std::vector<std::vector<std::complex<double>>> nl_hat(K + 1);
    std::vector<std::vector<std::complex<double>>> Vnew(K + 1);
    std::vector<std::complex<double>> acc(n);

    for (int it = 0; it < max_iter; ++it) {
        for (int m = 0; m <= K; ++m) {
            const std::complex<double> h = std::exp(-p.alpha * p.a * (m * ds));
            nl_hat[m].resize(n);
            for (std::size_t i = 0; i < n; ++i)
                nl_hat[m][i] = h * w.w[i] * detail::amplitude_pow(V[m][i], p.alpha) * V[m][i];
            fft.forward(nl_hat[m]);
        }
        for (int j = 0; j <= K; ++j) {
            const double sj = j * ds;
            for (std::size_t i = 0; i < n; ++i)
                acc[i] = u0_hat[i] * std::polar(1.0, -ksq[i] * sj);
            for (int m = 0; m <= j && j > 0; ++m) {
                const std::complex<double> wt =
                    imu * ds * ((m == 0 || m == j) ? 0.5 : 1.0);
                const double lag = (j - m) * ds;
                for (std::size_t i = 0; i < n; ++i)
                    acc[i] += wt * nl_hat[m][i] * std::polar(1.0, -ksq[i] * lag);
            }
            Vnew[j] = acc;
            fft.backward(Vnew[j]);
        }
        double diff = 0.0;
        for (int j = 0; j <= K; ++j)
            for (std::size_t i = 0; i < n; ++i)
                diff = std::max(diff, std::abs(Vnew[j][i] - V[j][i]));
        V.swap(Vnew);
        if (diff < tol) {
            Field out = make_field(g);
            out.v = V[K];
            return out;
        }
    }
    throw std::runtime_error("picard_iterate: no contraction within max_iter iterations");
}

}  // namespace dinls
