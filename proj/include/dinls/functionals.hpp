#pragma once

/*
 * Scalar functionals of the flow and their cross-checks.
 *
 *   M(f) = ||f||_2^2
 *   E(f) = 1/2 ||grad f||_2^2 - (mu/(alpha+2)) int |x|^{-b} |f|^{alpha+2}
 *   K(f) = ||grad f||_2^2 - mu int |x|^{-b} |f|^{alpha+2}
 *   H(t) = e^{2Re(a)t} E(u(t))
 *          - mu (Re(a) alpha/(alpha+2)) int_0^t e^{2Re(a)s} ||x|^{-b}|u|^{alpha+2}||_1 ds
 *   I(v) = || |x| v ||_2^2          (variance)
 *   V(v) = Im int (x . grad v) conj(v)   (virial)
 *   P(v,t) = 1/2 ||grad v||_2^2
 *            - e^{-alpha Re(a) t} ((N alpha + 2b)/(4(alpha+2))) int |x|^{-b}|v|^{alpha+2}
 *
 * Along smooth flows I' = 4V and V' = 4P, and the variance sits below the
 * barrier g(gamma, t) = I0 e^{gt} + (4V0/g)(e^{gt}-1) + (16E0/g^2)(e^{gt}-1-gt).
 *
 * Complex couplings: the energy-type functionals use Re(mu); the imaginary
 * part has no conserved-energy meaning and is reported only through the raw
 * weighted potential.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "dinls/fft.hpp"
#include "dinls/grid.hpp"
#include "dinls/model.hpp"

namespace dinls {

/** One time sample of every diagnostic; the CSV row schema. */
struct DiagnosticsRecord {
    double t = 0.0;
    double mass_u = 0.0;
    double energy_u = 0.0;
    double kinetic_K = 0.0;
    double H = 0.0;
    double variance_I = 0.0;   // of the gauge-transformed state v
    double virial_V = 0.0;     // of v
    double pohozaev_P = 0.0;   // of v
    double grad_sq = 0.0;      // ||grad u||^2
    double sup_norm = 0.0;     // sup |u|
    double weighted_pot = 0.0; // int |x|^{-b} |u|^{alpha+2}
    double boundary_frac = 0.0;
    double dt = 0.0;
};

struct VirialData {
    double E0 = 0.0;
    double V0 = 0.0;
    double I0 = 0.0;
    double gamma = 0.0;
};

inline double mass(const Field& f) {
    double s = 0.0;
    for (const auto& z : f.v) s += std::norm(z);
    return s * f.grid.cell();
}

inline double sup_norm(const Field& f) {
    double s = 0.0;
    for (const auto& z : f.v) s = std::max(s, std::abs(z));
    return s;
}

/** int W |f|^{alpha+2}. */
inline double weighted_potential(const Field& f, const SingularWeight& w, double alpha) {
    if (w.w.size() != f.v.size()) throw std::invalid_argument("weighted_potential: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < f.v.size(); ++i)
        s += w.w[i] * std::pow(std::abs(f.v[i]), alpha + 2.0);
    return s * f.grid.cell();
}

inline double energy(const Field& f, const ModelParams& p, const SingularWeight& w,
                     const Fft& fft) {
    return 0.5 * spectral_gradient_sq_norm(f, fft) -
           p.mu.real() / (p.alpha + 2.0) * weighted_potential(f, w, p.alpha);
}

inline double kinetic_K(const Field& f, const ModelParams& p, const SingularWeight& w,
                        const Fft& fft) {
    return spectral_gradient_sq_norm(f, fft) - p.mu.real() * weighted_potential(f, w, p.alpha);
}

inline double variance(const Field& f) {
    const std::vector<double> r2 = radius_sq_array(f.grid);
    double s = 0.0;
    for (std::size_t i = 0; i < f.v.size(); ++i) s += r2[i] * std::norm(f.v[i]);
    return s * f.grid.cell();
}

/** Im int (x . grad v) conj(v), gradient taken spectrally. */
inline double virial(const Field& f, const Fft& fft) {
    const Grid& g = f.grid;
    std::vector<std::complex<double>> hat = f.v;
    fft.forward(hat);
    std::vector<std::complex<double>> tmp(hat.size());
    double s = 0.0;
    int id[3];
    for (int d = 0; d < g.dim; ++d) {
        for (std::size_t i = 0; i < hat.size(); ++i) {
            g.unpack(i, id);
            tmp[i] = std::complex<double>(0.0, g.k[id[d]]) * hat[i];
        }
        fft.backward(tmp);
        for (std::size_t i = 0; i < tmp.size(); ++i) {
            g.unpack(i, id);
            s += g.x[id[d]] * std::imag(tmp[i] * std::conj(f.v[i]));
        }
    }
    return s * g.cell();
}

/** Same virial evaluated entirely in Fourier space,
 *  Im sum_k (i k_d Fv)_k conj(F[x_d v])_k; unit-test cross-check. */
inline double virial_fourier(const Field& f, const Fft& fft) {
    const Grid& g = f.grid;
    std::vector<std::complex<double>> hat = f.v;
    fft.forward(hat);
    std::vector<std::complex<double>> xv(f.v.size());
    double s = 0.0;
    int id[3];
    for (int d = 0; d < g.dim; ++d) {
        for (std::size_t i = 0; i < f.v.size(); ++i) {
            g.unpack(i, id);
            xv[i] = g.x[id[d]] * f.v[i];
        }
        fft.forward(xv);
        for (std::size_t i = 0; i < xv.size(); ++i) {
            g.unpack(i, id);
            s += std::imag(std::complex<double>(0.0, g.k[id[d]]) * hat[i] * std::conj(xv[i]));
        }
    }
    return s * g.cell() / static_cast<double>(g.total());
}

inline double pohozaev_P(const Field& f, const ModelParams& p, const SingularWeight& w,
                         const Fft& fft, double t) {
    const double coeff = (p.N * p.alpha + 2.0 * p.b) / (4.0 * (p.alpha + 2.0));
    return 0.5 * spectral_gradient_sq_norm(f, fft) -
           std::exp(-p.alpha * p.a.real() * t) * coeff * weighted_potential(f, w, p.alpha);
}

/** Fraction of mass whose point has any coordinate in the outer 10% of the box. */
inline double boundary_mass_fraction(const Field& f) {
    const Grid& g = f.grid;
    const double edge = 0.9 * g.L;
    double total = 0.0, shell = 0.0;
    int id[3];
    for (std::size_t i = 0; i < f.v.size(); ++i) {
        const double m = std::norm(f.v[i]);
        total += m;
        g.unpack(i, id);
        for (int d = 0; d < g.dim; ++d) {
            if (std::abs(g.x[id[d]]) >= edge) {
                shell += m;
                break;
            }
        }
    }
    return (total > 0.0) ? shell / total : 0.0;
}

/**
 * @brief Running evaluation of the conserved functional H along a trajectory.
 *
 * Samples are pushed in time order with v-quantities; the integrand
 * e^{2Re(a)s} ||x|^{-b}|u|^{alpha+2}||_1 equals e^{-alpha Re(a) s} pot_v(s),
 * which stays bounded, so no large exponentials enter the accumulation.
 * The trapezoid rule over pushed samples bounds the accuracy; push at every
 * record time.
 */
class HSeries {
public:
    explicit HSeries(const ModelParams& p) : p_(p) {}

    /** Push a sample (t, ||grad v||^2, pot_v) and get H(t). */
    double push(double t, double grad_sq_v, double pot_v) {
        const double ra = p_.a.real();
        const double integrand = std::exp(-p_.alpha * ra * t) * pot_v;
        if (started_) {
            if (t < last_t_) throw std::invalid_argument("HSeries: samples out of order");
            integral_ += 0.5 * (t - last_t_) * (integrand + last_integrand_);
        }
        started_ = true;
        last_t_ = t;
        last_integrand_ = integrand;
        const double mu = p_.mu.real();
        const double scaled_energy =
            0.5 * grad_sq_v - mu / (p_.alpha + 2.0) * std::exp(-p_.alpha * ra * t) * pot_v;
        return scaled_energy - mu * ra * p_.alpha / (p_.alpha + 2.0) * integral_;
    }

    double accumulated_integral() const { return integral_; }

private:
    ModelParams p_;
    bool started_ = false;
    double last_t_ = 0.0;
    double last_integrand_ = 0.0;
    double integral_ = 0.0;
};

namespace detail {
/** e^x - 1 - x, series-stabilized for small |x|. */
inline double expm1m(double x) {
    if (std::abs(x) < 1e-4)
        return 0.5 * x * x * (1.0 + x / 3.0 + x * x / 12.0 + x * x * x / 60.0);
    return std::expm1(x) - x;
}
}  // namespace detail

/**
 * @brief Barrier g(gamma, t); the variance of a solution satisfies
 * I(t) <= g(gamma, t). gamma = 0 evaluates the quadratic limit
 * 8 E0 t^2 + 4 V0 t + I0 exactly; small gamma uses expm1-based forms,
 * so there is no cancellation anywhere.
 */
inline double barrier_g(const VirialData& vd, double t) {
    const double gamma = vd.gamma;
    if (gamma < 0.0) throw std::invalid_argument("barrier_g: gamma must be nonnegative");
    if (gamma == 0.0) return vd.I0 + 4.0 * vd.V0 * t + 8.0 * vd.E0 * t * t;
    const double x = gamma * t;
    const double em1 = std::expm1(x);
    return vd.I0 * (em1 + 1.0) + 4.0 * vd.V0 / gamma * em1 +
           16.0 * vd.E0 / (gamma * gamma) * detail::expm1m(x);
}

struct OdeResiduals {
    std::vector<double> t;      // interior sample times
    std::vector<double> res_I;  // I'(t) - 4 V(t)
    std::vector<double> res_V;  // V'(t) - 4 P(t)
    double max_res_I = 0.0;
    double max_res_V = 0.0;
};

/**
 * @brief Centered finite-difference residuals of I' = 4V and V' = 4P over
 * recorded samples; second-order accurate also on nonuniform record times.
 */
inline OdeResiduals ode_residuals(const std::vector<DiagnosticsRecord>& recs) {
    if (recs.size() < 3) throw std::invalid_argument("ode_residuals: need at least 3 samples");
    OdeResiduals out;
    for (std::size_t i = 1; i + 1 < recs.size(); ++i) {
        const double hm = recs[i].t - recs[i - 1].t;
        const double hp = recs[i + 1].t - recs[i].t;
        if (hm <= 0.0 || hp <= 0.0) throw std::invalid_argument("ode_residuals: times not increasing");
        auto deriv = [&](auto get) {
            const double fm = get(recs[i - 1]), f0 = get(recs[i]), fp = get(recs[i + 1]);
            return (hm / (hp * (hp + hm))) * fp + ((hp - hm) / (hp * hm)) * f0 -
                   (hp / (hm * (hp + hm))) * fm;
        };
        const double dI = deriv([](const DiagnosticsRecord& r) { return r.variance_I; });
        const double dV = deriv([](const DiagnosticsRecord& r) { return r.virial_V; });
        out.t.push_back(recs[i].t);
        out.res_I.push_back(dI - 4.0 * recs[i].virial_V);
        out.res_V.push_back(dV - 4.0 * recs[i].pohozaev_P);
        out.max_res_I = std::max(out.max_res_I, std::abs(out.res_I.back()));
        out.max_res_V = std::max(out.max_res_V, std::abs(out.res_V.back()));
    }
    return out;
}

}  // namespace dinls
