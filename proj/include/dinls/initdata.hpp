// Constructors for the initial data families used by the verification
// experiments: Gaussians and smoothly truncated bumps with a quadratic phase
// chirp, plus the amplitude tunings that place the data at a prescribed sign
// of the energy (negative, zero, or inside the positive-energy window that
// still collapses).
//
// All constructors are deterministic: the same inputs produce bitwise
// identical fields.  Closed-form amplitude tunings are never trusted alone;
// callers can confirm them against the energy quadrature, and the tests do.

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "dinls/fft.hpp"
#include "dinls/functionals.hpp"
#include "dinls/grid.hpp"
#include "dinls/model.hpp"

namespace dinls {

namespace detail {

// C-infinity step: 0 for y <= 0, 1 for y >= 1, monotone between
inline double smooth_step(double y) {
    if (y <= 0.0) return 0.0;
    if (y >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / y);
    const double c = std::exp(-1.0 / (1.0 - y));
    return a / (a + c);
}

}  // namespace detail

// A exp(-|x|^2/w^2) exp(-i c |x|^2); the negative chirp sign makes the
// virial start negative (V0 = -2c I0) so c > 0 pushes toward collapse
inline Field gaussian_data(const Grid& g, double width, double amplitude, double chirp) {
    if (!(width > 0.0) || width >= g.L / 4.0)
        throw std::invalid_argument("gaussian data: need 0 < width < L/4");
    const auto rsq = radius_sq_array(g);
    Field u = make_field(g);
    const double iw2 = 1.0 / (width * width);
    for (std::size_t i = 0; i < u.v.size(); ++i)
        u.v[i] = std::polar(amplitude * std::exp(-rsq[i] * iw2), -chirp * rsq[i]);
    return u;
}

// Gaussian envelope times a radial C-infinity cutoff that is 1 inside 0.6 L
// and vanishes beyond 0.8 L, then the same quadratic chirp.  The cutoff keeps
// the support strictly inside the periodic box, so the boundary-mass monitor
// starts at exactly zero.
inline Field chirped_bump(const Grid& g, double amplitude, double width, double chirp) {
    if (!(width > 0.0) || width >= g.L / 4.0)
        throw std::invalid_argument("chirped bump: need 0 < width < L/4");
    const auto rsq = radius_sq_array(g);
    Field u = make_field(g);
    const double iw2 = 1.0 / (width * width);
    for (std::size_t i = 0; i < u.v.size(); ++i) {
        const double r = std::sqrt(rsq[i]);
        const double cut = detail::smooth_step((0.8 * g.L - r) / (0.2 * g.L));
        u.v[i] = std::polar(amplitude * std::exp(-rsq[i] * iw2) * cut, -chirp * rsq[i]);
    }
    return u;
}

struct TuneResult {
    double lambda_star;    // closed-form zero-energy crossing
    double lambda_search;  // smallest doubling-ladder multiple with E < 0
};

// For focusing data u0 = lambda phi, E(lambda phi) changes sign at
//   lambda*^alpha = ((alpha+2)/2) |grad phi|^2 / (Re mu  int W |phi|^{alpha+2});
// returns the crossing together with a doubling-search witness above it
inline TuneResult tune_lambda_negative_energy(const ModelParams& p, const Field& phi,
                                              const SingularWeight& w, const Fft& fft) {
    if (!(p.mu.real() > 0.0))
        throw std::invalid_argument(
            "lambda tuning: defocusing or neutral mu, no amplitude makes E negative");
    const double B = weighted_potential(phi, w, p.alpha);
    if (!(B > 0.0)) throw std::invalid_argument("lambda tuning: zero weighted norm");
    const double G = spectral_gradient_sq_norm(phi, fft);
    TuneResult out{};
    out.lambda_star =
        std::pow(0.5 * (p.alpha + 2.0) * G / (p.mu.real() * B), 1.0 / p.alpha);
    double lam = std::pow(2.0, -20);
    for (int it = 0; it < 80; ++it) {
        // E(lam phi) < 0  <=>  lam > lambda*
        const double E = 0.5 * lam * lam * G -
                         p.mu.real() / (p.alpha + 2.0) * std::pow(lam, p.alpha + 2.0) * B;
        if (E < 0.0) break;
        lam *= 2.0;
    }
    out.lambda_search = lam;
    return out;
}

// sigma with E(sigma psi) = 0: same crossing formula as the lambda tuning
inline double sigma_zero_energy(const ModelParams& p, const Field& psi,
                                const SingularWeight& w, const Fft& fft) {
    if (!(p.mu.real() > 0.0))
        throw std::invalid_argument("sigma tuning: defocusing or neutral mu");
    const double B = weighted_potential(psi, w, p.alpha);
    if (!(B > 0.0)) throw std::invalid_argument("sigma tuning: zero weighted norm");
    const double G = spectral_gradient_sq_norm(psi, fft);
    return std::pow(0.5 * (p.alpha + 2.0) * G / (p.mu.real() * B), 1.0 / p.alpha);
}

struct SigmaWindow {
    double pow_lo = 0.0;  // window endpoints for sigma^alpha; lo may be negative
    double pow_hi = 0.0;
    double sigma_lo = 0.0;  // max(pow_lo, 0)^{1/alpha}
    double sigma_hi = 0.0;
    bool empty = false;
};

// The open sigma^alpha interval
//   (alpha+2)(|grad psi|^2/2 - 4 |x psi|^2) / int W |psi|^{alpha+2}
//     < sigma^alpha < (alpha+2)/2 |grad psi|^2 / int W |psi|^{alpha+2}
// whose members produce positive-energy data that still collapse; the upper
// endpoint is the zero-energy amplitude.  Degenerate (zero-variance) data
// close the window, which is reported through the empty flag.
inline SigmaWindow sigma_window(const ModelParams& p, const Field& psi,
                                const SingularWeight& w, const Fft& fft) {
    if (!(p.mu.real() > 0.0))
        throw std::invalid_argument("sigma window: defocusing or neutral mu");
    const double B = weighted_potential(psi, w, p.alpha);
    if (!(B > 0.0)) throw std::invalid_argument("sigma window: zero weighted norm");
    const double G = spectral_gradient_sq_norm(psi, fft);
    const double I = variance(psi);
    SigmaWindow out;
    out.pow_hi = 0.5 * (p.alpha + 2.0) * G / (p.mu.real() * B);
    out.pow_lo = (p.alpha + 2.0) * (0.5 * G - 4.0 * I) / (p.mu.real() * B);
    out.sigma_hi = std::pow(out.pow_hi, 1.0 / p.alpha);
    out.sigma_lo = out.pow_lo > 0.0 ? std::pow(out.pow_lo, 1.0 / p.alpha) : 0.0;
    out.empty = !(out.pow_lo < out.pow_hi * (1.0 - 1e-12));
    return out;
}

enum class RecipeKind { gaussian, chirped_bump, scaled_lambda, sigma_zero_energy, sigma_window };

inline const char* to_string(RecipeKind k) {
    switch (k) {
        case RecipeKind::gaussian: return "gaussian";
        case RecipeKind::chirped_bump: return "chirped_bump";
        case RecipeKind::scaled_lambda: return "scaled_lambda";
        case RecipeKind::sigma_zero_energy: return "sigma_zero_energy";
        case RecipeKind::sigma_window: return "sigma_window";
    }
    return "?";
}

struct DataRecipe {
    RecipeKind kind = RecipeKind::gaussian;
    double amplitude = 1.0;
    double width = 1.0;
    double chirp = 0.0;
    double scale_mult = 2.0;  // scaled_lambda only: multiple of lambda* applied
    // filled by realize():
    double scale = 1.0;  // amplitude factor actually applied on top of the shape
    double E0 = 0.0, V0 = 0.0, I0 = 0.0;
    double mass = 0.0, grad_sq = 0.0;
};

// Build the field for a recipe and record its starting functionals.
inline Field realize(DataRecipe& r, const ModelParams& p, const Grid& g,
                     const SingularWeight& w, const Fft& fft) {
    Field u;
    r.scale = 1.0;
    switch (r.kind) {
        case RecipeKind::gaussian:
            u = gaussian_data(g, r.width, r.amplitude, r.chirp);
            break;
        case RecipeKind::chirped_bump:
            u = chirped_bump(g, r.amplitude, r.width, r.chirp);
            break;
        case RecipeKind::scaled_lambda: {
            u = chirped_bump(g, r.amplitude, r.width, r.chirp);
            r.scale = r.scale_mult * tune_lambda_negative_energy(p, u, w, fft).lambda_star;
            break;
        }
        case RecipeKind::sigma_zero_energy: {
            u = chirped_bump(g, r.amplitude, r.width, r.chirp);
            r.scale = sigma_zero_energy(p, u, w, fft);
            break;
        }
        case RecipeKind::sigma_window: {
            u = chirped_bump(g, r.amplitude, r.width, r.chirp);
            const SigmaWindow win = sigma_window(p, u, w, fft);
            if (win.empty) throw std::invalid_argument("recipe: sigma window is empty");
            r.scale = std::pow(0.5 * (std::max(win.pow_lo, 0.0) + win.pow_hi),
                               1.0 / p.alpha);
            break;
        }
    }
    if (r.scale != 1.0)
        for (auto& z : u.v) z *= r.scale;
    r.E0 = energy(u, p, w, fft);
    r.V0 = virial(u, fft);
    r.I0 = variance(u);
    r.mass = mass(u);
    r.grad_sq = spectral_gradient_sq_norm(u, fft);
    return u;
}

}  // namespace dinls
