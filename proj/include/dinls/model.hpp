#pragma once

/*
 * Parameter windows and exponent calculus for the damped inhomogeneous NLS
 *
 *   i u_t + Laplace(u) + mu |x|^{-b} |u|^alpha u + i a u = 0,  x in R^N,
 *
 * with complex coupling mu, complex damping a (Re(a) >= 0), singularity
 * exponent b > 0 and power alpha > 0. Every closed-form exponent used by the
 * bounds, dynamics and scattering layers lives here:
 *
 *   admissible pair   gamma = 4(alpha+2) / (alpha(N-2s) + 2b),
 *                     rho   = N(alpha+2) / (N + alpha s - b),
 *   theta             = 4 / (4 - 2b - alpha(N-2s))   (infinite at critical alpha),
 *   blow-up rate map  gamma_blow = 4 alpha a / (N alpha - 4 + 2b),
 *   kappa             = (4 - 2b - (N-2) alpha) / (N alpha - 4 + 2b),
 *   beta              = 2 (4 - 2b - (N-2) alpha) / (4 - 2b - N alpha).
 *
 * All functions are pure; everything operates on value types.
 */

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dinls {

struct ModelParams {
    int N = 1;                       // space dimension, 1..3
    int s = 0;                       // regularity index, 0 or 1
    double b = 0.5;                  // singularity exponent of |x|^{-b}
    double alpha = 1.0;              // nonlinearity power
    std::complex<double> mu{1.0, 0.0};
    std::complex<double> a{0.0, 0.0};
};

/** Mass-critical power (4-2b)/N. */
inline double mass_critical_alpha(const ModelParams& p) {
    return (4.0 - 2.0 * p.b) / p.N;
}

/** Energy/regularity-critical power (4-2b)/(N-2s); infinite when N = 2s. */
inline double critical_alpha(const ModelParams& p) {
    const int d = p.N - 2 * p.s;
    if (d <= 0) return std::numeric_limits<double>::infinity();
    return (4.0 - 2.0 * p.b) / d;
}

/**
 * @brief Membership report for every hypothesis window used downstream.
 *
 * rejections lists hard parameter violations (b <= 0, alpha <= 0, Re(a) < 0,
 * N outside 1..3, s outside {0,1}); when nonempty all window flags are false.
 */
struct RegimeReport {
    bool local_hs = false;            // H^s local theory: s < N/2, 0<b<min(2,N-2s), 0<alpha<=(4-2b)/(N-2s)
    bool local_hs_critical = false;   // alpha exactly at the upper endpoint above
    bool local_h1_2d = false;         // N=2 H^1 theory: 0<b<1, any alpha>0
    bool global_defocusing = false;   // Re(mu)<0, N>=3, 0<b<min(2,N-2), alpha<(4-2b)/(N-2)
    bool global_mass_subcritical = false; // Re(mu)>0, N>=3, alpha<(4-2b)/N
    bool global_mass_critical = false;    // Re(mu)>0, N>=3, alpha=(4-2b)/N
    bool blowup = false;              // mu=1: N=2, 0<b<1, alpha>2-b; or N>=3, (4-2b)/N<alpha<(4-2b)/(N-2)
    std::vector<std::string> rejections;

    bool rejected() const { return !rejections.empty(); }
};

namespace detail {
inline bool near(double x, double y, double tol = 1e-12) {
    return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}
}  // namespace detail

/**
 * @brief Classify a parameter set against each hypothesis window.
 *
 * Pure: equal inputs give equal reports. Boundary powers exactly at a window's
 * upper endpoint are classified as critical where the window is inclusive
 * (local H^s theory) and excluded where it is strict (blow-up window).
 */
inline RegimeReport validate_params(const ModelParams& p) {
    RegimeReport r;
    if (p.N < 1 || p.N > 3)
        r.rejections.push_back("N must be 1, 2 or 3 (got " + std::to_string(p.N) + ")");
    if (p.s != 0 && p.s != 1)
        r.rejections.push_back("s must be 0 or 1 (got " + std::to_string(p.s) + ")");
    if (!(p.b > 0.0))
        r.rejections.push_back("b must be positive (got " + std::to_string(p.b) + ")");
    if (!(p.alpha > 0.0))
        r.rejections.push_back("alpha must be positive (got " + std::to_string(p.alpha) + ")");
    if (p.a.real() < 0.0)
        r.rejections.push_back("Re(a) must be nonnegative (got " + std::to_string(p.a.real()) + ")");
    if (r.rejected()) return r;

    const double ac = critical_alpha(p);
    const double am = mass_critical_alpha(p);

    if (2 * p.s < p.N && p.b < std::min(2.0, double(p.N - 2 * p.s)) && p.alpha <= ac) {
        r.local_hs = true;
        r.local_hs_critical = detail::near(p.alpha, ac);
    }
    r.local_h1_2d = (p.N == 2 && p.b < 1.0);

    if (p.N >= 3 && p.b < std::min(2.0, double(p.N - 2))) {
        const double aec = (4.0 - 2.0 * p.b) / (p.N - 2);
        r.global_defocusing = (p.mu.real() < 0.0 && p.alpha < aec);
        r.global_mass_subcritical = (p.mu.real() > 0.0 && p.alpha < am);
        r.global_mass_critical = (p.mu.real() > 0.0 && detail::near(p.alpha, am));
    }

    const bool mu_is_one = (p.mu == std::complex<double>(1.0, 0.0));
    if (mu_is_one) {
        if (p.N == 2 && p.b < 1.0 && p.alpha > 2.0 - p.b) r.blowup = true;
        if (p.N >= 3 && p.b < std::min(2.0, double(p.N - 2)) && p.alpha > am &&
            p.alpha < (4.0 - 2.0 * p.b) / (p.N - 2))
            r.blowup = true;
    }
    return r;
}

/**
 * @brief The distinguished admissible pair (gamma, rho).
 *
 * gamma = 4(alpha+2)/(alpha(N-2s)+2b), rho = N(alpha+2)/(N+alpha s-b);
 * they satisfy 2/gamma + N/rho = N/2.
 */
struct AdmissiblePair {
    double gamma;
    double rho;
};

inline AdmissiblePair admissible_pair(const ModelParams& p) {
    const double g = 4.0 * (p.alpha + 2.0) / (p.alpha * (p.N - 2 * p.s) + 2.0 * p.b);
    const double rho = p.N * (p.alpha + 2.0) / (p.N + p.alpha * p.s - p.b);
    return {g, rho};
}

/**
 * @brief theta = 4/(4-2b-alpha(N-2s)); +infinity exactly at the critical power.
 */
inline double theta(const ModelParams& p) {
    const double den = 4.0 - 2.0 * p.b - p.alpha * (p.N - 2 * p.s);
    if (den <= 0.0) {
        if (detail::near(den, 0.0, 1e-12) || den == 0.0)
            return std::numeric_limits<double>::infinity();
        throw std::invalid_argument("theta: alpha above the critical power");
    }
    return 4.0 / den;
}

/**
 * @brief gamma = 4 alpha Re(a) / (N alpha - 4 + 2b), the damping-to-rate map.
 *
 * Linear and homogeneous of degree 1 in Re(a). Requires N alpha - 4 + 2b > 0.
 */
inline double blowup_gamma(const ModelParams& p) {
    const double den = p.N * p.alpha - 4.0 + 2.0 * p.b;
    if (den <= 0.0)
        throw std::invalid_argument("blowup_gamma: N*alpha - 4 + 2b must be positive");
    return 4.0 * p.alpha * p.a.real() / den;
}

/**
 * @brief kappa and beta decay exponents.
 *
 * kappa = (4-2b-(N-2)alpha)/(N alpha-4+2b);
 * beta  = 2(4-2b-(N-2)alpha)/(4-2b-N alpha).
 *
 * Both denominators vanish together exactly at the mass-critical power
 * alpha = (4-2b)/N; there the degenerate flag is set and both values are NaN.
 */
struct KappaBeta {
    double kappa;
    double beta;
    bool beta_degenerate;
};

inline KappaBeta kappa_beta(const ModelParams& p) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double num = 4.0 - 2.0 * p.b - (p.N - 2) * p.alpha;
    const double bden = 4.0 - 2.0 * p.b - p.N * p.alpha;
    if (detail::near(bden, 0.0, 1e-12) || bden == 0.0) return {nan, nan, true};
    return {-num / bden, 2.0 * num / bden, false};
}

struct ExponentSet {
    double gamma_pair;
    double rho_pair;
    double theta;       // +infinity at the critical power
    double gamma_blow;  // NaN when N*alpha-4+2b <= 0
    double kappa;       // NaN when undefined
    double beta;        // NaN when degenerate or undefined
};

/** Collect every exponent for a parameter set; entries without a valid
 *  denominator are NaN rather than errors. */
inline ExponentSet exponent_set(const ModelParams& p) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    ExponentSet e{0.0, 0.0, 0.0, nan, nan, nan};
    const AdmissiblePair ap = admissible_pair(p);
    e.gamma_pair = ap.gamma;
    e.rho_pair = ap.rho;
    e.theta = theta(p);
    if (p.N * p.alpha - 4.0 + 2.0 * p.b > 0.0) {
        e.gamma_blow = blowup_gamma(p);
        const KappaBeta kb = kappa_beta(p);
        e.kappa = kb.kappa;
        if (!kb.beta_degenerate) e.beta = kb.beta;
    }
    return e;
}

}  // namespace dinls
