#pragma once

/*
 * Closed-form bounds and thresholds for the damped flow:
 *
 *  - life-span lower bounds T > (1/(q Re(a))) log(D/(D - q Re(a))) with
 *    q = alpha theta (general subcritical data) or q = 2 alpha/(2-b-(alpha+1)tau)
 *    (2-d H^1 data), and the matching global-existence damping thresholds
 *    Re(a) >= D/q;
 *  - the five-way blow-up case classification over (E0, V0, I0) with its
 *    admissible gamma intervals and printed upper-bound times;
 *  - the linear map between the barrier rate gamma and the damping a;
 *  - the damping threshold a* above which small data scatter on [T0, inf);
 *  - the mass-critical data-size threshold mu^{-1/alpha} ||Q||_2 and the
 *    gradient bound F.
 *
 * The constants C entering the life-span and scattering bounds exist but are
 * not printable; they are calibration inputs (default 1), see the experiment
 * layer for the fitting procedure.
 */

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dinls/functionals.hpp"
#include "dinls/model.hpp"

namespace dinls {

enum class BlowCase { i, ii, iii, iv, v, not_applicable };

inline const char* to_string(BlowCase c) {
    switch (c) {
        case BlowCase::i: return "i";
        case BlowCase::ii: return "ii";
        case BlowCase::iii: return "iii";
        case BlowCase::iv: return "iv";
        case BlowCase::v: return "v";
        default: return "not_applicable";
    }
}

struct GammaInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool closed_hi = false;  // case (i) only

    bool contains(double g) const {
        if (g < lo) return false;
        return closed_hi ? (g <= hi) : (g < hi);
    }
    bool empty() const { return hi <= lo && !closed_hi; }
};

struct BlowClassification {
    BlowCase label = BlowCase::not_applicable;
    GammaInterval gamma_interval{};            // union of (iv) and (v) ranges
    double gamma_split = std::numeric_limits<double>::quiet_NaN();
    // for label == iv: gamma >= gamma_split selects the case (v) bound
};

/** Everything the report sinks serialize about the closed-form bounds. */
struct BoundsReport {
    double lifespan_lower = std::numeric_limits<double>::quiet_NaN();
    double damping_threshold_global = std::numeric_limits<double>::quiet_NaN();
    BlowCase blow_case = BlowCase::not_applicable;
    GammaInterval gamma_interval{};
    double blowup_upper = std::numeric_limits<double>::quiet_NaN();
    double calibration_C = 1.0;
};

namespace detail {

/** T = (1/(q ra)) log(D / (D - q ra)), continuous through ra = 0 (-> 1/D)
 *  and infinite for ra >= D/q or degenerate D <= 0. */
inline double lifespan_kernel(double q, double ra, double D) {
    const double inf = std::numeric_limits<double>::infinity();
    if (D <= 0.0) return inf;
    if (ra == 0.0) return 1.0 / D;
    const double x = q * ra / D;
    if (x >= 1.0) return inf;
    return -std::log1p(-x) / (q * ra);
}

}  // namespace detail

/**
 * @brief Life-span lower bound for subcritical data measured in the
 * homogeneous Sobolev norm: T > (1/(alpha theta Re a)) log(C_rho/(C_rho -
 * alpha theta Re a)) with C_rho = C ||u0||^{alpha theta}; infinite at and
 * above the damping threshold Re(a) >= C_rho/(alpha theta).
 */
inline double lifespan_lower(const ModelParams& p, double norm_u0, double C) {
    if (!(C > 0.0)) throw std::invalid_argument("lifespan_lower: C must be positive");
    if (norm_u0 < 0.0) throw std::invalid_argument("lifespan_lower: negative norm");
    const double q = p.alpha * theta(p);
    if (!std::isfinite(q))
        throw std::invalid_argument("lifespan_lower: requires a subcritical exponent");
    const double D = C * std::pow(norm_u0, q);
    return detail::lifespan_kernel(q, p.a.real(), D);
}

/** Damping strength above which lifespan_lower returns infinity. */
inline double global_damping_threshold(const ModelParams& p, double norm_u0, double C) {
    if (!(C > 0.0)) throw std::invalid_argument("global_damping_threshold: C must be positive");
    const double q = p.alpha * theta(p);
    if (!std::isfinite(q))
        throw std::invalid_argument("global_damping_threshold: requires a subcritical exponent");
    return C * std::pow(norm_u0, q) / q;
}

inline double lifespan_2d_tau_max(const ModelParams& p) {
    return std::min((1.0 - p.b) / (p.alpha + 1.0), p.alpha / (p.alpha + 1.0));
}

/**
 * @brief 2-d H^1 life-span lower bound at auxiliary exponent tau:
 * T > ((2-b-(alpha+1)tau)/(2 Re(a) alpha)) log(D/(D - 2 Re(a) alpha/(2-b-(alpha+1)tau)))
 * with D = C ||u0||_{H^1}^{2 alpha/(2-b-(alpha+1)tau)}; infinite at and above
 * the matching damping threshold.
 */
inline double lifespan_lower_2d(const ModelParams& p, double norm_h1, double tau, double C) {
    if (!(C > 0.0)) throw std::invalid_argument("lifespan_lower_2d: C must be positive");
    if (p.N != 2 || p.s != 1)
        throw std::invalid_argument("lifespan_lower_2d: requires N = 2, s = 1");
    if (!(p.b > 0.0 && p.b < 1.0))
        throw std::invalid_argument("lifespan_lower_2d: requires 0 < b < 1");
    if (norm_h1 < 0.0) throw std::invalid_argument("lifespan_lower_2d: negative norm");
    const double tau_max = lifespan_2d_tau_max(p);
    if (!(tau > 0.0 && tau < tau_max))
        throw std::invalid_argument("lifespan_lower_2d: tau outside (0, tau_max)");
    const double q = 2.0 * p.alpha / (2.0 - p.b - (p.alpha + 1.0) * tau);
    const double D = C * std::pow(norm_h1, q);
    return detail::lifespan_kernel(q, p.a.real(), D);
}

struct Lifespan2dResult {
    double T = 0.0;
    double tau = 0.0;
};

/** Best lifespan_lower_2d over 64 uniformly spaced interior tau values. */
inline Lifespan2dResult lifespan_lower_2d_opt(const ModelParams& p, double norm_h1, double C) {
    const double tau_max = lifespan_2d_tau_max(p);
    Lifespan2dResult best{-std::numeric_limits<double>::infinity(), 0.0};
    for (int k = 1; k <= 64; ++k) {
        const double tau = tau_max * k / 65.0;
        const double T = lifespan_lower_2d(p, norm_h1, tau, C);
        if (T > best.T) best = {T, tau};
    }
    return best;
}

/**
 * @brief Dispatch (E0, V0, I0) to the blow-up case:
 * (i) E0 < 0; (ii) E0 = 0 and V0 < 0; (iii) E0 > 0 and
 * -2 sqrt(E0 I0) <= V0 < -sqrt(2 E0 I0); (iv)/(v) E0 > 0 and
 * V0 < -2 sqrt(E0 I0), reported as label iv with the union gamma interval
 * [0, gamma_plus) and the split gamma_minus between the two bounds.
 * zero_tol widens the E0 = 0 branch to |E0| <= zero_tol.
 */
inline BlowClassification blow_case_classify(double E0, double V0, double I0,
                                             double zero_tol = 0.0) {
    if (!(I0 > 0.0)) throw std::invalid_argument("blow_case_classify: I0 must be positive");
    if (zero_tol < 0.0) throw std::invalid_argument("blow_case_classify: negative zero_tol");
    BlowClassification out;
    if (E0 < -zero_tol) {
        out.label = BlowCase::i;
        out.gamma_interval = {0.0, (std::sqrt(V0 * V0 - 4.0 * E0 * I0) - V0) / (2.0 * I0),
                              true};
        return out;
    }
    if (E0 <= zero_tol) {  // treated as E0 = 0
        if (V0 < 0.0) {
            out.label = BlowCase::ii;
            out.gamma_interval = {0.0, 4.0 * std::abs(V0) / I0, false};
        }
        return out;
    }
    const double s_pair = 2.0 * std::sqrt(E0 * I0);      // case (iii) left edge
    const double s_single = std::sqrt(2.0 * E0 * I0);    // case (iii) right edge
    if (V0 >= -s_pair && V0 < -s_single) {
        out.label = BlowCase::iii;
        out.gamma_interval = {0.0, (4.0 / (I0 * std::abs(V0))) * (V0 * V0 - 2.0 * E0 * I0),
                              false};
        return out;
    }
    if (V0 < -s_pair) {
        const double root = std::sqrt(V0 * V0 - 4.0 * E0 * I0);
        const double gm = (2.0 / I0) * (std::abs(V0) - root);
        const double gp = (2.0 / I0) * (std::abs(V0) + root);
        out.label = BlowCase::iv;
        out.gamma_interval = {0.0, gp, false};
        out.gamma_split = gm;
        return out;
    }
    return out;
}

/** The case label effective at vd.gamma: iv data above the split reports v. */
inline BlowCase effective_blow_case(const VirialData& vd, double zero_tol = 0.0) {
    const BlowClassification c = blow_case_classify(vd.E0, vd.V0, vd.I0, zero_tol);
    if (c.label == BlowCase::iv && vd.gamma >= c.gamma_split) return BlowCase::v;
    return c.label;
}

/**
 * @brief Printed blow-up time upper bound for the classified case at
 * vd.gamma; throws when gamma lies outside the admissible interval. gamma = 0
 * returns the continuous limits I0/(4|V0|) (case ii) and |V0|/(4 E0)
 * (cases iii, iv). The case (v) form returns +infinity on the zero set of
 * C1 = I0 gamma^2 + 4 V0 gamma + 16 E0 at the lower subinterval edge.
 */
inline double blowup_upper(const VirialData& vd, double zero_tol = 0.0) {
    const BlowClassification c = blow_case_classify(vd.E0, vd.V0, vd.I0, zero_tol);
    const double g = vd.gamma;
    if (c.label == BlowCase::not_applicable || !c.gamma_interval.contains(g))
        throw std::out_of_range("blowup_upper: gamma outside the admissible interval");
    const double E0 = vd.E0, V0 = vd.V0, I0 = vd.I0;
    switch (c.label) {
        case BlowCase::i: {
            const double rad = 16.0 * (V0 * V0 - 2.0 * I0 * E0) - I0 * I0 * g * g;
            return 2.0 * I0 / (std::sqrt(rad) - I0 * g - 4.0 * V0);
        }
        case BlowCase::ii: {
            if (g == 0.0) return I0 / (4.0 * std::abs(V0));
            // |I0 g + 4 V0| = 4|V0| - I0 g inside the admissible range
            return std::log1p(I0 * g / (4.0 * std::abs(V0) - I0 * g)) / g;
        }
        default: {
            const double C1 = I0 * g * g + 4.0 * V0 * g + 16.0 * E0;
            if (c.label == BlowCase::iv && g >= c.gamma_split) {
                // case (v) branch
                if (C1 == 0.0) return std::numeric_limits<double>::infinity();
                return std::log1p(I0 * g * g / std::abs(C1)) / g;
            }
            // cases (iii) and (iv): T = (1/g) log(16 E0 / C1)
            if (g == 0.0) return std::abs(V0) / (4.0 * E0);
            return -std::log1p((4.0 * V0 * g + I0 * g * g) / (16.0 * E0)) / g;
        }
    }
}

/** a = gamma (N alpha - 4 + 2b)/(4 alpha); defined when N alpha - 4 + 2b > 0. */
inline double damping_from_gamma(const ModelParams& p, double gamma) {
    const double den = p.N * p.alpha - 4.0 + 2.0 * p.b;
    if (!(den > 0.0))
        throw std::invalid_argument("damping_from_gamma: requires N alpha - 4 + 2b > 0");
    return gamma * den / (4.0 * p.alpha);
}

/** gamma = 4 alpha a/(N alpha - 4 + 2b), the inverse map. */
inline double gamma_from_damping(const ModelParams& p, double a_real) {
    const double den = p.N * p.alpha - 4.0 + 2.0 * p.b;
    if (!(den > 0.0))
        throw std::invalid_argument("gamma_from_damping: requires N alpha - 4 + 2b > 0");
    return 4.0 * p.alpha * a_real / den;
}

/**
 * @brief Damping strength a* above which data of the given size scatter on
 * [T0, inf): the unique root of e^{-alpha theta a T0}/(alpha theta a) =
 * 1/((2C)^{alpha+1} ||v0||^alpha), located by bisection to 1e-10 relative.
 */
inline double scatter_damping_threshold(const ModelParams& p, double T0, double norm_v0,
                                        double C) {
    if (!(T0 > 0.0)) throw std::invalid_argument("scatter_damping_threshold: T0 must be positive");
    if (!(C > 0.0)) throw std::invalid_argument("scatter_damping_threshold: C must be positive");
    if (!(norm_v0 > 0.0))
        throw std::invalid_argument("scatter_damping_threshold: norm must be positive");
    const double q = p.alpha * theta(p);
    if (!std::isfinite(q))
        throw std::invalid_argument("scatter_damping_threshold: requires a subcritical exponent");
    const double rhs = 1.0 / (std::pow(2.0 * C, p.alpha + 1.0) * std::pow(norm_v0, p.alpha));
    auto f = [&](double a) { return std::exp(-q * a * T0) / (q * a) - rhs; };
    double lo = 1e-300, hi = 1.0;
    while (f(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw std::runtime_error("scatter_damping_threshold: bracket failed");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-10 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/** Mass-critical data-size threshold mu^{-1/alpha} ||Q||_2. */
inline double mass_critical_threshold(const ModelParams& p, double q_mass) {
    const double mca = mass_critical_alpha(p);
    if (std::abs(p.alpha - mca) > 1e-9 * mca)
        throw std::invalid_argument("mass_critical_threshold: alpha is not mass-critical");
    if (!(p.mu.real() > 0.0) || p.mu.imag() != 0.0)
        throw std::invalid_argument("mass_critical_threshold: requires real mu > 0");
    if (!(q_mass > 0.0)) throw std::invalid_argument("mass_critical_threshold: q_mass <= 0");
    return std::pow(p.mu.real(), -1.0 / p.alpha) * q_mass;
}

/**
 * @brief Gradient-bound constant for admissible mass-critical data:
 * F(u0) = 2 E(0) Q^alpha/(Q^alpha - mu m^alpha) exp(mu m^alpha/(Q^alpha - mu m^alpha))
 * with Q = ||Q||_2 and m = ||u0||_2; defined only below the size threshold.
 */
inline double mass_critical_F(const ModelParams& p, double q_mass, double mass_u0,
                              double E0) {
    const double threshold = mass_critical_threshold(p, q_mass);
    if (!(mass_u0 < threshold))
        throw std::domain_error("mass_critical_F: data at or above the size threshold");
    const double mu = p.mu.real();
    const double Qa = std::pow(q_mass, p.alpha);
    const double ma = std::pow(mass_u0, p.alpha);
    const double den = Qa - mu * ma;
    return 2.0 * E0 * Qa / den * std::exp(mu * ma / den);
}

/** The constant (N + 2 - b)/(mu N) multiplying F in the gradient bound. */
inline double mass_critical_const(const ModelParams& p) {
    if (!(p.mu.real() > 0.0))
        throw std::invalid_argument("mass_critical_const: requires Re(mu) > 0");
    return (p.N + 2.0 - p.b) / (p.mu.real() * p.N);
}

}  // namespace dinls
