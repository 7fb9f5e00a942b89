#pragma once

/*
 * Uniform periodic Cartesian grid on the box [-L, L)^dim with n points per
 * axis, plus the capped singular weight W(x) = min(|x|, eps)^{-b} evaluated as
 * |x|^{-b} away from the origin and eps^{-b} inside radius eps, and plain
 * rectangle-rule quadrature (spectrally accurate for smooth periodic
 * integrands). Wavenumbers follow the standard FFT ordering k_j = (pi/L) j
 * with j = 0..n/2-1, -n/2..-1. Storage is row-major with axis 0 slowest.
 */

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "dinls/fft.hpp"

namespace dinls {

struct Grid {
    int dim = 1;
    int n = 0;        // points per axis, power of two
    double L = 0.0;   // half-width of the box
    double h = 0.0;   // spacing 2L/n
    std::vector<double> x;  // per-axis coordinates, x[j] = -L + j h
    std::vector<double> k;  // per-axis wavenumbers in FFT order

    std::size_t total() const {
        std::size_t t = 1;
        for (int d = 0; d < dim; ++d) t *= static_cast<std::size_t>(n);
        return t;
    }

    /** Per-axis indices of a flat row-major index (axis 0 slowest). */
    void unpack(std::size_t idx, int out[3]) const {
        out[1] = out[2] = 0;
        if (dim == 1) {
            out[0] = static_cast<int>(idx);
        } else if (dim == 2) {
            out[0] = static_cast<int>(idx / n);
            out[1] = static_cast<int>(idx % n);
        } else {
            out[2] = static_cast<int>(idx % n);
            const std::size_t rest = idx / n;
            out[1] = static_cast<int>(rest % n);
            out[0] = static_cast<int>(rest / n);
        }
    }

    /** Cell volume element h^dim. */
    double cell() const {
        double c = 1.0;
        for (int d = 0; d < dim; ++d) c *= h;
        return c;
    }
};

inline Grid make_grid(int dim, int n, double L) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("make_grid: dim must be 1, 2 or 3");
    if (n < 16 || (n & (n - 1)) != 0)
        throw std::invalid_argument("make_grid: points per axis must be a power of two >= 16");
    if (!(L > 0.0)) throw std::invalid_argument("make_grid: L must be positive");
    Grid g;
    g.dim = dim;
    g.n = n;
    g.L = L;
    g.h = 2.0 * L / n;
    g.x.resize(n);
    g.k.resize(n);
    const double dk = M_PI / L;
    for (int j = 0; j < n; ++j) {
        g.x[j] = -L + j * g.h;
        const int jj = (j < n / 2) ? j : j - n;
        g.k[j] = dk * jj;
    }
    return g;
}

struct Field {
    Grid grid;
    std::vector<std::complex<double>> v;
};

inline Field make_field(const Grid& g) {
    return {g, std::vector<std::complex<double>>(g.total())};
}

/** |x|^2 at every grid point. */
inline std::vector<double> radius_sq_array(const Grid& g) {
    std::vector<double> r(g.total());
    int id[3];
    for (std::size_t i = 0; i < r.size(); ++i) {
        g.unpack(i, id);
        double s = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            const double xd = g.x[id[d]];
            s += xd * xd;
        }
        r[i] = s;
    }
    return r;
}

/** |k|^2 at every grid point in FFT ordering. */
inline std::vector<double> wavenumber_sq_array(const Grid& g) {
    std::vector<double> r(g.total());
    int id[3];
    for (std::size_t i = 0; i < r.size(); ++i) {
        g.unpack(i, id);
        double s = 0.0;
        for (int d = 0; d < g.dim; ++d) {
            const double kd = g.k[id[d]];
            s += kd * kd;
        }
        r[i] = s;
    }
    return r;
}

struct SingularWeight {
    double b = 0.0;
    double eps = 0.0;
    std::vector<double> w;

    /** Upper bound eps^{-b} attained inside the cap radius. */
    double cap() const { return std::pow(eps, -b); }
};

/**
 * @brief W(x) = |x|^{-b} capped at eps^{-b} inside radius eps.
 *
 * b = 0 recovers the constant weight 1 (homogeneous nonlinearity). The cap
 * keeps the origin representable; the weighted quadrature still converges
 * under refinement because |x|^{-b} is locally integrable for b < min(2, N).
 */
inline SingularWeight weight_array(const Grid& g, double b, double eps) {
    if (b < 0.0) throw std::invalid_argument("weight_array: b must be nonnegative");
    if (!(eps > 0.0)) throw std::invalid_argument("weight_array: eps must be positive");
    SingularWeight sw;
    sw.b = b;
    sw.eps = eps;
    sw.w.resize(g.total());
    const std::vector<double> r2 = radius_sq_array(g);
    const double wcap = std::pow(eps, -b);
    for (std::size_t i = 0; i < sw.w.size(); ++i) {
        const double r = std::sqrt(r2[i]);
        sw.w[i] = (r < eps) ? wcap : std::pow(r, -b);
    }
    return sw;
}

/** Rectangle-rule integral of a real sample array. */
inline double integrate(const Grid& g, const std::vector<double>& f) {
    if (f.size() != g.total()) throw std::invalid_argument("integrate: size mismatch");
    double s = 0.0;
    for (double v : f) s += v;
    return s * g.cell();
}

/** Rectangle-rule integral of a complex sample array. */
inline std::complex<double> integrate(const Grid& g, const std::vector<std::complex<double>>& f) {
    if (f.size() != g.total()) throw std::invalid_argument("integrate: size mismatch");
    std::complex<double> s{0.0, 0.0};
    for (const auto& v : f) s += v;
    return s * g.cell();
}

/**
 * @brief ||grad u||_2^2 via the Parseval sum (h^dim / n^dim) sum |k|^2 |U_k|^2.
 *
 * Exact for band-limited fields. Allocates one scratch transform.
 */
inline double spectral_gradient_sq_norm(const Field& f, const Fft& fft) {
    std::vector<std::complex<double>> u = f.v;
    fft.forward(u);
    const std::vector<double> k2 = wavenumber_sq_array(f.grid);
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += k2[i] * std::norm(u[i]);
    return s * f.grid.cell() / static_cast<double>(f.grid.total());
}

}  // namespace dinls
