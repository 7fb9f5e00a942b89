#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "dinls/fft.hpp"
#include "dinls/functionals.hpp"
#include "dinls/grid.hpp"
#include "dinls/model.hpp"

namespace {

constexpr double kSqrtPi = 1.7724538509055160;
constexpr double kSqrtPiHalf = 1.2533141373155003;  // sqrt(pi/2)

template <typename F>
dinls::Field fill(const dinls::Grid& g, F f) {
    dinls::Field field = dinls::make_field(g);
    int id[3];
    double p[3] = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < field.v.size(); ++i) {
        g.unpack(i, id);
        for (int d = 0; d < g.dim; ++d) p[d] = g.x[id[d]];
        field.v[i] = f(p[0], p[1], p[2]);
    }
    return field;
}

}  // namespace

TEST_CASE("mass, sup and weighted potential against closed forms") {
    const dinls::Grid g = dinls::make_grid(1, 512, 10.0);
    const auto gauss = fill(g, [](double x, double, double) {
        return std::complex<double>(std::exp(-x * x), 0.0);
    });

    CHECK(dinls::mass(gauss) == Catch::Approx(kSqrtPiHalf).epsilon(1e-12));
    CHECK(dinls::sup_norm(gauss) == Catch::Approx(1.0).epsilon(1e-14));

    dinls::Field zero = dinls::make_field(g);
    CHECK(dinls::mass(zero) == 0.0);
    CHECK(dinls::sup_norm(zero) == 0.0);
    CHECK(dinls::boundary_mass_fraction(zero) == 0.0);

    // b = 0, alpha = 2: int |f|^4 = int e^{-4x^2} = sqrt(pi)/2.
    const dinls::SingularWeight flat = dinls::weight_array(g, 0.0, g.h / 2.0);
    CHECK(dinls::weighted_potential(gauss, flat, 2.0) ==
          Catch::Approx(0.5 * kSqrtPi).epsilon(1e-12));
}

TEST_CASE("energy and kinetic functional identities") {
    const dinls::Grid g = dinls::make_grid(1, 512, 10.0);
    const dinls::Fft fft(g.dim, g.n);
    const auto gauss = fill(g, [](double x, double, double) {
        return std::complex<double>(std::exp(-x * x), 0.0);
    });
    const dinls::SingularWeight w = dinls::weight_array(g, 0.5, g.h / 2.0);

    dinls::ModelParams p;
    p.N = 1;
    p.alpha = 2.0;
    p.b = 0.5;

    SECTION("mu = 0 leaves the kinetic half: E = 1/2 ||grad f||^2 = sqrt(pi/2)/2") {
        p.mu = {0.0, 0.0};
        CHECK(dinls::energy(gauss, p, w, fft) ==
              Catch::Approx(0.5 * kSqrtPiHalf).epsilon(1e-10));
    }

    SECTION("K = 2E - mu alpha/(alpha+2) pot") {
        p.mu = {1.0, 0.0};
        const double pot = dinls::weighted_potential(gauss, w, p.alpha);
        const double lhs = dinls::kinetic_K(gauss, p, w, fft);
        const double rhs = 2.0 * dinls::energy(gauss, p, w, fft) -
                           p.alpha / (p.alpha + 2.0) * pot;
        CHECK(lhs == Catch::Approx(rhs).epsilon(1e-12));
    }

    SECTION("only Re(mu) enters the energy") {
        p.mu = {-2.0, 3.0};
        const double with_imag = dinls::energy(gauss, p, w, fft);
        p.mu = {-2.0, 0.0};
        CHECK(with_imag == dinls::energy(gauss, p, w, fft));
    }
}

TEST_CASE("variance and virial of a chirped gaussian") {
    const dinls::Grid g = dinls::make_grid(1, 512, 10.0);
    const dinls::Fft fft(g.dim, g.n);

    // v = e^{-x^2} e^{-i x^2}: I = sqrt(pi/2)/4, V = -2 I.
    const auto chirped = fill(g, [](double x, double, double) {
        return std::polar(std::exp(-x * x), -x * x);
    });
    const double I0 = 0.25 * kSqrtPiHalf;
    CHECK(dinls::variance(chirped) == Catch::Approx(I0).epsilon(1e-10));
    CHECK(dinls::virial(chirped, fft) == Catch::Approx(-2.0 * I0).epsilon(1e-8));
    CHECK(dinls::virial_fourier(chirped, fft) ==
          Catch::Approx(dinls::virial(chirped, fft)).epsilon(1e-10));

    // Real profile: V = 0.
    const auto plain = fill(g, [](double x, double, double) {
        return std::complex<double>(std::exp(-x * x), 0.0);
    });
    CHECK(std::abs(dinls::virial(plain, fft)) < 1e-12);
}

TEST_CASE("2-d virial: both evaluations agree and match the closed form") {
    const dinls::Grid g = dinls::make_grid(2, 128, 10.0);
    const dinls::Fft fft(g.dim, g.n);
    const auto chirped = fill(g, [](double x, double y, double) {
        const double r2 = x * x + y * y;
        return std::polar(std::exp(-r2), -r2);
    });
    // I = pi/4, V = -2 I = -pi/2.
    CHECK(dinls::variance(chirped) == Catch::Approx(0.25 * M_PI).epsilon(1e-10));
    CHECK(dinls::virial(chirped, fft) == Catch::Approx(-0.5 * M_PI).epsilon(1e-8));
    CHECK(dinls::virial_fourier(chirped, fft) ==
          Catch::Approx(dinls::virial(chirped, fft)).epsilon(1e-10));
}

TEST_CASE("pohozaev functional reduces to the energy at the critical coupling") {
    // b = 0, alpha = 4/N: the potential coefficient becomes 1/(alpha+2),
    // so P(t=0) = E for mu = 1.
    const dinls::Grid g = dinls::make_grid(1, 256, 10.0);
    const dinls::Fft fft(g.dim, g.n);
    const auto gauss = fill(g, [](double x, double, double) {
        return std::complex<double>(std::exp(-x * x), 0.0);
    });
    const dinls::SingularWeight flat = dinls::weight_array(g, 0.0, g.h / 2.0);

    dinls::ModelParams p;
    p.N = 1;
    p.alpha = 4.0;
    p.b = 0.0;
    p.mu = {1.0, 0.0};
    p.a = {0.7, 0.0};

    const double e = dinls::energy(gauss, p, flat, fft);
    CHECK(dinls::pohozaev_P(gauss, p, flat, fft, 0.0) == Catch::Approx(e).epsilon(1e-12));
    // At t = 0 the damping factor is 1 whatever a is.
    dinls::ModelParams q = p;
    q.a = {0.0, 0.0};
    CHECK(dinls::pohozaev_P(gauss, p, flat, fft, 0.0) ==
          dinls::pohozaev_P(gauss, q, flat, fft, 0.0));
}

TEST_CASE("H series: trapezoid accumulation against a hand-integrable sample") {
    dinls::ModelParams p;
    p.N = 1;
    p.alpha = 1.0;
    p.b = 0.5;
    p.mu = {1.0, 0.0};
    p.a = {0.5, 0.0};

    // pot_v(s) = e^{alpha Re(a) s} makes the integrand identically 1, where
    // the trapezoid rule is exact: with ||grad v||^2 = 2,
    // H(t) = 1 - 1/3 - (Re(a) alpha/(alpha+2)) t = 2/3 - t/6.
    dinls::HSeries hs(p);
    const double h0 = hs.push(0.0, 2.0, 1.0);
    CHECK(h0 == Catch::Approx(2.0 / 3.0).epsilon(1e-14));
    hs.push(0.7, 2.0, std::exp(0.5 * 0.7));
    hs.push(1.3, 2.0, std::exp(0.5 * 1.3));
    const double h2 = hs.push(2.0, 2.0, std::exp(0.5 * 2.0));
    CHECK(h2 == Catch::Approx(2.0 / 3.0 - 2.0 / 6.0).epsilon(1e-12));
    CHECK(hs.accumulated_integral() == Catch::Approx(2.0).epsilon(1e-12));

    SECTION("undamped case: H is the initial energy for every sample") {
        dinls::ModelParams q = p;
        q.a = {0.0, 0.0};
        dinls::HSeries flat(q);
        const double e0 = flat.push(0.0, 2.0, 1.0);
        CHECK(flat.push(1.0, 2.0, 1.0) == Catch::Approx(e0).epsilon(1e-14));
        CHECK(flat.push(5.0, 2.0, 1.0) == Catch::Approx(e0).epsilon(1e-14));
    }

    SECTION("out-of-order pushes are rejected") {
        dinls::HSeries bad(p);
        bad.push(1.0, 2.0, 1.0);
        CHECK_THROWS_AS(bad.push(0.5, 2.0, 1.0), std::invalid_argument);
    }
}

TEST_CASE("barrier function values") {
    SECTION("t = 0 returns the initial variance for any gamma") {
        const dinls::VirialData vd{-0.3, -1.0, 2.5, 0.0};
        CHECK(dinls::barrier_g(vd, 0.0) == 2.5);
        dinls::VirialData vd2 = vd;
        vd2.gamma = 1.7;
        CHECK(dinls::barrier_g(vd2, 0.0) == Catch::Approx(2.5).epsilon(1e-14));
    }

    SECTION("(E0, V0, I0) = (0, -1, 1), gamma = 1: root at log(4/3)") {
        const dinls::VirialData vd{0.0, -1.0, 1.0, 1.0};
        CHECK(std::abs(dinls::barrier_g(vd, std::log(4.0 / 3.0))) < 1e-14);
        CHECK(dinls::barrier_g(vd, 1.0) < 0.0);
    }

    SECTION("gamma -> 0 continuity") {
        const dinls::VirialData quad{1.0, -1.0, 1.0, 0.0};
        dinls::VirialData tiny = quad;
        tiny.gamma = 1e-6;
        for (double t : {0.1, 0.5, 1.0}) {
            CHECK(dinls::barrier_g(tiny, t) ==
                  Catch::Approx(dinls::barrier_g(quad, t)).epsilon(1e-5));
        }
        CHECK(dinls::barrier_g(quad, 0.1) == Catch::Approx(0.68).epsilon(1e-14));
    }

    SECTION("negative gamma is rejected") {
        const dinls::VirialData vd{0.0, -1.0, 1.0, -0.5};
        CHECK_THROWS_AS(dinls::barrier_g(vd, 1.0), std::invalid_argument);
    }
}

TEST_CASE("ode residuals vanish on exact polynomial histories") {
    // I quadratic, V = I'/4 linear, P = V'/4 constant: the nonuniform
    // centered difference is exact on polynomials of degree <= 2.
    const double E0 = 0.3, V0 = -0.2, I0 = 1.0;
    const std::vector<double> times{0.0, 0.05, 0.13, 0.2, 0.33, 0.4};
    std::vector<dinls::DiagnosticsRecord> recs;
    for (double t : times) {
        dinls::DiagnosticsRecord r;
        r.t = t;
        r.variance_I = 8.0 * E0 * t * t + 4.0 * V0 * t + I0;
        r.virial_V = 4.0 * E0 * t + V0;
        r.pohozaev_P = E0;
        recs.push_back(r);
    }
    const dinls::OdeResiduals res = dinls::ode_residuals(recs);
    REQUIRE(res.t.size() == times.size() - 2);
    CHECK(res.max_res_I < 1e-12);
    CHECK(res.max_res_V < 1e-12);

    SECTION("stationary profile has zero residuals") {
        for (auto& r : recs) {
            r.variance_I = 2.0;
            r.virial_V = 0.0;
            r.pohozaev_P = 0.0;
        }
        const dinls::OdeResiduals flat = dinls::ode_residuals(recs);
        CHECK(flat.max_res_I < 1e-13);
        CHECK(flat.max_res_V < 1e-13);
    }

    SECTION("too few samples rejected") {
        recs.resize(2);
        CHECK_THROWS_AS(dinls::ode_residuals(recs), std::invalid_argument);
    }
}

TEST_CASE("boundary mass fraction") {
    const dinls::Grid g = dinls::make_grid(1, 16, 8.0);
    // Uniform field: only x = -8 lies beyond |x| >= 7.2, so 1/16 of the mass.
    const auto uniform = fill(g, [](double, double, double) {
        return std::complex<double>(1.0, 0.0);
    });
    CHECK(dinls::boundary_mass_fraction(uniform) == Catch::Approx(1.0 / 16.0).epsilon(1e-14));

    const dinls::Grid g2 = dinls::make_grid(1, 256, 10.0);
    const auto gauss = fill(g2, [](double x, double, double) {
        return std::complex<double>(std::exp(-x * x), 0.0);
    });
    CHECK(dinls::boundary_mass_fraction(gauss) < 1e-20);
}
