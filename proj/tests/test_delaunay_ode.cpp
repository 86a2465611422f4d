#include "doctest.h"

#include "dglue/delaunay_ode.hpp"
#include "dglue/errors.hpp"

#include <cmath>

using namespace dglue;

TEST_SUITE("delaunay_ode") {

TEST_CASE("dimension bounds") {
    CHECK_THROWS_AS(Dimension(2), ParameterError);
    CHECK_THROWS_AS(Dimension(11), ParameterError);
    const Dimension n(6);
    CHECK(n.d() == 2);
    CHECK(n.critical_exponent() == doctest::Approx(2.0));
    CHECK(n.potential_exponent() == doctest::Approx(1.0));
}

TEST_CASE("cylinder equilibrium") {
    CHECK(cylinder_value(Dimension(4)) == doctest::Approx(0.70710678118654752).epsilon(1e-15));
    CHECK(cylinder_value(Dimension(3)) == doctest::Approx(0.75983568565159240).epsilon(1e-15));
    for (int n = 3; n <= 10; ++n) {
        const Dimension d(n);
        const auto f = ode_rhs(d, cylinder_value(d), 0.0);
        CHECK(std::abs(f[1]) < 1e-15);
        CHECK(hamiltonian(d, cylinder_value(d), 0.0) == doctest::Approx(cylinder_energy(d)).epsilon(1e-14));
    }
    CHECK(cylinder_energy(Dimension(4)) == doctest::Approx(-0.25));
}

TEST_CASE("hamiltonian values") {
    CHECK(hamiltonian(Dimension(4), 0.5, 0.0) == doctest::Approx(-0.1875).epsilon(1e-15));
    CHECK(hamiltonian(Dimension(4), 0.3, 0.0) == doctest::Approx(-0.0819).epsilon(1e-14));
    CHECK(hamiltonian(Dimension(4), 0.0, 0.0) == 0.0);
    CHECK_THROWS_AS(hamiltonian(Dimension(4), -0.1, 0.0), DomainError);
}

TEST_CASE("orbit period and amplitude against quadrature") {
    // Period 2 int dv / sqrt(h0 + c v^2 - c v^(2n/(n-2))) in 30-digit arithmetic.
    struct Row { int n; double eps, h0, vmax, T; };
    const Row rows[] = {
        {4, 0.3, -0.0819, 0.95393920141694565, 5.416053009428869},
        {4, 0.1, -0.0099, 0.99498743710661995, 7.4185219301555646},
        {3, 0.1, -0.00249975, 0.99747806958190747, 13.370189458443955},
        {5, 0.2, -0.07947353614243369, 0.97181680424380409, 4.6162829252927003},
        {6, 0.3, -0.252, 0.9266281297335398, 3.5248413086173995},
    };
    for (const auto& r : rows) {
        CAPTURE(r.n);
        CAPTURE(r.eps);
        const DelaunayOrbit o(Dimension(r.n), r.eps);
        CHECK(o.h0() == doctest::Approx(r.h0).epsilon(1e-13));
        CHECK(o.v_max() == doctest::Approx(r.vmax).epsilon(1e-8));
        CHECK(o.period() == doctest::Approx(r.T).epsilon(1e-8));
        CHECK(o.table_drift() < 1e-10);
    }
}

TEST_CASE("h0 decreases along the family") {
    double prev = 0.0;
    for (double eps = 0.05; eps < 0.7; eps += 0.05) {
        const double h = hamiltonian(Dimension(4), eps, 0.0);
        CHECK(h < prev);
        prev = h;
    }
}

TEST_CASE("orbit rejects epsilon outside the periodic band") {
    CHECK_THROWS_AS(DelaunayOrbit(Dimension(4), 0.8), ParameterError);
    CHECK_THROWS_AS(DelaunayOrbit(Dimension(4), 0.0), ParameterError);
    CHECK_THROWS_AS(DelaunayOrbit(Dimension(4), -0.1), ParameterError);
    CHECK_THROWS_AS(DelaunayOrbit(Dimension(4), cylinder_value(Dimension(4))), ParameterError);
}

TEST_CASE("eval is periodic and consistent with the ODE") {
    const DelaunayOrbit o(Dimension(5), 0.2);
    for (double t : {0.1, 0.77, 2.3, 4.0}) {
        const auto a = o.eval(t);
        const auto b = o.eval(t + 3.0 * o.period());
        CHECK(a.v == doctest::Approx(b.v).epsilon(1e-10));
        CHECK(a.dv == doctest::Approx(b.dv).epsilon(1e-9));
        CHECK(a.ddv == doctest::Approx(ode_rhs(Dimension(5), a.v, a.dv)[1]).epsilon(1e-12));
        CHECK(hamiltonian(Dimension(5), a.v, a.dv) == doctest::Approx(o.h0()).epsilon(1e-9));
    }
    const auto m = o.eval(0.0);
    CHECK(m.v == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(std::abs(m.dv) < 1e-12);
}

TEST_CASE("interpolation matches direct integration") {
    const DelaunayOrbit o(Dimension(4), 0.3);
    std::vector<double> times;
    for (int k = 1; k <= 40; ++k) times.push_back(k * o.period() / 41.0);
    const auto s = integrate_trajectory(Dimension(4), 0.3, 0.0, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(o.eval(times[k]).v == doctest::Approx(s[k].v).epsilon(1e-10));
        CHECK(o.eval(times[k]).dv == doctest::Approx(s[k].w).scale(1.0).epsilon(1e-10));
    }
}

TEST_CASE("energy drift over ten periods") {
    for (int n : {3, 4, 5, 6})
        for (double eps : {0.1, 0.3}) {
            const DelaunayOrbit o(Dimension(n), eps);
            CHECK(energy_drift(o, 10) < 1e-9);
        }
}

TEST_CASE("special solutions") {
    const Dimension n(4);
    std::vector<double> times;
    for (int k = 1; k <= 20; ++k) times.push_back(k * 1.0);
    const double vc = cylinder_value(n);
    for (const auto& s : integrate_trajectory(n, vc, 0.0, times)) {
        CHECK(std::abs(s.v - vc) < 1e-12);
        CHECK(std::abs(s.w) < 1e-12);
    }
    std::vector<double> ht;
    for (int k = 1; k <= 50; ++k) ht.push_back(0.1 * k);
    for (int nn : {3, 4, 5, 6}) {
        const Dimension d(nn);
        for (const auto& s : integrate_trajectory(d, 1.0, 0.0, ht))
            CHECK(std::abs(s.v - std::pow(std::cosh(s.t), 0.5 * (2 - nn))) < 1e-5);
    }
}

TEST_CASE("derivative bounds") {
    const auto b = derivative_bounds(DelaunayOrbit(Dimension(4), 0.1));
    // |v'| <= (n-2)/2 v and |v''| <= c v on the whole family.
    CHECK(b.first <= 1.0 + 1e-9);
    CHECK(b.second > 0.0);
    CHECK(b.second < 2.0);
}

}
