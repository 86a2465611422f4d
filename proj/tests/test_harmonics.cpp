#include "doctest.h"

#include "dglue/errors.hpp"
#include "dglue/harmonics.hpp"

#include <cmath>
#include <numbers>

using namespace dglue;

TEST_SUITE("harmonics") {

TEST_CASE("eigenvalues and multiplicities") {
    CHECK(eigenvalue(4, 2) == 8);
    CHECK(eigenvalue(3, 1) == 2);
    for (int i = 0; i < 6; ++i) {
        CHECK(harmonic_dimension(3, i) == 2 * i + 1);
        CHECK(harmonic_dimension(4, i) == (i + 1) * (i + 1));
    }
    CHECK(harmonic_dimension(5, 2) == 14);
    CHECK(harmonic_dimension(10, 0) == 1);
    CHECK(harmonic_dimension(10, 1) == 10);
}

TEST_CASE("sphere integrals") {
    CHECK(sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-14));
    CHECK(sphere_area(4) == doctest::Approx(2.0 * std::numbers::pi * std::numbers::pi).epsilon(1e-14));
    CHECK(integrate_monomial_sphere({2, 0, 0}) == doctest::Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-14));
    CHECK(integrate_monomial_sphere({1, 0, 0}) == 0.0);
    // x^4 on S^2: 4 pi / 5
    CHECK(integrate_monomial_sphere({4, 0, 0}) == doctest::Approx(4.0 * std::numbers::pi / 5.0).epsilon(1e-14));
}

TEST_CASE("product rule exactness") {
    for (int n : {3, 4, 5}) {
        const auto q = SphereQuadrature::product_rule(n, 6);
        MultiIndex alpha(n, 0);
        alpha[0] = 4;
        alpha[n - 1] = 6;
        const Polynomial p = Polynomial::monomial(alpha);
        CHECK(q.integrate([&](std::span<const double> x) { return p(x); }) ==
              doctest::Approx(integrate_monomial_sphere(alpha)).epsilon(1e-12));
    }
}

TEST_CASE("basis is orthonormal and harmonic") {
    for (int n : {3, 4, 5}) {
        const HarmonicBasis B(n, 4);
        std::size_t expect = 0;
        for (int i = 0; i <= 4; ++i) expect += harmonic_dimension(n, i);
        REQUIRE(B.size() == expect);
        for (std::size_t j = 0; j < B.size(); ++j) {
            CHECK(B[j].poly.laplacian().is_zero(1e-10));
            CHECK(B[j].poly.is_homogeneous());
            for (std::size_t k = j; k < B.size(); ++k)
                CHECK(std::abs(sphere_inner(B[j].poly, B[k].poly) - (j == k ? 1.0 : 0.0)) < 1e-12);
        }
    }
}

TEST_CASE("degree 6 bases") {
    const HarmonicBasis B(4, 6);
    CHECK(B.size() == 140);
    CHECK_THROWS_AS(HarmonicBasis(4, 7), ParameterError);
    const auto [lo, hi] = B.degree_range(6);
    CHECK(hi - lo == 49);
    CHECK(B.flat_index({6, 0}) == lo);
}

TEST_CASE("harmonic projection") {
    // x^2 - |x|^2 / n is the harmonic part of x^2.
    const int n = 4;
    const Polynomial x2 = Polynomial::monomial({2, 0, 0, 0});
    const Polynomial h = harmonic_projection(x2);
    const Polynomial expect = x2 - Polynomial::radius_squared(n) * (1.0 / n);
    CHECK((h - expect).is_zero(1e-13));
}

TEST_CASE("projection of polynomial data") {
    const int n = 4;
    const HarmonicBasis B(n, 4);
    const double r = 0.3;
    // phi(x) = 3 + 2 x0 + c e_{2,1}(x) / r^2 + e_{4,2}(x) / r^4
    Polynomial phi = Polynomial::constant(n, 3.0) + 2.0 * Polynomial::coordinate(n, 0);
    phi += (0.7 / (r * r)) * B.mode({2, 1}).poly;
    phi += (1.0 / std::pow(r, 4)) * B.mode({4, 2}).poly;
    const auto high = project_high(phi, B, r);
    CHECK(high.coefficient({2, 1}) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(high.coefficient({4, 2}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(high.coefficient({2, 0})) < 1e-12);
    CHECK(high.find({0, 0}) == nullptr);
    const auto low = project_low(phi, B, r);
    CHECK(low.constant_value() == doctest::Approx(3.0).epsilon(1e-12));
    const auto a = low.linear_vector();
    CHECK(a[0] == doctest::Approx(2.0 * r).epsilon(1e-12));
    CHECK(std::abs(a[1]) < 1e-12);

    const auto sampled = project_all([&](std::span<const double> x) { return phi(x); }, B, r);
    const auto exact = project_all(phi, B, r);
    for (const auto& m : B.modes())
        CHECK(std::abs(sampled.coefficient(m.key()) - exact.coefficient(m.key())) < 1e-10);
    const std::vector<double> th{0.5, 0.5, 0.5, 0.5};
    const std::vector<double> x{0.15, 0.15, 0.15, 0.15};
    CHECK(synthesize(exact, B, th) == doctest::Approx(phi(x)).epsilon(1e-12));
}

TEST_CASE("sampled projection needs resolved data") {
    const HarmonicBasis B(3, 2);
    ProjectionOptions o;
    o.order = 3;
    const auto rough = [](std::span<const double> x) { return std::abs(x[0]) > 0.5 ? 1.0 : 0.0; };
    CHECK_THROWS_AS(project_all(rough, B, 1.0, o), AccuracyError);
}

TEST_CASE("monte carlo projection in high dimension") {
    const int n = 7;
    const HarmonicBasis B(n, 2);
    const Polynomial phi = 0.5 * B.mode({2, 3}).poly + Polynomial::constant(n, 1.0);
    ProjectionOptions o;
    o.mc_pairs = 50000;
    o.seed = 5;
    const auto e = project_high([&](std::span<const double> x) { return phi(x); }, B, 1.0, o);
    CHECK(e.coefficient({2, 3}) == doctest::Approx(0.5).epsilon(0.05));
    CHECK(e.error_estimate > 0.0);
    CHECK(e.error_estimate < 0.05);
}

TEST_CASE("mean value of high modes vanishes") {
    const HarmonicBasis B(5, 3);
    const auto q = SphereQuadrature::product_rule(5, 4);
    for (const auto& m : B.modes()) {
        if (m.degree < 1) continue;
        CHECK(std::abs(q.integrate([&](std::span<const double> x) { return m(x); })) < 1e-12);
    }
}

}
