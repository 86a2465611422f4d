#include "doctest.h"

#include "dglue/errors.hpp"
#include "dglue/matching.hpp"

#include <cmath>

using namespace dglue;

namespace {

OrbitPtr orbit(int n, double eps) { return std::make_shared<const DelaunayOrbit>(Dimension(n), eps); }

MatchingState state(int n, double eps, double s = 0.0) {
    auto b = ParameterBudget::defaults(Dimension(n));
    if (s > 0.0) b.s = s;
    return MatchingState::initial(Dimension(n), eps, b);
}

}  // namespace

TEST_SUITE("matching") {

TEST_CASE("F and G coefficients") {
    // Leading terms 2(1+b) and 8(1+b); the orbit departs from its cosh profile at order r_eps^2.
    const auto budget = ParameterBudget::defaults(Dimension(4));
    for (double b : {0.0, 0.2}) {
        double prev = 1.0;
        for (double eps : {0.1, 0.03, 0.01}) {
            const auto o = orbit(4, eps);
            const double r = budget.r_eps(eps);
            const auto [F, G] = f_g_coefficients(*o, neck_radius_from_b(Dimension(4), eps, b), r);
            const double eF = std::abs(F - 2.0 * (1.0 + b));
            const double eG = std::abs(G + 3.0 * F - 8.0 * (1.0 + b));
            const double c = std::pow(1.0 + b, 3) * r * r;
            CHECK(eF < 2.0 * c);
            CHECK(eG < 10.0 * c);
            CHECK(eG < prev);
            prev = eG;
        }
    }
    const auto o = orbit(4, 0.1);
    CHECK_THROWS_AS(f_g_coefficients(*o, 0.3, 0.2), ParameterError);
}

TEST_CASE("b-lambda block") {
    auto s = state(4, 0.1);
    const auto zero = DataFunctionals::zero(s);
    solve_b_lambda(s, zero);
    CHECK(s.b == 0.0);
    CHECK(s.lambda == 0.1 * 0.1 / 4.0);

    s = state(4, 0.1);
    const auto c = DataFunctionals::constant(s, {0.01, 0.0}, {0.0, 0.0});
    const auto res = solve_b_lambda(s, c);
    CHECK(s.b == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(s.lambda == doctest::Approx(0.01 / (4.0 * 1.01)).epsilon(1e-15));
    CHECK(s.lambda == doctest::Approx(2.47525e-3).epsilon(1e-5));
    CHECK(res.iterations <= 2);
    const auto [e1, e2] = b_lambda_residual(s, c);
    CHECK(std::abs(e1) < 1e-12);
    CHECK(std::abs(e2) < 1e-12);
}

TEST_CASE("lambda constraint with s = 0.6") {
    auto s = state(4, 0.1, 0.6);
    const auto c = DataFunctionals::constant(s, {0.01, 0.0}, {0.0, 0.0});
    solve_b_lambda(s, c);
    CHECK(s.lambda * s.lambda == doctest::Approx(6.1e-6).epsilon(0.01));
    CHECK(std::pow(0.1, 0.6 * 5.0) == doctest::Approx(1.0e-3).epsilon(1e-12));
    CHECK(s.lambda * s.lambda <= std::pow(s.r_eps(), 1.0 - 2.0 + 6.0));
}

TEST_CASE("a-omega block") {
    // r_eps = 0.25
    auto s = state(4, 0.1, std::log(0.25) / std::log(0.1));
    CHECK(s.r_eps() == doctest::Approx(0.25).epsilon(1e-14));
    const auto c = DataFunctionals::constant(s, {0.0, 0.0}, {0.001, 0.0});
    solve_a_omega(s, c, 2.0, 2.0);
    for (int i = 0; i < 4; ++i) {
        CHECK(s.a[i] == doctest::Approx(1.5e-3).epsilon(1e-13));
        CHECK(s.omega[i] == doctest::Approx(-2.5e-4).epsilon(1e-12));
    }
    CHECK(a_omega_residual(s, c, 2.0, 2.0) < 1e-12);
    auto z = state(4, 0.1);
    solve_a_omega(z, DataFunctionals::zero(z), 2.0, 2.0);
    for (int i = 0; i < 4; ++i) CHECK(z.a[i] == 0.0);
}

TEST_CASE("high-mode block") {
    auto s = state(4, 0.1);
    solve_high_mode(s, DataFunctionals::zero(s));
    CHECK(s.theta.coefficients.empty());
    const double c = 0.01;
    const auto f = DataFunctionals::constant(s, {0.0, 0.0}, {0.0, 0.0}, {{{2, 1}, c}});
    solve_high_mode(s, f);
    CHECK(s.theta.coefficients.size() == 1);
    CHECK(s.theta.coefficients.at({2, 1}) == doctest::Approx(-c / 6.0).epsilon(1e-15));
    CHECK(high_mode_residual(s, f) < 1e-15);
}

TEST_CASE("high-mode contraction for a Lipschitz source") {
    auto s = state(4, 0.1);
    const double lip = std::pow(s.r_eps(), 0.25);
    DataFunctionals f(s);
    f.register_s([lip](const MatchingState& m) {
        BoundaryData out{m.theta.basis, 1.0, {{{2, 0}, 0.01}, {{3, 1}, 0.005}}};
        for (const auto& [k, v] : m.theta.coefficients) out.coefficients[k] += lip * v;
        return out;
    });
    // Successive differences of the map shrink by at least 1/2.
    std::vector<double> diffs;
    MatchingState m = s;
    BoundaryData prev = m.theta;
    for (int it = 0; it < 4; ++it) {
        m.theta = -1.0 * z_inverse(f.source(m));
        double d = 0.0;
        for (const auto& [k, v] : m.theta.coefficients) {
            const auto p = prev.coefficients.find(k);
            d = std::max(d, std::abs(v - (p == prev.coefficients.end() ? 0.0 : p->second)));
        }
        diffs.push_back(d);
        prev = m.theta;
    }
    for (std::size_t k = 1; k < diffs.size(); ++k) CHECK(diffs[k] < 0.5 * diffs[k - 1]);
    solve_high_mode(s, f);
    CHECK(high_mode_residual(s, f) < 1e-12);
    // Degree-diagonal source keeps degrees apart.
    for (const auto& [k, v] : s.theta.coefficients) CHECK((k == ModeKey{2, 0} || k == ModeKey{3, 1}));
}

TEST_CASE("registration gate") {
    const auto s = state(4, 0.1);
    DataFunctionals f(s);
    const double big = 2.0 * DataFunctionals::gate * s.magnitude();
    CHECK_THROWS_AS(f.register_h0([big](const MatchingState&) { return ScalarData{big, 0.0}; }), ParameterError);
    CHECK_THROWS_AS(f.register_hi([big](const MatchingState&, int) { return ScalarData{0.0, big}; }), ParameterError);
    CHECK_THROWS_AS(f.register_s([](const MatchingState& m) { return BoundaryData{m.theta.basis, 1.0, {{{1, 0}, 1e-4}}}; }),
                    ParameterError);
}

TEST_CASE("assembled match with zero data") {
    const auto o = orbit(4, 0.1);
    const auto budget = ParameterBudget::defaults(Dimension(4));
    const auto res = assemble_match(o, budget, DataFunctionals::zero(MatchingState::initial(Dimension(4), 0.1, budget)));
    CHECK(res.converged);
    CHECK(res.history.size() == 1);
    CHECK(res.state.b == 0.0);
    CHECK(res.state.lambda == 0.1 * 0.1 / 4.0);
    for (int i = 0; i < 4; ++i) {
        CHECK(res.state.a[i] == 0.0);
        CHECK(res.state.omega[i] == 0.0);
    }
    CHECK(res.state.theta.coefficients.empty());
}

TEST_CASE("assembled match with synthetic data") {
    const auto o = orbit(4, 0.1);
    const auto budget = ParameterBudget::defaults(Dimension(4));
    const auto ref = MatchingState::initial(Dimension(4), 0.1, budget);
    for (double c : {1.0, 0.5, 0.1}) {
        const auto res = assemble_match(o, budget, DataFunctionals::synthetic(ref, 0.25 * c));
        CHECK(res.converged);
        CHECK(res.history.size() <= 50);
        CHECK(res.residual < 1e-12);
        const auto& s = res.state;
        CHECK(std::abs(s.b) <= 0.5);
        CHECK(s.lambda * s.lambda <= std::pow(s.r_eps(), 1.0 - 2.0 + 6.0));
        double a2 = 0.0;
        for (double x : s.a) a2 += x * x;
        CHECK(a2 <= std::pow(s.r_eps(), 1.0 - 2.0));
        CHECK(norm_sphere(s.theta.field(), 2, budget.alpha, 1.0) <= s.theta_bound());
    }
}

TEST_CASE("magnitude violation is reported") {
    const auto o = orbit(4, 0.1);
    const auto budget = ParameterBudget::defaults(Dimension(4));
    const auto ref = MatchingState::initial(Dimension(4), 0.1, budget);
    CHECK_THROWS_WITH_AS(assemble_match(o, budget, DataFunctionals::synthetic(ref, 2.5)),
                         doctest::Contains("domain violation"), SolverError);
}

TEST_CASE("faithful preset") {
    const auto o = orbit(4, 0.1);
    const auto budget = ParameterBudget::defaults(Dimension(4));
    auto s = MatchingState::initial(Dimension(4), 0.1, budget, std::make_shared<const HarmonicBasis>(4, 2));
    PicardOptions opt;
    opt.max_degree = 2;
    const auto f = DataFunctionals::faithful(o, s, 0.25, opt);
    MatchOptions mo;
    mo.tol = 1e-10;
    const auto res = assemble_match(o, budget, f, mo);
    CHECK(res.converged);
    CHECK(std::abs(res.state.b) <= 0.5);
    const auto syn = assemble_match(o, budget, DataFunctionals::synthetic(s, 0.25), mo);
    // The interior contribution is a small correction to the synthetic terms.
    CHECK(std::abs(res.state.b - syn.state.b) < 0.1 * std::abs(syn.state.b));
}

}
