#include "dglue/linearized_solver.hpp"

#include "dglue/errors.hpp"
#include "dglue/harmonics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dglue {

namespace odeint = boost::numeric::odeint;

ParameterBudget ParameterBudget::defaults(Dimension n) {
    ParameterBudget b;
    b.delta1 = 1.0 / (8.0 * n);
    b.s = 2.0 / (n - 1.0 - 1.0 / (2.0 * n));
    b.delta2 = 2.0 * b.delta1;
    b.delta4 = 0.25;
    b.mu = 1.1;
    b.nu = 1.75 - n;
    return b;
}

void ParameterBudget::validate(Dimension n) const {
    const double d = n.d();
    auto fail = [](const std::string& what) { throw ParameterError("parameter budget: " + what); };
    if (!(delta1 > 0.0 && delta1 < 1.0 / (8.0 * n - 16.0))) fail("delta1 must lie in (0, 1/(8n-16))");
    const double s_lo = 1.0 / (d + 1.0 - delta1);
    const double s_hi = 4.0 / (d - 2.0 + 1.5 * n);
    if (!(s > s_lo && s < s_hi)) {
        std::ostringstream os;
        os << "s must lie in (" << s_lo << ", " << s_hi << "), got " << s;
        fail(os.str());
    }
    if (!(mu > 1.0 && mu < 1.25)) fail("mu must lie in (1, 5/4)");
    if (!(nu > 1.5 - n && nu < 2.0 - n)) fail("nu must lie in (3/2-n, 2-n)");
    if (!(delta2 > delta1)) fail("delta2 must exceed delta1");
    if (!(delta4 > 0.0 && delta4 < 0.5)) fail("delta4 must lie in (0, 1/2)");
    if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0, 1)");
    if (!(tau > 0.0 && kappa > 0.0 && beta > 0.0 && gamma > 0.0)) fail("tau, kappa, beta, gamma must be positive");
}

double ParameterBudget::r_eps(double epsilon) const { return std::pow(epsilon, s); }

double lambda_n(Dimension n) { return n <= 6 ? 0.0 : (6.0 - n) / (n - 2.0); }

double potential(const DelaunayOrbit& orbit, double R, double rho) {
    const int n = orbit.n();
    return 0.25 * n * (n + 2) * std::pow(u_eps_R(orbit, R, rho).u, 4.0 / (n - 2));
}

LogGrid bvp_grid(const DelaunayOrbit& orbit, double r, const BvpOptions& options) {
    if (options.inner_periods < 1) throw ParameterError("BvpOptions: inner_periods must be >= 1");
    const double inner = r * std::exp(-options.inner_periods * orbit.period());
    return LogGrid::spanning(r, inner, options.h);
}

namespace {

// rho^2 times the potential, as a function of t = -log(rho).
struct ScaledPotential {
    const DelaunayOrbit& orbit;
    double logR;
    double c;
    double expo;
    ScaledPotential(const DelaunayOrbit& o, double R)
        : orbit(o), logR(std::log(R)), c(0.25 * o.n() * (o.n() + 2)), expo(4.0 / (o.n() - 2)) {}
    double operator()(double t) const { return c * std::pow(orbit.eval(t + logR).v, expo); }
};

double shift(int n, int degree) { return 0.25 * (n - 2) * (n - 2) + eigenvalue(n, degree); }

}  // namespace

double floquet_ratio(const DelaunayOrbit& orbit, double R, int degree, const LogGrid& grid) {
    const int n = orbit.n();
    const ScaledPotential q(orbit, R);
    const double c = shift(n, degree);
    const int N = grid.intervals;
    // Riccati y = psi'/psi, integrated backward where the decaying branch attracts; z = log psi.
    using State = std::array<double, 2>;
    auto sys = [&](const State& x, State& dx, double t) {
        dx[0] = (c - q(t)) - x[0] * x[0];
        dx[1] = x[0];
    };
    const double t_far = grid.t(N) + 3.0 * orbit.period();
    State x{-std::sqrt(std::max(c - q(t_far), 1e-12)), 0.0};
    auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_fehlberg78<State>());
    odeint::integrate_adaptive(stepper, sys, x, t_far, grid.t(N), -1e-3);
    const double zN = x[1];
    odeint::integrate_adaptive(stepper, sys, x, grid.t(N), grid.t(N - 1), -grid.h);
    return std::exp(zN - x[1]);
}

RadialProfile solve_mode_nodes(const DelaunayOrbit& orbit, double R, int degree,
                               const LogGrid& grid, const std::vector<double>& f) {
    const int n = orbit.n();
    const int N = grid.intervals;
    if (int(f.size()) != grid.size()) throw ParameterError("solve_mode_nodes: rhs size mismatch");
    if (degree < 0) throw ParameterError("solve_mode_nodes: negative degree");
    const ScaledPotential q(orbit, R);
    const double c = shift(n, degree);
    const double h = grid.h, h12 = h * h / 12.0;
    std::vector<double> F(N + 1), g(N + 1), psi(N + 1, 0.0);
    for (int k = 0; k <= N; ++k) {
        F[k] = c - q(grid.t(k));
        g[k] = std::pow(grid.rho(k), 0.5 * (n + 2)) * f[k];
    }
    auto A = [&](int k) { return 1.0 - h12 * F[k]; };
    auto B = [&](int k) { return 2.0 + 10.0 * h12 * F[k]; };
    auto G = [&](int k) { return h12 * (g[k - 1] + 10.0 * g[k] + g[k + 1]); };

    if (degree >= 2) {
        const double kappa = floquet_ratio(orbit, R, degree, grid);
        // Rows: psi_0 = 0; A psi_{k-1} - B psi_k + A psi_{k+1} = G; psi_N - kappa psi_{N-1} = 0.
        std::vector<double> lo(N + 1, 0.0), di(N + 1, 0.0), up(N + 1, 0.0), rhs(N + 1, 0.0);
        di[0] = 1.0;
        for (int k = 1; k < N; ++k) {
            lo[k] = A(k - 1);
            di[k] = -B(k);
            up[k] = A(k + 1);
            rhs[k] = G(k);
        }
        lo[N] = -kappa;
        di[N] = 1.0;
        for (int k = 1; k <= N; ++k) {
            const double m = lo[k] / di[k - 1];
            di[k] -= m * up[k - 1];
            rhs[k] -= m * rhs[k - 1];
            if (!std::isfinite(di[k]) || di[k] == 0.0)
                throw SolverError("linearized_solver", "singular tridiagonal system");
        }
        psi[N] = rhs[N] / di[N];
        for (int k = N - 1; k >= 0; --k) psi[k] = (rhs[k] - up[k] * psi[k + 1]) / di[k];
    } else {
        // Zero Cauchy data at the inner end, march outward.
        for (int k = N - 1; k >= 1; --k) psi[k - 1] = (G(k) + B(k) * psi[k] - A(k + 1) * psi[k + 1]) / A(k - 1);
    }
    for (double p : psi)
        if (!std::isfinite(p)) throw SolverError("linearized_solver", "non-finite mode solution");

    const auto psit = differentiate6(psi, h);
    const double e = 0.5 * (n - 2);
    std::vector<double> w(N + 1), wt(N + 1), wtt(N + 1);
    for (int k = 0; k <= N; ++k) {
        const double scale = std::exp(e * grid.t(k));
        const double psitt = F[k] * psi[k] + g[k];
        w[k] = scale * psi[k];
        wt[k] = scale * (e * psi[k] + psit[k]);
        wtt[k] = scale * (e * e * psi[k] + 2.0 * e * psit[k] + psitt);
    }
    return RadialProfile(grid, std::move(w), std::move(wt), std::move(wtt));
}

RadialProfile solve_mode_bvp(const RadialBVP& bvp) {
    if (!bvp.orbit) throw ParameterError("RadialBVP: missing orbit");
    if (!bvp.rhs) throw ParameterError("RadialBVP: missing right-hand side");
    const int n = bvp.orbit->n();
    if (bvp.degree >= 2) {
        if (!(bvp.mu > -n && bvp.mu < 2.0)) throw ParameterError("RadialBVP: high modes need mu in (-n, 2)");
    } else if (!(bvp.mu > 1.0 && bvp.mu < 2.0)) {
        throw ParameterError("RadialBVP: degrees 0 and 1 need mu in (1, 2)");
    }
    if (!(bvp.r > 0.0)) throw ParameterError("RadialBVP: r must be positive");
    const LogGrid grid = bvp_grid(*bvp.orbit, bvp.r, bvp.options);
    std::vector<double> f(grid.size());
    for (int k = 0; k < grid.size(); ++k) f[k] = bvp.rhs(grid.rho(k));
    return solve_mode_nodes(*bvp.orbit, bvp.R, bvp.degree, grid, f);
}

std::vector<double> apply_mode_operator(const DelaunayOrbit& orbit, double R, int degree,
                                        const LogGrid& grid, const std::vector<double>& w) {
    const int n = orbit.n();
    const ScaledPotential q(orbit, R);
    const double lam = eigenvalue(n, degree);
    const double h = grid.h;
    const int N = grid.intervals;
    std::vector<double> out(N + 1, 0.0);
    for (int k = 2; k <= N - 2; ++k) {
        const double wt = (w[k - 2] - 8.0 * w[k - 1] + 8.0 * w[k + 1] - w[k + 2]) / (12.0 * h);
        const double wtt = (-w[k - 2] + 16.0 * w[k - 1] - 30.0 * w[k] + 16.0 * w[k + 1] - w[k + 2]) / (12.0 * h * h);
        const double rho = grid.rho(k);
        out[k] = (wtt - (n - 2) * wt - lam * w[k] + q(grid.t(k)) * w[k]) / (rho * rho);
    }
    return out;
}

double q_remainder(Dimension n, double u0, double v) {
    if (!(u0 > 0.0)) throw DomainError("q_remainder: u0 must be positive");
    const double p = n.critical_exponent();
    const double x = v / u0;
    // (1+x)^p - 1 - p x, summed as a binomial series where the direct form cancels.
    double phi = 0.0;
    if (std::abs(x) < 0.125) {
        double coef = 0.5 * p * (p - 1.0);
        double xk = x * x;
        for (int k = 2; k < 60; ++k) {
            const double term = coef * xk;
            phi += term;
            if (term == 0.0 || std::abs(term) <= 1e-18 * std::abs(phi)) break;
            coef *= (p - k) / (k + 1.0);
            xk *= x;
        }
    } else {
        const double s = 1.0 + x;
        phi = std::pow(std::abs(s), p - 1.0) * s - 1.0 - p * x;
    }
    return 0.25 * n * (n - 2) * std::pow(u0, p) * phi;
}

double q_remainder_integral(Dimension n, double u0, double v) {
    if (!(u0 > 0.0)) throw DomainError("q_remainder_integral: u0 must be positive");
    const double e = 4.0 / (n - 2);
    const double base = std::pow(u0, e);
    auto integrand = [&](double t) { return std::pow(std::abs(u0 + t * v), e) - base; };
    double err = 0.0;
    const double I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, 1.0, 15, 1e-15, &err);
    return 0.25 * n * (n + 2) * v * I;
}

double q_remainder(const Field& u0, const Field& v, std::span<const double> x) {
    return q_remainder(Dimension(u0.dimension()), u0(x), v(x));
}

Field mode_field(const std::map<ModeKey, RadialProfile>& modes, const HarmonicBasis& basis) {
    const int n = basis.dimension();
    std::vector<Field> parts;
    for (const auto& [key, prof] : modes)
        parts.push_back(Field::radial_harmonic(n, [prof](double rho) { return prof.jet(rho); }, basis.mode(key).poly));
    return Field(n, Field::Jet([parts, n](std::span<const double> x, int order, FieldJet& j) {
        j.value = 0.0;
        j.grad.assign(order >= 1 ? n : 0, 0.0);
        j.hess.assign(order >= 2 ? n * n : 0, 0.0);
        for (const auto& f : parts) {
            const FieldJet k = f.evaluate(x, order, 0.0);
            j.value += k.value;
            for (std::size_t i = 0; i < j.grad.size(); ++i) j.grad[i] += k.grad[i];
            for (std::size_t i = 0; i < j.hess.size(); ++i) j.hess[i] += k.hess[i];
        }
    }));
}

QuadraticEstimateReport quadratic_estimate_check(const FamilyParams& params, const Field& w, const Field& v0,
                            const Field& v1, const ParameterBudget& budget, int levels,
                            int samples) {
    const DelaunayOrbit& orbit = *params.orbit;
    const Dimension n = orbit.dimension();
    const double eps = orbit.epsilon();
    const double r = budget.r_eps(eps);
    const double d = n.d();
    const double mu = budget.mu;
    const FamilyParams P = params;
    auto Qf = [P, n](const Field& a) {
        return Field(n, Field::Value([P, n, a](std::span<const double> x) {
            return q_remainder(n, u_eps_R_a(P, x), a(x));
        }));
    };
    NormSpec s0{0, budget.alpha, mu - 2.0, r, levels, samples};
    NormSpec s2{2, budget.alpha, mu, r, levels, samples};
    NormSpec sw{2, budget.alpha, 2.0 + d - 0.5 * n, r, levels, samples};

    QuadraticEstimateReport rep;
    rep.lambda = lambda_n(n);
    const double el = std::pow(eps, rep.lambda);
    const Field diffQ = Qf(w + v1) - Qf(w + v0);
    rep.lhs_difference = norm_weighted(diffQ, s0);
    const double nw = norm_weighted(w, sw);
    const double nv1 = norm_weighted(v1, s2);
    const double nv0 = norm_weighted(v0, s2);
    const double ndiff = norm_weighted(v1 - v0, s2);
    rep.rhs_difference = el * std::pow(r, d + 1.0) * ndiff * (nw + nv1 + nv0);
    rep.constant_difference = rep.rhs_difference > 0.0 ? rep.lhs_difference / rep.rhs_difference : 0.0;
    rep.lhs_square = norm_weighted(Qf(w), s0);
    rep.rhs_square = el * std::pow(r, 3.0 + 2.0 * d - 0.5 * n - mu) * nw * nw;
    rep.constant_square = rep.rhs_square > 0.0 ? rep.lhs_square / rep.rhs_square : 0.0;
    return rep;
}

}  // namespace dglue
