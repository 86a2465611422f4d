#include "dglue/delaunay_ode.hpp"

#include "dglue/errors.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace dglue {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 2>;
using Stepper = odeint::runge_kutta_fehlberg78<State>;

struct DelaunaySystem {
    double lin;    // (n-2)^2/4
    double nonl;   // n(n-2)/4
    double expo;   // (n+2)/(n-2)

    explicit DelaunaySystem(Dimension n)
        : lin(0.25 * (n - 2) * (n - 2)), nonl(0.25 * n * (n - 2)), expo(n.critical_exponent()) {}

    void operator()(const State& x, State& dxdt, double) const {
        // Trajectories of interest stay positive; clamp guards overshoot in trial stages.
        const double v = x[0];
        const double vp = v > 0.0 ? std::pow(v, expo) : -std::pow(-v, expo);
        dxdt[0] = x[1];
        dxdt[1] = lin * v - nonl * vp;
    }

    double accel(double v) const { return lin * v - nonl * std::pow(v, expo); }
    // d/dv of accel
    double accel_slope(double v) const {
        return lin - nonl * expo * std::pow(v, expo - 1.0);
    }
};

void advance(const DelaunaySystem& sys, State& x, double t0, double t1, double tol) {
    if (t1 <= t0) return;
    auto stepper = odeint::make_controlled(tol, tol, Stepper());
    odeint::integrate_adaptive(stepper, sys, x, t0, t1, std::min(1e-2, t1 - t0));
}

// Quintic Hermite on [0, 1]: values p, first derivatives m, second derivatives a (all in s units).
double hermite5(double s, double p0, double m0, double a0, double p1, double m1, double a1) {
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
    const double h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
    const double h2 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
    const double h3 = 0.5 * (s3 - 2.0 * s4 + s5);
    const double h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
    const double h5 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
    return h0 * p0 + h1 * m0 + h2 * a0 + h3 * a1 + h4 * m1 + h5 * p1;
}

}  // namespace

Dimension::Dimension(int n) : n_(n) {
    if (n < 3 || n > 10)
        throw ParameterError("dimension n must lie in [3, 10], got " + std::to_string(n));
}

double cylinder_value(Dimension n) {
    return std::pow(double(n - 2) / n, 0.25 * (n - 2));
}

double cylinder_energy(Dimension n) {
    return -std::pow(double(n - 2) / n, 0.5 * n) * 0.5 * (n - 2);
}

std::array<double, 2> ode_rhs(Dimension n, double v, double w) {
    if (v < 0.0) throw DomainError("ode_rhs: v must be nonnegative");
    return {w, DelaunaySystem(n).accel(v)};
}

double hamiltonian(Dimension n, double v, double w) {
    if (v < 0.0) throw DomainError("hamiltonian: v must be nonnegative");
    const double c = 0.25 * (n - 2) * (n - 2);
    return w * w - c * v * v + c * std::pow(v, 2.0 * n / (n - 2));
}

DelaunayOrbit::DelaunayOrbit(Dimension n, double epsilon, const OrbitOptions& options)
    : n_(n), epsilon_(epsilon) {
    const double vcyl = cylinder_value(n);
    if (!(epsilon > 0.0 && epsilon < vcyl))
        throw ParameterError("epsilon must lie in (0, " + std::to_string(vcyl) + "), got " +
                             std::to_string(epsilon));
    if (!(options.tol_H > 0.0 && options.tol_period > 0.0))
        throw ParameterError("orbit tolerances must be positive");

    const DelaunaySystem sys(n);
    h0_ = hamiltonian(n, epsilon, 0.0);

    double tol = 1e-13;
    for (int attempt = 0; attempt < 4; ++attempt, tol *= 0.1) {
        // Locate the first return to the minimum: w crosses 0 upward with v below the equilibrium.
        auto ctrl = odeint::make_controlled(tol, tol, Stepper());
        State x{epsilon, 0.0};
        double t = 0.0, dt = 1e-3;
        double t_lo = -1.0;
        State x_lo{};
        bool seen_max = false;
        while (t < options.horizon) {
            const State x_prev = x;
            const double t_prev = t;
            while (ctrl.try_step(sys, x, t, dt) == odeint::fail) {
            }
            if (x_prev[1] > 0.0 && x[1] <= 0.0) seen_max = true;
            if (seen_max && x_prev[1] < 0.0 && x[1] >= 0.0 && x[0] < vcyl) {
                t_lo = t_prev;
                x_lo = x_prev;
                break;
            }
        }
        if (t_lo < 0.0)
            throw SolverError("delaunay_ode", "no return to the minimum before t = " +
                                                  std::to_string(options.horizon));

        auto w_at = [&](double tau) {
            State y = x_lo;
            advance(sys, y, t_lo, tau, tol);
            return y[1];
        };
        boost::uintmax_t iters = 200;
        auto crit = [](double a, double b) { return std::abs(b - a) <= 1e-15 * std::abs(a); };
        const auto root = boost::math::tools::toms748_solve(w_at, t_lo, t, crit, iters);
        period_ = 0.5 * (root.first + root.second);

        const int nodes = std::max(options.min_samples,
                                   int(std::ceil(period_ / options.max_spacing)));
        spacing_ = period_ / nodes;
        std::vector<double> times(nodes + 1);
        for (int k = 0; k <= nodes; ++k) times[k] = k * spacing_;
        samples_ = integrate_trajectory(n, epsilon, 0.0, times, tol);

        const OrbitSample& last = samples_.back();
        const double closure = std::abs(last.v - epsilon) + std::abs(last.w);
        table_drift_ = 0.0;
        v_max_ = 0.0;
        for (const auto& s : samples_) {
            table_drift_ = std::max(table_drift_,
                                    std::abs(hamiltonian(n, s.v, s.w) - h0_) / std::abs(h0_));
            v_max_ = std::max(v_max_, s.v);
        }
        // Below |h0| ~ 1e-4 the relative tolerance hits the rounding floor of H, whose terms are O(v_max^2).
        const double floor = 1e-14 * 0.25 * (n - 2) * (n - 2) * v_max_ * v_max_ / std::abs(h0_);
        if (table_drift_ <= std::max(options.tol_H, floor) && closure <= options.tol_period) {
            // The orbit is reversible about its minimum, so the maximum sits at T/2.
            v_max_ = std::max(v_max_, integrate_trajectory(n, epsilon, 0.0, {0.5 * period_}, tol)[0].v);
            samples_.back().v = epsilon;
            samples_.back().w = 0.0;
            return;
        }
        if (attempt == 3)
            throw SolverError("delaunay_ode",
                              "energy drift " + std::to_string(table_drift_) + " or closure " +
                                  std::to_string(closure) + " above tolerance");
    }
}

OrbitJet DelaunayOrbit::eval(double t) const {
    double tau = std::fmod(t, period_);
    if (tau < 0.0) tau += period_;
    const int last = int(samples_.size()) - 1;
    int k = std::min(int(tau / spacing_), last - 1);
    const double s = (tau - k * spacing_) / spacing_;
    const OrbitSample& a = samples_[k];
    const OrbitSample& b = samples_[k + 1];
    const DelaunaySystem sys(n_);
    const double h = spacing_;
    const double fa = sys.accel(a.v), fb = sys.accel(b.v);
    const double v = hermite5(s, a.v, h * a.w, h * h * fa, b.v, h * b.w, h * h * fb);
    const double ga = sys.accel_slope(a.v) * a.w, gb = sys.accel_slope(b.v) * b.w;
    const double w = hermite5(s, a.w, h * fa, h * h * ga, b.w, h * fb, h * h * gb);
    return {v, w, sys.accel(v)};
}

DelaunayOrbit integrate_orbit(Dimension n, double epsilon, const OrbitOptions& options) {
    return DelaunayOrbit(n, epsilon, options);
}

std::vector<OrbitSample> integrate_trajectory(Dimension n, double v0, double w0,
                                              const std::vector<double>& times, double tol) {
    if (v0 < 0.0) throw DomainError("integrate_trajectory: v0 must be nonnegative");
    std::vector<OrbitSample> out;
    out.reserve(times.size());
    if (times.empty()) return out;
    const DelaunaySystem sys(n);
    State x{v0, w0};
    double t = 0.0;
    for (double target : times) {
        if (target < t) throw ParameterError("integrate_trajectory: times must be ascending");
        advance(sys, x, t, target, tol);
        t = target;
        out.push_back({t, x[0], x[1]});
    }
    return out;
}

double energy_drift(const DelaunayOrbit& orbit, int periods, double tol) {
    const Dimension n = orbit.dimension();
    const DelaunaySystem sys(n);
    State x{orbit.epsilon(), 0.0};
    const double h0 = orbit.h0();
    double worst = 0.0;
    auto ctrl = odeint::make_controlled(tol, tol, Stepper());
    odeint::integrate_adaptive(ctrl, sys, x, 0.0, periods * orbit.period(), 1e-3,
                               [&](const State& y, double) {
                                   worst = std::max(worst, std::abs(hamiltonian(n, y[0], y[1]) - h0));
                               });
    return worst / std::abs(h0);
}

DerivativeBounds derivative_bounds(const DelaunayOrbit& orbit) {
    DerivativeBounds b{0.0, 0.0};
    const DelaunaySystem sys(orbit.dimension());
    for (const auto& s : orbit.samples()) {
        b.first = std::max(b.first, std::abs(s.w) / s.v);
        b.second = std::max(b.second, std::abs(sys.accel(s.v)) / s.v);
    }
    return b;
}

}  // namespace dglue
