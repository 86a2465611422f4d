#pragma once

#include <array>
#include <vector>

namespace dglue {

// Ambient dimension, 3 <= n <= 10.
class Dimension {
public:
    explicit Dimension(int n);

    int value() const noexcept { return n_; }
    operator int() const noexcept { return n_; }

    // d = floor((n - 2) / 2)
    int d() const noexcept { return (n_ - 2) / 2; }
    // critical exponent (n + 2) / (n - 2)
    double critical_exponent() const noexcept { return double(n_ + 2) / double(n_ - 2); }
    // 4 / (n - 2), the exponent appearing in the potential
    double potential_exponent() const noexcept { return 4.0 / double(n_ - 2); }

private:
    int n_;
};

// Equilibrium value ((n-2)/n)^((n-2)/4).
double cylinder_value(Dimension n);
// Energy of the equilibrium.
double cylinder_energy(Dimension n);

// Right-hand side of v' = w, w' = (n-2)^2/4 v - n(n-2)/4 v^((n+2)/(n-2)).
std::array<double, 2> ode_rhs(Dimension n, double v, double w);
// w^2 - (n-2)^2/4 v^2 + (n-2)^2/4 v^(2n/(n-2))
double hamiltonian(Dimension n, double v, double w);

struct OrbitJet {
    double v;
    double dv;
    double ddv;
};

struct OrbitSample {
    double t;
    double v;
    double w;
};

struct OrbitOptions {
    double tol_H = 1e-10;       // relative energy drift allowed over the stored period
    double tol_period = 1e-8;   // |v(T) - v(0)| + |w(T) - w(0)|
    int min_samples = 2048;     // nodes of the dense table over one period
    double max_spacing = 4e-3;  // upper bound on the table spacing in t
    double horizon = 1e3;       // give up looking for the period past this t
};

// Periodic solution with v(0) = epsilon (its minimum) and w(0) = 0.
// Immutable after construction.
class DelaunayOrbit {
public:
    DelaunayOrbit(Dimension n, double epsilon, const OrbitOptions& options = {});

    Dimension dimension() const noexcept { return n_; }
    int n() const noexcept { return n_.value(); }
    double epsilon() const noexcept { return epsilon_; }
    double period() const noexcept { return period_; }
    double h0() const noexcept { return h0_; }
    double v_max() const noexcept { return v_max_; }
    const std::vector<OrbitSample>& samples() const noexcept { return samples_; }
    // Largest |H - h0| / |h0| observed on the table.
    double table_drift() const noexcept { return table_drift_; }

    // (v, v', v'') at any t; t is reduced modulo the period, v'' comes from the ODE.
    OrbitJet eval(double t) const;

private:
    Dimension n_;
    double epsilon_;
    double period_ = 0.0;
    double h0_ = 0.0;
    double v_max_ = 0.0;
    double table_drift_ = 0.0;
    double spacing_ = 0.0;
    std::vector<OrbitSample> samples_;
};

DelaunayOrbit integrate_orbit(Dimension n, double epsilon, const OrbitOptions& options = {});

// Plain initial value problem, states reported at the requested times (ascending, >= 0).
std::vector<OrbitSample> integrate_trajectory(Dimension n, double v0, double w0,
                                              const std::vector<double>& times,
                                              double tol = 1e-14);

// Max relative deviation of H from its initial value along a continuous integration
// over the given number of periods.
double energy_drift(const DelaunayOrbit& orbit, int periods, double tol = 1e-14);

struct DerivativeBounds {
    double first;   // max |v'| / v
    double second;  // max |v''| / v
};
DerivativeBounds derivative_bounds(const DelaunayOrbit& orbit);

}  // namespace dglue
