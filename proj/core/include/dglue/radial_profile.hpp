#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace dglue {

// Uniform grid in t = -log(rho): node k sits at t0 + k h, node 0 is the outer radius.
struct LogGrid {
    double t0 = 0.0;
    double h = 0.01;
    int intervals = 0;

    int size() const noexcept { return intervals + 1; }
    double t(int k) const noexcept { return t0 + k * h; }
    double rho(int k) const noexcept { return std::exp(-t(k)); }
    double outer_radius() const noexcept { return std::exp(-t0); }
    double inner_radius() const noexcept { return rho(intervals); }

    static LogGrid spanning(double outer, double inner, double h);
};

// Function of rho sampled on a LogGrid with its first two t-derivatives;
// evaluated anywhere on the grid by quintic Hermite interpolation in t.
class RadialProfile {
public:
    RadialProfile() = default;
    RadialProfile(LogGrid grid, std::vector<double> w, std::vector<double> wt,
                  std::vector<double> wtt);
    // Derivatives from fourth-order differences of the samples.
    static RadialProfile from_samples(LogGrid grid, std::vector<double> w);

    const LogGrid& grid() const noexcept { return grid_; }
    const std::vector<double>& values() const noexcept { return w_; }
    const std::vector<double>& dt() const noexcept { return wt_; }
    const std::vector<double>& dtt() const noexcept { return wtt_; }

    // (w, dw/drho, d^2w/drho^2)
    std::array<double, 3> jet(double rho) const;
    double operator()(double rho) const { return jet(rho)[0]; }

private:
    LogGrid grid_;
    std::vector<double> w_, wt_, wtt_;
};

// Fourth-order first derivative of uniformly spaced samples.
std::vector<double> differentiate4(const std::vector<double>& f, double h);
// Sixth-order first derivative, one-sided near the ends.
std::vector<double> differentiate6(const std::vector<double>& f, double h);
// Fourth-order second derivative of uniformly spaced samples.
std::vector<double> differentiate4_second(const std::vector<double>& f, double h);

}  // namespace dglue
