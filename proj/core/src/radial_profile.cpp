#include "dglue/radial_profile.hpp"

#include "dglue/errors.hpp"

#include <algorithm>

namespace dglue {

LogGrid LogGrid::spanning(double outer, double inner, double h) {
    if (!(outer > inner && inner > 0.0 && h > 0.0)) throw ParameterError("LogGrid: bad radii or spacing");
    LogGrid g;
    g.t0 = -std::log(outer);
    const double span = std::log(outer / inner);
    g.intervals = std::max(8, int(std::ceil(span / h)));
    g.h = span / g.intervals;
    return g;
}

RadialProfile::RadialProfile(LogGrid grid, std::vector<double> w, std::vector<double> wt,
                             std::vector<double> wtt)
    : grid_(grid), w_(std::move(w)), wt_(std::move(wt)), wtt_(std::move(wtt)) {
    const std::size_t n = grid_.size();
    if (w_.size() != n || wt_.size() != n || wtt_.size() != n)
        throw ParameterError("RadialProfile: sample count does not match the grid");
}

RadialProfile RadialProfile::from_samples(LogGrid grid, std::vector<double> w) {
    auto wt = differentiate4(w, grid.h);
    auto wtt = differentiate4_second(w, grid.h);
    return RadialProfile(grid, std::move(w), std::move(wt), std::move(wtt));
}

std::array<double, 3> RadialProfile::jet(double rho) const {
    if (!(rho > 0.0)) throw DomainError("RadialProfile: radius must be positive");
    const double t = -std::log(rho);
    double s = (t - grid_.t0) / grid_.h;
    const double tolerance = 1e-9;
    if (s < -tolerance || s > grid_.intervals + tolerance)
        throw DomainError("RadialProfile: radius outside the sampled range");
    s = std::clamp(s, 0.0, double(grid_.intervals));
    int k = std::min(int(s), grid_.intervals - 1);
    s -= k;
    const double h = grid_.h;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double h0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
    const double h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
    const double h2 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
    const double h3 = 0.5 * (s3 - 2.0 * s4 + s5);
    const double h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
    const double h5 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
    // first and second s-derivatives of the basis
    const double d0 = -30.0 * s2 + 60.0 * s3 - 30.0 * s4;
    const double d1 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
    const double d2 = 0.5 * (2.0 * s - 9.0 * s2 + 12.0 * s3 - 5.0 * s4);
    const double d3 = 0.5 * (3.0 * s2 - 8.0 * s3 + 5.0 * s4);
    const double d4 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
    const double d5 = 30.0 * s2 - 60.0 * s3 + 30.0 * s4;
    const double e0 = -60.0 * s + 180.0 * s2 - 120.0 * s3;
    const double e1 = -36.0 * s + 96.0 * s2 - 60.0 * s3;
    const double e2 = 0.5 * (2.0 - 18.0 * s + 36.0 * s2 - 20.0 * s3);
    const double e3 = 0.5 * (6.0 * s - 24.0 * s2 + 20.0 * s3);
    const double e4 = -24.0 * s + 84.0 * s2 - 60.0 * s3;
    const double e5 = 60.0 * s - 180.0 * s2 + 120.0 * s3;
    const double p0 = w_[k], p1 = w_[k + 1];
    const double m0 = h * wt_[k], m1 = h * wt_[k + 1];
    const double a0 = h * h * wtt_[k], a1 = h * h * wtt_[k + 1];
    const double w = h0 * p0 + h1 * m0 + h2 * a0 + h3 * a1 + h4 * m1 + h5 * p1;
    const double ws = (d0 * p0 + d1 * m0 + d2 * a0 + d3 * a1 + d4 * m1 + d5 * p1) / h;
    const double wss = (e0 * p0 + e1 * m0 + e2 * a0 + e3 * a1 + e4 * m1 + e5 * p1) / (h * h);
    // t = -log(rho): w_rho = -w_t / rho, w_rhorho = (w_tt + w_t) / rho^2
    return {w, -ws / rho, (wss + ws) / (rho * rho)};
}

std::vector<double> differentiate6(const std::vector<double>& f, double h) {
    const int n = int(f.size());
    if (n < 7) throw ParameterError("differentiate6: need at least 7 samples");
    static constexpr double edge[3][7] = {{-147, 360, -450, 400, -225, 72, -10},
                                          {-10, -77, 150, -100, 50, -15, 2},
                                          {2, -24, -35, 80, -30, 8, -1}};
    std::vector<double> d(n);
    for (int k = 3; k < n - 3; ++k)
        d[k] = (-f[k - 3] + 9.0 * f[k - 2] - 45.0 * f[k - 1] + 45.0 * f[k + 1] - 9.0 * f[k + 2] + f[k + 3]) / (60.0 * h);
    const int m = n - 1;
    for (int k = 0; k < 3; ++k) {
        double a = 0.0, b = 0.0;
        for (int j = 0; j < 7; ++j) {
            a += edge[k][j] * f[j];
            b += edge[k][j] * f[m - j];
        }
        d[k] = a / (60.0 * h);
        d[m - k] = -b / (60.0 * h);
    }
    return d;
}

std::vector<double> differentiate4(const std::vector<double>& f, double h) {
    const int n = int(f.size());
    if (n < 5) throw ParameterError("differentiate4: need at least 5 samples");
    std::vector<double> d(n);
    for (int k = 2; k < n - 2; ++k) d[k] = (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]) / (12.0 * h);
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    const int m = n - 1;
    d[m] = (25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] + 3.0 * f[m - 4]) / (12.0 * h);
    d[m - 1] = (3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] - f[m - 4]) / (12.0 * h);
    return d;
}

std::vector<double> differentiate4_second(const std::vector<double>& f, double h) {
    const int n = int(f.size());
    if (n < 6) throw ParameterError("differentiate4_second: need at least 6 samples");
    std::vector<double> d(n);
    const double h2 = h * h;
    for (int k = 2; k < n - 2; ++k)
        d[k] = (-f[k - 2] + 16.0 * f[k - 1] - 30.0 * f[k] + 16.0 * f[k + 1] - f[k + 2]) / (12.0 * h2);
    auto fwd = [&](int k0, int sgn) {
        auto F = [&](int j) { return f[k0 + sgn * j]; };
        return (45.0 * F(0) - 154.0 * F(1) + 214.0 * F(2) - 156.0 * F(3) + 61.0 * F(4) - 10.0 * F(5)) / (12.0 * h2);
    };
    auto fwd1 = [&](int k0, int sgn) {
        // node k0 + sgn, stencil k0 .. k0 + 5 sgn
        auto F = [&](int j) { return f[k0 + sgn * j]; };
        return (10.0 * F(0) - 15.0 * F(1) - 4.0 * F(2) + 14.0 * F(3) - 6.0 * F(4) + F(5)) / (12.0 * h2);
    };
    d[0] = fwd(0, 1);
    d[1] = fwd1(0, 1);
    d[n - 1] = fwd(n - 1, -1);
    d[n - 2] = fwd1(n - 1, -1);
    return d;
}

}  // namespace dglue
