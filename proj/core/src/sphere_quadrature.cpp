#include "dglue/sphere_quadrature.hpp"

#include "dglue/errors.hpp"
#include "dglue/polynomial.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

namespace dglue {

void gauss_gegenbauer(int order, double a, std::vector<double>& nodes,
                      std::vector<double>& weights) {
    if (order < 1) throw ParameterError("gauss_gegenbauer: order must be positive");
    // Golub-Welsch on the symmetric Jacobi matrix of the monic Gegenbauer recurrence.
    const double lam = a + 0.5;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) {
        const double beta = k * (k + 2.0 * lam - 1.0) / (4.0 * (k + lam) * (k + lam - 1.0));
        J(k, k - 1) = J(k - 1, k) = std::sqrt(beta);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    const double mu0 = std::sqrt(std::numbers::pi) * std::tgamma(a + 1.0) / std::tgamma(a + 1.5);
    nodes.resize(order);
    weights.resize(order);
    for (int k = 0; k < order; ++k) {
        nodes[k] = es.eigenvalues()(k);
        const double v0 = es.eigenvectors()(0, k);
        weights[k] = mu0 * v0 * v0;
    }
}

SphereQuadrature SphereQuadrature::product_rule(int n, int order) {
    if (n < 2) throw ParameterError("product_rule: n must be at least 2");
    SphereQuadrature q;
    q.n_ = n;
    // Start from the circle S^1 and lift one dimension at a time.
    const int m = 2 * order;
    std::vector<double> pts, wts;
    for (int k = 0; k < m; ++k) {
        const double th = 2.0 * std::numbers::pi * k / m;
        pts.push_back(std::cos(th));
        pts.push_back(std::sin(th));
        wts.push_back(2.0 * std::numbers::pi / m);
    }
    std::vector<double> t, tw;
    for (int dim = 3; dim <= n; ++dim) {
        // S^(dim-1) from S^(dim-2): x = (t, sqrt(1 - t^2) y), weight (1 - t^2)^((dim-3)/2).
        gauss_gegenbauer(order, 0.5 * (dim - 3), t, tw);
        std::vector<double> np, nw;
        const std::size_t count = wts.size();
        for (int i = 0; i < order; ++i) {
            const double s = std::sqrt(std::max(0.0, 1.0 - t[i] * t[i]));
            for (std::size_t k = 0; k < count; ++k) {
                np.push_back(t[i]);
                for (int j = 0; j < dim - 1; ++j) np.push_back(s * pts[k * (dim - 1) + j]);
                nw.push_back(tw[i] * wts[k]);
            }
        }
        pts.swap(np);
        wts.swap(nw);
    }
    q.points_ = std::move(pts);
    q.weights_ = std::move(wts);
    return q;
}

SphereQuadrature SphereQuadrature::monte_carlo(int n, std::size_t pairs, std::uint64_t seed) {
    if (n < 2 || pairs == 0) throw ParameterError("monte_carlo: bad size");
    SphereQuadrature q;
    q.n_ = n;
    q.random_ = true;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    const double w = sphere_area(n) / (2.0 * pairs);
    std::vector<double> x(n);
    for (std::size_t k = 0; k < pairs; ++k) {
        double r2 = 0.0;
        for (auto& xi : x) {
            xi = gauss(rng);
            r2 += xi * xi;
        }
        const double r = std::sqrt(r2);
        for (double xi : x) q.points_.push_back(xi / r);
        for (double xi : x) q.points_.push_back(-xi / r);
        q.weights_.push_back(w);
        q.weights_.push_back(w);
    }
    return q;
}

double SphereQuadrature::integrate(const std::function<double(std::span<const double>)>& f) const {
    double s = 0.0;
    for (std::size_t k = 0; k < size(); ++k) s += weights_[k] * f(point(k));
    return s;
}

SphereQuadrature::Estimate SphereQuadrature::integrate_with_error(
    const std::function<double(std::span<const double>)>& f) const {
    if (!random_) return {integrate(f), 0.0};
    // Pair averages are the independent samples.
    const std::size_t pairs = size() / 2;
    const double area = sphere_area(n_);
    double mean = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < pairs; ++k) {
        const double y = 0.5 * (f(point(2 * k)) + f(point(2 * k + 1)));
        const double d = y - mean;
        mean += d / double(k + 1);
        m2 += d * (y - mean);
    }
    const double var = pairs > 1 ? m2 / double(pairs - 1) : 0.0;
    return {area * mean, area * std::sqrt(var / double(pairs))};
}

}  // namespace dglue
