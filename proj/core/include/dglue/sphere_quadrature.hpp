#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace dglue {

// Points and weights on the unit sphere S^(n-1).
class SphereQuadrature {
public:
    // Nested Gauss-Gegenbauer rule in the polar variables with a trapezoid rule on the last
    // circle. Exact for polynomials of degree <= 2 * order - 1.
    static SphereQuadrature product_rule(int n, int order);
    // Antithetic (x, -x) pairs of uniform points, equal weights.
    static SphereQuadrature monte_carlo(int n, std::size_t pairs, std::uint64_t seed);

    int dimension() const noexcept { return n_; }
    std::size_t size() const noexcept { return weights_.size(); }
    bool is_random() const noexcept { return random_; }
    std::span<const double> point(std::size_t k) const {
        return {points_.data() + k * n_, std::size_t(n_)};
    }
    double weight(std::size_t k) const { return weights_[k]; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    double integrate(const std::function<double(std::span<const double>)>& f) const;

    struct Estimate {
        double value;
        double error;  // sample standard error for Monte Carlo rules
    };
    Estimate integrate_with_error(const std::function<double(std::span<const double>)>& f) const;

private:
    int n_ = 0;
    bool random_ = false;
    std::vector<double> points_;
    std::vector<double> weights_;
};

// Gauss nodes and weights for the weight (1 - t^2)^a on [-1, 1].
void gauss_gegenbauer(int order, double a, std::vector<double>& nodes,
                      std::vector<double>& weights);

}  // namespace dglue
