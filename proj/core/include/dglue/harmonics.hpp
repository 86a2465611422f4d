#pragma once

#include "dglue/polynomial.hpp"
#include "dglue/sphere_quadrature.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

namespace dglue {

// i (i + n - 2), the eigenvalue of -Delta on S^(n-1) for degree i.
int eigenvalue(int n, int i);
// Dimension of the space of degree-i harmonics in n variables.
int harmonic_dimension(int n, int i);

struct ModeKey {
    int degree = 0;
    int index = 0;  // position within the degree
    auto operator<=>(const ModeKey&) const = default;
};

struct HarmonicMode {
    int n = 0;
    int degree = 0;
    int index = 0;
    Polynomial poly;
    bool normalized = false;

    ModeKey key() const { return {degree, index}; }
    // e(theta) for a unit vector theta.
    double operator()(std::span<const double> theta) const { return poly(theta); }
};

// Orthonormal harmonic basis of L^2(S^(n-1)) up to a degree.
class HarmonicBasis {
public:
    HarmonicBasis() = default;
    HarmonicBasis(int n, int max_degree);

    int dimension() const noexcept { return n_; }
    int max_degree() const noexcept { return max_degree_; }
    std::size_t size() const noexcept { return modes_.size(); }
    const std::vector<HarmonicMode>& modes() const noexcept { return modes_; }
    const HarmonicMode& operator[](std::size_t j) const { return modes_[j]; }
    const HarmonicMode& mode(ModeKey key) const;
    std::size_t flat_index(ModeKey key) const;
    // Flat index range [first, last) of a degree.
    std::pair<std::size_t, std::size_t> degree_range(int degree) const;

private:
    int n_ = 0;
    int max_degree_ = -1;
    std::vector<HarmonicMode> modes_;
    std::vector<std::size_t> offsets_;
};

HarmonicBasis build_basis(int n, int max_degree);

// Harmonic component of a homogeneous polynomial of degree k.
Polynomial harmonic_projection(const Polynomial& p);

// Radial profiles per mode on a grid: phi(r theta) = sum_j phi_j(r) e_j(theta).
struct ModeExpansion {
    int n = 0;
    std::vector<double> radii;
    std::map<ModeKey, std::vector<double>> profiles;
    double error_estimate = 0.0;

    const std::vector<double>* find(ModeKey key) const;
    // Coefficient of a mode at radius index k (0 if the mode is absent).
    double coefficient(ModeKey key, std::size_t k = 0) const;
    double max_abs() const;
};

using SphereFunction = std::function<double(std::span<const double>)>;

struct ProjectionOptions {
    int order = 12;                   // product rule order (n <= 5)
    double tol = 1e-10;               // accepted change between order and 2*order
    std::size_t mc_pairs = 100000;    // Monte Carlo pairs (n > 5)
    double mc_tol = 5e-2;             // accepted Monte Carlo standard error
    std::uint64_t seed = 20240601;
};

// Degree >= 2 part of a polynomial restricted to the sphere of radius r.
ModeExpansion project_high(const Polynomial& phi, const HarmonicBasis& basis, double r);
// Degree >= 2 part of sampled data f(x), |x| = r.
ModeExpansion project_high(const SphereFunction& f, const HarmonicBasis& basis, double r,
                           const ProjectionOptions& options = {});
// All modes of the basis.
ModeExpansion project_all(const Polynomial& phi, const HarmonicBasis& basis, double r);
ModeExpansion project_all(const SphereFunction& f, const HarmonicBasis& basis, double r,
                          const ProjectionOptions& options = {});

struct LowModes {
    int n = 0;
    double constant = 0.0;        // coefficient of the normalized constant mode
    std::vector<double> linear;   // coefficients of the normalized linear modes

    // phi's mean-value constant c in c + a.theta
    double constant_value() const;
    // a in c + a.theta
    std::vector<double> linear_vector() const;
};

LowModes project_low(const Polynomial& phi, const HarmonicBasis& basis, double r);
LowModes project_low(const SphereFunction& f, const HarmonicBasis& basis, double r,
                     const ProjectionOptions& options = {});

// Sum of the expansion's modes at radius index k, evaluated at the unit vector theta.
double synthesize(const ModeExpansion& e, const HarmonicBasis& basis, std::span<const double> theta,
                  std::size_t k = 0);
double synthesize(const LowModes& low, const HarmonicBasis& basis, std::span<const double> theta);

}  // namespace dglue
