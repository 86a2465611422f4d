#pragma once

#include "dglue/harmonics.hpp"
#include "dglue/weighted_norms.hpp"

#include <map>
#include <memory>
#include <span>

namespace dglue {

using BasisPtr = std::shared_ptr<const HarmonicBasis>;

// Mode coefficients of a function on the sphere of radius r: phi(r theta) = sum c_j e_j(theta).
struct BoundaryData {
    BasisPtr basis;
    double r = 1.0;
    std::map<ModeKey, double> coefficients;

    int dimension() const { return basis->dimension(); }
    int min_degree() const;  // smallest degree with a nonzero coefficient, -1 if none
    double max_abs() const;
    // phi(r theta)
    double operator()(std::span<const double> theta) const;
    // Same data as a field on R^n, extended by the harmonic polynomials of each mode.
    Field field() const;

    BoundaryData& operator+=(const BoundaryData& other);
    BoundaryData& operator*=(double s);
    friend BoundaryData operator+(BoundaryData a, const BoundaryData& b) { return a += b; }
    friend BoundaryData operator-(BoundaryData a, const BoundaryData& b) { return a += (-1.0) * b; }
    friend BoundaryData operator*(double s, BoundaryData a) { return a *= s; }

    static BoundaryData from_expansion(const ModeExpansion& e, BasisPtr basis, std::size_t k = 0);
};

// sum (|x|/r)^i c e(theta), degrees >= 2 only, |x| <= r.
double interior_extend(const BoundaryData& data, std::span<const double> x);
// sum (|x|/r)^(2-n-i) c e(theta), degrees >= 1, |x| >= r.
double exterior_extend(const BoundaryData& data, std::span<const double> x);
Field interior_field(const BoundaryData& data);
Field exterior_field(const BoundaryData& data);

// Multiplier 2i + n - 2 of d_r(P_1 - Q_1) on degree i.
double z_multiplier(int n, int degree);
BoundaryData z_apply(const BoundaryData& data);
BoundaryData z_inverse(const BoundaryData& data);

}  // namespace dglue
