#pragma once

#include "dglue/polynomial.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace dglue {

// Value and derivatives of a scalar field on R^n; hessian is row-major n x n.
struct FieldJet {
    double value = 0.0;
    std::vector<double> grad;
    std::vector<double> hess;
};

// Scalar field with optional analytic derivatives; missing ones fall back to central differences.
class Field {
public:
    using Value = std::function<double(std::span<const double>)>;
    using Jet = std::function<void(std::span<const double>, int order, FieldJet&)>;

    Field() = default;
    Field(int n, Value value) : n_(n), value_(std::move(value)) {}
    Field(int n, Jet jet) : n_(n), jet_(std::move(jet)) {}

    int dimension() const noexcept { return n_; }
    bool has_derivatives() const noexcept { return bool(jet_); }

    double operator()(std::span<const double> x) const;
    // Derivatives up to `order` (0..2); h is the finite-difference step when none are supplied.
    FieldJet evaluate(std::span<const double> x, int order, double h) const;

    static Field from_polynomial(const Polynomial& p);
    // w(rho) Y(x) / rho^k with Y homogeneous of degree k; jet returns (w, w', w'').
    static Field radial_harmonic(int n, std::function<std::array<double, 3>(double)> w_jet,
                                 const Polynomial& Y);
    // Radial function with jet (w, w', w'').
    static Field radial(int n, std::function<std::array<double, 3>(double)> w_jet);
    // c f(x / r)
    Field rescaled(double r, double c = 1.0) const;

    friend Field operator+(const Field& a, const Field& b);
    friend Field operator-(const Field& a, const Field& b);
    friend Field operator*(double s, const Field& f);

private:
    int n_ = 0;
    Value value_;
    Jet jet_;
};

struct NormSpec {
    int k = 0;
    double alpha = 0.5;
    double mu = 0.0;
    double r = 1.0;
    int levels = 4;
    int samples = 64;
    std::uint64_t seed = 7;
    // Inner radius below which dyadic annuli are skipped (0 = none).
    double floor = 0.0;
};

struct NormReport {
    double value = 0.0;
    double sup_part = 0.0;
    double holder_part = 0.0;
    bool refinement_stable = true;
};

// Discrete norm on the annulus sigma <= |x| <= 2 sigma.
double norm_annulus(const Field& f, const NormSpec& spec, double sigma);
NormReport norm_annulus_report(const Field& f, const NormSpec& spec, double sigma,
                               bool check_refinement = false);

// sup over dyadic sigma = r/2, r/4, ... of sigma^(-mu) times the annulus norm.
double norm_weighted(const Field& f, const NormSpec& spec);
// The individual sigma^(-mu) * annulus values, outermost first.
std::vector<double> weighted_levels(const Field& f, const NormSpec& spec);

// C^(k,alpha) norm of theta -> f(r theta) on the unit sphere, tangential derivatives.
double norm_sphere(const Field& f, int k, double alpha, double r, int samples = 400,
                   std::uint64_t seed = 11);

}  // namespace dglue
