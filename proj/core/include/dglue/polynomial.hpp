#pragma once

#include <map>
#include <span>
#include <vector>

namespace dglue {

using MultiIndex = std::vector<int>;

// Real polynomial in n variables, sparse over monomials.
class Polynomial {
public:
    explicit Polynomial(int n = 0) : n_(n) {}

    static Polynomial constant(int n, double c);
    static Polynomial coordinate(int n, int i);
    static Polynomial monomial(const MultiIndex& alpha, double c = 1.0);
    // |x|^2
    static Polynomial radius_squared(int n);

    int variables() const noexcept { return n_; }
    const std::map<MultiIndex, double>& terms() const noexcept { return terms_; }
    bool is_zero(double tol = 0.0) const;
    int degree() const;  // -1 for the zero polynomial
    bool is_homogeneous() const;

    double coefficient(const MultiIndex& alpha) const;
    void add_term(const MultiIndex& alpha, double c);

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(double s);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

    Polynomial derivative(int i) const;
    Polynomial laplacian() const;
    // Homogeneous part of the given degree.
    Polynomial homogeneous_part(int k) const;
    // p(r x)
    Polynomial scaled(double r) const;

    double operator()(std::span<const double> x) const;
    void gradient(std::span<const double> x, std::span<double> g) const;
    // Row-major n x n.
    void hessian(std::span<const double> x, std::span<double> h) const;

    // Exact integral over the unit sphere S^(n-1).
    double integrate_sphere() const;

private:
    void prune();

    int n_;
    std::map<MultiIndex, double> terms_;
};

// Integral of x^alpha over the unit sphere in R^n, n = alpha.size().
double integrate_monomial_sphere(const MultiIndex& alpha);
// Surface area of S^(n-1).
double sphere_area(int n);
// Exact L^2(S^(n-1)) inner product.
double sphere_inner(const Polynomial& p, const Polynomial& q);

}  // namespace dglue
