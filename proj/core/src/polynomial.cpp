#include "dglue/polynomial.hpp"

#include "dglue/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace dglue {

namespace {

double ipow(double x, int k) {
    double r = 1.0;
    while (k-- > 0) r *= x;
    return r;
}

// Evaluate sum_alpha c_alpha x^alpha with cached powers.
struct PowerTable {
    std::vector<std::vector<double>> p;
    PowerTable(std::span<const double> x, int max_deg) : p(x.size()) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            p[i].resize(max_deg + 1);
            p[i][0] = 1.0;
            for (int k = 1; k <= max_deg; ++k) p[i][k] = p[i][k - 1] * x[i];
        }
    }
    double mono(const MultiIndex& a) const {
        double v = 1.0;
        for (std::size_t i = 0; i < a.size(); ++i) v *= p[i][a[i]];
        return v;
    }
};

}  // namespace

Polynomial Polynomial::constant(int n, double c) {
    Polynomial p(n);
    p.add_term(MultiIndex(n, 0), c);
    return p;
}

Polynomial Polynomial::coordinate(int n, int i) {
    MultiIndex a(n, 0);
    a.at(i) = 1;
    return monomial(a);
}

Polynomial Polynomial::monomial(const MultiIndex& alpha, double c) {
    Polynomial p(int(alpha.size()));
    p.add_term(alpha, c);
    return p;
}

Polynomial Polynomial::radius_squared(int n) {
    Polynomial p(n);
    for (int i = 0; i < n; ++i) {
        MultiIndex a(n, 0);
        a[i] = 2;
        p.add_term(a, 1.0);
    }
    return p;
}

bool Polynomial::is_zero(double tol) const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [tol](const auto& t) { return std::abs(t.second) <= tol; });
}

int Polynomial::degree() const {
    int d = -1;
    for (const auto& [a, c] : terms_) d = std::max(d, std::accumulate(a.begin(), a.end(), 0));
    return d;
}

bool Polynomial::is_homogeneous() const {
    const int d = degree();
    return std::all_of(terms_.begin(), terms_.end(), [d](const auto& t) {
        return std::accumulate(t.first.begin(), t.first.end(), 0) == d;
    });
}

double Polynomial::coefficient(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const MultiIndex& alpha, double c) {
    if (int(alpha.size()) != n_) throw ParameterError("Polynomial: multi-index size mismatch");
    if (c == 0.0) return;
    auto [it, inserted] = terms_.emplace(alpha, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    if (n_ == 0) n_ = other.n_;
    for (const auto& [a, c] : other.terms_) add_term(a, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
    if (n_ == 0) n_ = other.n_;
    for (const auto& [a, c] : other.terms_) add_term(a, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(double s) {
    for (auto& t : terms_) t.second *= s;
    prune();
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.n_ != b.n_) throw ParameterError("Polynomial: variable count mismatch");
    Polynomial out(a.n_);
    MultiIndex s(a.n_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            for (int i = 0; i < a.n_; ++i) s[i] = ea[i] + eb[i];
            out.add_term(s, ca * cb);
        }
    return out;
}

Polynomial Polynomial::derivative(int i) const {
    Polynomial out(n_);
    for (const auto& [a, c] : terms_) {
        if (a[i] == 0) continue;
        MultiIndex b = a;
        b[i] -= 1;
        out.add_term(b, c * a[i]);
    }
    return out;
}

Polynomial Polynomial::laplacian() const {
    Polynomial out(n_);
    for (const auto& [a, c] : terms_)
        for (int i = 0; i < n_; ++i) {
            if (a[i] < 2) continue;
            MultiIndex b = a;
            b[i] -= 2;
            out.add_term(b, c * a[i] * (a[i] - 1));
        }
    return out;
}

Polynomial Polynomial::homogeneous_part(int k) const {
    Polynomial out(n_);
    for (const auto& [a, c] : terms_)
        if (std::accumulate(a.begin(), a.end(), 0) == k) out.add_term(a, c);
    return out;
}

Polynomial Polynomial::scaled(double r) const {
    Polynomial out(n_);
    for (const auto& [a, c] : terms_) out.add_term(a, c * ipow(r, std::accumulate(a.begin(), a.end(), 0)));
    return out;
}

double Polynomial::operator()(std::span<const double> x) const {
    const PowerTable pt(x, std::max(degree(), 0));
    double s = 0.0;
    for (const auto& [a, c] : terms_) s += c * pt.mono(a);
    return s;
}

void Polynomial::gradient(std::span<const double> x, std::span<double> g) const {
    const PowerTable pt(x, std::max(degree(), 0));
    std::fill(g.begin(), g.end(), 0.0);
    MultiIndex b;
    for (const auto& [a, c] : terms_)
        for (int i = 0; i < n_; ++i) {
            if (a[i] == 0) continue;
            b = a;
            b[i] -= 1;
            g[i] += c * a[i] * pt.mono(b);
        }
}

void Polynomial::hessian(std::span<const double> x, std::span<double> h) const {
    const PowerTable pt(x, std::max(degree(), 0));
    std::fill(h.begin(), h.end(), 0.0);
    MultiIndex b;
    for (const auto& [a, c] : terms_)
        for (int i = 0; i < n_; ++i) {
            if (a[i] == 0) continue;
            for (int j = i; j < n_; ++j) {
                b = a;
                b[i] -= 1;
                if (b[j] == 0) continue;
                const double f = c * a[i] * b[j];
                b[j] -= 1;
                const double v = f * pt.mono(b);
                h[i * n_ + j] += v;
                if (j != i) h[j * n_ + i] += v;
            }
        }
}

double Polynomial::integrate_sphere() const {
    double s = 0.0;
    for (const auto& [a, c] : terms_) s += c * integrate_monomial_sphere(a);
    return s;
}

void Polynomial::prune() {
    std::erase_if(terms_, [](const auto& t) { return t.second == 0.0; });
}

double integrate_monomial_sphere(const MultiIndex& alpha) {
    double lg = 0.0, total = 0.0;
    for (int e : alpha) {
        if (e < 0) throw ParameterError("integrate_monomial_sphere: negative exponent");
        if (e % 2) return 0.0;
        const double beta = 0.5 * (e + 1);
        lg += std::lgamma(beta);
        total += beta;
    }
    return 2.0 * std::exp(lg - std::lgamma(total));
}

double sphere_area(int n) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double sphere_inner(const Polynomial& p, const Polynomial& q) {
    return (p * q).integrate_sphere();
}

}  // namespace dglue
