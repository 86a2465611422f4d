#include "dglue/harmonics.hpp"

#include "dglue/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dglue {

namespace {

void enumerate_indices(int n, int k, int pos, MultiIndex& cur, std::vector<MultiIndex>& out) {
    if (pos == n - 1) {
        cur[pos] = k;
        out.push_back(cur);
        return;
    }
    for (int e = k; e >= 0; --e) {
        cur[pos] = e;
        enumerate_indices(n, k - e, pos + 1, cur, out);
    }
}

long binomial(int a, int b) {
    if (b < 0 || a < b) return 0;
    long r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
}

std::vector<double> table_values(const HarmonicBasis& basis, const SphereQuadrature& q,
                                 const SphereFunction& f, double r, bool random,
                                 double& error) {
    const int n = basis.dimension();
    std::vector<double> fx(q.size());
    std::vector<double> x(n);
    for (std::size_t k = 0; k < q.size(); ++k) {
        auto th = q.point(k);
        for (int i = 0; i < n; ++i) x[i] = r * th[i];
        fx[k] = f(x);
    }
    std::vector<double> c(basis.size(), 0.0);
    error = 0.0;
    for (std::size_t j = 0; j < basis.size(); ++j) {
        if (random) {
            std::vector<double> ej(q.size());
            for (std::size_t k = 0; k < q.size(); ++k) ej[k] = basis[j](q.point(k));
            std::size_t idx = 0;
            auto est = q.integrate_with_error([&](std::span<const double>) {
                const double v = fx[idx] * ej[idx];
                ++idx;
                return v;
            });
            c[j] = est.value;
            error = std::max(error, est.error);
        } else {
            double s = 0.0;
            for (std::size_t k = 0; k < q.size(); ++k) s += q.weight(k) * fx[k] * basis[j](q.point(k));
            c[j] = s;
        }
    }
    return c;
}

std::vector<double> sampled_coefficients(const SphereFunction& f, const HarmonicBasis& basis,
                                         double r, const ProjectionOptions& opt, double& error) {
    const int n = basis.dimension();
    if (n <= 5) {
        double unused = 0.0;
        const int lo = std::max(opt.order, basis.max_degree() + 1);
        auto c1 = table_values(basis, SphereQuadrature::product_rule(n, lo), f, r, false, unused);
        auto c2 = table_values(basis, SphereQuadrature::product_rule(n, 2 * lo), f, r, false, unused);
        error = 0.0;
        for (std::size_t j = 0; j < c1.size(); ++j) error = std::max(error, std::abs(c1[j] - c2[j]));
        if (error > opt.tol)
            throw AccuracyError("sphere projection did not converge: change " + std::to_string(error));
        return c2;
    }
    auto q = SphereQuadrature::monte_carlo(n, opt.mc_pairs, opt.seed);
    auto c = table_values(basis, q, f, r, true, error);
    if (error > opt.mc_tol)
        throw AccuracyError("Monte Carlo projection error " + std::to_string(error) + " above tolerance");
    return c;
}

ModeExpansion expansion_from(const std::vector<double>& c, const HarmonicBasis& basis, double r,
                             int min_degree, double error) {
    ModeExpansion e;
    e.n = basis.dimension();
    e.radii = {r};
    e.error_estimate = error;
    for (std::size_t j = 0; j < basis.size(); ++j)
        if (basis[j].degree >= min_degree) e.profiles[basis[j].key()] = {c[j]};
    return e;
}

LowModes low_from(const std::vector<double>& c, const HarmonicBasis& basis) {
    if (basis.max_degree() < 1) throw ParameterError("project_low: basis needs degree 1");
    LowModes low;
    low.n = basis.dimension();
    low.constant = c[0];
    auto [a, b] = basis.degree_range(1);
    for (std::size_t j = a; j < b; ++j) low.linear.push_back(c[j]);
    return low;
}

}  // namespace

int eigenvalue(int n, int i) {
    if (i < 0) throw ParameterError("eigenvalue: degree must be nonnegative");
    return i * (i + n - 2);
}

int harmonic_dimension(int n, int i) {
    return int(binomial(n + i - 1, i) - binomial(n + i - 3, i - 2));
}

Polynomial harmonic_projection(const Polynomial& p) {
    if (p.is_zero()) return p;
    if (!p.is_homogeneous()) throw ParameterError("harmonic_projection: input must be homogeneous");
    const int n = p.variables();
    const int k = p.degree();
    const Polynomial r2 = Polynomial::radius_squared(n);
    Polynomial out = p;
    Polynomial lap = p;
    Polynomial rpow = Polynomial::constant(n, 1.0);
    double denom = 1.0;
    for (int j = 1; 2 * j <= k; ++j) {
        lap = lap.laplacian();
        rpow = rpow * r2;
        denom *= -2.0 * j * (n + 2 * k - 2 - 2 * j);
        out += (1.0 / denom) * (rpow * lap);
    }
    return out;
}

HarmonicBasis::HarmonicBasis(int n, int max_degree) : n_(n), max_degree_(max_degree) {
    if (n < 2) throw ParameterError("HarmonicBasis: n must be at least 2");
    if (max_degree < 0 || max_degree > 6)
        throw ParameterError("HarmonicBasis: max_degree must lie in [0, 6]");
    for (int k = 0; k <= max_degree; ++k) {
        offsets_.push_back(modes_.size());
        std::vector<MultiIndex> all;
        MultiIndex cur(n, 0);
        enumerate_indices(n, k, 0, cur, all);
        std::vector<Polynomial> found;
        for (const auto& alpha : all) {
            if (alpha[0] > 1) continue;
            Polynomial q = harmonic_projection(Polynomial::monomial(alpha));
            // Two passes of modified Gram-Schmidt.
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& e : found) q -= sphere_inner(q, e) * e;
            const double nn = std::sqrt(sphere_inner(q, q));
            if (nn < 1e-10) continue;
            q *= 1.0 / nn;
            found.push_back(q);
        }
        if (int(found.size()) != harmonic_dimension(n, k))
            throw SolverError("harmonics", "basis construction lost rank at degree " + std::to_string(k));
        for (std::size_t i = 0; i < found.size(); ++i)
            modes_.push_back({n, k, int(i), std::move(found[i]), true});
    }
    offsets_.push_back(modes_.size());
}

const HarmonicMode& HarmonicBasis::mode(ModeKey key) const { return modes_[flat_index(key)]; }

std::size_t HarmonicBasis::flat_index(ModeKey key) const {
    if (key.degree < 0 || key.degree > max_degree_) throw ParameterError("mode degree outside basis");
    const std::size_t j = offsets_[key.degree] + key.index;
    if (key.index < 0 || j >= offsets_[key.degree + 1]) throw ParameterError("mode index outside basis");
    return j;
}

std::pair<std::size_t, std::size_t> HarmonicBasis::degree_range(int degree) const {
    if (degree < 0 || degree > max_degree_) return {0, 0};
    return {offsets_[degree], offsets_[degree + 1]};
}

HarmonicBasis build_basis(int n, int max_degree) { return HarmonicBasis(n, max_degree); }

const std::vector<double>* ModeExpansion::find(ModeKey key) const {
    auto it = profiles.find(key);
    return it == profiles.end() ? nullptr : &it->second;
}

double ModeExpansion::coefficient(ModeKey key, std::size_t k) const {
    const auto* p = find(key);
    return p ? p->at(k) : 0.0;
}

double ModeExpansion::max_abs() const {
    double m = 0.0;
    for (const auto& [key, prof] : profiles)
        for (double v : prof) m = std::max(m, std::abs(v));
    return m;
}

ModeExpansion project_all(const Polynomial& phi, const HarmonicBasis& basis, double r) {
    std::vector<double> c(basis.size());
    const Polynomial pr = phi.scaled(r);
    for (std::size_t j = 0; j < basis.size(); ++j) c[j] = sphere_inner(pr, basis[j].poly);
    return expansion_from(c, basis, r, 0, 0.0);
}

ModeExpansion project_high(const Polynomial& phi, const HarmonicBasis& basis, double r) {
    std::vector<double> c(basis.size());
    const Polynomial pr = phi.scaled(r);
    for (std::size_t j = 0; j < basis.size(); ++j)
        c[j] = basis[j].degree >= 2 ? sphere_inner(pr, basis[j].poly) : 0.0;
    return expansion_from(c, basis, r, 2, 0.0);
}

ModeExpansion project_all(const SphereFunction& f, const HarmonicBasis& basis, double r,
                          const ProjectionOptions& options) {
    double err = 0.0;
    auto c = sampled_coefficients(f, basis, r, options, err);
    return expansion_from(c, basis, r, 0, err);
}

ModeExpansion project_high(const SphereFunction& f, const HarmonicBasis& basis, double r,
                           const ProjectionOptions& options) {
    double err = 0.0;
    auto c = sampled_coefficients(f, basis, r, options, err);
    return expansion_from(c, basis, r, 2, err);
}

LowModes project_low(const Polynomial& phi, const HarmonicBasis& basis, double r) {
    std::vector<double> c(basis.size(), 0.0);
    const Polynomial pr = phi.scaled(r);
    for (std::size_t j = 0; j < basis.size(); ++j)
        if (basis[j].degree <= 1) c[j] = sphere_inner(pr, basis[j].poly);
    return low_from(c, basis);
}

LowModes project_low(const SphereFunction& f, const HarmonicBasis& basis, double r,
                     const ProjectionOptions& options) {
    double err = 0.0;
    auto c = sampled_coefficients(f, basis, r, options, err);
    return low_from(c, basis);
}

double LowModes::constant_value() const { return constant / std::sqrt(sphere_area(n)); }

std::vector<double> LowModes::linear_vector() const {
    const double s = std::sqrt(double(n) / sphere_area(n));
    std::vector<double> a(linear.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = linear[i] * s;
    return a;
}

double synthesize(const ModeExpansion& e, const HarmonicBasis& basis, std::span<const double> theta,
                  std::size_t k) {
    double s = 0.0;
    for (const auto& [key, prof] : e.profiles) s += prof.at(k) * basis.mode(key)(theta);
    return s;
}

double synthesize(const LowModes& low, const HarmonicBasis& basis, std::span<const double> theta) {
    double s = low.constant * basis[0](theta);
    auto [a, b] = basis.degree_range(1);
    for (std::size_t j = a; j < b; ++j) s += low.linear[j - a] * basis[j](theta);
    return s;
}

}  // namespace dglue
