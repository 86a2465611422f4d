#include "dglue/weighted_norms.hpp"

#include "dglue/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace dglue {

namespace {

double l2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double diff_norm(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

void random_unit(std::mt19937_64& rng, std::vector<double>& x) {
    std::normal_distribution<double> g;
    double r = 0.0;
    do {
        r = 0.0;
        for (auto& xi : x) {
            xi = g(rng);
            r += xi * xi;
        }
    } while (r == 0.0);
    r = std::sqrt(r);
    for (auto& xi : x) xi /= r;
}

// Scale-free sample pattern in the annulus 1 <= |x| <= 2: stratified radii, random directions,
// each point followed by a nearby partner.
std::vector<std::vector<double>> annulus_pattern(int n, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<std::vector<double>> pts;
    std::vector<double> dir(n), off(n);
    for (int k = 0; k < samples; ++k) {
        double rho = 1.0 + (k + uni(rng)) / samples;
        if (k == 0) rho = 1.0;
        if (k == samples - 1) rho = 2.0;
        random_unit(rng, dir);
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = rho * dir[i];
        random_unit(rng, off);
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) y[i] = x[i] + 0.05 * off[i];
        const double ry = l2(y);
        const double target = std::clamp(ry, 1.0, 2.0);
        for (auto& yi : y) yi *= target / ry;
        pts.push_back(std::move(x));
        pts.push_back(std::move(y));
    }
    return pts;
}

std::vector<std::vector<double>> sphere_pattern(int n, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> pts;
    std::vector<double> dir(n), off(n);
    for (int k = 0; k < samples; ++k) {
        random_unit(rng, dir);
        random_unit(rng, off);
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) y[i] = dir[i] + 0.05 * off[i];
        const double ry = l2(y);
        for (auto& yi : y) yi /= ry;
        pts.push_back(dir);
        pts.push_back(std::move(y));
    }
    return pts;
}

std::vector<double> flatten_order(const FieldJet& j, int k) {
    if (k == 0) return {j.value};
    if (k == 1) return j.grad;
    return j.hess;
}

}  // namespace

double Field::operator()(std::span<const double> x) const {
    if (value_) return value_(x);
    FieldJet j;
    jet_(x, 0, j);
    return j.value;
}

FieldJet Field::evaluate(std::span<const double> x, int order, double h) const {
    FieldJet out;
    if (jet_) {
        jet_(x, order, out);
        return out;
    }
    const int n = n_;
    out.value = value_(x);
    if (order >= 1) {
        out.grad.assign(n, 0.0);
        std::vector<double> y(x.begin(), x.end());
        for (int i = 0; i < n; ++i) {
            y[i] = x[i] + h;
            const double fp = value_(y);
            y[i] = x[i] - h;
            const double fm = value_(y);
            y[i] = x[i];
            out.grad[i] = (fp - fm) / (2.0 * h);
        }
    }
    if (order >= 2) {
        const double s = 100.0 * h;
        out.hess.assign(n * n, 0.0);
        std::vector<double> y(x.begin(), x.end());
        for (int i = 0; i < n; ++i) {
            y[i] = x[i] + s;
            const double fp = value_(y);
            y[i] = x[i] - s;
            const double fm = value_(y);
            y[i] = x[i];
            out.hess[i * n + i] = (fp - 2.0 * out.value + fm) / (s * s);
            for (int j = i + 1; j < n; ++j) {
                double acc = 0.0;
                for (int a = -1; a <= 1; a += 2)
                    for (int b = -1; b <= 1; b += 2) {
                        y[i] = x[i] + a * s;
                        y[j] = x[j] + b * s;
                        acc += a * b * value_(y);
                    }
                y[i] = x[i];
                y[j] = x[j];
                out.hess[i * n + j] = out.hess[j * n + i] = acc / (4.0 * s * s);
            }
        }
    }
    return out;
}

Field Field::from_polynomial(const Polynomial& p) {
    const int n = p.variables();
    return Field(n, Jet([p, n](std::span<const double> x, int order, FieldJet& j) {
        j.value = p(x);
        if (order >= 1) {
            j.grad.assign(n, 0.0);
            p.gradient(x, j.grad);
        }
        if (order >= 2) {
            j.hess.assign(n * n, 0.0);
            p.hessian(x, j.hess);
        }
    }));
}

Field Field::radial_harmonic(int n, std::function<std::array<double, 3>(double)> w_jet,
                             const Polynomial& Y) {
    const int k = std::max(Y.degree(), 0);
    return Field(n, Jet([n, k, Y, w_jet](std::span<const double> x, int order, FieldJet& j) {
        const double rho = l2(x);
        if (rho == 0.0) throw DomainError("radial_harmonic field: singular at 0");
        const auto [w, w1, w2] = w_jet(rho);
        const double rk = std::pow(rho, -k);
        const double g = w * rk;
        const double g1 = w1 * rk - k * w * rk / rho;
        const double g2 = w2 * rk - 2.0 * k * w1 * rk / rho + k * (k + 1.0) * w * rk / (rho * rho);
        const double y = Y(x);
        j.value = g * y;
        if (order < 1) return;
        std::vector<double> gy(n);
        Y.gradient(x, gy);
        j.grad.assign(n, 0.0);
        for (int i = 0; i < n; ++i) j.grad[i] = g1 * x[i] / rho * y + g * gy[i];
        if (order < 2) return;
        std::vector<double> hy(n * n);
        Y.hessian(x, hy);
        j.hess.assign(n * n, 0.0);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const double xx = x[a] * x[b] / (rho * rho);
                const double delta = a == b ? 1.0 : 0.0;
                j.hess[a * n + b] = g2 * xx * y + g1 * (delta - xx) / rho * y +
                                    g1 / rho * (x[a] * gy[b] + gy[a] * x[b]) + g * hy[a * n + b];
            }
    }));
}

Field Field::radial(int n, std::function<std::array<double, 3>(double)> w_jet) {
    return radial_harmonic(n, std::move(w_jet), Polynomial::constant(n, 1.0));
}

Field Field::rescaled(double r, double c) const {
    const Field self = *this;
    const int n = n_;
    if (!jet_) {
        return Field(n, Value([self, r, c, n](std::span<const double> x) {
            std::vector<double> y(n);
            for (int i = 0; i < n; ++i) y[i] = x[i] / r;
            return c * self(y);
        }));
    }
    return Field(n, Jet([self, r, c, n](std::span<const double> x, int order, FieldJet& j) {
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) y[i] = x[i] / r;
        j = self.evaluate(y, order, 0.0);
        j.value *= c;
        for (auto& g : j.grad) g *= c / r;
        for (auto& h : j.hess) h *= c / (r * r);
    }));
}

Field operator+(const Field& a, const Field& b) {
    if (a.n_ != b.n_) throw ParameterError("Field: dimension mismatch");
    if (a.jet_ && b.jet_) {
        return Field(a.n_, Field::Jet([a, b](std::span<const double> x, int order, FieldJet& j) {
            j = a.evaluate(x, order, 0.0);
            const FieldJet k = b.evaluate(x, order, 0.0);
            j.value += k.value;
            for (std::size_t i = 0; i < j.grad.size(); ++i) j.grad[i] += k.grad[i];
            for (std::size_t i = 0; i < j.hess.size(); ++i) j.hess[i] += k.hess[i];
        }));
    }
    return Field(a.n_, Field::Value([a, b](std::span<const double> x) { return a(x) + b(x); }));
}

Field operator*(double s, const Field& f) {
    if (f.jet_) {
        return Field(f.n_, Field::Jet([f, s](std::span<const double> x, int order, FieldJet& j) {
            j = f.evaluate(x, order, 0.0);
            j.value *= s;
            for (auto& g : j.grad) g *= s;
            for (auto& h : j.hess) h *= s;
        }));
    }
    return Field(f.n_, Field::Value([f, s](std::span<const double> x) { return s * f(x); }));
}

Field operator-(const Field& a, const Field& b) { return a + (-1.0) * b; }

NormReport norm_annulus_report(const Field& f, const NormSpec& spec, double sigma,
                               bool check_refinement) {
    if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) throw ParameterError("NormSpec: alpha must lie in (0,1)");
    if (spec.k < 0 || spec.k > 2) throw ParameterError("NormSpec: k must lie in [0,2]");
    if (!(sigma > 0.0)) throw ParameterError("norm_annulus: sigma must be positive");
    const int n = f.dimension();
    const auto pattern = annulus_pattern(n, spec.samples, spec.seed);
    const double h = 1e-5 * sigma;
    std::vector<std::vector<double>> top;
    std::vector<double> pos;
    std::vector<std::vector<double>> xs;
    NormReport rep;
    std::vector<double> x(n);
    for (const auto& p : pattern) {
        for (int i = 0; i < n; ++i) x[i] = sigma * p[i];
        const FieldJet j = f.evaluate(x, spec.k, h);
        double s = std::abs(j.value);
        if (spec.k >= 1) s += sigma * l2(j.grad);
        if (spec.k >= 2) s += sigma * sigma * l2(j.hess);
        rep.sup_part = std::max(rep.sup_part, s);
        top.push_back(flatten_order(j, spec.k));
        xs.push_back(x);
    }
    double hq = 0.0;
    for (std::size_t a = 0; a < xs.size(); ++a)
        for (std::size_t b = a + 1; b < xs.size(); ++b) {
            const double d = diff_norm(xs[a], xs[b]);
            if (d <= 0.0) continue;
            hq = std::max(hq, diff_norm(top[a], top[b]) / std::pow(d, spec.alpha));
        }
    rep.holder_part = std::pow(sigma, spec.k + spec.alpha) * hq;
    rep.value = rep.sup_part + rep.holder_part;
    if (check_refinement) {
        NormSpec finer = spec;
        finer.samples = 2 * spec.samples;
        finer.seed = spec.seed + 1;
        const double v2 = norm_annulus_report(f, finer, sigma, false).value;
        rep.refinement_stable = std::abs(v2 - rep.value) <= 0.05 * std::max(rep.value, v2);
    }
    return rep;
}

double norm_annulus(const Field& f, const NormSpec& spec, double sigma) {
    return norm_annulus_report(f, spec, sigma).value;
}

std::vector<double> weighted_levels(const Field& f, const NormSpec& spec) {
    if (spec.levels < 1) throw ParameterError("NormSpec: levels must be at least 1");
    std::vector<double> out;
    double sigma = 0.5 * spec.r;
    for (int l = 0; l < spec.levels; ++l, sigma *= 0.5) {
        if (sigma < spec.floor) break;
        out.push_back(std::pow(sigma, -spec.mu) * norm_annulus(f, spec, sigma));
    }
    return out;
}

double norm_weighted(const Field& f, const NormSpec& spec) {
    const auto lv = weighted_levels(f, spec);
    return lv.empty() ? 0.0 : *std::max_element(lv.begin(), lv.end());
}

double norm_sphere(const Field& f, int k, double alpha, double r, int samples, std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("norm_sphere: alpha must lie in (0,1)");
    if (k < 0 || k > 2) throw ParameterError("norm_sphere: k must lie in [0,2]");
    const int n = f.dimension();
    const auto pattern = sphere_pattern(n, samples, seed);
    std::vector<std::vector<double>> top;
    double sup = 0.0;
    std::vector<double> y(n);
    for (const auto& th : pattern) {
        for (int i = 0; i < n; ++i) y[i] = r * th[i];
        const FieldJet j = f.evaluate(y, k, 1e-5 * r);
        double s = std::abs(j.value);
        std::vector<double> tg, th2;
        if (k >= 1) {
            // tangential gradient r P grad f
            double gn = 0.0;
            for (int i = 0; i < n; ++i) gn += j.grad[i] * th[i];
            tg.resize(n);
            for (int i = 0; i < n; ++i) tg[i] = r * (j.grad[i] - gn * th[i]);
            s += l2(tg);
            if (k >= 2) {
                // covariant Hessian r^2 P H P - r (grad f . theta) P
                std::vector<double> P(n * n), HP(n * n, 0.0);
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) P[a * n + b] = (a == b ? 1.0 : 0.0) - th[a] * th[b];
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        for (int c = 0; c < n; ++c) HP[a * n + b] += j.hess[a * n + c] * P[c * n + b];
                th2.assign(n * n, 0.0);
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) {
                        double v = 0.0;
                        for (int c = 0; c < n; ++c) v += P[a * n + c] * HP[c * n + b];
                        th2[a * n + b] = r * r * v - r * gn * P[a * n + b];
                    }
                s += l2(th2);
            }
        }
        sup = std::max(sup, s);
        top.push_back(k == 0 ? std::vector<double>{j.value} : (k == 1 ? tg : th2));
    }
    double hq = 0.0;
    for (std::size_t a = 0; a < pattern.size(); ++a)
        for (std::size_t b = a + 1; b < pattern.size(); ++b) {
            const double d = diff_norm(pattern[a], pattern[b]);
            if (d <= 0.0) continue;
            hq = std::max(hq, diff_norm(top[a], top[b]) / std::pow(d, alpha));
        }
    return sup + hq;
}

}  // namespace dglue
