#include "dglue/delaunay_family.hpp"

#include "dglue/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dglue {

FamilyParams FamilyParams::from_b(OrbitPtr orbit, double b, std::vector<double> a) {
    if (!orbit) throw ParameterError("FamilyParams::from_b: missing orbit");
    FamilyParams p;
    p.R = neck_radius_from_b(orbit->dimension(), orbit->epsilon(), b);
    p.orbit = std::move(orbit);
    p.a = std::move(a);
    p.b = b;
    return p;
}

double norm(std::span<const double> x) {
    return std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
}

RadialJet u_eps_radial(const DelaunayOrbit& orbit, double r) {
    return u_eps_R(orbit, 1.0, r);
}

double u_eps(const DelaunayOrbit& orbit, std::span<const double> x) {
    const double r = norm(x);
    if (r == 0.0) throw DomainError("u_eps: singular at x = 0");
    return u_eps_R(orbit, 1.0, r).u;
}

RadialJet u_eps_R(const DelaunayOrbit& orbit, double R, double r) {
    if (!(r > 0.0)) throw DomainError("u_eps_R: radius must be positive");
    if (!(R > 0.0)) throw ParameterError("u_eps_R: R must be positive");
    const int n = orbit.n();
    const OrbitJet j = orbit.eval(-std::log(r) + std::log(R));
    const double pre = std::pow(r, 0.5 * (2 - n));
    const double u = pre * j.v;
    const double ru = 0.5 * (2 - n) * u - pre * j.dv;
    const double rru = pre * (0.25 * n * (n - 2) * j.v + (n - 1) * j.dv + j.ddv);
    return {u, ru, rru};
}

RadialJet u_eps_R(const FamilyParams& params, double r) {
    return u_eps_R(*params.orbit, params.R, r);
}

double u_eps_R_a(const FamilyParams& params, std::span<const double> x) {
    const DelaunayOrbit& orbit = *params.orbit;
    const int n = orbit.n();
    if (int(x.size()) != n) throw ParameterError("u_eps_R_a: point has wrong dimension");
    const double r = norm(x);
    if (r == 0.0) throw DomainError("u_eps_R_a: singular at x = 0");
    if (params.a.empty()) return u_eps_R(orbit, params.R, r).u;
    if (int(params.a.size()) != n) throw ParameterError("u_eps_R_a: a has wrong dimension");
    if (norm(params.a) * r >= params.r0)
        throw ParameterError("u_eps_R_a: |a||x| must stay below r0");
    double y2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double yi = x[i] - params.a[i] * r * r;
        y2 += yi * yi;
    }
    const double ly = 0.5 * std::log(y2);
    const double t = -2.0 * std::log(r) + ly + std::log(params.R);
    return std::exp(0.5 * (2 - n) * ly) * orbit.eval(t).v;
}

double neck_radius_from_b(Dimension n, double epsilon, double b) {
    if (!(std::abs(b) <= 0.5)) throw ParameterError("neck offset b must satisfy |b| <= 1/2");
    if (!(epsilon > 0.0 && epsilon < cylinder_value(n)))
        throw ParameterError("epsilon outside the admissible interval");
    return std::pow(2.0 * (1.0 + b) / epsilon, 2.0 / (2 - n));
}

ExpansionReport check_expansion(const DelaunayOrbit& orbit, const std::vector<double>& radii) {
    return check_scaled_expansion(orbit, 1.0, radii);
}

ExpansionReport check_scaled_expansion(const DelaunayOrbit& orbit, double R,
                                    const std::vector<double>& radii) {
    const int n = orbit.n();
    const double eps = orbit.epsilon();
    const double p = orbit.dimension().critical_exponent();
    const double A = 0.5 * eps * std::pow(R, 0.5 * (2 - n));
    const double B = 0.5 * eps * std::pow(R, 0.5 * (n - 2));
    const double scale0 = std::pow(R, 0.5 * (n + 2)) * std::pow(eps, p);
    ExpansionReport rep;
    for (double r : radii) {
        const RadialJet j = u_eps_R(orbit, R, r);
        const double tail = B * std::pow(r, 2 - n);
        const double scale = scale0 * std::pow(r, -n);
        rep.value = std::max(rep.value, std::abs(j.u - A - tail) / scale);
        rep.first = std::max(rep.first, std::abs(j.ru - (2 - n) * tail) / scale);
        rep.second = std::max(rep.second, std::abs(j.rru - (n - 1) * (n - 2) * tail) / scale);
    }
    return rep;
}

double translation_remainder(const FamilyParams& params, std::span<const double> x) {
    const int n = params.orbit->n();
    const double r = norm(x);
    const RadialJet j = u_eps_R(params, r);
    double ax = 0.0;
    for (int i = 0; i < n && !params.a.empty(); ++i) ax += params.a[i] * x[i];
    return std::abs(u_eps_R_a(params, x) - j.u - ((n - 2) * j.u + j.ru) * ax);
}

TranslationReport check_translation(const FamilyParams& params,
                                    const std::vector<std::vector<double>>& points) {
    const int n = params.orbit->n();
    const double a = params.a.empty() ? 0.0 : norm(params.a);
    const double eps = params.orbit->epsilon();
    TranslationReport rep;
    for (const auto& x : points) {
        const double r = norm(x);
        const double rem = translation_remainder(params, x);
        rep.max_remainder = std::max(rep.max_remainder, rem);
        if (a == 0.0) continue;
        rep.near_ratio = std::max(rep.near_ratio, rem / (a * a * std::pow(r, 0.5 * (6 - n))));
        if (r >= params.R)
            rep.far_ratio = std::max(
                rep.far_ratio, rem / (a * a * eps * std::pow(params.R, 0.5 * (2 - n)) * r * r));
    }
    return rep;
}

BracketReport bracketing_constants(const FamilyParams& params,
                                   const std::vector<std::vector<double>>& points) {
    const int n = params.orbit->n();
    const double eps = params.orbit->epsilon();
    BracketReport rep{1e300, 0.0};
    for (const auto& x : points) {
        const double s = std::pow(norm(x), 0.5 * (2 - n));
        const double u = u_eps_R_a(params, x);
        rep.lower = std::min(rep.lower, u / (eps * s));
        rep.upper = std::max(rep.upper, u / s);
    }
    return rep;
}

double potential_difference_constant(const FamilyParams& params,
                                     const std::vector<std::vector<double>>& points) {
    const int n = params.orbit->n();
    const double q = 4.0 / (n - 2);
    const double a = params.a.empty() ? 0.0 : norm(params.a);
    if (a == 0.0) return 0.0;
    double c = 0.0;
    for (const auto& x : points) {
        const double r = norm(x);
        const double d = std::abs(std::pow(u_eps_R_a(params, x), q) -
                                  std::pow(u_eps_R(params, r).u, q));
        c = std::max(c, d * r / a);
    }
    return c;
}

}  // namespace dglue
