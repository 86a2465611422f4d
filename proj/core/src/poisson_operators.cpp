#include "dglue/poisson_operators.hpp"

#include "dglue/errors.hpp"

#include <cmath>

namespace dglue {

namespace {

void require_min_degree(const BoundaryData& data, int lowest, const char* who) {
    for (const auto& [key, c] : data.coefficients)
        if (key.degree < lowest && c != 0.0)
            throw ContractViolation(std::string(who) + ": data has a degree-" +
                                    std::to_string(key.degree) + " component");
}

}  // namespace

int BoundaryData::min_degree() const {
    int m = -1;
    for (const auto& [key, c] : coefficients)
        if (c != 0.0 && (m < 0 || key.degree < m)) m = key.degree;
    return m;
}

double BoundaryData::max_abs() const {
    double m = 0.0;
    for (const auto& [key, c] : coefficients) m = std::max(m, std::abs(c));
    return m;
}

double BoundaryData::operator()(std::span<const double> theta) const {
    double s = 0.0;
    for (const auto& [key, c] : coefficients) s += c * basis->mode(key)(theta);
    return s;
}

Field BoundaryData::field() const {
    const int n = dimension();
    Polynomial p(n);
    for (const auto& [key, c] : coefficients)
        p += (c / std::pow(r, key.degree)) * basis->mode(key).poly;
    return Field::from_polynomial(p);
}

BoundaryData& BoundaryData::operator+=(const BoundaryData& other) {
    if (!basis) basis = other.basis;
    for (const auto& [key, c] : other.coefficients) coefficients[key] += c;
    return *this;
}

BoundaryData& BoundaryData::operator*=(double s) {
    for (auto& [key, c] : coefficients) c *= s;
    return *this;
}

BoundaryData BoundaryData::from_expansion(const ModeExpansion& e, BasisPtr basis, std::size_t k) {
    BoundaryData d;
    d.basis = std::move(basis);
    d.r = e.radii.at(k);
    for (const auto& [key, prof] : e.profiles) d.coefficients[key] = prof.at(k);
    return d;
}

double interior_extend(const BoundaryData& data, std::span<const double> x) {
    require_min_degree(data, 2, "interior_extend");
    double rx = 0.0;
    for (double xi : x) rx += xi * xi;
    rx = std::sqrt(rx);
    if (rx > data.r * (1.0 + 1e-12)) throw ParameterError("interior_extend: |x| exceeds r");
    double s = 0.0;
    for (const auto& [key, c] : data.coefficients)
        s += c * data.basis->mode(key).poly(x) / std::pow(data.r, key.degree);
    return s;
}

double exterior_extend(const BoundaryData& data, std::span<const double> x) {
    require_min_degree(data, 1, "exterior_extend");
    const int n = data.dimension();
    double rx = 0.0;
    for (double xi : x) rx += xi * xi;
    rx = std::sqrt(rx);
    if (rx < data.r * (1.0 - 1e-12)) throw ParameterError("exterior_extend: |x| below r");
    double s = 0.0;
    for (const auto& [key, c] : data.coefficients) {
        const int i = key.degree;
        // (|x|/r)^(2-n-i) e(x/|x|) = r^(n-2+i) |x|^(2-n-2i) Y(x)
        s += c * std::pow(data.r, n - 2 + i) * std::pow(rx, 2 - n - 2 * i) *
             data.basis->mode(key).poly(x);
    }
    return s;
}

Field interior_field(const BoundaryData& data) {
    require_min_degree(data, 2, "interior_field");
    return data.field();
}

Field exterior_field(const BoundaryData& data) {
    require_min_degree(data, 1, "exterior_field");
    const int n = data.dimension();
    Field sum;
    bool first = true;
    for (const auto& [key, c] : data.coefficients) {
        const int i = key.degree;
        const double scale = c * std::pow(data.r, n - 2 + i);
        const double e = 2.0 - n - 2.0 * i;
        Field f = Field::radial_harmonic(
            n,
            [scale, e, i](double rho) {
                // w(rho) rho^(-i) = scale rho^e, so w = scale rho^(e + i)
                const double p = e + i;
                return std::array<double, 3>{scale * std::pow(rho, p), scale * p * std::pow(rho, p - 1),
                                             scale * p * (p - 1) * std::pow(rho, p - 2)};
            },
            data.basis->mode(key).poly);
        sum = first ? f : sum + f;
        first = false;
    }
    if (first) return Field(n, Field::Value([](std::span<const double>) { return 0.0; }));
    return sum;
}

double z_multiplier(int n, int degree) { return 2.0 * degree + n - 2.0; }

BoundaryData z_apply(const BoundaryData& data) {
    require_min_degree(data, 2, "z_apply");
    BoundaryData out = data;
    for (auto& [key, c] : out.coefficients) c *= z_multiplier(data.dimension(), key.degree);
    return out;
}

BoundaryData z_inverse(const BoundaryData& data) {
    require_min_degree(data, 2, "z_inverse");
    BoundaryData out = data;
    for (auto& [key, c] : out.coefficients) c /= z_multiplier(data.dimension(), key.degree);
    return out;
}

}  // namespace dglue
