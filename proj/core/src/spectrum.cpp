#include "dglue/spectrum.hpp"

#include "dglue/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <sstream>

namespace dglue {

void SpectrumSpec::validate(double tol) const {
    if (factors.empty()) throw ParameterError("spectrum: no factors");
    int dim = 0;
    double scal = 0.0;
    for (const auto& f : factors) {
        if (f.m < 1) throw ParameterError("spectrum: factor dimension must be positive");
        if (!(f.k > 0.0) || !std::isfinite(f.k)) throw ParameterError("spectrum: curvatures must be positive");
        dim += f.m;
        scal += f.m * (f.m - 1) * f.k;
    }
    if (dim != n) throw ParameterError("spectrum: factor dimensions do not add up to n");
    const double target = n * (n - 1.0);
    if (std::abs(scal - target) > tol * std::max(1.0, target)) {
        std::ostringstream os;
        os << "spectrum: scalar curvature " << scal << " differs from n(n-1) = " << target;
        throw ParameterError(os.str());
    }
}

SpectrumSpec SpectrumSpec::s2xs2(double k1) { return {{{2, k1}, {2, 6.0 - k1}}, 4}; }

SpectrumSpec SpectrumSpec::s2xs3(double k3) { return {{{2, k3}, {3, (10.0 - k3) / 3.0}}, 5}; }

namespace {

double factor_eigenvalue(const SphereFactor& f, int i) { return i * (i + f.m - 1.0) * f.k; }

// All tuples with every component <= imax.
std::vector<Eigenpair> enumerate(const SpectrumSpec& spec, int imax) {
    std::vector<Eigenpair> out;
    IndexTuple idx(spec.factors.size(), 0);
    std::function<void(std::size_t, double)> rec = [&](std::size_t f, double acc) {
        if (f == spec.factors.size()) {
            out.push_back({acc, idx});
            return;
        }
        for (int i = 0; i <= imax; ++i) {
            idx[f] = i;
            rec(f + 1, acc + factor_eigenvalue(spec.factors[f], i));
        }
    };
    rec(0, 0.0);
    std::sort(out.begin(), out.end(), [](const Eigenpair& a, const Eigenpair& b) {
        return a.value != b.value ? a.value < b.value : a.index < b.index;
    });
    return out;
}

// Smallest eigenvalue reachable by a tuple with some component above imax.
double escape_bound(const SpectrumSpec& spec, int imax) {
    double b = INFINITY;
    for (const auto& f : spec.factors) b = std::min(b, factor_eigenvalue(f, imax + 1));
    return b;
}

void check_positive(const SpectrumSpec& spec) {
    for (const auto& f : spec.factors)
        if (!(f.k > 0.0) || f.m < 1) throw ParameterError("spectrum: factors need m >= 1 and k > 0");
}

}  // namespace

std::vector<Eigenpair> laplace_spectrum(const SpectrumSpec& spec, int count) {
    if (count < 1) throw ParameterError("laplace_spectrum: count must be >= 1");
    check_positive(spec);
    for (int imax = 1;; imax *= 2) {
        auto all = enumerate(spec, imax);
        if (int(all.size()) >= count && all[count - 1].value < escape_bound(spec, imax)) {
            all.resize(count);
            return all;
        }
    }
}

std::vector<Eigenpair> linearized_spectrum(const SpectrumSpec& spec, int count) {
    spec.validate();
    auto s = laplace_spectrum(spec, count);
    for (auto& e : s) e.value = spec.n - e.value;
    return s;
}

DegeneracyReport is_nondegenerate(const SpectrumSpec& spec, double tol) {
    if (tol < 0.0) throw ParameterError("is_nondegenerate: tol must be >= 0");
    spec.validate();
    // Modes with mu > 2n are at distance > n from the kernel; the constant mode sits at distance n.
    int imax = 1;
    while (escape_bound(spec, imax) <= 2.0 * spec.n) ++imax;
    DegeneracyReport rep;
    rep.gap = INFINITY;
    for (const auto& e : enumerate(spec, imax)) {
        const double dist = std::abs(spec.n - e.value);
        rep.gap = std::min(rep.gap, dist);
        if (dist <= tol) rep.kernel.push_back(e.index);
    }
    rep.nondegenerate = rep.kernel.empty();
    return rep;
}

DegenerateSet degenerate_curvature_set(const std::string& family, int i_max) {
    if (i_max < 1) throw ParameterError("degenerate_curvature_set: i_max must be >= 1");
    std::string f = family;
    std::transform(f.begin(), f.end(), f.begin(), [](unsigned char ch) { return char(std::tolower(ch)); });
    SpectrumSpec probe;
    if (f == "s2xs2") {
        probe = SpectrumSpec::s2xs2(3.0);
    } else if (f == "s2xs3") {
        probe = SpectrumSpec::s2xs3(2.0);
    } else {
        throw ParameterError("degenerate_curvature_set: unknown family '" + family + "'");
    }
    DegenerateSet out;
    out.family = f;
    // Single-factor mode i of S^m(k) lies in the kernel of Delta + n iff n = i (i + m - 1) k.
    const SphereFactor a = probe.factors[0], b = probe.factors[1];
    for (int i = 1; i <= i_max; ++i) {
        out.first.push_back(probe.n / (i * (i + a.m - 1.0)));
        out.second.push_back(probe.n / (i * (i + b.m - 1.0)));
    }
    out.derived_constant = {double(probe.n), double(probe.n)};
    out.quoted_constant = {4.0, 4.0};
    if (out.derived_constant != out.quoted_constant) {
        std::ostringstream os;
        os << "kernel condition of Delta + " << probe.n << " gives numerators (" << out.derived_constant.first
           << ", " << out.derived_constant.second << "); the quoted criterion uses (" << out.quoted_constant.first
           << ", " << out.quoted_constant.second << ")";
        out.note = os.str();
    }
    return out;
}

}  // namespace dglue
