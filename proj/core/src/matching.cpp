#include "dglue/matching.hpp"

#include "dglue/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dglue {

MatchingState MatchingState::initial(Dimension n, double epsilon, const ParameterBudget& budget,
                                     BasisPtr basis) {
    MatchingState s;
    s.n = n;
    s.epsilon = epsilon;
    s.budget = budget;
    s.b = 0.0;
    s.lambda = 0.25 * epsilon * epsilon;
    s.a.assign(n, 0.0);
    s.omega.assign(n, 0.0);
    s.theta.basis = basis ? basis : std::make_shared<const HarmonicBasis>(n, 4);
    s.theta.r = 1.0;
    return s;
}

double MatchingState::magnitude() const { return std::pow(r_eps(), 2.0 + n.d() - 0.5 * n); }
double MatchingState::lambda_bound() const { return std::pow(r_eps(), 0.5 * n.d() - 1.0 + 0.75 * n); }
double MatchingState::a_bound() const { return std::pow(r_eps(), 0.5 * (n.d() - 0.5 * n)); }
double MatchingState::theta_bound() const {
    return std::pow(r_eps(), 2.0 + n.d() - 0.5 * n - budget.delta1);
}

namespace {

void gate_scalar(const char* block, ScalarData v, const MatchingState& ref) {
    const double lim = DataFunctionals::gate * ref.magnitude();
    if (!std::isfinite(v.first) || !std::isfinite(v.second) || std::abs(v.first) > lim ||
        std::abs(v.second) > lim) {
        std::ostringstream os;
        os << "data functional " << block << " returned (" << v.first << ", " << v.second
           << "), above the admissible magnitude " << lim;
        throw ParameterError(os.str());
    }
}

}  // namespace

DataFunctionals::DataFunctionals(MatchingState reference) : ref_(std::move(reference)) {
    register_h0([](const MatchingState&) { return ScalarData{0.0, 0.0}; });
    register_hi([](const MatchingState&, int) { return ScalarData{0.0, 0.0}; });
    register_s([](const MatchingState& s) { return BoundaryData{s.theta.basis, 1.0, {}}; });
}

void DataFunctionals::register_h0(H0Fn f) {
    if (!f) throw ParameterError("data functional H0: empty callback");
    gate_scalar("H0", f(ref_), ref_);
    h0_ = std::move(f);
}

void DataFunctionals::register_hi(HiFn f) {
    if (!f) throw ParameterError("data functional Hi: empty callback");
    for (int i = 0; i < ref_.n; ++i) gate_scalar("Hi", f(ref_, i), ref_);
    hi_ = std::move(f);
}

void DataFunctionals::register_s(SFn f) {
    if (!f) throw ParameterError("data functional S: empty callback");
    const BoundaryData s = f(ref_);
    const int md = s.min_degree();
    if (md >= 0 && md < 2) throw ParameterError("data functional S: must return high-mode data");
    if (s.max_abs() > gate * ref_.magnitude()) throw ParameterError("data functional S: above the admissible magnitude");
    s_ = std::move(f);
}

ScalarData DataFunctionals::h0(const MatchingState& s) const { return h0_(s); }
ScalarData DataFunctionals::hi(const MatchingState& s, int i) const { return hi_(s, i); }
BoundaryData DataFunctionals::source(const MatchingState& s) const { return s_(s); }

DataFunctionals DataFunctionals::zero(const MatchingState& reference) { return DataFunctionals(reference); }

DataFunctionals DataFunctionals::constant(const MatchingState& reference, ScalarData h0, ScalarData hi,
                                          std::map<ModeKey, double> s_coefficients) {
    DataFunctionals f(reference);
    f.register_h0([h0](const MatchingState&) { return h0; });
    f.register_hi([hi](const MatchingState&, int) { return hi; });
    f.register_s([s_coefficients](const MatchingState& s) { return BoundaryData{s.theta.basis, 1.0, s_coefficients}; });
    return f;
}

DataFunctionals DataFunctionals::synthetic(const MatchingState& reference, double scale) {
    DataFunctionals f(reference);
    const double m = scale * reference.magnitude();
    const double lam = reference.lambda_bound();
    const double om = reference.theta_bound();
    const double lip = std::pow(reference.r_eps(), 0.25);
    f.register_h0([m, lam](const MatchingState& s) {
        double a2 = 0.0;
        for (double ai : s.a) a2 += ai * ai;
        return ScalarData{m * (1.0 + 0.1 * std::sin(s.b) + 0.1 * std::tanh(s.lambda / lam) + 0.05 * std::tanh(a2)),
                          m * (0.5 + 0.1 * std::cos(s.b))};
    });
    f.register_hi([m, om](const MatchingState& s, int i) {
        const double sign = i % 2 == 0 ? 1.0 : -1.0;
        return ScalarData{sign * m * (0.4 + 0.1 * std::sin(s.a[i]) + 0.05 * std::tanh(s.b)),
                          sign * m * (0.2 + 0.05 * std::cos(s.omega[i] / om))};
    });
    f.register_s([m, lip](const MatchingState& s) {
        BoundaryData out{s.theta.basis, 1.0, {}};
        const ModeKey k20{2, 0};
        const auto it = s.theta.coefficients.find(k20);
        const double t = it == s.theta.coefficients.end() ? 0.0 : it->second;
        out.coefficients[k20] = m * (0.5 + 0.1 * std::tanh(s.b)) + lip * t;
        if (s.theta.basis->max_degree() >= 3) out.coefficients[{3, 0}] = 0.2 * m;
        return out;
    });
    return f;
}

DataFunctionals DataFunctionals::faithful(OrbitPtr orbit, const MatchingState& reference, double scale,
                                          PicardOptions options) {
    if (!orbit) throw ParameterError("faithful preset: missing orbit");
    DataFunctionals f = synthetic(reference, scale);
    const DataFunctionals ext = f;
    options.compute_norms = false;
    const double r = reference.r_eps();
    // Low modes of the interior correction on |x| = r_eps, recomputed when (b, a, theta) change.
    struct Cache {
        double b = std::numeric_limits<double>::quiet_NaN();
        std::vector<double> a;
        std::map<ModeKey, double> theta;
        std::vector<ScalarData> low;  // constant mode, then degree-1 modes
    };
    auto cache = std::make_shared<Cache>();
    auto interior = [orbit, options, r, cache](const MatchingState& s) -> const std::vector<ScalarData>& {
        if (s.b == cache->b && s.a == cache->a && s.theta.coefficients == cache->theta) return cache->low;
        const double R = neck_radius_from_b(s.n, s.epsilon, s.b);
        PicardOptions o = options;
        for (const auto& [key, c] : s.theta.coefficients)
            if (c != 0.0) o.max_degree = std::max(o.max_degree, key.degree);
        BoundaryData phi = s.theta;
        phi.r = r;
        std::vector<double> a = s.a;
        if (std::all_of(a.begin(), a.end(), [](double x) { return x == 0.0; })) a.clear();
        const PicardResult res = picard_interior(orbit, R, a, phi, s.budget, o);
        std::vector<ScalarData> low;
        const double e0 = 1.0 / std::sqrt(sphere_area(s.n));
        auto at = [&](ModeKey key, double unit) {
            const auto it = res.v.find(key);
            if (it == res.v.end()) return ScalarData{0.0, 0.0};
            const auto jet = it->second.jet(r);
            return ScalarData{unit * jet[0], unit * r * jet[1]};
        };
        low.push_back(at({0, 0}, e0));
        for (int i = 0; i < s.n; ++i) low.push_back(at({1, i}, 1.0));
        cache->b = s.b;
        cache->a = s.a;
        cache->theta = s.theta.coefficients;
        cache->low = std::move(low);
        return cache->low;
    };
    f.register_h0([ext, interior](const MatchingState& s) {
        const ScalarData e = ext.h0(s);
        const ScalarData v = interior(s)[0];
        return ScalarData{e.first + v.first, e.second + v.second};
    });
    f.register_hi([ext, interior](const MatchingState& s, int i) {
        const ScalarData e = ext.hi(s, i);
        const ScalarData v = interior(s)[1 + i];
        return ScalarData{e.first + v.first, e.second + v.second};
    });
    return f;
}

std::pair<double, double> f_g_coefficients(const DelaunayOrbit& orbit, double R, double r) {
    if (!(R > 0.0) || !(r > R)) throw ParameterError("f_g_coefficients: need r > R > 0");
    const int n = orbit.n();
    const RadialJet j = u_eps_R(orbit, R, r);
    return {(n - 2) * j.u + j.ru, (n - 2) * j.u + n * j.ru + j.rru};
}

namespace {

using Vec = Eigen::VectorXd;

struct Problem {
    std::string block;
    std::function<Vec(const Vec&)> map;       // fixed-point map
    std::function<Vec(const Vec&)> residual;  // equations, zero at the solution
    std::function<void(const Vec&)> domain;   // throws SolverError on escape
};

BlockResult solve_block(Vec& x, const Problem& p, const MatchOptions& o) {
    BlockResult out;
    double prev = std::numeric_limits<double>::infinity();
    int stall = 0;
    for (int it = 1; it <= o.max_iter; ++it) {
        const Vec y = p.map(x);
        if (!y.allFinite()) throw SolverError(p.block, "non-finite iterate");
        p.domain(y);
        const Vec xn = x + o.damping * (y - x);
        const double step = (xn - x).lpNorm<Eigen::Infinity>();
        x = xn;
        out.iterations = it;
        if (step <= 0.1 * o.tol) {
            out.residual = p.residual(x).lpNorm<Eigen::Infinity>();
            return out;
        }
        stall = step > 0.9 * prev ? stall + 1 : 0;
        prev = step;
        if (stall >= o.stall_window) break;
    }
    // Newton on the residual with a difference Jacobian.
    out.newton = true;
    const int m = int(x.size());
    for (int it = 1; it <= o.max_iter; ++it) {
        const Vec E = p.residual(x);
        Eigen::MatrixXd Jm(m, m);
        for (int j = 0; j < m; ++j) {
            const double h = 1e-7 * std::max(1.0, std::abs(x[j]));
            Vec xp = x, xm = x;
            xp[j] += h;
            xm[j] -= h;
            Jm.col(j) = (p.residual(xp) - p.residual(xm)) / (2.0 * h);
        }
        const Vec dx = Jm.fullPivLu().solve(-E);
        if (!dx.allFinite()) throw SolverError(p.block, "singular Newton step");
        x += dx;
        p.domain(x);
        out.iterations += 1;
        if (dx.lpNorm<Eigen::Infinity>() <= 0.1 * o.tol) {
            out.residual = p.residual(x).lpNorm<Eigen::Infinity>();
            return out;
        }
    }
    throw SolverError(p.block, "no convergence within the iteration limit");
}

[[noreturn]] void domain_violation(const std::string& block, const std::string& what) {
    throw SolverError(block, "domain violation: " + what);
}

std::vector<std::size_t> high_indices(const HarmonicBasis& basis) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < basis.size(); ++j)
        if (basis[j].degree >= 2) idx.push_back(j);
    return idx;
}

}  // namespace

std::pair<double, double> b_lambda_residual(const MatchingState& s, const DataFunctionals& f) {
    const int n = s.n;
    const double r = s.r_eps();
    const auto [h, rh] = f.h0(s);
    const double gap = (0.25 * s.epsilon * s.epsilon / (1.0 + s.b) - s.lambda) * std::pow(r, 2.0 - n);
    return {s.b + gap - h, -(n - 2) * gap - rh};
}

double a_omega_residual(const MatchingState& s, const DataFunctionals& f, double F, double G) {
    const double r = s.r_eps();
    double worst = 0.0;
    for (int i = 0; i < s.n; ++i) {
        const auto [h, rh] = f.hi(s, i);
        worst = std::max(worst, std::abs(F * r * s.a[i] - s.omega[i] - h));
        worst = std::max(worst, std::abs(G * r * s.a[i] + (s.n - 1) * s.omega[i] - rh));
    }
    return worst;
}

double high_mode_residual(const MatchingState& s, const DataFunctionals& f) {
    const BoundaryData src = f.source(s);
    const BoundaryData z = z_apply(s.theta);
    double worst = 0.0;
    for (std::size_t j : high_indices(*s.theta.basis)) {
        const ModeKey key = (*s.theta.basis)[j].key();
        auto get = [&](const BoundaryData& d) {
            const auto it = d.coefficients.find(key);
            return it == d.coefficients.end() ? 0.0 : it->second;
        };
        worst = std::max(worst, std::abs(get(z) + get(src)));
    }
    return worst;
}

BlockResult solve_b_lambda(MatchingState& state, const DataFunctionals& f, const MatchOptions& o) {
    const int n = state.n;
    const double r = state.r_eps();
    const double eps2 = state.epsilon * state.epsilon;
    auto with = [&](const Vec& x) {
        MatchingState s = state;
        s.b = x[0];
        s.lambda = x[1];
        return s;
    };
    Problem p;
    p.block = "b-lambda";
    p.map = [&](const Vec& x) {
        const MatchingState s = with(x);
        const auto [h, rh] = f.h0(s);
        Vec y(2);
        y[0] = h + rh / (n - 2);
        y[1] = 0.25 * eps2 / (1.0 + y[0]) + std::pow(r, n - 2.0) * rh / (n - 2);
        return y;
    };
    p.residual = [&](const Vec& x) {
        const auto [e1, e2] = b_lambda_residual(with(x), f);
        Vec e(2);
        e << e1, e2;
        return e;
    };
    p.domain = [&](const Vec& x) {
        if (std::abs(x[0]) > state.b_bound()) {
            std::ostringstream os;
            os << "|b| = " << std::abs(x[0]) << " > 1/2";
            domain_violation(p.block, os.str());
        }
        if (std::abs(x[1]) > state.lambda_bound()) {
            std::ostringstream os;
            os << "|lambda| = " << std::abs(x[1]) << " > r_eps^(d/2-1+3n/4) = " << state.lambda_bound();
            domain_violation(p.block, os.str());
        }
    };
    Vec x(2);
    x << state.b, state.lambda;
    const BlockResult res = solve_block(x, p, o);
    state.b = x[0];
    state.lambda = x[1];
    return res;
}

std::vector<double> degree_one_norms(const HarmonicBasis& basis, double alpha) {
    std::vector<double> k;
    const auto [lo, hi] = basis.degree_range(1);
    for (std::size_t j = lo; j < hi; ++j)
        k.push_back(norm_sphere(Field::from_polynomial(basis[j].poly), 2, alpha, 1.0));
    return k;
}

BlockResult solve_a_omega(MatchingState& state, const DataFunctionals& f, double F, double G,
                          const MatchOptions& o) {
    const int n = state.n;
    const double r = state.r_eps();
    const double den = G + (n - 1) * F;
    if (!(std::abs(den) > 1e-12)) throw SolverError("a-omega", "G + (n-1) F vanishes");
    const std::vector<double> k = degree_one_norms(*state.theta.basis, state.budget.alpha);
    const double a2_bound = std::pow(r, state.n.d() - 0.5 * n) / n;
    const double om_bound = state.theta_bound() / n;
    auto with = [&](const Vec& x) {
        MatchingState s = state;
        for (int i = 0; i < n; ++i) {
            s.a[i] = x[2 * i];
            s.omega[i] = x[2 * i + 1];
        }
        return s;
    };
    Problem p;
    p.block = "a-omega";
    p.map = [&](const Vec& x) {
        const MatchingState s = with(x);
        Vec y(2 * n);
        for (int i = 0; i < n; ++i) {
            const auto [h, rh] = f.hi(s, i);
            const double X = rh + (n - 1) * h;
            y[2 * i] = X / (den * r);
            y[2 * i + 1] = F * X / den - h;
        }
        return y;
    };
    p.residual = [&](const Vec& x) {
        const MatchingState s = with(x);
        Vec e(2 * n);
        for (int i = 0; i < n; ++i) {
            const auto [h, rh] = f.hi(s, i);
            e[2 * i] = F * r * s.a[i] - s.omega[i] - h;
            e[2 * i + 1] = G * r * s.a[i] + (n - 1) * s.omega[i] - rh;
        }
        return e;
    };
    p.domain = [&](const Vec& x) {
        for (int i = 0; i < n; ++i) {
            if (x[2 * i] * x[2 * i] > a2_bound) {
                std::ostringstream os;
                os << "|a_" << i << "|^2 = " << x[2 * i] * x[2 * i] << " > r_eps^(d-n/2)/n = " << a2_bound;
                domain_violation(p.block, os.str());
            }
            if (std::abs(x[2 * i + 1]) * k[i] > om_bound) {
                std::ostringstream os;
                os << "|omega_" << i << "| k_i = " << std::abs(x[2 * i + 1]) * k[i]
                   << " > r_eps^(2+d-n/2-delta1)/n = " << om_bound;
                domain_violation(p.block, os.str());
            }
        }
    };
    Vec x(2 * n);
    for (int i = 0; i < n; ++i) {
        x[2 * i] = state.a[i];
        x[2 * i + 1] = state.omega[i];
    }
    const BlockResult res = solve_block(x, p, o);
    state = with(x);
    return res;
}

BlockResult solve_high_mode(MatchingState& state, const DataFunctionals& f, const MatchOptions& o) {
    const auto& basis = *state.theta.basis;
    const int n = state.n;
    const std::vector<std::size_t> idx = high_indices(basis);
    auto data_of = [&](const Vec& x) {
        BoundaryData d{state.theta.basis, 1.0, {}};
        for (std::size_t q = 0; q < idx.size(); ++q)
            if (x[q] != 0.0) d.coefficients[basis[idx[q]].key()] = x[q];
        return d;
    };
    auto with = [&](const Vec& x) {
        MatchingState s = state;
        s.theta = data_of(x);
        return s;
    };
    auto coeffs = [&](const BoundaryData& d) {
        Vec v = Vec::Zero(idx.size());
        for (const auto& [key, c] : d.coefficients) {
            if (key.degree < 2) throw SolverError("high-mode", "source has low-mode content");
            if (key.degree > basis.max_degree()) throw SolverError("high-mode", "source exceeds the basis degree");
            const std::size_t j = basis.flat_index(key);
            v[std::find(idx.begin(), idx.end(), j) - idx.begin()] = c;
        }
        return v;
    };
    Vec zmul(idx.size());
    for (std::size_t q = 0; q < idx.size(); ++q) zmul[q] = z_multiplier(n, basis[idx[q]].degree);
    Problem p;
    p.block = "high-mode";
    p.map = [&](const Vec& x) -> Vec { return -coeffs(f.source(with(x))).cwiseQuotient(zmul); };
    p.residual = [&](const Vec& x) -> Vec { return zmul.cwiseProduct(x) + coeffs(f.source(with(x))); };
    p.domain = [&](const Vec& x) {
        if (x.lpNorm<Eigen::Infinity>() == 0.0) return;
        const double nm = norm_sphere(data_of(x).field(), 2, state.budget.alpha, 1.0);
        if (nm > state.theta_bound()) {
            std::ostringstream os;
            os << "||theta||_(2,alpha) = " << nm << " > r_eps^(2+d-n/2-delta1) = " << state.theta_bound();
            domain_violation(p.block, os.str());
        }
    };
    Vec x = coeffs(state.theta);
    const BlockResult res = solve_block(x, p, o);
    state.theta = data_of(x);
    return res;
}

MatchResult assemble_match(OrbitPtr orbit, const ParameterBudget& budget, const DataFunctionals& f,
                           const MatchOptions& o) {
    if (!orbit) throw ParameterError("assemble_match: missing orbit");
    const Dimension n = orbit->dimension();
    budget.validate(n);
    const MatchingState& ref = f.reference();
    if (ref.n != n || ref.epsilon != orbit->epsilon())
        throw ParameterError("assemble_match: data functionals registered for a different (n, eps)");
    MatchResult out;
    out.state = MatchingState::initial(n, orbit->epsilon(), budget, ref.theta.basis);
    MatchingState& s = out.state;
    const double r = s.r_eps();
    auto snapshot = [](const MatchingState& m) {
        std::vector<double> v{m.b, m.lambda};
        v.insert(v.end(), m.a.begin(), m.a.end());
        v.insert(v.end(), m.omega.begin(), m.omega.end());
        for (const auto& [k, c] : m.theta.coefficients) v.push_back(c);
        return v;
    };
    for (int it = 1; it <= o.max_outer; ++it) {
        const auto before = snapshot(s);
        const auto theta_before = s.theta.coefficients;
        solve_high_mode(s, f, o);
        solve_b_lambda(s, f, o);
        const double R = neck_radius_from_b(n, s.epsilon, s.b);
        const auto [F, G] = f_g_coefficients(*orbit, R, r);
        out.F = F;
        out.G = G;
        solve_a_omega(s, f, F, G, o);

        const auto [e1, e2] = b_lambda_residual(s, f);
        out.residual = std::max({std::abs(e1), std::abs(e2), a_omega_residual(s, f, F, G), high_mode_residual(s, f)});
        MatchRow row;
        row.iteration = it;
        row.b = s.b;
        row.lambda = s.lambda;
        for (int i = 0; i < n; ++i) {
            row.a_norm += s.a[i] * s.a[i];
            row.omega_norm += s.omega[i] * s.omega[i];
        }
        row.a_norm = std::sqrt(row.a_norm);
        row.omega_norm = std::sqrt(row.omega_norm);
        row.theta_norm = s.theta.coefficients.empty() ? 0.0 : norm_sphere(s.theta.field(), 2, budget.alpha, 1.0);
        row.residual = out.residual;
        out.history.push_back(row);

        const auto after = snapshot(s);
        double change = 0.0;
        if (after.size() != before.size() || s.theta.coefficients.size() != theta_before.size()) {
            change = std::numeric_limits<double>::infinity();
        } else {
            for (std::size_t q = 0; q < after.size(); ++q) change = std::max(change, std::abs(after[q] - before[q]));
        }
        if (change <= o.tol && out.residual <= o.tol) {
            out.converged = true;
            break;
        }
    }
    if (!out.converged) {
        std::ostringstream os;
        os << "no joint convergence after " << o.max_outer << " outer iterations, residual " << out.residual;
        throw SolverError("assemble", os.str());
    }
    return out;
}

}  // namespace dglue
