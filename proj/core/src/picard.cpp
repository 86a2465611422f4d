#include "dglue/errors.hpp"
#include "dglue/linearized_solver.hpp"
#include "dglue/sphere_quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dglue {

ModeExpansion PicardResult::expansion() const {
    ModeExpansion e;
    e.n = basis ? basis->dimension() : 0;
    e.radii.resize(grid.size());
    for (int k = 0; k < grid.size(); ++k) e.radii[k] = grid.rho(k);
    for (const auto& [key, prof] : v) e.profiles[key] = prof.values();
    return e;
}

namespace {

using Mat = Eigen::MatrixXd;

// Everything sampled on the polar grid: radial nodes x sphere points.
struct PolarModel {
    Dimension n;
    const DelaunayOrbit& orbit;
    double R;
    LogGrid grid;
    BasisPtr basis;
    std::vector<int> degree;  // per flat mode index
    Mat Y;                    // J x M
    Mat WY;                   // J x M, quadrature weights folded in
    Eigen::VectorXd u;        // radial u at nodes
    Eigen::VectorXd pot;      // radial potential at nodes
    Mat Ua;                   // N1 x M, translated solution (empty when a = 0)
    Mat potA;                 // N1 x M

    int J() const { return int(Y.rows()); }
    int nodes() const { return grid.size(); }
    bool translated() const { return Ua.size() > 0; }

    // Mode coefficients (nodes x J) to polar values (nodes x M) and back.
    Mat synth(const Mat& W) const { return W * Y; }
    Mat project(const Mat& F) const { return F * WY.transpose(); }

    Mat solve(const Mat& F) const {
        Mat W(nodes(), J());
        std::vector<double> f(nodes());
        for (int j = 0; j < J(); ++j) {
            for (int k = 0; k < nodes(); ++k) f[k] = F(k, j);
            const RadialProfile p = solve_mode_nodes(orbit, R, degree[j], grid, f);
            for (int k = 0; k < nodes(); ++k) W(k, j) = p.values()[k];
        }
        return W;
    }
};

// rho^(-mu) sqrt(sum_j w_j^2), max over nodes.
double node_norm(const Mat& W, const LogGrid& grid, double mu) {
    double m = 0.0;
    for (int k = 0; k < grid.size(); ++k) m = std::max(m, std::pow(grid.rho(k), -mu) * W.row(k).norm());
    return m;
}

RadialProfile profile_of(const LogGrid& grid, const Mat& W, int j) {
    std::vector<double> w(grid.size());
    for (int k = 0; k < grid.size(); ++k) w[k] = W(k, j);
    return RadialProfile::from_samples(grid, std::move(w));
}

}  // namespace

PicardResult picard_interior(OrbitPtr orbit_ptr, double R, const std::vector<double>& a,
                             const BoundaryData& phi, const ParameterBudget& budget,
                             const PicardOptions& options) {
    if (!orbit_ptr) throw ParameterError("picard_interior: missing orbit");
    const DelaunayOrbit& orbit = *orbit_ptr;
    const Dimension n = orbit.dimension();
    budget.validate(n);
    if (!(R > 0.0)) throw ParameterError("picard_interior: R must be positive");
    if (!phi.basis || phi.dimension() != n) throw ParameterError("picard_interior: boundary data dimension mismatch");
    if (options.max_degree < 2 || options.max_degree > 6) throw ParameterError("picard_interior: max_degree must lie in [2, 6]");
    const int md = phi.min_degree();
    if (md >= 0 && md < 2) throw ParameterError("picard_interior: boundary data must be high-mode (degree >= 2)");
    for (const auto& [key, c] : phi.coefficients)
        if (c != 0.0 && key.degree > options.max_degree)
            throw ParameterError("picard_interior: boundary data exceeds the truncation degree");

    const double eps = orbit.epsilon();
    const double d = n.d();
    const double r = budget.r_eps(eps);
    const double mu = budget.mu;
    const double c = 0.25 * n * (n - 2);
    const double p = n.critical_exponent();

    PicardResult res;
    res.r_eps = r;
    res.phi_bound = budget.kappa * std::pow(r, 2.0 + d - 0.5 * n - budget.delta1);
    BoundaryData data = phi;
    data.r = r;
    res.phi_norm = norm_sphere(data.field(), 2, budget.alpha, r);
    if (res.phi_norm > res.phi_bound) {
        std::ostringstream os;
        os << "picard_interior: boundary data norm " << res.phi_norm << " exceeds kappa r_eps^(2+d-n/2-delta1) = "
           << res.phi_bound;
        throw ParameterError(os.str());
    }

    double anorm = 0.0;
    for (double ai : a) anorm += ai * ai;
    anorm = std::sqrt(anorm);
    if (!a.empty() && int(a.size()) != n) throw ParameterError("picard_interior: a must have n components");
    FamilyParams fp;
    fp.orbit = orbit_ptr;
    fp.R = R;
    fp.a = a;
    if (anorm * r >= fp.r0)
        throw ParameterError("picard_interior: |a| r_eps outside the translation budget");

    const int L = options.max_degree;
    auto basis = std::make_shared<const HarmonicBasis>(n, L);
    res.basis = basis;
    res.grid = bvp_grid(orbit, r, options.bvp);
    const int order = options.quadrature_order > 0 ? options.quadrature_order : 2 * L + 1;
    const SphereQuadrature quad = SphereQuadrature::product_rule(n, order);

    PolarModel pm{n, orbit, R, res.grid, basis, {}, {}, {}, {}, {}, {}, {}};
    const int J = int(basis->size());
    const int M = int(quad.size());
    const int N1 = res.grid.size();
    pm.degree.resize(J);
    pm.Y.resize(J, M);
    pm.WY.resize(J, M);
    for (int j = 0; j < J; ++j) {
        pm.degree[j] = (*basis)[j].degree;
        for (int m = 0; m < M; ++m) {
            pm.Y(j, m) = (*basis)[j](quad.point(m));
            pm.WY(j, m) = quad.weight(m) * pm.Y(j, m);
        }
    }
    pm.u.resize(N1);
    pm.pot.resize(N1);
    for (int k = 0; k < N1; ++k) {
        pm.u[k] = u_eps_R(orbit, R, res.grid.rho(k)).u;
        pm.pot[k] = potential(orbit, R, res.grid.rho(k));
    }
    if (anorm > 0.0) {
        pm.Ua.resize(N1, M);
        pm.potA.resize(N1, M);
        std::vector<double> x(n);
        for (int k = 0; k < N1; ++k)
            for (int m = 0; m < M; ++m) {
                const auto th = quad.point(m);
                for (int i = 0; i < n; ++i) x[i] = res.grid.rho(k) * th[i];
                const double ua = u_eps_R_a(fp, x);
                pm.Ua(k, m) = ua;
                pm.potA(k, m) = 0.25 * n * (n + 2) * std::pow(ua, 4.0 / (n - 2));
            }
    }

    // Interior extension of phi, mode by mode.
    Mat Vphi = Mat::Zero(N1, J);
    for (const auto& [key, coef] : data.coefficients) {
        const int j = int(basis->flat_index(key));
        for (int k = 0; k < N1; ++k) Vphi(k, j) = coef * std::pow(res.grid.rho(k) / r, key.degree);
    }
    const Mat VphiPolar = pm.synth(Vphi);

    // Right inverse of the (possibly translated) linearized operator.
    auto inverse = [&](const Mat& F) -> Mat {
        Mat W = pm.solve(F);
        if (!pm.translated()) return W;
        Mat term = W;
        const double base = node_norm(W, res.grid, mu);
        int terms = 1;
        for (int i = 1; i <= 2; ++i) {
            Mat polar = pm.synth(term);
            for (int k = 0; k < N1; ++k)
                for (int m = 0; m < M; ++m) polar(k, m) *= pm.pot[k] - pm.potA(k, m);
            term = pm.solve(pm.project(polar));
            if (i == 1 && base > 0.0 && node_norm(term, res.grid, mu) >= 0.5 * base)
                throw ParameterError("picard_interior: translation too large for the truncated Neumann series");
            W += term;
            ++terms;
        }
        res.neumann_terms = terms;
        return W;
    };

    auto rhs_polar = [&](const Mat& W, Mat& total) {
        total = pm.synth(W) + VphiPolar;
        Mat F(N1, M);
        for (int k = 0; k < N1; ++k)
            for (int m = 0; m < M; ++m) {
                const double u0 = pm.translated() ? pm.Ua(k, m) : pm.u[k];
                const double P = pm.translated() ? pm.potA(k, m) : pm.pot[k];
                F(k, m) = -q_remainder(n, u0, total(k, m)) - P * VphiPolar(k, m);
            }
        return F;
    };

    // Relative residual of the full equation at interior nodes.
    auto residual = [&](const Mat& W) {
        Mat modesLap(N1, J);
        for (int j = 0; j < J; ++j) {
            std::vector<double> w(N1);
            for (int k = 0; k < N1; ++k) w[k] = W(k, j);
            const auto wt = differentiate4(w, res.grid.h);
            const auto wtt = differentiate4_second(w, res.grid.h);
            const double lam = eigenvalue(n, pm.degree[j]);
            for (int k = 0; k < N1; ++k) {
                const double rho = res.grid.rho(k);
                modesLap(k, j) = (wtt[k] - (n - 2) * wt[k] - lam * w[k]) / (rho * rho);
            }
        }
        const Mat lap = pm.synth(modesLap);
        const Mat total = pm.synth(W) + VphiPolar;
        double worst = 0.0;
        for (int k = 2; k < N1 - 2; ++k)
            for (int m = 0; m < M; ++m) {
                const double u0 = pm.translated() ? pm.Ua(k, m) : pm.u[k];
                const double U = u0 + total(k, m);
                const double Up = std::pow(std::abs(U), p - 1.0) * U;
                const double H = lap(k, m) + c * (Up - std::pow(u0, p));
                worst = std::max(worst, std::abs(H) / (c * std::abs(Up)));
            }
        return worst;
    };

    Mat W = Mat::Zero(N1, J);
    Mat total;
    Mat lastRhsModes;
    double prev_diff = 0.0;
    for (int it = 1; it <= options.max_iter; ++it) {
        lastRhsModes = pm.project(rhs_polar(W, total));
        Mat Wn = inverse(lastRhsModes);
        if (!Wn.allFinite()) throw SolverError("picard_interior", "non-finite iterate");
        PicardIterate rec;
        rec.iteration = it;
        rec.difference = node_norm(Wn - W, res.grid, mu);
        rec.norm = node_norm(Wn, res.grid, mu);
        rec.contraction = prev_diff > 0.0 ? rec.difference / prev_diff : 0.0;
        W = std::move(Wn);
        rec.residual = residual(W);
        res.history.push_back(rec);
        prev_diff = rec.difference;
        if (rec.difference <= options.tol * std::max(rec.norm, std::numeric_limits<double>::min()) ||
            rec.difference == 0.0) {
            res.converged = true;
            break;
        }
    }

    res.final_residual = res.history.empty() ? 0.0 : res.history.back().residual;
    {
        double top = 0.0, all = 0.0;
        for (int j = 0; j < J; ++j) {
            const double e = lastRhsModes.col(j).squaredNorm();
            all += e;
            if (pm.degree[j] == L) top += e;
        }
        res.aliasing = all > 0.0 ? top / all : 0.0;
    }
    {
        total = pm.synth(W) + VphiPolar;
        double pos = std::numeric_limits<double>::infinity();
        for (int k = 0; k < N1; ++k)
            for (int m = 0; m < M; ++m) {
                const double u0 = pm.translated() ? pm.Ua(k, m) : pm.u[k];
                const double scale = eps * std::pow(res.grid.rho(k), 0.5 * (2 - n));
                pos = std::min(pos, (u0 + total(k, m)) / scale);
            }
        res.positivity = pos;
    }
    for (int j = 0; j < J; ++j) {
        const ModeKey key = (*basis)[j].key();
        res.v.emplace(key, profile_of(res.grid, W, j));
        if (Vphi.col(j).cwiseAbs().maxCoeff() > 0.0) {
            const int deg = pm.degree[j];
            std::vector<double> w(N1), wt(N1), wtt(N1);
            for (int k = 0; k < N1; ++k) {
                w[k] = Vphi(k, j);
                wt[k] = -deg * w[k];
                wtt[k] = deg * deg * w[k];
            }
            res.v_phi.emplace(key, RadialProfile(res.grid, w, wt, wtt));
        }
    }
    if (!res.converged) {
        std::ostringstream os;
        os << "no contraction after " << res.history.size() << " iterations; iterate norms:";
        for (const auto& h : res.history) os << ' ' << h.norm;
        throw SolverError("picard_interior", os.str());
    }
    if (options.compute_norms) {
        NormSpec spec{2, budget.alpha, mu, r, 0, options.norm_samples};
        spec.floor = res.grid.inner_radius() * std::exp(orbit.period());
        spec.levels = std::max(1, int(std::ceil(std::log2(r / spec.floor))));
        res.weighted_norm = norm_weighted(mode_field(res.v, *basis), spec);
        res.tau_empirical = res.weighted_norm / std::pow(r, 2.0 + d - mu - 0.5 * n);
    }
    return res;
}

}  // namespace dglue
