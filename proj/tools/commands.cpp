#include "commands.hpp"

#include "output.hpp"

#include "dglue/errors.hpp"
#include "dglue/matching.hpp"
#include "dglue/spectrum.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <memory>

namespace fs = std::filesystem;

namespace dglue::cli {

namespace {

fs::path out_path(const RunConfig& c, const std::string& name) {
    const fs::path dir = c.out_dir();
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ParameterError("cannot create output directory " + dir.string());
    return dir / name;
}

std::string indexed(const std::string& stem, std::size_t k, std::size_t count) {
    return count == 1 ? stem + ".csv" : fmt::format("{}_{}.csv", stem, k);
}

OrbitPtr make_orbit(const RunConfig& c, double eps) {
    return std::make_shared<const DelaunayOrbit>(Dimension(c.n), eps);
}

double single_eps(const RunConfig& c) {
    if (c.eps.size() != 1) throw ParameterError(c.command + " takes a single --eps value");
    return c.eps.front();
}

std::vector<double> log_space(double lo, double hi, int count) {
    std::vector<double> r(count);
    for (int k = 0; k < count; ++k) r[k] = lo * std::pow(hi / lo, double(k) / (count - 1));
    return r;
}

std::string tuple(const IndexTuple& t) { return fmt::format("({})", fmt::join(t, ",")); }

double euclid(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

}  // namespace

int cmd_delaunay(const RunConfig& c) {
    const Dimension n(c.n);
    std::vector<double> worst;
    for (std::size_t k = 0; k < c.eps.size(); ++k) {
        const double eps = c.eps[k];
        const DelaunayOrbit o(n, eps);
        const double drift = energy_drift(o, 10);
        fmt::print("n = {}, eps = {}: period {:.15g}, h0 {:.15g}, v_max {:.15g}, drift over 10 periods {:.3e}\n",
                   c.n, eps, o.period(), o.h0(), o.v_max(), drift);

        CsvWriter prof(out_path(c, indexed("delaunay_profile", k, c.eps.size())), {"t", "v", "w", "H"});
        const auto& samples = o.samples();
        const std::size_t stride = std::max<std::size_t>(1, samples.size() / 1024);
        std::vector<double> ts, vs;
        for (std::size_t j = 0; j < samples.size(); j += stride) {
            const auto& s = samples[j];
            prof << s.t << s.v << s.w << hamiltonian(n, s.v, s.w);
            prof.end_row();
            ts.push_back(s.t);
            vs.push_back(s.v);
        }
        const auto& last = samples.back();
        if ((samples.size() - 1) % stride != 0) {
            prof << last.t << last.v << last.w << hamiltonian(n, last.v, last.w);
            prof.end_row();
        }

        CsvWriter up(out_path(c, indexed("uprofile", k, c.eps.size())), {"r", "u", "ru_r", "r2u_rr"});
        for (double r : log_space(eps * eps, 1.0, 400)) {
            const RadialJet j = u_eps_radial(o, r);
            up << r << j.u << j.ru << j.rru;
            up.end_row();
        }
        if (c.svg)
            write_svg(out_path(c, fmt::format("delaunay_profile{}.svg", c.eps.size() == 1 ? "" : fmt::format("_{}", k))),
                      fmt::format("v(t), n = {}, eps = {}", c.n, eps), {{"v", ts, vs}});

        if (c.verify_expansion) {
            const auto rep = check_expansion(o, log_space(eps * eps, 1.0, 200));
            fmt::print("  expansion ratio on [eps^2, 1]: value {:.6g}, first {:.6g}, second {:.6g}\n", rep.value,
                       rep.first, rep.second);
            if (!std::isfinite(rep.value) || !std::isfinite(rep.first) || !std::isfinite(rep.second))
                throw SolverError("delaunay", "unbounded expansion ratio");
            worst.push_back(std::max({rep.value, rep.first, rep.second}));
        }
    }
    if (worst.size() > 1) {
        const auto [lo, hi] = std::minmax_element(worst.begin(), worst.end());
        fmt::print("expansion ratio spread across eps: {:.4f}\n", *hi / *lo);
    }
    return 0;
}

int cmd_spectrum(const RunConfig& c) {
    std::string family = c.family;
    std::transform(family.begin(), family.end(), family.begin(), [](unsigned char ch) { return std::tolower(ch); });
    SpectrumSpec spec;
    if (family == "s2xs2") spec = SpectrumSpec::s2xs2(c.k1);
    else if (family == "s2xs3") spec = SpectrumSpec::s2xs3(c.k3);
    else throw ParameterError("spectrum: unknown family " + c.family + " (use s2xs2 or s2xs3)");
    spec.validate();
    if (c.count < 1) throw ParameterError("spectrum: count must be positive");

    std::vector<std::string> desc;
    for (const auto& f : spec.factors) desc.push_back(fmt::format("S^{}({:.15g})", f.m, f.k));
    fmt::print("{}\n", fmt::join(desc, " x "));

    const auto eig = linearized_spectrum(spec, c.count);
    const auto lap = laplace_spectrum(spec, c.count);
    CsvWriter csv(out_path(c, "spectrum.csv"), {"laplace_eigenvalue", "linearized_eigenvalue", "index"});
    for (std::size_t k = 0; k < eig.size(); ++k) {
        csv << lap[k].value << eig[k].value << fmt::format("\"{}\"", fmt::join(eig[k].index, " "));
        csv.end_row();
    }

    const auto rep = is_nondegenerate(spec, c.tol);
    if (rep.nondegenerate) {
        fmt::print("NONDEGENERATE: gap {:.15g}\n", rep.gap);
    } else {
        std::vector<std::string> ks;
        for (const auto& t : rep.kernel) ks.push_back(tuple(t));
        fmt::print("DEGENERATE: kernel {}\n", fmt::join(ks, " "));
    }
    const auto set = degenerate_curvature_set(family, 10);
    std::vector<std::string> first;
    for (double k : set.first) first.push_back(fmt::format("{:.6g}", k));
    fmt::print("degenerate curvatures of the first factor, i = 1..10: {}\n", fmt::join(first, ", "));
    fmt::print("kernel numerators ({}, {}), quoted ({}, {})\n", set.derived_constant.first, set.derived_constant.second,
               set.quoted_constant.first, set.quoted_constant.second);
    if (!set.note.empty()) fmt::print("note: {}\n", set.note);
    return 0;
}

int cmd_match(const RunConfig& c) {
    const double eps = single_eps(c);
    const Dimension n(c.n);
    const auto budget = c.budget();
    const auto orbit = make_orbit(c, eps);
    const auto ref = MatchingState::initial(n, eps, budget);
    DataFunctionals f = [&] {
        if (c.preset == "zero") return DataFunctionals::zero(ref);
        if (c.preset == "synthetic") return DataFunctionals::synthetic(ref, c.scale);
        if (c.preset == "faithful") {
            PicardOptions po;
            po.bvp = c.bvp();
            po.max_degree = 2;
            const auto fref = MatchingState::initial(n, eps, budget, std::make_shared<const HarmonicBasis>(c.n, 2));
            return DataFunctionals::faithful(orbit, fref, c.scale, po);
        }
        throw ParameterError("match: unknown preset " + c.preset + " (use zero, synthetic or faithful)");
    }();
    MatchOptions mo;
    mo.tol = c.tol;
    const MatchResult res = assemble_match(orbit, budget, f, mo);

    CsvWriter csv(out_path(c, "match.csv"),
                  {"iteration", "b", "lambda", "a_norm", "omega_norm", "theta_norm", "residual"});
    for (const auto& r : res.history) {
        csv << std::to_string(r.iteration) << r.b << r.lambda << r.a_norm << r.omega_norm << r.theta_norm << r.residual;
        csv.end_row();
    }
    const auto& s = res.state;
    const double a = euclid(s.a);
    const double theta = norm_sphere(s.theta.field(), 2, budget.alpha, 1.0);
    const bool b_ok = std::abs(s.b) <= s.b_bound();
    const bool l_ok = std::abs(s.lambda) <= s.lambda_bound();
    const bool a_ok = a <= s.a_bound();
    const bool t_ok = theta <= s.theta_bound();
    fmt::print("{} in {} outer iterations, residual {:.3e}\n", res.converged ? "converged" : "not converged",
               res.history.size(), res.residual);
    fmt::print("b {:.17g}\nlambda {:.17g}\n|a| {:.6e}\n|omega| {:.6e}\n|theta| {:.6e}\n", s.b, s.lambda, a,
               euclid(s.omega), theta);
    fmt::print("F {:.10g}, G {:.10g} at r_eps {:.10g}\n", res.F, res.G, s.r_eps());
    fmt::print("constraints: |b| {}, lambda {}, |a| {}, theta {}\n", b_ok ? "ok" : "violated",
               l_ok ? "ok" : "violated", a_ok ? "ok" : "violated", t_ok ? "ok" : "violated");
    return res.converged && res.residual < c.tol && b_ok && l_ok && a_ok && t_ok ? 0 : 1;
}

int cmd_interior(const RunConfig& c) {
    const double eps = single_eps(c);
    const Dimension n(c.n);
    const auto budget = c.budget();
    const auto orbit = make_orbit(c, eps);
    if (c.mode < 2) throw ParameterError("interior: boundary data must have degree >= 2");
    if (c.phi < 0.0) throw ParameterError("interior: --phi must be nonnegative");
    const double r = budget.r_eps(eps);
    const double R = neck_radius_from_b(n, eps, 0.0);
    auto basis = std::make_shared<const HarmonicBasis>(c.n, std::max(c.degree, c.mode));
    const double unit = norm_sphere(BoundaryData{basis, r, {{{c.mode, 0}, 1.0}}}.field(), 2, budget.alpha, r);
    const double bound = budget.kappa * std::pow(r, 2.0 + n.d() - 0.5 * c.n - budget.delta1);
    BoundaryData phi{basis, r, {}};
    if (c.phi > 0.0) phi.coefficients[{c.mode, 0}] = c.phi * bound / unit;

    PicardOptions po;
    po.bvp = c.bvp();
    po.max_degree = c.degree;
    po.tol = std::max(c.tol, 1e-14);
    const PicardResult res = picard_interior(orbit, R, {}, phi, budget, po);

    CsvWriter csv(out_path(c, "interior.csv"), {"iteration", "norm", "difference", "contraction", "residual"});
    for (const auto& it : res.history) {
        csv << std::to_string(it.iteration) << it.norm << it.difference << it.contraction << it.residual;
        csv.end_row();
    }
    fmt::print("boundary data norm {:.6e} (bound {:.6e}) at r_eps {:.10g}\n", res.phi_norm, res.phi_bound, r);
    fmt::print("converged in {} iterations, final residual {:.3e}\n", res.history.size(), res.final_residual);
    fmt::print("weighted norm {:.6e}, empirical tau {:.6g}, positivity {:.6g}, top-degree energy {:.3e}\n",
               res.weighted_norm, res.tau_empirical, res.positivity, res.aliasing);

    if (c.svg) {
        const Field v = mode_field(res.v, *res.basis);
        const Field vphi = mode_field(res.v_phi, *res.basis);
        Series total{"rho^((n-2)/2) (u + v_phi + v)", {}, {}}, base{"rho^((n-2)/2) u", {}, {}};
        for (double rho : log_space(res.grid.inner_radius() * 1.0001, r * 0.9999, 600)) {
            std::vector<double> x(c.n, 0.0);
            x[0] = rho;
            const double u = u_eps_R(*orbit, R, rho).u;
            const double sc = std::pow(rho, 0.5 * (c.n - 2));
            total.x.push_back(rho);
            total.y.push_back(sc * (u + vphi(x) + v(x)));
            base.x.push_back(rho);
            base.y.push_back(sc * u);
        }
        write_svg(out_path(c, "interior_profile.svg"), "conformal factor along the first axis", {total, base}, true);
    }
    return 0;
}

int cmd_norms(const RunConfig& c) {
    const Dimension n(c.n);
    const auto b = c.budget();
    fmt::print("n {}, d {}\n", c.n, n.d());
    fmt::print("s {:.10g}\ndelta1 {:.10g}\ndelta2 {:.10g}\ndelta4 {:.10g}\nmu {:.10g}\nnu {:.10g}\nalpha {:.10g}\n", b.s,
               b.delta1, b.delta2, b.delta4, b.mu, b.nu, b.alpha);
    for (double eps : c.eps) fmt::print("r_eps({}) {:.10g}\n", eps, b.r_eps(eps));

    const Field power = Field::radial(c.n, [mu = b.mu](double r) {
        return std::array<double, 3>{std::pow(r, mu), mu * std::pow(r, mu - 1), mu * (mu - 1) * std::pow(r, mu - 2)};
    });
    std::vector<int> e(c.n, 0);
    e[0] = e[1] = 1;
    const Polynomial w = Polynomial::monomial(e) * (Polynomial::constant(c.n, 1.0) + Polynomial::radius_squared(c.n));
    const Polynomial lap = w.laplacian();
    CsvWriter csv(out_path(c, "norms.csv"), {"r", "power_norm", "rescaling_constant"});
    for (double r : {0.2, 0.1, 0.05}) {
        NormSpec s{0, b.alpha, b.mu, r, 6, 64, c.seed};
        const double pn = norm_weighted(power, s);
        NormSpec sw{2, b.alpha, b.mu, r, 6, 48, c.seed};
        NormSpec sf{0, b.alpha, b.mu - 2.0, r, 6, 48, c.seed};
        const double k = norm_weighted(Field::from_polynomial(w).rescaled(r), sw) /
                         norm_weighted(Field::from_polynomial(lap).rescaled(r, 1.0 / (r * r)), sf);
        fmt::print("r {:<5} |x|^mu norm {:.10g}  rescaling constant {:.10g}\n", r, pn, k);
        csv << r << pn << k;
        csv.end_row();
    }
    return 0;
}

}  // namespace dglue::cli
