#pragma once

#include "dglue/delaunay_family.hpp"
#include "dglue/poisson_operators.hpp"
#include "dglue/radial_profile.hpp"
#include "dglue/weighted_norms.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace dglue {

// Exponents and constants shared by the interior, exterior and matching estimates.
struct ParameterBudget {
    double s = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
    double delta4 = 0.25;
    double mu = 1.1;
    double nu = 0.0;
    double tau = 1.0;
    double kappa = 1.0;
    double beta = 1.0;
    double gamma = 1.0;
    double alpha = 0.5;  // Holder exponent used for all discrete norms

    // delta1 = 1/(8n), s = 2/(n - 1 - 1/(2n)), nu in the middle of its band.
    static ParameterBudget defaults(Dimension n);
    // Throws ParameterError naming the first violated constraint.
    void validate(Dimension n) const;
    double r_eps(double epsilon) const;
};

// 0 for n <= 6, (6-n)/(n-2) otherwise.
double lambda_n(Dimension n);

// n(n+2)/4 u_{eps,R}(rho)^(4/(n-2))
double potential(const DelaunayOrbit& orbit, double R, double rho);

struct BvpOptions {
    double h = 0.01;       // grid spacing in t = -log(rho)
    int inner_periods = 3; // rho_in = r e^(-m T)
};

// One spherical-harmonic component of L_{eps,R} w = f on the punctured ball of radius r.
struct RadialBVP {
    OrbitPtr orbit;
    double R = 1.0;
    int degree = 2;
    double r = 1.0;
    std::function<double(double)> rhs;  // f_i(rho)
    double mu = 1.1;
    BvpOptions options;
};

LogGrid bvp_grid(const DelaunayOrbit& orbit, double r, const BvpOptions& options);

// Solves the mode equation; high modes take w(r) = 0 and the decaying Floquet branch at the
// inner end, degrees 0 and 1 take zero Cauchy data at the inner end.
RadialProfile solve_mode_bvp(const RadialBVP& bvp);

// Same, with the right-hand side given at the grid nodes.
RadialProfile solve_mode_nodes(const DelaunayOrbit& orbit, double R, int degree,
                               const LogGrid& grid, const std::vector<double>& f);

// w'' + (n-1)/rho w' - lambda_i/rho^2 w + pot w at the nodes, by fourth-order differences
// (first and last two nodes are left at 0).
std::vector<double> apply_mode_operator(const DelaunayOrbit& orbit, double R, int degree,
                                        const LogGrid& grid, const std::vector<double>& w);

// Ratio psi(t_N) / psi(t_{N-1}) of the solution that decays toward the puncture.
double floquet_ratio(const DelaunayOrbit& orbit, double R, int degree, const LogGrid& grid);

// Q^{u0}(v) = H(u0 + v) - H(u0) - L^{u0}(v) for the flat operator.
double q_remainder(Dimension n, double u0, double v);
// n(n+2)/4 v int_0^1 (|u0 + t v|^(4/(n-2)) - u0^(4/(n-2))) dt by adaptive quadrature.
double q_remainder_integral(Dimension n, double u0, double v);
double q_remainder(const Field& u0, const Field& v, std::span<const double> x);

// Field of a mode expansion sum_j w_j(rho) e_j(theta).
Field mode_field(const std::map<ModeKey, RadialProfile>& modes, const HarmonicBasis& basis);

struct PicardOptions {
    double tol = 1e-11;          // on the successive-iterate difference relative to the iterate
    int max_iter = 30;
    int max_degree = 4;          // truncation degree
    BvpOptions bvp;
    int quadrature_order = 0;    // 0 picks 2 * max_degree + 1
    int norm_samples = 24;       // per annulus, for the final weighted norm
    bool compute_norms = true;
};

struct PicardIterate {
    int iteration = 0;
    double norm = 0.0;         // discrete weighted sup norm of v
    double difference = 0.0;   // same norm of v_k - v_{k-1}
    double contraction = 0.0;  // difference_k / difference_{k-1}
    double residual = 0.0;     // max relative |H(u + v_phi + v)|
};

struct PicardResult {
    bool converged = false;
    LogGrid grid;
    BasisPtr basis;
    std::map<ModeKey, RadialProfile> v;       // correction
    std::map<ModeKey, RadialProfile> v_phi;   // interior extension of the boundary data
    std::vector<PicardIterate> history;
    double r_eps = 0.0;
    double phi_norm = 0.0;           // ||phi||_{(2,alpha), r_eps}
    double phi_bound = 0.0;          // kappa r_eps^(2+d-n/2-delta1)
    double weighted_norm = 0.0;      // ||v||_{(2,alpha),mu,r_eps}
    double tau_empirical = 0.0;      // weighted_norm / r_eps^(2+d-mu-n/2)
    double final_residual = 0.0;
    double aliasing = 0.0;           // energy fraction of the top degree in the last right-hand side
    double positivity = 0.0;         // min (u + v_phi + v) / (eps rho^((2-n)/2))
    int neumann_terms = 0;

    ModeExpansion expansion() const;
};

// Fixed point of v -> G(-Q(v_phi + v) - pot v_phi) on the ball of radius r_eps = eps^s.
PicardResult picard_interior(OrbitPtr orbit, double R, const std::vector<double>& a,
                             const BoundaryData& phi, const ParameterBudget& budget,
                             const PicardOptions& options = {});

struct QuadraticEstimateReport {
    double lhs_difference = 0.0;  // ||Q(w + v1) - Q(w + v0)||_{(0,alpha),mu-2}
    double rhs_difference = 0.0;  // eps^lambda_n r^(d+1) ||v1 - v0|| (||w|| + ||v1|| + ||v0||)
    double constant_difference = 0.0;
    double lhs_square = 0.0;      // ||Q(w)||_{(0,alpha),mu-2}
    double rhs_square = 0.0;      // eps^lambda_n r^(3+2d-n/2-mu) ||w||^2
    double constant_square = 0.0;
    double lambda = 0.0;
};

QuadraticEstimateReport quadratic_estimate_check(const FamilyParams& params, const Field& w, const Field& v0,
                            const Field& v1, const ParameterBudget& budget, int levels = 4,
                            int samples = 24);

}  // namespace dglue
