#pragma once

#include "dglue/linearized_solver.hpp"
#include "dglue/poisson_operators.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace dglue {

struct MatchingState {
    Dimension n{4};
    double epsilon = 0.1;
    ParameterBudget budget;
    double b = 0.0;
    double lambda = 0.0;
    std::vector<double> a;      // n entries
    std::vector<double> omega;  // coefficients of the normalized degree-1 modes
    BoundaryData theta;         // high-mode data on the unit sphere

    // b = 0, lambda = eps^2/4, a = omega = 0, theta = 0.
    static MatchingState initial(Dimension n, double epsilon, const ParameterBudget& budget,
                                 BasisPtr basis = nullptr);

    double r_eps() const { return budget.r_eps(epsilon); }
    // r_eps^(2+d-n/2), the admissible magnitude of the data functionals.
    double magnitude() const;
    double b_bound() const { return 0.5; }
    double lambda_bound() const;  // r^(d/2-1+3n/4)
    double a_bound() const;       // |a|^2 <= r^(d-n/2)
    double theta_bound() const;   // r^(2+d-n/2-delta1)
};

// Value and r d_r value of a Cauchy-data functional on the matching sphere.
using ScalarData = std::pair<double, double>;

// Plug-in seam for the exterior and interior contributions, keyed by block name "H0", "Hi", "S".
class DataFunctionals {
public:
    using H0Fn = std::function<ScalarData(const MatchingState&)>;
    using HiFn = std::function<ScalarData(const MatchingState&, int i)>;
    using SFn = std::function<BoundaryData(const MatchingState&)>;

    static constexpr double gate = 100.0;

    explicit DataFunctionals(MatchingState reference);

    // Each registration makes one sample call at the reference state and rejects (ParameterError)
    // outputs larger than gate * r_eps^(2+d-n/2).
    void register_h0(H0Fn f);
    void register_hi(HiFn f);
    void register_s(SFn f);

    ScalarData h0(const MatchingState& s) const;
    ScalarData hi(const MatchingState& s, int i) const;
    BoundaryData source(const MatchingState& s) const;

    const MatchingState& reference() const noexcept { return ref_; }

    static DataFunctionals zero(const MatchingState& reference);
    // Constant callbacks; s_coefficients are high-mode coefficients of S.
    static DataFunctionals constant(const MatchingState& reference, ScalarData h0, ScalarData hi,
                                    std::map<ModeKey, double> s_coefficients = {});
    // Smooth, Lipschitz callbacks of size scale * r_eps^(2+d-n/2).
    static DataFunctionals synthetic(const MatchingState& reference, double scale = 0.25);
    // H0 and Hi from the low modes of the flat interior correction at r_eps plus synthetic terms.
    static DataFunctionals faithful(OrbitPtr orbit, const MatchingState& reference,
                                    double scale = 0.25, PicardOptions options = {});

private:
    MatchingState ref_;
    H0Fn h0_;
    HiFn hi_;
    SFn s_;
};

// F = (n-2) u + r u_r and G = (n-2) u + n r u_r + r^2 u_rr of u_{eps,R} at radius r > R.
std::pair<double, double> f_g_coefficients(const DelaunayOrbit& orbit, double R, double r);

struct MatchOptions {
    double tol = 1e-12;
    int max_iter = 200;       // inner fixed-point iterations per block
    int max_outer = 50;
    double damping = 1.0;     // relaxation factor of the fixed-point maps
    int stall_window = 5;     // iterations without a 0.9 decrease before Newton takes over
};

struct BlockResult {
    int iterations = 0;
    bool newton = false;
    double residual = 0.0;
};

// Residuals of the two (b, lambda) equations and of the 2n (a, omega) equations.
std::pair<double, double> b_lambda_residual(const MatchingState& s, const DataFunctionals& f);
double a_omega_residual(const MatchingState& s, const DataFunctionals& f, double F, double G);
double high_mode_residual(const MatchingState& s, const DataFunctionals& f);

// Each solver updates its block of `state` in place. Domain escape or non-convergence raises
// SolverError naming the block.
BlockResult solve_b_lambda(MatchingState& state, const DataFunctionals& f, const MatchOptions& o = {});
BlockResult solve_a_omega(MatchingState& state, const DataFunctionals& f, double F, double G,
                          const MatchOptions& o = {});
BlockResult solve_high_mode(MatchingState& state, const DataFunctionals& f, const MatchOptions& o = {});

// ||e_i||_{(2,alpha)} on the unit sphere for the normalized degree-1 modes.
std::vector<double> degree_one_norms(const HarmonicBasis& basis, double alpha);

struct MatchRow {
    int iteration = 0;
    double b = 0.0;
    double lambda = 0.0;
    double a_norm = 0.0;
    double omega_norm = 0.0;
    double theta_norm = 0.0;
    double residual = 0.0;
};

struct MatchResult {
    MatchingState state;
    std::vector<MatchRow> history;
    bool converged = false;
    double residual = 0.0;
    double F = 0.0;
    double G = 0.0;
};

// Nested fixed points: high mode, then (b, lambda), then (a, omega), repeated to joint convergence.
MatchResult assemble_match(OrbitPtr orbit, const ParameterBudget& budget, const DataFunctionals& f,
                           const MatchOptions& o = {});

}  // namespace dglue
