#pragma once

#include "dglue/delaunay_ode.hpp"

#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace dglue {

using OrbitPtr = std::shared_ptr<const DelaunayOrbit>;

struct FamilyParams {
    OrbitPtr orbit;
    double R = 1.0;
    std::vector<double> a;       // empty means a = 0
    std::optional<double> b;     // neck offset, set when R was derived from it
    double r0 = 0.5;             // validity radius for the a-translation: |a||x| < r0

    // R from the offset b, R^((2-n)/2) = 2(1+b)/epsilon.
    static FamilyParams from_b(OrbitPtr orbit, double b, std::vector<double> a = {});
};

// u, r u_r, r^2 u_rr at a radius.
struct RadialJet {
    double u;
    double ru;
    double rru;
};

double norm(std::span<const double> x);

// |x|^((2-n)/2) v(-log|x|)
double u_eps(const DelaunayOrbit& orbit, std::span<const double> x);
RadialJet u_eps_radial(const DelaunayOrbit& orbit, double r);

// R^((2-n)/2) u_eps(x / R), in radial form.
RadialJet u_eps_R(const DelaunayOrbit& orbit, double R, double r);
RadialJet u_eps_R(const FamilyParams& params, double r);

// Translated solution |x - a|x|^2|^((2-n)/2) v(-2 log|x| + log|x - a|x|^2| + log R).
double u_eps_R_a(const FamilyParams& params, std::span<const double> x);

double neck_radius_from_b(Dimension n, double epsilon, double b);

// Sup over the radii of the three normalized errors against eps/2 (1 + |x|^(2-n)),
// each divided by eps^((n+2)/(n-2)) |x|^(-n).
struct ExpansionReport {
    double value = 0.0;
    double first = 0.0;
    double second = 0.0;
};
ExpansionReport check_expansion(const DelaunayOrbit& orbit, const std::vector<double>& radii);

// Same comparison for u_{eps,R} against eps/2 (R^((2-n)/2) + R^((n-2)/2) r^(2-n)),
// normalized by R^((n+2)/2) eps^((n+2)/(n-2)) r^(-n).
ExpansionReport check_scaled_expansion(const DelaunayOrbit& orbit, double R,
                                    const std::vector<double>& radii);

// |u_{eps,R,a} - u_{eps,R} - ((n-2) u_{eps,R} + |x| d_r u_{eps,R}) a.x|
double translation_remainder(const FamilyParams& params, std::span<const double> x);

struct TranslationReport {
    double max_remainder = 0.0;
    double near_ratio = 0.0;  // remainder / (|a|^2 |x|^((6-n)/2))
    double far_ratio = 0.0;   // remainder / (|a|^2 eps R^((2-n)/2) |x|^2), points with |x| >= R only
};
TranslationReport check_translation(const FamilyParams& params,
                                    const std::vector<std::vector<double>>& points);

// Empirical C1, C2 with C1 eps |x|^((2-n)/2) <= u_{eps,R,a} <= C2 |x|^((2-n)/2) on the points.
struct BracketReport {
    double lower = 0.0;
    double upper = 0.0;
};
BracketReport bracketing_constants(const FamilyParams& params,
                                   const std::vector<std::vector<double>>& points);

// Empirical c with |u_a^(4/(n-2)) - u^(4/(n-2))| <= c |a| |x|^(-1) on the points.
double potential_difference_constant(const FamilyParams& params,
                                     const std::vector<std::vector<double>>& points);

}  // namespace dglue
