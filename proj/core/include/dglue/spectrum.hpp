#pragma once

#include <string>
#include <utility>
#include <vector>

namespace dglue {

// Round sphere S^m with sectional curvature k.
struct SphereFactor {
    int m = 2;
    double k = 1.0;
};

// Product of round spheres; n is the total dimension.
struct SpectrumSpec {
    std::vector<SphereFactor> factors;
    int n = 0;

    // Throws ParameterError unless n = sum m_k, every k_k > 0 and sum m_k (m_k - 1) k_k = n (n - 1).
    void validate(double tol = 1e-12) const;

    static SpectrumSpec s2xs2(double k1);  // k2 = 6 - k1
    static SpectrumSpec s2xs3(double k3);  // k4 = (10 - k3) / 3
};

using IndexTuple = std::vector<int>;

struct Eigenpair {
    double value = 0.0;
    IndexTuple index;
};

// Eigenvalues sum_k i_k (i_k + m_k - 1) k_k of -Delta, increasing, with ties ordered by index.
std::vector<Eigenpair> laplace_spectrum(const SpectrumSpec& spec, int count);

// n - mu for the same enumeration; checks the normalization.
std::vector<Eigenpair> linearized_spectrum(const SpectrumSpec& spec, int count);

struct DegeneracyReport {
    bool nondegenerate = true;
    std::vector<IndexTuple> kernel;
    double gap = 0.0;  // min |n - mu| over all modes
};

DegeneracyReport is_nondegenerate(const SpectrumSpec& spec, double tol = 1e-12);

struct DegenerateSet {
    std::string family;
    // Curvature of the first (second) factor for which a single-factor mode of index i is in the kernel.
    std::vector<double> first;
    std::vector<double> second;
    // Numerators c of c / (i (i + m - 1)) for each factor, from the kernel condition.
    std::pair<double, double> derived_constant;
    // Numerators in the commonly quoted form of the criterion.
    std::pair<double, double> quoted_constant;
    std::string note;  // nonempty when the two disagree
};

// family is "s2xs2" or "s2xs3" (case-insensitive).
DegenerateSet degenerate_curvature_set(const std::string& family, int i_max);

}  // namespace dglue
