#pragma once

#include "dglue/linearized_solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dglue::cli {

struct RunConfig {
    std::string command;
    int n = 4;
    std::vector<double> eps{0.1};
    std::optional<double> s, delta1, delta2, delta4, mu;
    double h = 0.01;          // log-grid spacing
    int inner_periods = 3;
    std::string out;          // empty: $DGLUE_OUT, then the working directory
    double tol = 1e-12;
    std::uint64_t seed = 7;

    bool verify_expansion = false;
    std::string family = "s2xs2";
    double k1 = 3.0;
    double k3 = 2.0;
    int count = 40;
    std::string preset = "synthetic";
    double scale = 0.25;
    double phi = 0.5;         // fraction of the admissible boundary-data bound
    int degree = 4;           // truncation degree of the interior solve
    int mode = 2;             // degree of the boundary data
    bool svg = false;

    // Budget with the overrides applied; validated.
    ParameterBudget budget() const;
    BvpOptions bvp() const;
    std::string out_dir() const;
};

// argv with flags from a flat JSON file (--config) spliced in for keys not given on the command line.
std::vector<std::string> expand_config(int argc, char** argv);

}  // namespace dglue::cli
