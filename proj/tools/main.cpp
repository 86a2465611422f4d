#include "commands.hpp"
#include "config.hpp"

#include "dglue/errors.hpp"

#include "CLI11.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <exception>
#include <functional>
#include <map>

using namespace dglue;
using namespace dglue::cli;

namespace {

void common(CLI::App* app, RunConfig& c, bool eps_list = false) {
    app->add_option("--n", c.n, "dimension, 3..10")->capture_default_str();
    auto* e = app->add_option("--eps", c.eps, eps_list ? "neck parameters, comma separated" : "neck parameter");
    e->delimiter(',')->capture_default_str();
    app->add_option("--s", c.s, "gluing radius exponent, r_eps = eps^s");
    app->add_option("--delta1", c.delta1);
    app->add_option("--delta2", c.delta2);
    app->add_option("--delta4", c.delta4);
    app->add_option("--mu", c.mu, "weight of the interior norm");
    app->add_option("--grid-h", c.h, "log-grid spacing")->capture_default_str();
    app->add_option("--inner-periods", c.inner_periods, "periods below the matching radius")->capture_default_str();
    app->add_option("--out", c.out, "output directory (default $DGLUE_OUT or .)");
    app->add_option("--tol", c.tol, "tolerance")->capture_default_str();
    app->add_option("--seed", c.seed, "seed for sampled norms")->capture_default_str();
    app->add_option("--config", "flat JSON file with default values for the flags");
    app->add_flag("--svg", c.svg, "also write an SVG plot");
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig c;
    CLI::App app{"Delaunay-end gluing toolkit"};
    app.require_subcommand(1);

    std::map<std::string, std::function<int(const RunConfig&)>> run;
    auto* del = app.add_subcommand("delaunay", "integrate the Delaunay orbit and write its profiles");
    common(del, c, true);
    del->add_flag("--verify-expansion,--verify-prop22", c.verify_expansion, "report the normalized asymptotic expansion errors");
    run["delaunay"] = cmd_delaunay;

    auto* spec = app.add_subcommand("spectrum", "spectrum of L = Delta + n on products of spheres");
    common(spec, c);
    spec->add_option("--family", c.family, "s2xs2 or s2xs3")->capture_default_str();
    spec->add_option("--k1", c.k1, "curvature of the first S^2 (s2xs2)")->capture_default_str();
    spec->add_option("--k3", c.k3, "curvature of the S^2 factor (s2xs3)")->capture_default_str();
    spec->add_option("--count", c.count, "eigenvalues written")->capture_default_str();
    run["spectrum"] = cmd_spectrum;

    auto* match = app.add_subcommand("match", "solve the parameter matching system");
    common(match, c);
    match->add_option("--preset", c.preset, "zero, synthetic or faithful")->capture_default_str();
    match->add_option("--scale", c.scale, "data size in units of r_eps^(2+d-n/2)")->capture_default_str();
    run["match"] = cmd_match;

    auto* interior = app.add_subcommand("interior", "Picard iteration for the interior correction");
    common(interior, c);
    interior->add_option("--phi", c.phi, "boundary data size as a fraction of the admissible bound")
        ->capture_default_str();
    interior->add_option("--degree", c.degree, "truncation degree")->capture_default_str();
    interior->add_option("--mode", c.mode, "degree of the boundary data")->capture_default_str();
    run["interior"] = cmd_interior;

    auto* norms = app.add_subcommand("norms", "parameter budget and weighted-norm scaling");
    common(norms, c, true);
    run["norms"] = cmd_norms;

    try {
        auto args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    } catch (const ParameterError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    }

    for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
    try {
        return run.at(c.command)(c);
    } catch (const ParameterError& e) {
        fmt::print(stderr, "parameter error: {}\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        fmt::print(stderr, "solver error: {}\n", e.what());
        return 1;
    }
}
