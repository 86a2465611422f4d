#pragma once

#include "config.hpp"

namespace dglue::cli {

int cmd_delaunay(const RunConfig& c);
int cmd_spectrum(const RunConfig& c);
int cmd_match(const RunConfig& c);
int cmd_interior(const RunConfig& c);
int cmd_norms(const RunConfig& c);

}  // namespace dglue::cli
