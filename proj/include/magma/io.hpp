#pragma once

#include <string>

#include "magma/field.hpp"

namespace magma {

// Field dump: one JSON header line (prefixed '#') carrying the domain
// descriptor, nodes-per-axis, grid spacing and format version, followed by
// CSV rows (i, j, x, y, u).  Values are printed with 17 significant digits,
// so save followed by load reproduces the field bit for bit.
void save_field_csv(const GridField& u, const std::string& path);

// Rebuilds the grid from the header and refills the nodal values; every
// interior node must appear exactly once.  Malformed files, unknown nodes,
// or an incomplete cover raise InvalidArgument.
GridField load_field_csv(const std::string& path);

}  // namespace magma
