#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "rdmgen/genfunc.hpp"

namespace rdm {

// 17 significant digits, lowercase e-notation ("%.16e"); byte-stable across runs.
std::string format_double(double x);

// {"t": ..., "n_cut": ..., "trace_deficit": ..., "rho": [[re, im], ...]} with rho row-major.
void write_rdm_json(std::ostream& os, const ReducedDensityMatrix& rdm, int indent = 0);

void write_rdm_json_array(std::ostream& os, std::span<const ReducedDensityMatrix> rdms);

}  // namespace rdm
