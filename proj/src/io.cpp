#include "rdmgen/io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace rdm {

std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

void write_rdm_json(std::ostream& os, const ReducedDensityMatrix& rdm, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  os << pad << "{\n";
  os << pad << "  \"t\": " << format_double(rdm.t) << ",\n";
  os << pad << "  \"n_cut\": " << rdm.n_cut << ",\n";
  os << pad << "  \"trace_deficit\": " << format_double(rdm.trace_deficit) << ",\n";
  os << pad << "  \"truncation_order\": " << rdm.truncation_order << ",\n";
  os << pad << "  \"method\": \"" << to_string(rdm.method) << "\",\n";
  os << pad << "  \"rho\": [";
  const auto dim = rdm.rho.rows();
  for (Eigen::Index n = 0; n < dim; ++n) {
    for (Eigen::Index m = 0; m < dim; ++m) {
      const auto v = rdm.rho(n, m);
      os << ((n || m) ? ", " : "") << '[' << format_double(v.real()) << ", " << format_double(v.imag()) << ']';
    }
  }
  os << "]\n" << pad << '}';
}

void write_rdm_json_array(std::ostream& os, std::span<const ReducedDensityMatrix> rdms) {
  os << "[\n";
  for (std::size_t i = 0; i < rdms.size(); ++i) {
    write_rdm_json(os, rdms[i], 2);
    os << (i + 1 < rdms.size() ? ",\n" : "\n");
  }
  os << "]\n";
}

}  // namespace rdm
