#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rdmgen/model.hpp"

// Scenario files are INI-style text:
//
//   [system]   omega0, phi_re, phi_im, beta (number or "inf")
//   [drive]    type = zero | sinusoidal | tabulated
//              k0, nu                       (sinusoidal)
//              samples = t,re,im; t,re,im   (tabulated)
//   [bath]     type = none | discrete | memoryless
//              modes = omega,f_re,f_im; ... (discrete)
//              chi0                         (memoryless)
//   [initial]  gamma_re, gamma_im
//   [run]      t_grid = 0, 1, 2   or   t_end + steps
//              n_cut, s_max, outputs, output_dir
//              n_sys, n_bath, dt, max_deviation, n_max, thermal_tail_tolerance
//              pn_max, eta_max, eta_steps
//
// Unknown sections or keys are rejected so typos do not go unnoticed.
namespace rdm {

struct RunSettings {
  std::vector<double> t_grid;
  int n_cut = -1;  // < 0: tail rule
  int s_max = -1;
  std::vector<std::string> outputs;
  std::string output_dir = ".";

  // oracle comparison
  int n_sys = 14;
  std::vector<int> n_bath;
  double dt = 0.0;
  double max_deviation = 1e-4;
  int n_max = -1;  // < 0: n_cut
  double thermal_tail_tolerance = 1e-10;

  // excitation tables
  int pn_max = 4;  // columns P_0 .. P_pn_max
  double eta_max = 2.0;
  int eta_steps = 200;
};

struct RunConfig {
  SystemSpec spec;
  cplx gamma{};
  RunSettings run;
};

// "section.key=value"
struct Override {
  std::string path;
  std::string value;
};

Override parse_override(const std::string& text);

// Both throw Error(ConfigError) with a "section.key: ..." diagnostic.
RunConfig load_config(const std::string& path, const std::vector<Override>& overrides = {});
RunConfig parse_config(const std::string& text, const std::vector<Override>& overrides = {});

}  // namespace rdm
