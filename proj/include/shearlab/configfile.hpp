#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "shearlab/multiplier.hpp"
#include "shearlab/profile.hpp"

namespace shearlab {

// Parsed config: "section.key" -> raw value string.  Sections are
// [bracketed] headers; values are numbers, quoted strings, booleans, or
// [a, b, c] lists.  '#' starts a comment.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(const std::string& text);
ConfigMap parse_config_file(const std::string& path);

struct CampaignSpec {
  ProfileDescriptor profile;
  int nx = 128;
  int ny = 257;
  int band = 0;  // frequency lattice half-width for kernel work; 0 = ny/3
  std::vector<double> eps_list{1e-3, 5e-4};
  double t_end = 100.0;
  double cfl = 0.4;
  double checkpoint_base = 1.0;  // checkpoints at base, 2*base, 4*base, ...
  int ic_kx = 1;
  double ic_y_lo = 0.4;
  double ic_y_hi = 0.6;
  uint64_t seed = 1234;
  MultiplierConfig mult;
  int stability_k_max = 8;
  bool auto_accept_convex = false;
  std::vector<int> wave_k_list{1, 2, 4, 8};
  int wave_n_refine = 513;
  std::string out_dir = "out";
  bool svg = true;
  int threads = 1;

  std::string canonical() const;
  uint64_t hash() const;  // recorded in every output file
};

// Applies defaults, then overrides from m, then validates ranges.
// Unknown keys and out-of-range values raise BadConfig.
CampaignSpec spec_from_config(const ConfigMap& m);

// Round-trips: parse(default_config_text()) reproduces the defaults.
std::string default_config_text();

// Typed accessors shared with tests; BadConfig on malformed values.
double cfg_num(const ConfigMap& m, const std::string& key, double dflt);
int cfg_int(const ConfigMap& m, const std::string& key, int dflt);
bool cfg_bool(const ConfigMap& m, const std::string& key, bool dflt);
std::string cfg_str(const ConfigMap& m, const std::string& key, const std::string& dflt);
std::vector<double> cfg_list(const ConfigMap& m, const std::string& key,
                             const std::vector<double>& dflt);

}  // namespace shearlab
