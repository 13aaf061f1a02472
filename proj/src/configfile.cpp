#include "shearlab/configfile.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "shearlab/common.hpp"
#include "shearlab/csv.hpp"

namespace shearlab {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
  bool in_quote = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_quote = !in_quote;
    if (line[i] == '#' && !in_quote) return line.substr(0, i);
  }
  return line;
}

double parse_num(const std::string& key, const std::string& raw) {
  char* end = nullptr;
  double v = std::strtod(raw.c_str(), &end);
  require(end != nullptr && *end == '\0' && !raw.empty(), ErrorCode::BadConfig,
          "expected a number for " + key + ", got '" + raw + "'");
  return v;
}

// The canonical form prints every field on its own sorted line so the hash
// is stable against reordering and comments in the user's file.
void put(std::ostringstream& out, const std::string& key, const std::string& v) {
  out << key << "=" << v << "\n";
}
void put(std::ostringstream& out, const std::string& key, double v) {
  out << key << "=" << [&] {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  }() << "\n";
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> k = {
      "profile.family",      "profile.amplitude", "profile.bump_lo",
      "profile.bump_hi",     "profile.theta0",    "profile.s0",
      "profile.table_path",  "grid.nx",           "grid.ny",
      "grid.band",           "sim.eps",           "sim.t_end",
      "sim.cfl",             "sim.checkpoint_base", "sim.ic_kx",
      "sim.ic_y_lo",         "sim.ic_y_hi",       "sim.seed",
      "multiplier.s",        "multiplier.sigma",  "multiplier.mu",
      "multiplier.c_kappa",  "multiplier.lambda0", "multiplier.lambda_prime",
      "multiplier.delta_lambda", "multiplier.q_tilde", "multiplier.k_M",
      "multiplier.K_v",      "multiplier.K_D",
      "stability.k_max",     "stability.auto_accept_convex",
      "wave.k_list",         "wave.n_refine",     "output.dir",
      "output.svg",          "output.threads"};
  return k;
}

}  // namespace

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap m;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      require(line.back() == ']', ErrorCode::BadConfig,
              "unterminated section header at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      require(!section.empty(), ErrorCode::BadConfig,
              "empty section name at line " + std::to_string(lineno));
      continue;
    }
    size_t eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::BadConfig,
            "expected key = value at line " + std::to_string(lineno));
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    require(!key.empty(), ErrorCode::BadConfig, "empty key at line " + std::to_string(lineno));
    if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
      val = val.substr(1, val.size() - 2);
    std::string full = section.empty() ? key : section + "." + key;
    require(m.find(full) == m.end(), ErrorCode::BadConfig, "duplicate key: " + full);
    m[full] = val;
  }
  return m;
}

ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::IoError, "cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

double cfg_num(const ConfigMap& m, const std::string& key, double dflt) {
  auto it = m.find(key);
  if (it == m.end()) return dflt;
  return parse_num(key, it->second);
}

int cfg_int(const ConfigMap& m, const std::string& key, int dflt) {
  double v = cfg_num(m, key, double(dflt));
  require(v == std::floor(v) && std::fabs(v) < 2147483647.0, ErrorCode::BadConfig,
          "expected an integer for " + key);
  return int(v);
}

bool cfg_bool(const ConfigMap& m, const std::string& key, bool dflt) {
  auto it = m.find(key);
  if (it == m.end()) return dflt;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  fail(ErrorCode::BadConfig, "expected true/false for " + key);
}

std::string cfg_str(const ConfigMap& m, const std::string& key, const std::string& dflt) {
  auto it = m.find(key);
  return it == m.end() ? dflt : it->second;
}

std::vector<double> cfg_list(const ConfigMap& m, const std::string& key,
                             const std::vector<double>& dflt) {
  auto it = m.find(key);
  if (it == m.end()) return dflt;
  std::string raw = trim(it->second);
  require(raw.size() >= 2 && raw.front() == '[' && raw.back() == ']', ErrorCode::BadConfig,
          "expected [a, b, ...] for " + key);
  raw = raw.substr(1, raw.size() - 2);
  std::vector<double> out;
  std::string cur;
  for (char c : raw) {
    if (c == ',') {
      out.push_back(parse_num(key, trim(cur)));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!trim(cur).empty()) out.push_back(parse_num(key, trim(cur)));
  return out;
}

std::string CampaignSpec::canonical() const {
  std::ostringstream out;
  put(out, "grid.band", double(band));
  put(out, "grid.nx", double(nx));
  put(out, "grid.ny", double(ny));
  put(out, "multiplier.K_D", mult.K_D);
  put(out, "multiplier.K_v", mult.K_v);
  put(out, "multiplier.c_kappa", mult.c_kappa);
  put(out, "multiplier.delta_lambda", mult.delta_lambda);
  put(out, "multiplier.k_M", double(mult.k_M));
  put(out, "multiplier.lambda0", mult.lambda0);
  put(out, "multiplier.lambda_prime", mult.lambda_prime);
  put(out, "multiplier.mu", mult.mu);
  put(out, "multiplier.q_tilde", mult.q_tilde);
  put(out, "multiplier.s", mult.s);
  put(out, "multiplier.sigma", mult.sigma);
  out << "profile=" << profile.canonical() << "\n";
  {
    std::ostringstream eps;
    for (double e : eps_list) eps << format_g17(e) << ";";
    put(out, "sim.eps", eps.str());
  }
  put(out, "sim.cfl", cfl);
  put(out, "sim.checkpoint_base", checkpoint_base);
  put(out, "sim.ic_kx", double(ic_kx));
  put(out, "sim.ic_y_hi", ic_y_hi);
  put(out, "sim.ic_y_lo", ic_y_lo);
  put(out, "sim.seed", double(seed));
  put(out, "sim.t_end", t_end);
  put(out, "stability.auto_accept_convex", auto_accept_convex ? "1" : "0");
  put(out, "stability.k_max", double(stability_k_max));
  {
    std::ostringstream ks;
    for (int k : wave_k_list) ks << k << ";";
    put(out, "wave.k_list", ks.str());
  }
  put(out, "wave.n_refine", double(wave_n_refine));
  return out.str();
}

uint64_t CampaignSpec::hash() const { return fnv1a(canonical()); }

CampaignSpec spec_from_config(const ConfigMap& m) {
  for (const auto& [k, v] : m) {
    (void)v;
    require(known_keys().count(k) > 0, ErrorCode::BadConfig, "unknown config key: " + k);
  }
  CampaignSpec s;
  s.profile.family = cfg_str(m, "profile.family", s.profile.family);
  s.profile.amplitude = cfg_num(m, "profile.amplitude", s.profile.amplitude);
  s.profile.bump_lo = cfg_num(m, "profile.bump_lo", s.profile.bump_lo);
  s.profile.bump_hi = cfg_num(m, "profile.bump_hi", s.profile.bump_hi);
  s.profile.theta0 = cfg_num(m, "profile.theta0", s.profile.theta0);
  s.profile.s0 = cfg_num(m, "profile.s0", s.profile.s0);
  s.profile.table_path = cfg_str(m, "profile.table_path", s.profile.table_path);
  s.nx = cfg_int(m, "grid.nx", s.nx);
  s.ny = cfg_int(m, "grid.ny", s.ny);
  s.profile.n = s.ny;
  s.band = cfg_int(m, "grid.band", s.band);
  s.eps_list = cfg_list(m, "sim.eps", s.eps_list);
  s.t_end = cfg_num(m, "sim.t_end", s.t_end);
  s.cfl = cfg_num(m, "sim.cfl", s.cfl);
  s.checkpoint_base = cfg_num(m, "sim.checkpoint_base", s.checkpoint_base);
  s.ic_kx = cfg_int(m, "sim.ic_kx", s.ic_kx);
  s.ic_y_lo = cfg_num(m, "sim.ic_y_lo", s.ic_y_lo);
  s.ic_y_hi = cfg_num(m, "sim.ic_y_hi", s.ic_y_hi);
  {
    double seed = cfg_num(m, "sim.seed", double(s.seed));
    require(seed >= 0 && seed == std::floor(seed), ErrorCode::BadConfig,
            "sim.seed must be a nonnegative integer");
    s.seed = uint64_t(seed);
  }
  s.mult.s = cfg_num(m, "multiplier.s", s.mult.s);
  s.mult.sigma = cfg_num(m, "multiplier.sigma", s.mult.sigma);
  s.mult.mu = cfg_num(m, "multiplier.mu", s.mult.mu);
  s.mult.c_kappa = cfg_num(m, "multiplier.c_kappa", s.mult.c_kappa);
  s.mult.lambda0 = cfg_num(m, "multiplier.lambda0", s.mult.lambda0);
  s.mult.lambda_prime = cfg_num(m, "multiplier.lambda_prime", s.mult.lambda_prime);
  s.mult.delta_lambda = cfg_num(m, "multiplier.delta_lambda", s.mult.delta_lambda);
  s.mult.q_tilde = cfg_num(m, "multiplier.q_tilde", s.mult.q_tilde);
  s.mult.k_M = cfg_int(m, "multiplier.k_M", s.mult.k_M);
  s.mult.K_v = cfg_num(m, "multiplier.K_v", s.mult.K_v);
  s.mult.K_D = cfg_num(m, "multiplier.K_D", s.mult.K_D);
  s.stability_k_max = cfg_int(m, "stability.k_max", s.stability_k_max);
  s.auto_accept_convex = cfg_bool(m, "stability.auto_accept_convex", s.auto_accept_convex);
  {
    std::vector<double> dflt(s.wave_k_list.begin(), s.wave_k_list.end());
    std::vector<double> ks = cfg_list(m, "wave.k_list", dflt);
    s.wave_k_list.clear();
    for (double k : ks) {
      require(k == std::floor(k) && k >= 1, ErrorCode::BadConfig,
              "wave.k_list entries must be positive integers");
      s.wave_k_list.push_back(int(k));
    }
  }
  s.wave_n_refine = cfg_int(m, "wave.n_refine", s.wave_n_refine);
  s.out_dir = cfg_str(m, "output.dir", s.out_dir);
  s.svg = cfg_bool(m, "output.svg", s.svg);
  s.threads = cfg_int(m, "output.threads", s.threads);

  require(s.nx >= 8 && s.nx % 2 == 0, ErrorCode::BadConfig, "grid.nx must be even and >= 8");
  require(s.ny >= 33, ErrorCode::BadConfig, "grid.ny must be >= 33");
  require(s.band == 0 || s.band >= 8, ErrorCode::BadConfig, "grid.band must be 0 (auto) or >= 8");
  require(!s.eps_list.empty(), ErrorCode::BadConfig, "sim.eps must be nonempty");
  for (double e : s.eps_list)
    require(e >= 0 && e <= 0.01, ErrorCode::BadConfig, "sim.eps entries must lie in [0, 0.01]");
  require(s.t_end > 0, ErrorCode::BadConfig, "sim.t_end must be positive");
  require(s.cfl > 0 && s.cfl <= 1, ErrorCode::BadConfig, "sim.cfl must lie in (0, 1]");
  require(s.checkpoint_base > 0, ErrorCode::BadConfig, "sim.checkpoint_base must be positive");
  require(s.ic_kx >= 1 && s.ic_kx < s.nx / 3, ErrorCode::BadConfig,
          "sim.ic_kx must lie in [1, nx/3)");
  const double th = s.profile.theta0;
  require(s.ic_y_lo < s.ic_y_hi, ErrorCode::BadConfig, "sim.ic_y_lo must be < sim.ic_y_hi");
  require(s.ic_y_lo >= 3 * th && s.ic_y_hi <= 1 - 3 * th, ErrorCode::BadConfig,
          "initial data band must lie inside [3*theta0, 1-3*theta0]");
  s.mult.validate();
  require(s.mult.k_M <= s.nx / 3, ErrorCode::BadConfig,
          "multiplier.k_M must not exceed nx/3");
  require(s.stability_k_max >= 1, ErrorCode::BadConfig, "stability.k_max must be >= 1");
  require(s.wave_n_refine > s.ny, ErrorCode::BadConfig, "wave.n_refine must exceed grid.ny");
  require(s.threads >= 1 && s.threads <= 256, ErrorCode::BadConfig,
          "output.threads must lie in [1, 256]");
  return s;
}

std::string default_config_text() {
  return R"(# Campaign configuration.  Values shown are the defaults.

[profile]
family = "perturbed-couette"   # couette | perturbed-couette | convex-couette | tabulated
amplitude = 0.05               # bump amplitude added to u' (ignored for couette)
bump_lo = 0.45                 # support of the u'' bump, inside [4*theta0, 1-4*theta0]
bump_hi = 0.55
theta0 = 0.1                   # support margin, (0, 0.1]
s0 = 0.2                       # Gevrey index of the bump construction, (0, 1)
table_path = ""                # CSV y,u,u_prime,u_dprime (family = tabulated)

[grid]
nx = 128                       # periodic x resolution (even)
ny = 257                       # channel nodes including both walls
band = 0                       # kernel frequency half-width; 0 picks ny/3

[sim]
eps = [0.001, 0.0005]          # initial amplitudes, each in [0, 0.01]
t_end = 100.0
cfl = 0.4
checkpoint_base = 1.0          # checkpoints at base * 2^j
ic_kx = 1                      # initial-data x harmonic
ic_y_lo = 0.4                  # vertical support of the initial bump,
ic_y_hi = 0.6                  # inside [3*theta0, 1-3*theta0]
seed = 1234

[multiplier]
s = 0.75                       # bulk Gevrey index, (1/2, 1)
sigma = 5.5                    # Sobolev correction, > 5
mu = 1.0
c_kappa = 1.0
lambda0 = 0.4                  # initial Gevrey radius
lambda_prime = 0.2             # final radius target, 0 < lambda' < lambda0
delta_lambda = -1.0            # decay rate; negative derives the floor-safe default
q_tilde = 0.0                  # decay exponent in (1/2, s/8 + 7/16]; 0 derives the cap
k_M = 8                        # wave-operator mode cutoff
K_v = 1.0
K_D = 1.0

[stability]
k_max = 8
auto_accept_convex = false     # skip the spectral scan when u'' >= 0

[wave]
k_list = [1, 2, 4, 8]
n_refine = 513                 # refinement resolution for residual trends

[output]
dir = "out"
svg = true
threads = 1
)";
}

}  // namespace shearlab
