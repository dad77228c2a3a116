#include "mfmc/io/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mfmc {

namespace {

std::string trim(const std::string& s) {
  std::size_t lo = 0;
  std::size_t hi = s.size();
  while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
  while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
  return s.substr(lo, hi - lo);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::string section;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::runtime_error("config: malformed section header at line " +
                                 std::to_string(line_no));
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config: expected key = value at line " +
                               std::to_string(line_no));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error("config: empty key at line " + std::to_string(line_no));
    }
    const std::string full = section.empty() ? key : section + "." + key;
    if (cfg.entries_.count(full) != 0) {
      throw std::runtime_error("config: duplicate key '" + full + "'");
    }
    cfg.entries_[full] = value;
  }
  return cfg;
}

std::string KeyValueConfig::lookup(const std::string& section, const std::string& key,
                                   bool* found) {
  const std::string full = section.empty() ? key : section + "." + key;
  auto it = entries_.find(full);
  if (it == entries_.end()) {
    *found = false;
    return {};
  }
  consumed_.insert(full);
  *found = true;
  return it->second;
}

bool KeyValueConfig::has(const std::string& section, const std::string& key) const {
  const std::string full = section.empty() ? key : section + "." + key;
  return entries_.count(full) != 0;
}

std::string KeyValueConfig::get_string(const std::string& section,
                                       const std::string& key,
                                       const std::string& fallback) {
  bool found = false;
  std::string v = lookup(section, key, &found);
  return found ? v : fallback;
}

std::string KeyValueConfig::require_string(const std::string& section,
                                           const std::string& key) {
  bool found = false;
  std::string v = lookup(section, key, &found);
  if (!found) {
    throw std::runtime_error("config: missing required key '" +
                             (section.empty() ? key : section + "." + key) + "'");
  }
  return v;
}

double KeyValueConfig::get_double(const std::string& section, const std::string& key,
                                  double fallback) {
  bool found = false;
  const std::string v = lookup(section, key, &found);
  if (!found) return fallback;
  try {
    std::size_t pos = 0;
    const double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw std::runtime_error("config: key '" + section + "." + key +
                             "' is not a number: '" + v + "'");
  }
}

long KeyValueConfig::get_long(const std::string& section, const std::string& key,
                              long fallback) {
  bool found = false;
  const std::string v = lookup(section, key, &found);
  if (!found) return fallback;
  try {
    std::size_t pos = 0;
    const long out = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw std::runtime_error("config: key '" + section + "." + key +
                             "' is not an integer: '" + v + "'");
  }
}

std::uint64_t KeyValueConfig::get_u64(const std::string& section,
                                      const std::string& key, std::uint64_t fallback) {
  bool found = false;
  const std::string v = lookup(section, key, &found);
  if (!found) return fallback;
  try {
    std::size_t pos = 0;
    const unsigned long long out = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<std::uint64_t>(out);
  } catch (const std::exception&) {
    throw std::runtime_error("config: key '" + section + "." + key +
                             "' is not an unsigned integer: '" + v + "'");
  }
}

void KeyValueConfig::ensure_all_consumed() const {
  std::string unknown;
  for (const auto& [key, value] : entries_) {
    if (consumed_.count(key) == 0) {
      if (!unknown.empty()) unknown += ", ";
      unknown += key;
    }
  }
  if (!unknown.empty()) {
    throw std::runtime_error("config: unknown keys: " + unknown);
  }
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "toy") return ExperimentKind::Toy;
  if (name == "lgcp") return ExperimentKind::Lgcp;
  if (name == "lv") return ExperimentKind::Lv;
  if (name == "pde") return ExperimentKind::Pde;
  if (name == "gp") return ExperimentKind::Gp;
  throw std::runtime_error("config: unknown experiment '" + name + "'");
}

std::string experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Toy: return "toy";
    case ExperimentKind::Lgcp: return "lgcp";
    case ExperimentKind::Lv: return "lv";
    case ExperimentKind::Pde: return "pde";
    case ExperimentKind::Gp: return "gp";
  }
  return "?";
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.experiment = kind;
  switch (kind) {
    case ExperimentKind::Toy:
      cfg.sampler = SamplerKind::Mh;
      cfg.chains = 4;
      cfg.iterations = 10'000;
      cfg.burn_in = 2'000;
      cfg.thin = 2;
      cfg.gamma0 = 0.5;
      cfg.fixed_k = 100;
      cfg.proposal_scale = 0.3;
      break;
    case ExperimentKind::Lgcp:
      cfg.sampler = SamplerKind::Ess;
      cfg.chains = 4;
      cfg.iterations = 10'000;
      cfg.burn_in = 1'000;
      cfg.thin = 3;
      cfg.gamma0 = 0.08;
      cfg.fixed_k = 100;
      break;
    case ExperimentKind::Lv:
      cfg.sampler = SamplerKind::Ess;
      cfg.chains = 4;
      cfg.iterations = 10'000;
      cfg.burn_in = 5'000;
      cfg.thin = 3;
      cfg.gamma0 = 0.12;
      cfg.fixed_k = 20;
      break;
    case ExperimentKind::Pde:
      cfg.sampler = SamplerKind::Mh;
      cfg.chains = 1;
      cfg.iterations = 5'000;
      cfg.burn_in = 0;
      cfg.thin = 1;
      cfg.gamma0 = 0.25;
      cfg.fixed_k = 12;
      cfg.proposal_scale = 0.3;
      cfg.pde.max_energy_evals = 4'000;  // annealed K drifts to fine grids
      break;
    case ExperimentKind::Gp:
      cfg.sampler = SamplerKind::Mh;
      cfg.chains = 2;
      cfg.iterations = 5'000;
      cfg.burn_in = 1'000;
      cfg.thin = 1;
      cfg.gamma0 = 0.1;
      cfg.fixed_k = 100;
      cfg.proposal_scale = 2.0;
      break;
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  if (chains < 1) throw std::runtime_error("config: chains must be >= 1");
  if (iterations < 1) throw std::runtime_error("config: iterations must be >= 1");
  if (burn_in < 0 || burn_in >= iterations) {
    throw std::runtime_error("config: need 0 <= burn_in < iterations");
  }
  if (thin < 1) throw std::runtime_error("config: thin must be >= 1");
  if (mode == RunMode::MultiFidelity && (!(gamma0 > 0.0) || !(gamma0 < 1.0))) {
    throw std::runtime_error("config: gamma0 must be in (0,1) for multi-fidelity");
  }
  if (mode == RunMode::SingleFidelity && fixed_k < 1) {
    throw std::runtime_error("config: k must be >= 1 for single-fidelity");
  }
  if (mode == RunMode::TwoStage && (k_hf < 1 || k_lf < 1)) {
    throw std::runtime_error("config: two-stage needs k_hf >= 1 and k_lf >= 1");
  }
  if (mode == RunMode::TwoStage && sampler != SamplerKind::Mh) {
    throw std::runtime_error("config: two-stage mode requires the mh sampler");
  }
  if (!(proposal_scale > 0.0)) {
    throw std::runtime_error("config: proposal scale must be positive");
  }
  if (!(slice_width > 0.0)) {
    throw std::runtime_error("config: slice width must be positive");
  }
  if (experiment == ExperimentKind::Lv && lv.solver != "rk4" && lv.solver != "euler") {
    throw std::runtime_error("config: lv solver must be rk4 or euler");
  }
  if (experiment == ExperimentKind::Lgcp && lgcp.dataset.empty()) {
    throw std::runtime_error("config: lgcp requires a dataset path");
  }
}

namespace {

SamplerKind parse_sampler(const std::string& name) {
  if (name == "mh") return SamplerKind::Mh;
  if (name == "slice") return SamplerKind::Slice;
  if (name == "ess") return SamplerKind::Ess;
  throw std::runtime_error("config: unknown sampler '" + name + "'");
}

RunMode parse_mode(const std::string& name) {
  if (name == "single-fidelity") return RunMode::SingleFidelity;
  if (name == "multi-fidelity") return RunMode::MultiFidelity;
  if (name == "two-stage") return RunMode::TwoStage;
  throw std::runtime_error("config: unknown mode '" + name + "'");
}

std::string sampler_token(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::Mh: return "mh";
    case SamplerKind::Slice: return "slice";
    case SamplerKind::Ess: return "ess";
  }
  return "?";
}

std::string mode_token(RunMode mode) {
  switch (mode) {
    case RunMode::SingleFidelity: return "single-fidelity";
    case RunMode::MultiFidelity: return "multi-fidelity";
    case RunMode::TwoStage: return "two-stage";
  }
  return "?";
}

ExperimentConfig build(KeyValueConfig& kv) {
  const ExperimentKind kind = parse_experiment_kind(kv.require_string("", "experiment"));
  ExperimentConfig cfg = default_config(kind);

  cfg.sampler = parse_sampler(kv.get_string("", "sampler", sampler_token(cfg.sampler)));
  cfg.mode = parse_mode(kv.get_string("", "mode", mode_token(cfg.mode)));

  cfg.chains = kv.get_long("run", "chains", cfg.chains);
  cfg.iterations = kv.get_long("run", "iterations", cfg.iterations);
  cfg.burn_in = kv.get_long("run", "burn_in", cfg.burn_in);
  cfg.thin = kv.get_long("run", "thin", cfg.thin);
  cfg.seed = kv.get_u64("run", "seed", cfg.seed);

  cfg.gamma0 = kv.get_double("fidelity", "gamma0", cfg.gamma0);
  cfg.fixed_k = kv.get_long("fidelity", "k", cfg.fixed_k);
  cfg.k_hf = kv.get_long("fidelity", "k_hf", cfg.k_hf);
  cfg.k_lf = kv.get_long("fidelity", "k_lf", cfg.k_lf);
  cfg.k_max = kv.get_long("fidelity", "k_max", cfg.k_max);
  const std::string scheme = kv.get_string("fidelity", "scheme", "russian-roulette");
  if (scheme == "russian-roulette") {
    cfg.scheme = EstimatorScheme::RussianRoulette;
  } else if (scheme == "single-term") {
    cfg.scheme = EstimatorScheme::SingleTerm;
  } else {
    throw std::runtime_error("config: unknown estimator scheme '" + scheme + "'");
  }

  cfg.proposal_scale = kv.get_double("sampler", "scale", cfg.proposal_scale);
  cfg.slice_width = kv.get_double("sampler", "slice_width", cfg.slice_width);

  cfg.toy.n = kv.get_long("model", "n", cfg.toy.n);
  switch (kind) {
    case ExperimentKind::Lgcp:
      cfg.lgcp.dataset = kv.get_string("model", "dataset", cfg.lgcp.dataset);
      cfg.lgcp.origin = kv.get_double("model", "origin", cfg.lgcp.origin);
      cfg.lgcp.domain_lo = kv.get_double("model", "domain_lo", cfg.lgcp.domain_lo);
      cfg.lgcp.domain_hi = kv.get_double("model", "domain_hi", cfg.lgcp.domain_hi);
      cfg.lgcp.lengthscale = kv.get_double("model", "lengthscale", cfg.lgcp.lengthscale);
      cfg.lgcp.kernel_variance =
          kv.get_double("model", "kernel_variance", cfg.lgcp.kernel_variance);
      cfg.lgcp.offset_c = kv.get_long("model", "offset_c", cfg.lgcp.offset_c);
      cfg.lgcp.query = kv.get_double("model", "query", cfg.lgcp.query);
      break;
    case ExperimentKind::Lv:
      cfg.lv.dataset = kv.get_string("model", "dataset", cfg.lv.dataset);
      cfg.lv.sigma = kv.get_double("model", "sigma", cfg.lv.sigma);
      cfg.lv.dt_s = kv.get_double("model", "dt_s", cfg.lv.dt_s);
      cfg.lv.dt_c = kv.get_double("model", "dt_c", cfg.lv.dt_c);
      cfg.lv.solver = kv.get_string("model", "solver", cfg.lv.solver);
      cfg.lv.synth_noise = kv.get_double("model", "synth_noise", cfg.lv.synth_noise);
      cfg.lv.synth_n = kv.get_long("model", "synth_n", cfg.lv.synth_n);
      cfg.lv.synth_t_max = kv.get_double("model", "synth_t_max", cfg.lv.synth_t_max);
      break;
    case ExperimentKind::Pde:
      cfg.pde.alpha0 = kv.get_double("model", "alpha0", cfg.pde.alpha0);
      cfg.pde.beta0 = kv.get_double("model", "beta0", cfg.pde.beta0);
      cfg.pde.t0 = kv.get_double("model", "t0", cfg.pde.t0);
      cfg.pde.max_energy_evals =
          kv.get_long("model", "max_energy_evals", cfg.pde.max_energy_evals);
      cfg.pde.init_alpha = kv.get_double("model", "init_alpha", cfg.pde.init_alpha);
      cfg.pde.init_beta = kv.get_double("model", "init_beta", cfg.pde.init_beta);
      break;
    case ExperimentKind::Gp:
      cfg.gp.n = kv.get_long("model", "n", cfg.gp.n);
      cfg.gp.theta0 = kv.get_double("model", "theta0", cfg.gp.theta0);
      cfg.gp.noise_var = kv.get_double("model", "noise_var", cfg.gp.noise_var);
      cfg.gp.x_max = kv.get_double("model", "x_max", cfg.gp.x_max);
      cfg.gp.nu0 = kv.get_double("model", "nu0", cfg.gp.nu0);
      cfg.gp.nu1 = kv.get_double("model", "nu1", cfg.gp.nu1);
      cfg.gp.precond_rank = kv.get_long("model", "precond_rank", cfg.gp.precond_rank);
      break;
    case ExperimentKind::Toy:
      break;
  }

  kv.ensure_all_consumed();
  cfg.validate();
  return cfg;
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  KeyValueConfig kv = KeyValueConfig::parse_file(path);
  return build(kv);
}

ExperimentConfig config_from_text(const std::string& text) {
  KeyValueConfig kv = KeyValueConfig::parse_string(text);
  return build(kv);
}

}  // namespace mfmc
