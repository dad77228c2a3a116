#ifndef MFMC_IO_CONFIG_HPP
#define MFMC_IO_CONFIG_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "mfmc/chain.hpp"

namespace mfmc {

// Flat `key = value` text with optional [section] headers and '#' comments.
// Typed getters record which keys were consumed so unknown keys can be
// reported by name after loading.
class KeyValueConfig {
public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback);
  std::string require_string(const std::string& section, const std::string& key);
  double get_double(const std::string& section, const std::string& key,
                    double fallback);
  long get_long(const std::string& section, const std::string& key, long fallback);
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback);

  // Throws listing every key that was never consumed by a getter.
  void ensure_all_consumed() const;

private:
  std::map<std::string, std::string> entries_;  // "section.key" -> value
  std::set<std::string> consumed_;

  std::string lookup(const std::string& section, const std::string& key,
                     bool* found);
};

enum class ExperimentKind { Toy, Lgcp, Lv, Pde, Gp };
enum class RunMode { SingleFidelity, MultiFidelity, TwoStage };

// Resolved experiment configuration: run layout, sampler, fidelity mode and
// model block. Defaults follow the per-experiment protocols; a config file
// overrides them field by field.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Toy;
  SamplerKind sampler = SamplerKind::Mh;
  RunMode mode = RunMode::MultiFidelity;

  long chains = 4;
  long iterations = 10'000;
  long burn_in = 2'000;
  long thin = 2;
  std::uint64_t seed = 20240801;

  double gamma0 = 0.1;
  long fixed_k = 100;
  long k_hf = 100;
  long k_lf = 5;
  long k_max = GeometricTruncation::kDefaultKMax;
  EstimatorScheme scheme = EstimatorScheme::RussianRoulette;

  double proposal_scale = 0.3;
  double slice_width = 1.0;

  struct ToyBlock {
    long n = 200;
  } toy;

  struct LgcpBlock {
    std::string dataset;        // path to event times (decimal years)
    double origin = 1850.0;     // subtracted from raw times
    double domain_lo = 0.0;     // <= 0 means derive from data
    double domain_hi = 0.0;
    double lengthscale = 20.0;
    double kernel_variance = 1.0;
    long offset_c = 10;
    double query = 12.0;        // intensity query location (origin-relative)
  } lgcp;

  struct LvBlock {
    std::string dataset;        // lynx-hare CSV; empty = synthetic
    double sigma = 0.25;
    double dt_s = 10.0;
    double dt_c = 50.0;
    std::string solver = "rk4";  // rk4 | euler
    double synth_noise = 0.8;
    long synth_n = 50;
    double synth_t_max = 10.0;
  } lv;

  struct PdeBlock {
    double alpha0 = 0.85;
    double beta0 = 0.21;
    double t0 = 1.0;
    long max_energy_evals = 0;
    double init_alpha = 0.0;
    double init_beta = 0.0;
  } pde;

  struct GpBlock {
    long n = 100;
    double theta0 = 45.0;
    double noise_var = 1.0;
    double x_max = 300.0;
    double nu0 = 3.8;
    double nu1 = 0.03;
    long precond_rank = 10;
  } gp;

  void validate() const;
};

ExperimentKind parse_experiment_kind(const std::string& name);
std::string experiment_name(ExperimentKind kind);

// Protocol defaults per experiment (chains, iterations, gamma0, sampler...).
ExperimentConfig default_config(ExperimentKind kind);

// Parse + validate a config file; every field defaults from the experiment's
// protocol table and unknown keys are an error.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_text(const std::string& text);

}  // namespace mfmc

#endif  // MFMC_IO_CONFIG_HPP
