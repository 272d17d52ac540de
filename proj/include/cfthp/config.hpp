// Sweep configuration and its plain-text format.
//
// Grammar (one item per line, surrounding whitespace ignored):
//
//   line    := blank | comment | section | entry
//   comment := ('#' | ';') any-text
//   section := '[' name ']'
//   entry   := key '=' value
//   value   := scalar | scalar { ',' scalar }      (lists)
//
// Keys are looked up as "section.key"; unknown keys and malformed values are
// errors. Booleans are true/false. Numbers use C locale syntax. See
// config/snr_sweep.ini for every key with its default.
#ifndef CFTHP_CONFIG_HPP
#define CFTHP_CONFIG_HPP

#include "cfthp/precoders.hpp"
#include "cfthp/scenario.hpp"
#include "cfthp/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace cfthp {

struct ScenarioConfig {
  ScenarioParams scenario;
  std::vector<Real> snr_grid_db{0.0, 5.0, 10.0, 15.0, 20.0};
  std::vector<Real> csit_grid{0.0, 0.01, 0.05, 0.1};  // sigma_e^2 values
  Real fixed_snr_db = 15.0;                             // SNR of the CSIT sweep
  Modulation modulation = Modulation::qpsk;
  std::vector<PrecoderKind> precoders = figure_precoders();
  Eigen::Index n_outer = 100;
  Eigen::Index n_inner = 100;
  Seed seed = 1;
  std::string output_dir = "results";

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&);
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

/// FNV-1a 64 of the canonical text with output_dir blanked, as 16 hex
/// digits. Results written to different directories share a hash.
std::string config_hash(const ScenarioConfig& config);

/// Shortest text that reads back to the same double.
std::string format_real(Real value);

}  // namespace cfthp

#endif  // CFTHP_CONFIG_HPP
