// SNR and CSIT-quality sweeps, CSV/series output and the run manifest.
#ifndef CFTHP_HARNESS_HPP
#define CFTHP_HARNESS_HPP

#include "cfthp/config.hpp"
#include "cfthp/link_metrics.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace cfthp {

enum class SweepKind { snr, csit };

std::string_view sweep_column(SweepKind kind);  // "snr_db" or "sigma_e2"

struct SweepRow {
  Real sweep_value = 0.0;
  PrecoderKind precoder;
  Real esr = 0.0;
  Real esr_stderr = 0.0;
  Real excluded_draw_fraction = 0.0;
};

struct SweepResult {
  SweepKind kind = SweepKind::snr;
  Seed seed = 0;
  std::string config_hash;
  Eigen::Index n_outer = 0;
  Eigen::Index n_inner = 0;
  std::vector<SweepRow> rows;  // sweep point major, precoder minor

  const SweepRow& at(Real sweep_value, const PrecoderKind& kind) const;
};

struct RunOptions {
  unsigned workers = 1;
};

/// ESR of every configured precoder at every SNR grid point, with
/// sigma_e^2 taken from the scenario.
SweepResult run_snr_sweep(const ScenarioConfig& config, const RunOptions& options = {});

/// ESR of every configured precoder at every sigma_e^2 of the CSIT grid,
/// at the fixed sweep SNR.
SweepResult run_csit_sweep(const ScenarioConfig& config, const RunOptions& options = {});

inline constexpr int kCsvSchemaVersion = 1;

/// Header plus one row per (sweep point, precoder); '\n' line endings.
std::string format_csv(const SweepResult& result);
void write_csv(const SweepResult& result, const std::filesystem::path& path);

struct CsvRecord {
  std::string sweep;
  Real sweep_value = 0.0;
  std::string precoder;
  Real esr = 0.0;
  Real esr_stderr = 0.0;
  Real excluded_draw_fraction = 0.0;
  Eigen::Index n_outer = 0;
  Eigen::Index n_inner = 0;
  Seed seed = 0;
  std::string config_hash;
};

/// Parses and validates a results CSV; throws on any schema violation.
std::vector<CsvRecord> parse_csv(const std::string& text);

struct SeriesPoint {
  Real sweep_value = 0.0;
  Real esr = 0.0;
  Real esr_stderr = 0.0;
};

/// One "<label>.dat" file per precoder (columns: sweep_value esr esr_stderr)
/// and a series_manifest.json listing them. Returns the series file paths.
std::vector<std::filesystem::path> emit_plot_data(const SweepResult& result,
                                                  const std::filesystem::path& dir);
std::vector<SeriesPoint> read_series_file(const std::filesystem::path& path);

/// Runs a sweep into `out_dir`: results.csv, series/, and manifest.json. The
/// manifest is written with status "incomplete" before any compute and
/// rewritten as "complete" only after every output is on disk.
SweepResult run_to_directory(SweepKind kind, const ScenarioConfig& config,
                             const std::filesystem::path& out_dir,
                             const RunOptions& options = {});

}  // namespace cfthp

#endif  // CFTHP_HARNESS_HPP
