#include "cfthp/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace cfthp {

namespace fs = std::filesystem;

std::string_view sweep_column(SweepKind kind) {
  return kind == SweepKind::snr ? "snr_db" : "sigma_e2";
}

const SweepRow& SweepResult::at(Real sweep_value, const PrecoderKind& kind) const {
  for (const auto& row : rows) {
    if (row.sweep_value == sweep_value && row.precoder == kind) return row;
  }
  throw std::out_of_range("sweep result has no row for " + label(kind) + " at " +
                          format_real(sweep_value));
}

namespace {

struct Task {
  Real sweep_value;
  PrecoderKind kind;
  ScenarioParams params;
};

SweepResult run_tasks(SweepKind kind, const ScenarioConfig& config, std::vector<Task> tasks,
                      const RunOptions& options) {
  SweepResult result;
  result.kind = kind;
  result.seed = config.seed;
  result.config_hash = config_hash(config);
  result.n_outer = config.n_outer;
  result.n_inner = config.n_inner;
  result.rows.resize(tasks.size());

  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      try {
        const Scenario scenario = prepare_scenario(t.params, config.seed);
        const RateReport report =
            ergodic_sum_rate(scenario, t.kind, config.n_outer, config.n_inner, config.seed);
        result.rows[i] = SweepRow{t.sweep_value, t.kind, report.esr, report.esr_stderr,
                                  report.excluded_fraction()};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const unsigned n_workers =
      std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(tasks.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return result;
}

}  // namespace

SweepResult run_snr_sweep(const ScenarioConfig& config, const RunOptions& options) {
  if (config.snr_grid_db.empty()) throw std::invalid_argument("snr sweep: empty SNR grid");
  config.scenario.validate();
  std::vector<Task> tasks;
  for (Real snr_db : config.snr_grid_db) {
    for (const auto& kind : config.precoders) {
      ScenarioParams p = config.scenario;
      p.snr_db = snr_db;
      tasks.push_back({snr_db, kind, p});
    }
  }
  return run_tasks(SweepKind::snr, config, std::move(tasks), options);
}

SweepResult run_csit_sweep(const ScenarioConfig& config, const RunOptions& options) {
  if (config.csit_grid.empty()) throw std::invalid_argument("csit sweep: empty CSIT grid");
  config.scenario.validate();
  std::vector<Task> tasks;
  for (Real s2 : config.csit_grid) {
    for (const auto& kind : config.precoders) {
      ScenarioParams p = config.scenario;
      p.snr_db = config.fixed_snr_db;
      p.sigma_e2 = s2;
      p.validate();
      tasks.push_back({s2, kind, p});
    }
  }
  return run_tasks(SweepKind::csit, config, std::move(tasks), options);
}

namespace {

constexpr const char* kCsvHeader =
    "sweep,sweep_value,precoder,esr,esr_stderr,excluded_draw_fraction,n_outer,n_inner,seed,"
    "config_hash";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_field(const std::string& text, const char* name, std::size_t line) {
  T v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw std::runtime_error("csv line " + std::to_string(line) + ": bad " + name + " '" +
                             text + "'");
  }
  return v;
}

void write_text_atomically(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

std::string series_file_name(const PrecoderKind& kind) { return label(kind) + ".dat"; }

}  // namespace

std::string format_csv(const SweepResult& result) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& row : result.rows) {
    out += sweep_column(result.kind);
    out += ',' + format_real(row.sweep_value);
    out += ',' + label(row.precoder);
    out += ',' + format_real(row.esr);
    out += ',' + format_real(row.esr_stderr);
    out += ',' + format_real(row.excluded_draw_fraction);
    out += ',' + std::to_string(result.n_outer);
    out += ',' + std::to_string(result.n_inner);
    out += ',' + std::to_string(result.seed);
    out += ',' + result.config_hash;
    out += '\n';
  }
  return out;
}

void write_csv(const SweepResult& result, const fs::path& path) {
  write_text_atomically(path, format_csv(result));
}

std::vector<CsvRecord> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("csv: missing or unexpected header");
  }
  std::vector<CsvRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": CRLF line ending");
    }
    const auto f = split_fields(line);
    if (f.size() != 10) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 10 fields");
    }
    CsvRecord r;
    r.sweep = f[0];
    if (r.sweep != "snr_db" && r.sweep != "sigma_e2") {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad sweep column");
    }
    r.sweep_value = parse_field<Real>(f[1], "sweep_value", line_no);
    r.precoder = label(parse_precoder_label(f[2]));
    r.esr = parse_field<Real>(f[3], "esr", line_no);
    r.esr_stderr = parse_field<Real>(f[4], "esr_stderr", line_no);
    r.excluded_draw_fraction = parse_field<Real>(f[5], "excluded_draw_fraction", line_no);
    r.n_outer = parse_field<Eigen::Index>(f[6], "n_outer", line_no);
    r.n_inner = parse_field<Eigen::Index>(f[7], "n_inner", line_no);
    r.seed = parse_field<Seed>(f[8], "seed", line_no);
    r.config_hash = f[9];
    if (r.config_hash.size() != 16) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad config hash");
    }
    if (!(r.esr >= 0.0) || !(r.esr_stderr >= 0.0) || r.excluded_draw_fraction < 0.0 ||
        r.excluded_draw_fraction > 1.0) {
      throw std::runtime_error("csv line " + std::to_string(line_no) + ": value out of range");
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<fs::path> emit_plot_data(const SweepResult& result, const fs::path& dir) {
  if (result.rows.empty()) {
    throw std::invalid_argument("emit_plot_data: empty result");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("emit_plot_data: cannot create '" + dir.string() + "': " + ec.message());
  }

  std::vector<PrecoderKind> order;
  for (const auto& row : result.rows) {
    if (std::find(order.begin(), order.end(), row.precoder) == order.end()) {
      order.push_back(row.precoder);
    }
  }

  std::vector<fs::path> files;
  nlohmann::json manifest;
  manifest["schema_version"] = kCsvSchemaVersion;
  manifest["sweep"] = std::string(sweep_column(result.kind));
  manifest["columns"] = {std::string(sweep_column(result.kind)), "esr", "esr_stderr"};
  manifest["seed"] = result.seed;
  manifest["config_hash"] = result.config_hash;
  manifest["series"] = nlohmann::json::array();
  for (const auto& kind : order) {
    std::string text = "# " + label(kind) + ": " + std::string(sweep_column(result.kind)) +
                       " esr esr_stderr\n";
    for (const auto& row : result.rows) {
      if (!(row.precoder == kind)) continue;
      text += format_real(row.sweep_value) + ' ' + format_real(row.esr) + ' ' +
              format_real(row.esr_stderr) + '\n';
    }
    const fs::path path = dir / series_file_name(kind);
    try {
      write_text_atomically(path, text);
    } catch (const std::exception& e) {
      throw std::runtime_error("emit_plot_data: " + std::string(e.what()));
    }
    files.push_back(path);
    manifest["series"].push_back({{"label", label(kind)}, {"file", series_file_name(kind)}});
  }
  write_text_atomically(dir / "series_manifest.json", manifest.dump(2) + "\n");
  return files;
}

std::vector<SeriesPoint> read_series_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open series file '" + path.string() + "'");
  std::vector<SeriesPoint> points;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string a, b, c;
    fields >> a >> b >> c;
    SeriesPoint p;
    p.sweep_value = parse_field<Real>(a, "sweep_value", points.size() + 1);
    p.esr = parse_field<Real>(b, "esr", points.size() + 1);
    p.esr_stderr = parse_field<Real>(c, "esr_stderr", points.size() + 1);
    points.push_back(p);
  }
  return points;
}

namespace {

nlohmann::json manifest_json(SweepKind kind, const ScenarioConfig& config, const char* status) {
  nlohmann::json m;
  m["schema_version"] = kCsvSchemaVersion;
  m["status"] = status;
  m["command"] = kind == SweepKind::snr ? "snr-sweep" : "csit-sweep";
  m["seed"] = config.seed;
  m["config_hash"] = config_hash(config);
  m["csv"] = "results.csv";
  m["csv_columns"] = nlohmann::json::array();
  std::string header = kCsvHeader;
  std::size_t start = 0;
  while (true) {
    const auto comma = header.find(',', start);
    m["csv_columns"].push_back(header.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  m["series_dir"] = "series";
  m["config"] = serialize_config(config);
  return m;
}

}  // namespace

SweepResult run_to_directory(SweepKind kind, const ScenarioConfig& config, const fs::path& out_dir,
                             const RunOptions& options) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory '" + out_dir.string() + "': " +
                             ec.message());
  }
  const fs::path manifest = out_dir / "manifest.json";
  write_text_atomically(manifest, manifest_json(kind, config, "incomplete").dump(2) + "\n");

  SweepResult result = kind == SweepKind::snr ? run_snr_sweep(config, options)
                                              : run_csit_sweep(config, options);
  write_csv(result, out_dir / "results.csv");
  emit_plot_data(result, out_dir / "series");

  nlohmann::json done = manifest_json(kind, config, "complete");
  done["rows"] = result.rows.size();
  write_text_atomically(manifest, done.dump(2) + "\n");
  return result;
}

}  // namespace cfthp
