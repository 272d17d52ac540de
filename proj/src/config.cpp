#include "cfthp/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace cfthp {

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  return serialize_config(a) == serialize_config(b);
}

std::string format_real(Real value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  if (trim(value).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = value.find(',', start);
    out.push_back(trim(std::string_view(value).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

Real to_real(const std::string& key, const std::string& text) {
  Real v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

long long to_int(const std::string& key, const std::string& text) {
  long long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("config: '" + key + "' expects an integer, got '" + text + "'");
  }
  return v;
}

Seed to_seed(const std::string& key, const std::string& text) {
  Seed v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("config: '" + key + "' expects an unsigned integer, got '" + text + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ConfigError("config: '" + key + "' expects true or false, got '" + text + "'");
}

std::string join_reals(const std::vector<Real>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_real(values[i]);
  }
  return out;
}

using Setter = std::function<void(ScenarioConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto real = [&t](const char* key, auto member) {
      t[key] = [member](ScenarioConfig& c, const std::string& k, const std::string& v) {
        member(c) = to_real(k, v);
      };
    };
    auto count = [&t](const char* key, auto member) {
      t[key] = [member](ScenarioConfig& c, const std::string& k, const std::string& v) {
        const long long n = to_int(k, v);
        if (n < 1) throw ConfigError("config: '" + k + "' must be positive");
        member(c) = static_cast<Eigen::Index>(n);
      };
    };
    count("network.n_aps", [](ScenarioConfig& c) -> Eigen::Index& { return c.scenario.n_aps; });
    count("network.n_users", [](ScenarioConfig& c) -> Eigen::Index& { return c.scenario.n_users; });
    real("network.side_m", [](ScenarioConfig& c) -> Real& { return c.scenario.side_m; });
    real("propagation.f_mhz", [](ScenarioConfig& c) -> Real& { return c.scenario.f_mhz; });
    real("propagation.h_ap_m", [](ScenarioConfig& c) -> Real& { return c.scenario.h_ap; });
    real("propagation.h_u_m", [](ScenarioConfig& c) -> Real& { return c.scenario.h_u; });
    real("propagation.shadow_sigma_db", [](ScenarioConfig& c) -> Real& { return c.scenario.shadow_sigma_db; });
    real("propagation.d0_m", [](ScenarioConfig& c) -> Real& { return c.scenario.d0_m; });
    real("propagation.d1_m", [](ScenarioConfig& c) -> Real& { return c.scenario.d1_m; });
    real("noise.t0_k", [](ScenarioConfig& c) -> Real& { return c.scenario.t0_k; });
    real("noise.kb", [](ScenarioConfig& c) -> Real& { return c.scenario.kb; });
    real("noise.bandwidth_hz", [](ScenarioConfig& c) -> Real& { return c.scenario.bandwidth_hz; });
    real("noise.noise_figure_db", [](ScenarioConfig& c) -> Real& { return c.scenario.noise_figure_db; });
    count("clustering.l_aps", [](ScenarioConfig& c) -> Eigen::Index& { return c.scenario.l_aps; });
    count("clustering.cluster_max", [](ScenarioConfig& c) -> Eigen::Index& { return c.scenario.cluster_max; });
    count("clustering.n_a", [](ScenarioConfig& c) -> Eigen::Index& { return c.scenario.n_a; });
    real("csit.sigma_e2", [](ScenarioConfig& c) -> Real& { return c.scenario.sigma_e2; });
    t["csit.tau_mode"] = [](ScenarioConfig& c, const std::string&, const std::string& v) {
      c.scenario.tau_mode = parse_tau_mode(v);
    };
    t["model.square_beta_d"] = [](ScenarioConfig& c, const std::string& k, const std::string& v) {
      c.scenario.square_beta_d = to_bool(k, v);
    };
    t["model.self_distortion"] = [](ScenarioConfig& c, const std::string&, const std::string& v) {
      c.scenario.self_distortion = parse_self_distortion(v);
    };
    t["model.modulation"] = [](ScenarioConfig& c, const std::string&, const std::string& v) {
      c.modulation = parse_modulation(v);
    };
    t["sweep.snr_grid_db"] = [](ScenarioConfig& c, const std::string& k, const std::string& v) {
      c.snr_grid_db.clear();
      for (const auto& item : split_list(v)) c.snr_grid_db.push_back(to_real(k, item));
    };
    t["sweep.csit_grid"] = [](ScenarioConfig& c, const std::string& k, const std::string& v) {
      c.csit_grid.clear();
      for (const auto& item : split_list(v)) c.csit_grid.push_back(to_real(k, item));
    };
    real("sweep.fixed_snr_db", [](ScenarioConfig& c) -> Real& { return c.fixed_snr_db; });
    t["sweep.precoders"] = [](ScenarioConfig& c, const std::string&, const std::string& v) {
      c.precoders.clear();
      for (const auto& item : split_list(v)) c.precoders.push_back(parse_precoder_label(item));
    };
    count("monte_carlo.n_outer", [](ScenarioConfig& c) -> Eigen::Index& { return c.n_outer; });
    count("monte_carlo.n_inner", [](ScenarioConfig& c) -> Eigen::Index& { return c.n_inner; });
    t["monte_carlo.seed"] = [](ScenarioConfig& c, const std::string& k, const std::string& v) {
      c.seed = to_seed(k, v);
    };
    t["output.output_dir"] = [](ScenarioConfig& c, const std::string&, const std::string& v) {
      c.output_dir = v;
    };
    return t;
  }();
  return table;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig config;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config line " + std::to_string(line_no) + ": unterminated section");
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = section + "." + trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    try {
      it->second(config, key, value);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  try {
    config.scenario.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (config.precoders.empty()) throw ConfigError("config: sweep.precoders is empty");
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& c) {
  const auto& s = c.scenario;
  std::ostringstream out;
  auto kv = [&out](const char* key, const std::string& value) {
    out << key << " = " << value << '\n';
  };
  auto num = [](Real v) { return format_real(v); };
  auto idx = [](Eigen::Index v) { return std::to_string(v); };

  out << "[network]\n";
  kv("n_aps", idx(s.n_aps));
  kv("n_users", idx(s.n_users));
  kv("side_m", num(s.side_m));
  out << "\n[propagation]\n";
  kv("f_mhz", num(s.f_mhz));
  kv("h_ap_m", num(s.h_ap));
  kv("h_u_m", num(s.h_u));
  kv("shadow_sigma_db", num(s.shadow_sigma_db));
  kv("d0_m", num(s.d0_m));
  kv("d1_m", num(s.d1_m));
  out << "\n[noise]\n";
  kv("t0_k", num(s.t0_k));
  kv("kb", num(s.kb));
  kv("bandwidth_hz", num(s.bandwidth_hz));
  kv("noise_figure_db", num(s.noise_figure_db));
  out << "\n[clustering]\n";
  kv("l_aps", idx(s.l_aps));
  kv("cluster_max", idx(s.cluster_max));
  kv("n_a", idx(s.n_a));
  out << "\n[csit]\n";
  kv("sigma_e2", num(s.sigma_e2));
  kv("tau_mode", std::string(to_string(s.tau_mode)));
  out << "\n[model]\n";
  kv("square_beta_d", s.square_beta_d ? "true" : "false");
  kv("self_distortion", std::string(to_string(s.self_distortion)));
  kv("modulation", std::string(to_string(c.modulation)));
  out << "\n[sweep]\n";
  kv("snr_grid_db", join_reals(c.snr_grid_db));
  kv("csit_grid", join_reals(c.csit_grid));
  kv("fixed_snr_db", num(c.fixed_snr_db));
  std::string labels;
  for (std::size_t i = 0; i < c.precoders.size(); ++i) {
    if (i) labels += ", ";
    labels += label(c.precoders[i]);
  }
  kv("precoders", labels);
  out << "\n[monte_carlo]\n";
  kv("n_outer", idx(c.n_outer));
  kv("n_inner", idx(c.n_inner));
  kv("seed", std::to_string(c.seed));
  out << "\n[output]\n";
  kv("output_dir", c.output_dir);
  return out.str();
}

std::string config_hash(const ScenarioConfig& config) {
  ScenarioConfig hashed = config;
  hashed.output_dir.clear();
  const std::string text = serialize_config(hashed);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cfthp
