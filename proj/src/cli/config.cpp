#include "ddsim/cli/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ddsim/errors.hpp"

namespace ddsim::cli {

namespace {

struct KeyDef {
  std::string_view name;
  std::string_view alias;  // extra long-flag spelling, may be empty
  bool is_flag;
  std::string_view help;
};

constexpr KeyDef kKeys[] = {
    {"length-m", "", false, "Fiber length in meters (comma list sweeps)"},
    {"sequence", "", false, "free | cpmg | kdd (comma list sweeps)"},
    {"pulses", "", false, "Total plate count; KDD needs a multiple of 20 (comma list sweeps)"},
    {"base-phase-rad", "", false, "KDD base phase"},
    {"cpmg-axis-rad", "", false, "CPMG plate axis phase (default pi/2)"},
    {"error-sigma", "", false, "Relative plate rotation error sigma (comma list sweeps)"},
    {"rayleigh-sigma-deg-per-m", "rayleigh-sigma", false, "Rayleigh scale of the birefringence rate"},
    {"correlation-length-m", "", false, "Mean birefringence correlation length (0: independent segments)"},
    {"segments-per-interval", "", false, "Noise segments per inter-pulse interval"},
    {"trials", "", false, "Monte Carlo trials per configuration"},
    {"seed", "", false, "Master seed (env DDSIM_SEED is the lowest-precedence source)"},
    {"states", "", false, "Comma list of input states: H,V,D,A,R,L or custom:ar:ai:br:bi"},
    {"out", "", false, "Output directory"},
    {"threads", "", false, "Worker threads (0: all cores)"},
    {"kernel", "", false, "auto | scalar | avx2"},
    {"dump-profile", "", false, "Write trial 0's noise profile to this file"},
    {"dump-schedule", "", false, "Write trial 0's plate schedule to this file"},
    {"trajectory", "", true, "Record fidelity after every plate"},
    {"reproduce-figures", "", true, "Run the canned figure sweeps"},
    {"fixed-plate-count", "", true, "1 km figure keeps the 800-plate count instead of the density"},
};

std::string normalize_key(std::string_view raw) {
  std::string key(raw);
  std::replace(key.begin(), key.end(), '_', '-');
  for (const auto& def : kKeys) {
    if (key == def.name || (!def.alias.empty() && key == def.alias)) return std::string(def.name);
  }
  return {};
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    parts.push_back(trim(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            std::string_view expected) {
  throw UsageError("invalid value '" + value + "' for key '" + key + "': expected " +
                   std::string(expected));
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (value.empty() || ec != std::errc{} || ptr != end || !std::isfinite(out)) {
    bad_value(key, value, "a finite number");
  }
  return out;
}

template <typename Int>
Int to_integer(const std::string& key, const std::string& value) {
  Int out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (value.empty() || ec != std::errc{} || ptr != end) {
    bad_value(key, value, "an integer");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  std::string v = value;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, value, "true or false");
}

using Settings = std::map<std::string, std::string>;

const std::string* find(const Settings& s, const std::string& key) {
  auto it = s.find(key);
  return it == s.end() ? nullptr : &it->second;
}

// Applies every single-valued setting to `base`.
SimConfig base_config(const Settings& s) {
  SimConfig c;
  if (auto* v = find(s, "base-phase-rad")) c.schedule.base_phase_rad = to_double("base-phase-rad", *v);
  if (auto* v = find(s, "cpmg-axis-rad")) c.schedule.cpmg_axis_rad = to_double("cpmg-axis-rad", *v);
  if (auto* v = find(s, "rayleigh-sigma-deg-per-m")) {
    c.birefringence.rayleigh.scale_deg_per_m = to_double("rayleigh-sigma-deg-per-m", *v);
    if (c.birefringence.rayleigh.scale_deg_per_m < 0.0) {
      bad_value("rayleigh-sigma-deg-per-m", *v, "a value >= 0");
    }
  }
  if (auto* v = find(s, "correlation-length-m")) {
    c.birefringence.correlation_length_m = to_double("correlation-length-m", *v);
    if (c.birefringence.correlation_length_m < 0.0) {
      bad_value("correlation-length-m", *v, "a value >= 0");
    }
  }
  if (auto* v = find(s, "segments-per-interval")) {
    const auto n = to_integer<long long>("segments-per-interval", *v);
    if (n < 1) bad_value("segments-per-interval", *v, "an integer >= 1");
    c.segments_per_interval = static_cast<std::size_t>(n);
  }
  if (auto* v = find(s, "trials")) {
    const auto n = to_integer<long long>("trials", *v);
    if (n < 1) bad_value("trials", *v, "an integer >= 1");
    c.trials = static_cast<std::size_t>(n);
  }
  if (auto* v = find(s, "seed")) c.master_seed = to_integer<std::uint64_t>("seed", *v);
  if (auto* v = find(s, "states")) {
    c.input_states.clear();
    for (const auto& token : split_list(*v)) {
      try {
        c.input_states.push_back(parse_state(token));
      } catch (const UsageError& e) {
        throw UsageError("invalid value for key 'states': " + std::string(e.what()));
      }
    }
  }
  if (auto* v = find(s, "threads")) {
    const auto n = to_integer<long long>("threads", *v);
    if (n < 0) bad_value("threads", *v, "an integer >= 0");
    c.threads = static_cast<std::size_t>(n);
  }
  if (auto* v = find(s, "kernel")) {
    try {
      c.kernel = kernels::parse_kernel_kind(*v);
    } catch (const UsageError&) {
      bad_value("kernel", *v, "auto, scalar or avx2");
    }
  }
  if (auto* v = find(s, "trajectory")) c.record_trajectory = to_bool("trajectory", *v);
  return c;
}

std::vector<std::string> list_or(const Settings& s, const std::string& key,
                                 std::vector<std::string> fallback) {
  if (auto* v = find(s, key)) return split_list(*v);
  return fallback;
}

std::vector<SimConfig> expand(const Settings& s) {
  const SimConfig base = base_config(s);
  const auto lengths = list_or(s, "length-m", {"500"});
  const auto sequences = list_or(s, "sequence", {"kdd"});
  const auto sigmas = list_or(s, "error-sigma", {"0"});
  const std::string* pulses_raw = find(s, "pulses");

  std::vector<SimConfig> configs;
  for (const auto& seq_text : sequences) {
    SequenceKind kind;
    try {
      kind = parse_sequence_kind(seq_text);
    } catch (const UsageError&) {
      bad_value("sequence", seq_text, "free, cpmg or kdd");
    }
    std::vector<std::string> pulse_list;
    if (pulses_raw) {
      pulse_list = split_list(*pulses_raw);
    } else {
      pulse_list = {kind == SequenceKind::kFree ? "0" : "800"};
    }
    for (const auto& len_text : lengths) {
      const double length = to_double("length-m", len_text);
      if (!(length > 0.0)) bad_value("length-m", len_text, "a positive length");
      for (const auto& pulse_text : pulse_list) {
        const auto pulses = to_integer<long long>("pulses", pulse_text);
        if (kind == SequenceKind::kFree && pulses != 0) {
          throw UsageError("conflicting keys 'sequence' and 'pulses': free evolution takes no "
                           "pulses (got " + pulse_text + ")");
        }
        for (const auto& sigma_text : sigmas) {
          SimConfig c = base;
          c.fiber_length_m = length;
          c.schedule.kind = kind;
          c.schedule.pulses = pulses;
          c.error_model.sigma_fraction = to_double("error-sigma", sigma_text);
          if (c.error_model.sigma_fraction < 0.0) bad_value("error-sigma", sigma_text, "a value >= 0");
          c.validate();
          configs.push_back(std::move(c));
        }
      }
    }
  }
  return configs;
}

}  // namespace

std::map<std::string, std::string> parse_config_text(std::string_view text,
                                                     const std::string& source_name) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw UsageError(source_name + ":" + std::to_string(line_no) + ": expected key=value");
    }
    const std::string raw_key = trim(content.substr(0, eq));
    const std::string key = normalize_key(raw_key);
    if (key.empty()) {
      throw UsageError(source_name + ":" + std::to_string(line_no) + ": unknown key '" + raw_key +
                       "'");
    }
    out[key] = trim(content.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

NamedState parse_state(std::string_view token) {
  const std::string t = trim(token);
  if (t == "H") return {"H", PureState::horizontal()};
  if (t == "V") return {"V", PureState::vertical()};
  if (t == "D") return {"D", PureState::diagonal()};
  if (t == "A") return {"A", PureState::antidiagonal()};
  if (t == "R") return {"R", PureState::right_circular()};
  if (t == "L") return {"L", PureState::left_circular()};
  if (t.rfind("custom:", 0) == 0) {
    std::vector<double> parts;
    std::string_view rest(t);
    rest.remove_prefix(7);
    std::size_t start = 0;
    while (true) {
      const auto colon = rest.find(':', start);
      parts.push_back(to_double("states", trim(rest.substr(start, colon - start))));
      if (colon == std::string_view::npos) break;
      start = colon + 1;
    }
    if (parts.size() != 4) {
      throw UsageError("custom state needs four numbers: custom:ar:ai:br:bi");
    }
    return {t, PureState::normalized({parts[0], parts[1]}, {parts[2], parts[3]})};
  }
  throw UsageError("unknown state '" + t + "'");
}

RunRequest parse_config(std::span<const std::string> args, std::optional<std::string> env_seed) {
  RunRequest request;
  request.command.assign(args.begin(), args.end());

  CLI::App app{"Monte Carlo simulator for dynamical decoupling of polarization qubits in fiber",
               "ddsim"};
  std::map<std::string, std::string> flag_values;
  std::map<std::string, bool> flag_switches;
  std::string config_path;
  app.add_option("--config", config_path, "key=value configuration file");
  for (const auto& def : kKeys) {
    std::string names = "--" + std::string(def.name);
    if (!def.alias.empty()) names += ",--" + std::string(def.alias);
    const std::string key(def.name);
    if (def.is_flag) {
      app.add_flag(names, flag_switches[key], std::string(def.help));
    } else {
      app.add_option(names, flag_values[key], std::string(def.help));
    }
  }

  std::vector<const char*> argv;
  argv.push_back("ddsim");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    request.show_help = true;
    request.help_text = app.help();
    return request;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  Settings settings;
  if (env_seed && !env_seed->empty()) settings["seed"] = *env_seed;
  if (!config_path.empty()) {
    request.config_source = config_path;
    for (auto& [k, v] : read_config_file(config_path)) settings[k] = v;
  }
  for (const auto& def : kKeys) {
    const std::string key(def.name);
    if (app.get_option("--" + key)->count() == 0) continue;
    settings[key] = def.is_flag ? "true" : flag_values[key];
  }

  if (auto* v = find(settings, "out")) request.out_dir = *v;
  if (auto* v = find(settings, "dump-profile")) request.dump_profile = *v;
  if (auto* v = find(settings, "dump-schedule")) request.dump_schedule = *v;
  if (auto* v = find(settings, "reproduce-figures")) {
    request.reproduce_figures = to_bool("reproduce-figures", *v);
  }
  if (auto* v = find(settings, "fixed-plate-count")) {
    request.fixed_plate_count = to_bool("fixed-plate-count", *v);
  }
  request.configs = expand(settings);
  return request;
}

}  // namespace ddsim::cli
