#include "selfguided/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace selfguided {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad number for '" + key + "': " + value);
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError("config: bad integer for '" + key + "': " + value);
  return v;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(parse_double(key, item));
  return out;
}

// Shortest round-trip formatting, shared with the CSV writer.
std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string join_doubles(const std::vector<double>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ",";
    out += format_double(vs[i]);
  }
  return out;
}

std::string join_strings(const std::vector<std::string>& vs) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ",";
    out += vs[i];
  }
  return out;
}

constexpr const char* kAssertMeanPrefix = "assert_final_mean_below_";

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  cfg.schedule = Schedule::constant(0.05, 0.2);
  bool power = false;
  double a = 1.0, big_a = 0.0, s = 0.602, b = 0.1, t = 0.101;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "name") cfg.name = value;
    else if (key == "mode") {
      if (value == "imaging") cfg.mode = ExperimentMode::Imaging;
      else if (value == "tomography") cfg.mode = ExperimentMode::Tomography;
      else throw ConfigError("config: unknown mode '" + value + "'");
    } else if (key == "variants") cfg.variants = split_list(value);
    else if (key == "d") cfg.dim = parse_u64(key, value);
    else if (key == "state_mode") {
      if (value == "phase-only") cfg.state_mode = StateMode::PhaseOnly;
      else if (value == "haar") cfg.state_mode = StateMode::Haar;
      else throw ConfigError("config: unknown state_mode '" + value + "'");
    } else if (key == "width") cfg.width = static_cast<int>(parse_u64(key, value));
    else if (key == "height") cfg.height = static_cast<int>(parse_u64(key, value));
    else if (key == "image") cfg.image = value;
    else if (key == "masks") {
      if (value != "random" && value != "hadamard")
        throw ConfigError("config: unknown masks kind '" + value + "'");
      cfg.masks = value;
    } else if (key == "ogi_normalized") cfg.ogi_normalized = (value == "true" || value == "1");
    else if (key == "iterations") cfg.iterations = parse_u64(key, value);
    else if (key == "runs") cfg.runs = parse_u64(key, value);
    else if (key == "schedule") {
      if (value == "constant") power = false;
      else if (value == "power") power = true;
      else throw ConfigError("config: unknown schedule '" + value + "'");
    } else if (key == "alpha") cfg.schedule.alpha = parse_double(key, value);
    else if (key == "beta") cfg.schedule.beta = parse_double(key, value);
    else if (key == "alpha_a") a = parse_double(key, value);
    else if (key == "alpha_A") big_a = parse_double(key, value);
    else if (key == "alpha_s") s = parse_double(key, value);
    else if (key == "beta_b") b = parse_double(key, value);
    else if (key == "beta_t") t = parse_double(key, value);
    else if (key == "noise") {
      if (value == "none") cfg.noise = NoiseKind::None;
      else if (value == "gaussian") cfg.noise = NoiseKind::Gaussian;
      else if (value == "poisson") cfg.noise = NoiseKind::Poisson;
      else throw ConfigError("config: unknown noise '" + value + "'");
    } else if (key == "gamma") cfg.gamma = parse_double(key, value);
    else if (key == "rate") cfg.rate = parse_double(key, value);
    else if (key == "integration_time") cfg.integration_times = parse_double_list(key, value);
    else if (key == "seed") cfg.seed = parse_u64(key, value);
    else if (key == "output") cfg.output = value;
    else if (key == "alphas") cfg.alphas = parse_double_list(key, value);
    else if (key == "betas") cfg.betas = parse_double_list(key, value);
    else if (key == "assert_pair_diff_below")
      cfg.assert_pair_diff_below = parse_double(key, value);
    else if (key == "assert_final_error_below")
      cfg.assert_final_error_below = parse_double(key, value);
    else if (key.rfind(kAssertMeanPrefix, 0) == 0)
      cfg.assert_final_mean_below[key.substr(std::string(kAssertMeanPrefix).size())] =
          parse_double(key, value);
    else
      throw ConfigError("config: unknown key '" + key + "'");
  }

  try {
    cfg.schedule = power ? Schedule::power_law(a, big_a, s, b, t)
                         : Schedule::constant(cfg.schedule.alpha, cfg.schedule.beta);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (cfg.variants.empty())
    throw ConfigError("config: at least one variant required");
  for (const auto& v : cfg.variants) {
    const bool imaging_variant = v == "spi" || v == "sgi" || v == "ogi";
    const bool quantum_variant = v == "sgqt" || v == "osgqt";
    if (!imaging_variant && !quantum_variant)
      throw ConfigError("config: unknown variant '" + v + "'");
    if (cfg.mode == ExperimentMode::Imaging && !imaging_variant)
      throw ConfigError("config: variant '" + v + "' is not an imaging variant");
    if (cfg.mode == ExperimentMode::Tomography && !quantum_variant)
      throw ConfigError("config: variant '" + v + "' is not a tomography variant");
  }
  if (cfg.runs < 1 || cfg.iterations < 1)
    throw ConfigError("config: runs and iterations must be >= 1");
  if (cfg.mode == ExperimentMode::Tomography && cfg.dim < 2)
    throw ConfigError("config: tomography needs d >= 2");
  if (cfg.width < 1 || cfg.height < 1)
    throw ConfigError("config: image dimensions must be positive");
  if (cfg.noise == NoiseKind::Gaussian && cfg.gamma < 0.0)
    throw ConfigError("config: gamma must be >= 0");
  if (cfg.noise == NoiseKind::Poisson) {
    if (cfg.rate <= 0.0) throw ConfigError("config: rate must be > 0");
    for (double i : cfg.integration_times)
      if (i <= 0.0) throw ConfigError("config: integration_time must be > 0");
  }
  if (cfg.integration_times.empty())
    throw ConfigError("config: integration_time list must not be empty");
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string ExperimentConfig::canonical_text() const {
  std::ostringstream out;
  out << "name = " << name << "\n";
  out << "mode = " << (mode == ExperimentMode::Imaging ? "imaging" : "tomography") << "\n";
  out << "variants = " << join_strings(variants) << "\n";
  if (mode == ExperimentMode::Tomography) {
    out << "d = " << dim << "\n";
    out << "state_mode = " << (state_mode == StateMode::PhaseOnly ? "phase-only" : "haar")
        << "\n";
  } else {
    out << "width = " << width << "\n";
    out << "height = " << height << "\n";
    out << "image = " << image << "\n";
    out << "masks = " << masks << "\n";
    out << "ogi_normalized = " << (ogi_normalized ? "true" : "false") << "\n";
  }
  out << "iterations = " << iterations << "\n";
  out << "runs = " << runs << "\n";
  if (schedule.kind == Schedule::Kind::Constant) {
    out << "schedule = constant\n";
    out << "alpha = " << format_double(schedule.alpha) << "\n";
    out << "beta = " << format_double(schedule.beta) << "\n";
  } else {
    out << "schedule = power\n";
    out << "alpha_a = " << format_double(schedule.a) << "\n";
    out << "alpha_A = " << format_double(schedule.big_a) << "\n";
    out << "alpha_s = " << format_double(schedule.s) << "\n";
    out << "beta_b = " << format_double(schedule.b) << "\n";
    out << "beta_t = " << format_double(schedule.t) << "\n";
  }
  switch (noise) {
    case NoiseKind::None:
      out << "noise = none\n";
      break;
    case NoiseKind::Gaussian:
      out << "noise = gaussian\n";
      out << "gamma = " << format_double(gamma) << "\n";
      break;
    case NoiseKind::Poisson:
      out << "noise = poisson\n";
      out << "rate = " << format_double(rate) << "\n";
      out << "integration_time = " << join_doubles(integration_times) << "\n";
      break;
  }
  out << "seed = " << seed << "\n";
  if (!alphas.empty()) out << "alphas = " << join_doubles(alphas) << "\n";
  if (!betas.empty()) out << "betas = " << join_doubles(betas) << "\n";
  if (assert_pair_diff_below)
    out << "assert_pair_diff_below = " << format_double(*assert_pair_diff_below) << "\n";
  if (assert_final_error_below)
    out << "assert_final_error_below = " << format_double(*assert_final_error_below) << "\n";
  for (const auto& [variant, bound] : assert_final_mean_below)
    out << kAssertMeanPrefix << variant << " = " << format_double(bound) << "\n";
  return out.str();
}

std::string ExperimentConfig::config_hash() const {
  // FNV-1a 64 over the canonical text (output path excluded).
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_text()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

const std::vector<std::pair<std::string, std::string>>& presets() {
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"spi-vs-sgi",
       "name = spi-vs-sgi\n"
       "mode = imaging\n"
       "variants = spi,sgi\n"
       "width = 64\nheight = 64\nimage = disk\nmasks = random\n"
       "iterations = 4096\nruns = 1\n"
       "schedule = constant\nalpha = 1\nbeta = 1\n"
       "noise = none\nseed = 1\n"
       "assert_pair_diff_below = 1e-11\n"},
      {"spi-vs-sgi-hadamard",
       "name = spi-vs-sgi-hadamard\n"
       "mode = imaging\n"
       "variants = spi,sgi\n"
       "width = 64\nheight = 64\nimage = disk\nmasks = hadamard\n"
       "iterations = 4096\nruns = 1\n"
       "schedule = constant\nalpha = 1\nbeta = 1\n"
       "noise = gaussian\ngamma = 0.25\nseed = 1\n"
       "assert_pair_diff_below = 1e-11\n"},
      {"spi-hadamard-complete",
       "name = spi-hadamard-complete\n"
       "mode = imaging\n"
       "variants = spi\n"
       "width = 64\nheight = 64\nimage = disk\nmasks = hadamard\n"
       "iterations = 4096\nruns = 1\n"
       "schedule = constant\nalpha = 1\nbeta = 1\n"
       "noise = none\nseed = 1\n"
       "assert_final_error_below = 1e-10\n"},
      {"ogi-vs-spi-random",
       "name = ogi-vs-spi-random\n"
       "mode = imaging\n"
       "variants = spi,ogi\n"
       "width = 64\nheight = 64\nimage = disk\nmasks = random\n"
       "iterations = 4096\nruns = 1\n"
       "schedule = constant\nalpha = 1\nbeta = 1\n"
       "noise = none\nseed = 1\n"},
      {"tomography-noiseless",
       "name = tomography-noiseless\n"
       "mode = tomography\n"
       "variants = sgqt,osgqt\n"
       "d = 5\nstate_mode = phase-only\n"
       "iterations = 350\nruns = 100\n"
       "schedule = constant\nalpha = 0.05\nbeta = 0.2\n"
       "noise = none\nseed = 5\n"
       "assert_final_mean_below_osgqt = 0.025\n"},
      {"noise-sweep",
       "name = noise-sweep\n"
       "mode = tomography\n"
       "variants = sgqt,osgqt\n"
       "d = 5\nstate_mode = phase-only\n"
       "iterations = 350\nruns = 100\n"
       "schedule = constant\nalpha = 0.05\nbeta = 0.2\n"
       "noise = poisson\nrate = 5000\nintegration_time = 1,0.1\n"
       "seed = 1\n"},
      {"tomography-grid",
       "name = tomography-grid\n"
       "mode = tomography\n"
       "variants = sgqt,osgqt\n"
       "d = 5\nstate_mode = phase-only\n"
       "iterations = 350\nruns = 20\n"
       "schedule = constant\nalpha = 0.05\nbeta = 0.2\n"
       "alphas = 0.05\nbetas = 0.2,0.3\n"
       "noise = none\nseed = 1\n"},
  };
  return table;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : presets()) names.push_back(name);
  return names;
}

const std::string& preset_text(const std::string& name) {
  for (const auto& [preset, text] : presets())
    if (preset == name) return text;
  throw ConfigError("unknown preset '" + name + "'");
}

ExperimentConfig resolve_config(const std::string& name_or_path) {
  for (const auto& [preset, text] : presets())
    if (preset == name_or_path) return parse_config_text(text);
  return load_config_file(name_or_path);
}

}  // namespace selfguided
