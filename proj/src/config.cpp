// Copyright 2026 The fresure Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fresure/config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "fresure/error.hpp"

namespace fresure {
namespace {

using nlohmann::json;

class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) {
      fail("expected an object");
    }
  }

  ~Reader() = default;

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key) && !node_.at(key).is_null();
  }

  const json& at(const std::string& key) { return node_.at(key); }
  std::string path(const std::string& key) const { return path_ + "." + key; }

  double number(const std::string& key, double fallback) {
    if (!has(key)) {
      return fallback;
    }
    const json& v = node_.at(key);
    if (!v.is_number()) {
      fail_key(key, "expected a number");
    }
    return v.get<double>();
  }

  std::uint64_t unsigned_int(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) {
      return fallback;
    }
    const json& v = node_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      fail_key(key, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) {
      return fallback;
    }
    const json& v = node_.at(key);
    if (!v.is_string()) {
      fail_key(key, "expected a string");
    }
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::size_t expected_size) {
    const json& v = node_.at(key);
    if (!v.is_array() || (expected_size && v.size() != expected_size)) {
      fail_key(key, expected_size ? "expected an array of " + std::to_string(expected_size) +
                                        " numbers"
                                  : "expected an array of numbers");
    }
    std::vector<double> out;
    for (const json& e : v) {
      if (!e.is_number()) {
        fail_key(key, "expected an array of numbers");
      }
      out.push_back(e.get<double>());
    }
    return out;
  }

  FrequencyWindow window(const std::string& key, FrequencyWindow fallback) {
    if (!has(key)) {
      return fallback;
    }
    if (node_.at(key).is_null()) {
      return FrequencyWindow::everything();
    }
    const auto v = numbers(key, 2);
    if (!(v[0] < v[1])) {
      fail_key(key, "window must satisfy lo < hi");
    }
    return {v[0], v[1]};
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.count(key)) {
        throw ValidationError("config: unknown key " + path_ + "." + key);
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ValidationError("config: " + path_ + ": " + msg);
  }
  [[noreturn]] void fail_key(const std::string& key, const std::string& msg) const {
    throw ValidationError("config: " + path_ + "." + key + ": " + msg);
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_system(Reader r, SpinSystemParams& s) {
  s.larmor_offset_hz = r.number("larmor_offset_hz", s.larmor_offset_hz);
  if (r.has("chemical_shift_hz")) {
    const auto v = r.numbers("chemical_shift_hz", 3);
    std::copy(v.begin(), v.end(), s.chemical_shift_hz.begin());
  }
  if (r.has("j_coupling_hz")) {
    const json& m = r.at("j_coupling_hz");
    if (!m.is_array() || m.size() != 3) {
      r.fail_key("j_coupling_hz", "expected a 3x3 array");
    }
    for (std::size_t i = 0; i < 3; ++i) {
      if (!m[i].is_array() || m[i].size() != 3) {
        r.fail_key("j_coupling_hz", "expected a 3x3 array");
      }
      for (std::size_t k = 0; k < 3; ++k) {
        if (!m[i][k].is_number()) {
          r.fail_key("j_coupling_hz", "expected numbers");
        }
        s.j_coupling_hz[i][k] = m[i][k].get<double>();
      }
    }
  }
  s.thermal_p = r.number("thermal_p", s.thermal_p);
  s.pps_q = r.number("pps_q", s.pps_q);
  r.finish();
}

void read_noise(Reader r, NoiseModel& n) {
  n.gamma_fwhm_hz = r.number("gamma_fwhm_hz", n.gamma_fwhm_hz);
  if (r.text("kind", "lorentzian") != "lorentzian") {
    r.fail_key("kind", "only \"lorentzian\" is supported");
  }
  r.finish();
}

void read_acquisition(Reader r, Acquisition& a) {
  a.dt_s = r.number("dt_s", a.dt_s);
  a.n_samples = r.unsigned_int("n_samples", a.n_samples);
  r.finish();
}

void read_mc(Reader r, MonteCarloSettings& mc) {
  mc.n_mc = r.unsigned_int("n_mc", mc.n_mc);
  if (!r.has("seed")) {
    r.fail_key("seed", "is mandatory");
  }
  mc.seed = r.unsigned_int("seed", 0);
  mc.workers = r.unsigned_int("workers", mc.workers);
  const std::string sampling = r.text("sampling", "stratified");
  if (sampling == "stratified") {
    mc.sampling = MonteCarloSampling::stratified;
  } else if (sampling == "plain") {
    mc.sampling = MonteCarloSampling::plain;
  } else {
    r.fail_key("sampling", "expected \"stratified\" or \"plain\"");
  }
  r.finish();
}

void read_analysis(Reader r, AnalysisConfig& a) {
  a.window = r.window("window_hz", a.window);
  a.zero_pad_factor = r.unsigned_int("zero_pad_factor", a.zero_pad_factor);
  a.prominence = r.number("prominence", a.prominence);
  const auto mode = parse_spectrum_mode(r.text("spectrum_mode", to_string(a.spectrum_mode)));
  if (!mode) {
    r.fail_key("spectrum_mode", "expected \"absorption\" or \"magnitude\"");
  }
  a.spectrum_mode = *mode;
  a.apodization_hz = r.number("apodization_hz", a.apodization_hz);
  r.finish();
}

void read_sweep(Reader r, SweepConfig& s) {
  if (r.has("n_values")) {
    s.n_values = r.numbers("n_values", 0);
  }
  s.mc_samples = r.unsigned_int("mc_samples", s.mc_samples);
  if (r.has("threshold") && !r.at("threshold").is_null()) {
    s.threshold = r.number("threshold", 0.0);
  }
  s.window = r.window("window_hz", s.window);
  r.finish();
}

void read_allan(Reader r, AllanConfig& a) {
  a.n_measurements = r.unsigned_int("n_measurements", a.n_measurements);
  a.mc_per_measurement = r.unsigned_int("mc_per_measurement", a.mc_per_measurement);
  const auto model = parse_model(r.text("model", to_string(a.model)));
  if (!model) {
    r.fail_key("model", "expected \"full\" or \"secular\"");
  }
  a.model = *model;
  const std::string averaging = r.text("averaging", "per_measurement");
  if (averaging == "per_measurement") {
    a.averaging = AllanAveraging::per_measurement;
  } else if (averaging == "averaged_fid") {
    a.averaging = AllanAveraging::averaged_fid;
  } else {
    r.fail_key("averaging", "expected \"per_measurement\" or \"averaged_fid\"");
  }
  if (r.has("m_values")) {
    a.m_values.clear();
    for (double m : r.numbers("m_values", 0)) {
      if (!(m >= 1.0) || m != static_cast<double>(static_cast<std::size_t>(m))) {
        r.fail_key("m_values", "expected positive integers");
      }
      a.m_values.push_back(static_cast<std::size_t>(m));
    }
  }
  r.finish();
}

// null stands for the unbounded window.
json window_json(const FrequencyWindow& w) {
  if (!std::isfinite(w.lo_hz) || !std::isfinite(w.hi_hz)) {
    return nullptr;
  }
  return json::array({w.lo_hz, w.hi_hz});
}

}  // namespace

SpectrumOptions AnalysisConfig::spectrum_options() const {
  SpectrumOptions o;
  o.zero_pad_factor = zero_pad_factor;
  o.mode = spectrum_mode;
  if (apodization_hz > 0.0) {
    o.window = {WindowKind::exponential, apodization_hz};
  }
  return o;
}

PeakOptions AnalysisConfig::peak_options() const {
  PeakOptions o;
  o.prominence_fraction = prominence;
  return o;
}

void ExperimentConfig::validate() const {
  try {
    system.validate();
    noise.validate();
    acquisition.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  if (system.thermal_p <= 0.0) {
    throw ValidationError("config: system.thermal_p must be positive");
  }
  if (mc.n_mc == 0) {
    throw ValidationError("config: mc.n_mc must be >= 1");
  }
  if (analysis.zero_pad_factor == 0) {
    throw ValidationError("config: analysis.zero_pad_factor must be >= 1");
  }
  if (!(analysis.prominence >= 0.0 && analysis.prominence < 1.0)) {
    throw ValidationError("config: analysis.prominence must lie in [0, 1)");
  }
  if (analysis.apodization_hz < 0.0) {
    throw ValidationError("config: analysis.apodization_hz must be >= 0");
  }
  if (sweep.n_values.empty()) {
    throw ValidationError("config: sweep.n_values is empty");
  }
  for (double n : sweep.n_values) {
    if (!(n >= 0.0)) {
      throw ValidationError("config: sweep.n_values must be >= 0");
    }
  }
  if (sweep.mc_samples == 0) {
    throw ValidationError("config: sweep.mc_samples must be >= 1");
  }
  if (allan.n_measurements < 2 || allan.mc_per_measurement == 0) {
    throw ValidationError("config: allan needs n_measurements >= 2 and mc_per_measurement >= 1");
  }
  for (std::size_t i = 0; i < allan.m_values.size(); ++i) {
    if (i > 0 && allan.m_values[i] <= allan.m_values[i - 1]) {
      throw ValidationError("config: allan.m_values must be strictly increasing");
    }
  }
  if (!allan.m_values.empty() && 2 * allan.m_values.back() > allan.n_measurements) {
    throw ValidationError("config: allan.m_values exceed n_measurements / 2");
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  Reader root(doc, "config");
  if (!root.has("mc")) {
    throw ValidationError("config: config.mc.seed is mandatory");
  }
  read_mc(Reader(root.at("mc"), "config.mc"), cfg.mc);
  if (root.has("system")) {
    read_system(Reader(root.at("system"), "config.system"), cfg.system);
  }
  if (root.has("noise")) {
    read_noise(Reader(root.at("noise"), "config.noise"), cfg.noise);
  }
  if (root.has("acquisition")) {
    read_acquisition(Reader(root.at("acquisition"), "config.acquisition"), cfg.acquisition);
  }
  if (root.has("analysis")) {
    read_analysis(Reader(root.at("analysis"), "config.analysis"), cfg.analysis);
  }
  if (root.has("sweep")) {
    read_sweep(Reader(root.at("sweep"), "config.sweep"), cfg.sweep);
  }
  if (root.has("allan")) {
    read_allan(Reader(root.at("allan"), "config.allan"), cfg.allan);
  }
  root.finish();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string() + " for reading");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

ExperimentConfig default_config(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.mc.seed = seed;
  return cfg;
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  json jm = json::array();
  for (const auto& row : c.system.j_coupling_hz) {
    jm.push_back(json::array({row[0], row[1], row[2]}));
  }
  j["system"] = {{"larmor_offset_hz", c.system.larmor_offset_hz},
                 {"chemical_shift_hz", c.system.chemical_shift_hz},
                 {"j_coupling_hz", jm},
                 {"thermal_p", c.system.thermal_p},
                 {"pps_q", c.system.pps_q}};
  j["noise"] = {{"gamma_fwhm_hz", c.noise.gamma_fwhm_hz}, {"kind", "lorentzian"}};
  j["acquisition"] = {{"dt_s", c.acquisition.dt_s}, {"n_samples", c.acquisition.n_samples}};
  j["mc"] = {{"n_mc", c.mc.n_mc},
             {"seed", c.mc.seed},
             {"workers", c.mc.workers},
             {"sampling", c.mc.sampling == MonteCarloSampling::plain ? "plain" : "stratified"}};
  j["analysis"] = {{"window_hz", window_json(c.analysis.window)},
                   {"zero_pad_factor", c.analysis.zero_pad_factor},
                   {"prominence", c.analysis.prominence},
                   {"spectrum_mode", to_string(c.analysis.spectrum_mode)},
                   {"apodization_hz", c.analysis.apodization_hz}};
  j["sweep"] = {{"n_values", c.sweep.n_values},
                {"mc_samples", c.sweep.mc_samples},
                {"threshold", c.sweep.threshold ? json(*c.sweep.threshold) : json(nullptr)},
                {"window_hz", window_json(c.sweep.window)}};
  j["allan"] = {{"n_measurements", c.allan.n_measurements},
                {"mc_per_measurement", c.allan.mc_per_measurement},
                {"model", to_string(c.allan.model)},
                {"averaging", c.allan.averaging == AllanAveraging::per_measurement
                                  ? "per_measurement"
                                  : "averaged_fid"},
                {"m_values", c.allan.m_values}};
  return j.dump(2);
}

std::string to_string(HamiltonianModel model) {
  return model == HamiltonianModel::full ? "full" : "secular";
}

std::optional<HamiltonianModel> parse_model(std::string_view text) {
  if (text == "full") return HamiltonianModel::full;
  if (text == "secular") return HamiltonianModel::secular;
  return std::nullopt;
}

std::string to_string(SpectrumMode mode) {
  return mode == SpectrumMode::absorption ? "absorption" : "magnitude";
}

std::optional<SpectrumMode> parse_spectrum_mode(std::string_view text) {
  if (text == "absorption") return SpectrumMode::absorption;
  if (text == "magnitude") return SpectrumMode::magnitude;
  return std::nullopt;
}

}  // namespace fresure
