#include "mre/harness.hpp"

#include "mre/regressor.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace mre::harness {

double InputSpec::at(double t) const {
  switch (kind) {
    case InputKind::Constant:
      return constant;
    case InputKind::Multisine:
      return multisine(amplitudes, frequencies, t);
    case InputKind::Schedule: {
      double value = schedule.empty() ? 0.0 : schedule.front().second;
      for (const auto& [start, v] : schedule) {
        if (start <= t) value = v;
      }
      return value;
    }
  }
  return 0.0;
}

std::vector<double> InputSpec::change_times() const {
  std::vector<double> times;
  if (kind != InputKind::Schedule) return times;
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (schedule[i].second != schedule[i - 1].second && schedule[i].first > 0.0) {
      times.push_back(schedule[i].first);
    }
  }
  return times;
}

bool ExperimentConfig::noiseless() const {
  const bool quiet = !noise || noise->power == 0.0;
  const bool at_rest = std::all_of(x0.begin(), x0.end(), [](double v) { return v == 0.0; });
  return quiet && at_rest;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
  if (!(dt > 0.0)) fail("dt must be positive");
  if (!(t_end > dt)) fail("t_end must exceed dt");
  if (estimators.rls_mre && !(beta > 0.0)) fail("beta must be positive for rls_mre");
  if (!(lambda_f > 0.0)) fail("lambda_f must be positive");
  if (!(gamma0 > 0.0)) fail("Gamma0 must be positive");
  if (decimate < 1) fail("decimate must be at least 1");
  if (pe_stride < 1) fail("pe_stride must be at least 1");
  if (!(ie_threshold > 0.0)) fail("ie_threshold must be positive");
  if (!estimators.rls_mre && !estimators.gradient && !estimators.integrator_pi) {
    fail("no estimator enabled");
  }
  if (noise && (noise->power < 0.0 || !(noise->sample_time > 0.0))) fail("invalid noise spec");
  if (!x0.empty() && x0.size() + 1 != den.size()) fail("x0 length must equal plant order");
  if (input.kind == InputKind::Multisine) {
    multisine(input.amplitudes, input.frequencies, 0.0);  // throws on invalid lists
  }
  if (input.kind == InputKind::Schedule) {
    if (input.schedule.empty()) fail("schedule input needs at least one entry");
    if (!std::is_sorted(input.schedule.begin(), input.schedule.end(),
                        [](const auto& a, const auto& b) { return a.first < b.first; })) {
      fail("schedule times must be increasing");
    }
  }
  if (sweep != SweepParam::None && sweep_values.empty()) fail("sweep needs values");
  // plant and filter preconditions
  plant_from_tf(num, den);
  make_lambda_filter(lambdas);
  true_theta(num, den, lambdas);
}

std::vector<std::string> preset_names() {
  return {"exp1", "exp2", "exp3", "exp4", "exp5", "exp6", "zero-input", "schedule"};
}

std::string preset_description(const std::string& name) {
  static const std::map<std::string, std::string> text{
      {"exp1", "RLS-MRE vs gradient, constant input u = 100, noiseless"},
      {"exp2", "norm of the adaptation-rate matrix against its pre-excitation bound and limit"},
      {"exp3", "forgetting-factor sweep lambda in {0.5, 1, 2}"},
      {"exp4", "memory-factor sweep beta in {0.5, 1, 2}, noiseless"},
      {"exp5", "RLS-MRE vs integrator baseline under measurement noise (power 100)"},
      {"exp6", "memory-factor sweep beta in {0.5, 1, 2} under measurement noise"},
      {"zero-input", "u = 0, x0 = 0: nothing excites the regressor"},
      {"schedule", "setpoint steps 100 -> 50 at t = 10 s with an epoch reset"},
  };
  const auto it = text.find(name);
  if (it == text.end()) throw Error(ErrorCode::UnknownPreset, "unknown preset '" + name + "'");
  return it->second;
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  const NoiseSpec measurement_noise{100.0, 23341000, 1e-4};
  if (name == "exp1") {
    c.estimators = {true, true, false};
  } else if (name == "exp2") {
    c.estimators = {true, false, false};
  } else if (name == "exp3") {
    c.sweep = SweepParam::LambdaF;
    c.sweep_values = {0.5, 1.0, 2.0};
  } else if (name == "exp4") {
    c.sweep = SweepParam::Beta;
    c.sweep_values = {0.5, 1.0, 2.0};
  } else if (name == "exp5") {
    c.estimators = {true, false, true};
    c.noise = measurement_noise;
    c.t_end = 40.0;
  } else if (name == "exp6") {
    c.sweep = SweepParam::Beta;
    c.sweep_values = {0.5, 1.0, 2.0};
    c.noise = measurement_noise;
    c.t_end = 40.0;
  } else if (name == "zero-input") {
    c.estimators = {true, true, true};
    c.input.constant = 0.0;
  } else if (name == "schedule") {
    c.input.kind = InputKind::Schedule;
    c.input.schedule = {{0.0, 100.0}, {10.0, 50.0}};
  } else {
    throw Error(ErrorCode::UnknownPreset, "unknown preset '" + name + "'");
  }
  if (c.noise) c.seed = c.noise->seed;
  return c;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidConfig, "key '" + key + "': not a number: '" + v + "'");
  }
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::string normalized = v;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::vector<double> out;
  for (const auto& part : split(normalized, ' ')) out.push_back(to_double(key, part));
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(ErrorCode::InvalidConfig, "key '" + key + "': not a boolean: '" + v + "'");
}

void apply(ExperimentConfig& c, const std::string& key, const std::string& v) {
  auto ensure_noise = [&c]() -> NoiseSpec& {
    if (!c.noise) c.noise = NoiseSpec{0.0, c.seed, 1e-4};
    return *c.noise;
  };
  if (key == "preset") {
    c = preset(v);
  } else if (key == "name") {
    c.name = v;
  } else if (key == "num") {
    c.num = to_list(key, v);
  } else if (key == "den") {
    c.den = to_list(key, v);
  } else if (key == "lambdas") {
    c.lambdas = to_list(key, v);
  } else if (key == "beta") {
    c.beta = to_double(key, v);
  } else if (key == "lambda_f") {
    c.lambda_f = to_double(key, v);
  } else if (key == "gamma0") {
    c.gamma0 = to_double(key, v);
  } else if (key == "dt") {
    c.dt = to_double(key, v);
  } else if (key == "t_end") {
    c.t_end = to_double(key, v);
  } else if (key == "input") {
    if (v == "constant") c.input.kind = InputKind::Constant;
    else if (v == "multisine") c.input.kind = InputKind::Multisine;
    else if (v == "schedule") c.input.kind = InputKind::Schedule;
    else throw Error(ErrorCode::InvalidConfig, "unknown input kind '" + v + "'");
  } else if (key == "input_value") {
    c.input.constant = to_double(key, v);
  } else if (key == "input_amplitudes") {
    c.input.amplitudes = to_list(key, v);
  } else if (key == "input_frequencies") {
    c.input.frequencies = to_list(key, v);
  } else if (key == "input_schedule") {
    c.input.schedule.clear();
    for (const auto& entry : split(v, ',')) {
      const auto pair = split(entry, ':');
      if (pair.size() != 2) throw Error(ErrorCode::InvalidConfig, "schedule entries are time:value");
      c.input.schedule.emplace_back(to_double(key, pair[0]), to_double(key, pair[1]));
    }
  } else if (key == "noise") {
    if (!to_bool(key, v)) c.noise.reset();
    else ensure_noise();
  } else if (key == "noise_power") {
    ensure_noise().power = to_double(key, v);
  } else if (key == "noise_sample_time") {
    ensure_noise().sample_time = to_double(key, v);
  } else if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(std::stoull(v));
    if (c.noise) c.noise->seed = c.seed;
  } else if (key == "x0") {
    c.x0 = to_list(key, v);
  } else if (key == "estimators") {
    c.estimators = {false, false, false};
    for (const auto& e : split(v, ',')) {
      if (e == "rls_mre") c.estimators.rls_mre = true;
      else if (e == "gradient") c.estimators.gradient = true;
      else if (e == "integrator_pi") c.estimators.integrator_pi = true;
      else throw Error(ErrorCode::InvalidConfig, "unknown estimator '" + e + "'");
    }
  } else if (key == "decimate") {
    c.decimate = static_cast<int>(to_double(key, v));
  } else if (key == "hard_reset") {
    c.hard_reset = to_bool(key, v);
  } else if (key == "ie_threshold") {
    c.ie_threshold = to_double(key, v);
  } else if (key == "rank_tol") {
    c.rank_tol = to_double(key, v);
  } else if (key == "pe_window") {
    c.pe_window = to_double(key, v);
  } else if (key == "fixed_T") {
    c.fixed_T = to_double(key, v);
  } else if (key == "slack") {
    c.slack = to_double(key, v);
  } else if (key == "sweep") {
    if (v == "none") c.sweep = SweepParam::None;
    else if (v == "lambda_f") c.sweep = SweepParam::LambdaF;
    else if (v == "beta") c.sweep = SweepParam::Beta;
    else throw Error(ErrorCode::InvalidConfig, "unknown sweep parameter '" + v + "'");
  } else if (key == "sweep_values") {
    c.sweep_values = to_list(key, v);
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "'");
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base) {
  ExperimentConfig c = std::move(base);
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(lineno) + ": expected key = value");
    }
    apply(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

std::string load_config_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(load_config_text(path));
}

}  // namespace mre::harness
