#pragma once

#include "mre/bounds.hpp"
#include "mre/excitation.hpp"
#include "mre/plant.hpp"
#include "mre/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mre::harness {

enum class InputKind { Constant, Multisine, Schedule };

struct InputSpec {
  InputKind kind{InputKind::Constant};
  double constant{100.0};
  std::vector<double> amplitudes;
  std::vector<double> frequencies;
  // (start time, value) pairs sorted by time; value holds until the next change
  std::vector<std::pair<double, double>> schedule;

  double at(double t) const;
  /// Times (t > 0) at which the schedule changes value.
  std::vector<double> change_times() const;
};

struct EstimatorSet {
  bool rls_mre{true};
  bool gradient{false};
  bool integrator_pi{false};
};

enum class SweepParam { None, LambdaF, Beta };

struct ExperimentConfig {
  std::string name{"custom"};
  std::vector<double> num{4.0, 1.0};
  std::vector<double> den{1.0, 1.0, 4.0};
  std::vector<double> lambdas{15.0, 45.0};
  double beta{2.0};
  double lambda_f{1.0};
  double gamma0{1.0};
  double dt{1e-4};
  double t_end{20.0};
  InputSpec input;
  std::optional<NoiseSpec> noise;
  std::vector<double> x0;
  EstimatorSet estimators;
  std::uint64_t seed{23341000};

  int decimate{100};
  bool hard_reset{false};
  double ie_threshold{1e-6};
  double rank_tol{1e-8};
  double rank_sample_dt{0.5};
  double rank_sample_until{5.0};
  double pe_window{5.0};
  int pe_stride{10};
  double fixed_T{5.0};
  double slack{0.05};

  SweepParam sweep{SweepParam::None};
  std::vector<double> sweep_values;

  /// Throws InvalidConfig when a field violates its precondition.
  void validate() const;
  bool noiseless() const;
};

struct CheckResult {
  std::string name;
  enum class Status { Pass, Fail, Skip } status{Status::Skip};
  std::string detail;
  // informational checks are reported but do not affect the exit code
  bool informational{false};

  bool passed() const { return status != Status::Fail || informational; }
};

const char* to_string(CheckResult::Status s);

/// Decimated time series; every vector has the same length as `t`.
struct Series {
  std::vector<double> t;
  std::vector<double> err_rls;
  std::vector<double> err_grad;
  std::vector<double> err_pi;
  std::vector<double> norm_gamma;
  std::vector<double> lam_min_omega;
  std::vector<double> det_omega;
  std::vector<double> lyapunov;
};

struct RunResult {
  ExperimentConfig config;
  Series series;
  ExcitationReport excitation;
  BoundsReport bounds;
  std::vector<CheckResult> checks;
  std::vector<double> reset_events;
  VectorXd theta_true;
  VectorXd theta_rls;
  double err_initial{0};
  double time_to_threshold{-1};  // first t with ‖θ̃‖ ≤ 1e-2·‖θ̃(0)‖, -1 if never
  double lam_min_omega_fixed_T{0};
  double w_max{0};
  long long steps{0};

  bool all_passed() const;
  const CheckResult* check(const std::string& name) const;
};

struct SweepResult {
  std::vector<RunResult> runs;
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

/// Names accepted by `preset`.
std::vector<std::string> preset_names();
std::string preset_description(const std::string& name);
ExperimentConfig preset(const std::string& name);

/// Parses `key = value` lines ('#' starts a comment) on top of `base`.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});
std::string load_config_text(const std::filesystem::path& path);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Simulates plant, regressor, memory filters and the enabled estimators in
/// lockstep and evaluates every applicable check on full-rate data.
RunResult run(const ExperimentConfig& config);

/// Expands a sweep config into member runs (executed concurrently) and adds
/// the cross-run ordering checks.
SweepResult run_sweep(const ExperimentConfig& config);

enum class EmitFormat { Csv, Summary, PlotScript, Json };

std::string render(const RunResult& result, EmitFormat format, const std::string& csv_name = "");
std::string render_sweep_summary(const SweepResult& result);
void emit(const RunResult& result, EmitFormat format, const std::filesystem::path& path);

}  // namespace mre::harness
