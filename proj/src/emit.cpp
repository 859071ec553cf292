#include "mre/harness.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mre::harness {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct Column {
  const char* name;
  const std::vector<double>* data;
};

std::vector<Column> csv_columns(const RunResult& r) {
  const auto& e = r.config.estimators;
  const auto& s = r.series;
  std::vector<Column> cols{{"t", &s.t}};
  if (e.rls_mre) cols.push_back({"err_rls", &s.err_rls});
  if (e.gradient) cols.push_back({"err_grad", &s.err_grad});
  if (e.integrator_pi) cols.push_back({"err_pi", &s.err_pi});
  if (e.rls_mre) {
    cols.push_back({"norm_Gamma", &s.norm_gamma});
    cols.push_back({"lam_min_Omega", &s.lam_min_omega});
  }
  return cols;
}

std::string render_csv(const RunResult& r) {
  const auto cols = csv_columns(r);
  std::string out;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    out += cols[c].name;
    out += c + 1 < cols.size() ? ',' : '\n';
  }
  for (std::size_t i = 0; i < r.series.t.size(); ++i) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out += num((*cols[c].data)[i]);
      out += c + 1 < cols.size() ? ',' : '\n';
    }
  }
  return out;
}

std::string render_summary(const RunResult& r) {
  std::ostringstream out;
  out << "run " << r.config.name << " (" << r.steps << " steps, dt = " << num(r.config.dt) << " s)\n";
  const auto& ex = r.excitation;
  out << "excitation: IE " << (ex.ie_met ? "met" : "not met");
  if (ex.T_detect) out << " at T = " << num(*ex.T_detect) << " s";
  out << ", rank W = " << ex.rank_W << ", late window PE " << (ex.pe_met_window ? "met" : "not met")
      << "\n";
  if (r.config.estimators.rls_mre) {
    const auto& b = r.bounds;
    out << "bounds: delta = " << num(b.delta) << ", kappa = " << num(b.kappa)
        << ", eps_max = " << num(b.eps_max) << ", R = " << num(b.R_ultimate)
        << ", Gamma limit = " << num(b.gamma_limit) << "\n";
    out << "final ||theta_err|| (rls_mre) = " << num(r.series.err_rls.empty() ? 0 : r.series.err_rls.back())
        << "\n";
  }
  for (const auto& c : r.checks) {
    out << c.name << ": " << to_string(c.status);
    if (c.informational) out << " [informational]";
    if (!c.detail.empty()) out << " (" << c.detail << ")";
    out << "\n";
  }
  return out.str();
}

std::string render_plot(const RunResult& r, const std::string& csv_name) {
  const std::string csv = csv_name.empty() ? r.config.name + ".csv" : csv_name;
  std::ostringstream out;
  out << "#!/usr/bin/env python3\n"
      << "import sys\n"
      << "import pandas as pd\n"
      << "import matplotlib\n"
      << "matplotlib.use('Agg')\n"
      << "import matplotlib.pyplot as plt\n\n"
      << "path = sys.argv[1] if len(sys.argv) > 1 else '" << csv << "'\n"
      << "df = pd.read_csv(path)\n"
      << "fig, axes = plt.subplots(2, 1, sharex=True, figsize=(8, 6))\n"
      << "for col in ('err_rls', 'err_grad', 'err_pi'):\n"
      << "    if col in df:\n"
      << "        axes[0].plot(df['t'], df[col], label=col)\n"
      << "axes[0].set_ylabel('||theta_err||')\n"
      << "axes[0].legend()\n"
      << "if 'norm_Gamma' in df:\n"
      << "    axes[1].semilogy(df['t'], df['norm_Gamma'], label='||Gamma||')\n";
  if (r.bounds.gamma_limit > 0) {
    out << "    axes[1].axhline(" << num(r.bounds.gamma_limit)
        << ", linestyle='--', color='k', label='lambda / lam_min(Omega)^2')\n";
  }
  out << "    axes[1].legend()\n"
      << "axes[1].set_xlabel('t, s')\n"
      << "fig.suptitle('" << r.config.name << "')\n"
      << "fig.tight_layout()\n"
      << "fig.savefig(path.rsplit('.', 1)[0] + '.png', dpi=120)\n";
  return out.str();
}

std::string render_json(const RunResult& r) {
  nlohmann::ordered_json j;
  j["name"] = r.config.name;
  j["steps"] = r.steps;
  j["theta_true"] = std::vector<double>(r.theta_true.data(), r.theta_true.data() + r.theta_true.size());
  j["theta_rls"] = std::vector<double>(r.theta_rls.data(), r.theta_rls.data() + r.theta_rls.size());
  j["time_to_threshold"] = r.time_to_threshold;
  j["reset_events"] = r.reset_events;
  const auto& ex = r.excitation;
  j["excitation"] = {{"ie_met", ex.ie_met},
                     {"T_detect", ex.T_detect ? nlohmann::json(*ex.T_detect) : nlohmann::json()},
                     {"alpha", ex.alpha},
                     {"pe_met_window", ex.pe_met_window},
                     {"rank_W", ex.rank_W}};
  const auto& b = r.bounds;
  j["bounds"] = {{"delta", b.delta},         {"omega_cap", b.omega_cap},
                 {"eps_max", b.eps_max},     {"kappa", b.kappa},
                 {"r", b.r_small},           {"R", b.R_ultimate},
                 {"gamma_pre_T", b.gamma_pre_T}, {"gamma_limit", b.gamma_limit},
                 {"T", b.T_used},            {"lam_min_Omega_T", b.lam_min_Omega_T},
                 {"lam_min_Ginv", b.lam_min_Ginv}, {"lam_max_Ginv", b.lam_max_Ginv}};
  auto& checks = j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"status", to_string(c.status)},
                      {"informational", c.informational},
                      {"detail", c.detail}});
  }
  return j.dump(2) + "\n";
}

}  // namespace

std::string render(const RunResult& result, EmitFormat format, const std::string& csv_name) {
  switch (format) {
    case EmitFormat::Csv: return render_csv(result);
    case EmitFormat::Summary: return render_summary(result);
    case EmitFormat::PlotScript: return render_plot(result, csv_name);
    case EmitFormat::Json: return render_json(result);
  }
  return {};
}

std::string render_sweep_summary(const SweepResult& result) {
  std::string out;
  for (const auto& r : result.runs) out += render_summary(r) + "\n";
  for (const auto& c : result.checks) {
    out += c.name + ": " + to_string(c.status);
    if (c.informational) out += " [informational]";
    if (!c.detail.empty()) out += " (" + c.detail + ")";
    out += "\n";
  }
  return out;
}

void emit(const RunResult& result, EmitFormat format, const std::filesystem::path& path) {
  const std::string csv_name = path.stem().string() + ".csv";
  const std::string text = render(result, format, csv_name);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::IoFailure, "write to " + path.string() + " failed");
}

}  // namespace mre::harness
