#include "dtqmc/outputs.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dtqmc/json_io.hpp"

namespace dtqmc {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  if (traj.distributions.empty()) return "";
  const Index d_q = traj.distributions.front().probs.size();
  out << "t";
  for (Index i = 0; i < d_q; ++i) out << ",p" << i;
  out << "\n";
  for (std::size_t t = 0; t < traj.distributions.size(); ++t) {
    out << t;
    const RealVector& p = traj.distributions[t].probs;
    for (Index i = 0; i < d_q; ++i) out << "," << format_double(p(i));
    out << "\n";
  }
  return out.str();
}

std::string spectrum_csv(const SpectrumReport& rep) {
  std::ostringstream out;
  out << "re,im,modulus\n";
  for (const Complex& z : rep.eigenvalues) {
    out << format_double(z.real()) << "," << format_double(z.imag()) << ","
        << format_double(std::abs(z)) << "\n";
  }
  return out.str();
}

std::string summary_csv(const MonteCarloSummary& summary) {
  std::ostringstream out;
  out << "bin,mean,stddev\n";
  for (Index i = 0; i < summary.mean.probs.size(); ++i) {
    out << i << "," << format_double(summary.mean.probs(i)) << ","
        << format_double(summary.stddev(i)) << "\n";
  }
  return out.str();
}

std::string stochastic_csv(const StochasticMatrix& m) {
  std::ostringstream out;
  for (Index x = 0; x < m.entries.rows(); ++x) {
    for (Index i = 0; i < m.entries.cols(); ++i) {
      if (i) out << ",";
      out << format_double(m.entries(x, i));
    }
    out << "\n";
  }
  return out.str();
}

std::string norm_history_csv(const SemistabilityReport& rep) {
  std::ostringstream out;
  out << "t,norm\n";
  for (const auto& [t, norm] : rep.norm_history) {
    out << t << "," << format_double(norm) << "\n";
  }
  return out.str();
}

std::string heatmap_matrix(const Trajectory& traj) {
  std::ostringstream out;
  for (const auto& dist : traj.distributions) {
    for (Index i = 0; i < dist.probs.size(); ++i) {
      if (i) out << " ";
      out << format_double(dist.probs(i));
    }
    out << "\n";
  }
  return out.str();
}

namespace {

nlohmann::json semistability_json(const SemistabilityReport& rep) {
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& [t, norm] : rep.norm_history) {
    hist.push_back({t, norm});
  }
  return nlohmann::json{
      {"method", rep.method == SemistabilityMethod::kPerState ? "per-state"
                                                              : "operator-level"},
      {"converged", rep.converged},
      {"t_stop", rep.t_stop},
      {"final_norm", rep.final_norm},
      {"eps", rep.eps},
      {"t_max", rep.t_max},
      {"norm_history", std::move(hist)}};
}

}  // namespace

nlohmann::json report_json(const SimulateResult& result, const ExperimentConfig& cfg) {
  nlohmann::json doc;
  doc["config"] = cfg.resolved();
  doc["per_state"] = semistability_json(result.per_state);
  if (result.operator_level) {
    doc["operator_level"] = semistability_json(*result.operator_level);
  }
  doc["warnings"] = result.trajectory.warnings;
  if (!result.trajectory.distributions.empty()) {
    const RealVector& last = result.trajectory.distributions.back().probs;
    doc["final_distribution"] = std::vector<double>(last.data(), last.data() + last.size());
  }
  return doc;
}

nlohmann::json spectrum_json(const SpectrumResult& result, const ExperimentConfig& cfg) {
  nlohmann::json doc;
  doc["config"] = cfg.resolved();
  if (result.full) {
    doc["classification"] =
        result.full->classification == SpectrumReport::Case::kUniqueUnit ? "case1"
                                                                         : "case2";
    doc["n_unit_modulus"] = result.full->n_unit_modulus;
    doc["n_eigenvalues"] = result.full->eigenvalues.size();
    doc["leading_modulus"] = std::abs(result.full->eigenvalues.front());
  }
  if (result.leading) {
    doc["leading_eigenvalue"] = {{"re", result.leading->real()},
                                 {"im", result.leading->imag()},
                                 {"modulus", std::abs(*result.leading)}};
    doc["partial"] = true;
  }
  return doc;
}

nlohmann::json summary_json(const MonteCarloSummary& summary,
                            const ExperimentConfig& cfg) {
  const RealVector& m = summary.mean.probs;
  return nlohmann::json{
      {"config", cfg.resolved()},
      {"mean", std::vector<double>(m.data(), m.data() + m.size())},
      {"stddev", std::vector<double>(summary.stddev.data(),
                                     summary.stddev.data() + summary.stddev.size())},
      {"n_samples", summary.n_samples},
      {"n_converged", summary.n_converged},
      {"seed", summary.seed},
      {"generator", summary.generator},
      {"eps", summary.eps},
      {"t_max", summary.t_max},
      {"max_t_stop", summary.max_t_stop}};
}

nlohmann::json stochastic_json(const StochasticMatrix& m, const ExperimentConfig& cfg) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index x = 0; x < m.entries.rows(); ++x) {
    std::vector<double> row(m.entries.cols());
    for (Index i = 0; i < m.entries.cols(); ++i) row[i] = m.entries(x, i);
    rows.push_back(row);
  }
  nlohmann::json doc{{"config", cfg.resolved()},
                     {"entries", std::move(rows)},
                     {"column_sum_error", m.column_sum_error},
                     {"tp_error", m.tp_error},
                     {"verified", m.column_sum_error <= 1e-8 && m.tp_error <= 1e-8}};
  if (cfg.coin.is_unitary()) {
    doc["coin_matrix"] = matrix_to_json(cfg.coin.unitary());
  }
  return doc;
}

std::string svg_bar_chart(const RealVector& mean, const RealVector& stddev,
                          const std::string& title) {
  const int width = 640, height = 420, margin = 50;
  const Index n = mean.size();
  double top = 0.0;
  for (Index i = 0; i < n; ++i) top = std::max(top, mean(i) + stddev(i));
  if (top <= 0.0) top = 1.0;
  top *= 1.1;

  const double plot_w = width - 2.0 * margin;
  const double plot_h = height - 2.0 * margin;
  const double bar_w = plot_w / double(n) * 0.7;

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
    << "\" height=\"" << height << "\">\n";
  s << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
       "font-size=\"14\">" << title << "</text>\n";
  s << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
    << width - margin << "\" y2=\"" << height - margin
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
    << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  for (Index i = 0; i < n; ++i) {
    const double cx = margin + plot_w * (double(i) + 0.5) / double(n);
    const double h = plot_h * mean(i) / top;
    const double y0 = height - margin - h;
    s << "<rect x=\"" << cx - bar_w / 2 << "\" y=\"" << y0 << "\" width=\""
      << bar_w << "\" height=\"" << h << "\" fill=\"#4878a8\"/>\n";
    const double e = plot_h * stddev(i) / top;
    if (e > 0.0) {
      s << "<line x1=\"" << cx << "\" y1=\"" << y0 - e << "\" x2=\"" << cx
        << "\" y2=\"" << y0 + e << "\" stroke=\"black\"/>\n";
      s << "<line x1=\"" << cx - 4 << "\" y1=\"" << y0 - e << "\" x2=\""
        << cx + 4 << "\" y2=\"" << y0 - e << "\" stroke=\"black\"/>\n";
      s << "<line x1=\"" << cx - 4 << "\" y1=\"" << y0 + e << "\" x2=\""
        << cx + 4 << "\" y2=\"" << y0 + e << "\" stroke=\"black\"/>\n";
    }
    s << "<text x=\"" << cx << "\" y=\"" << height - margin + 16
      << "\" text-anchor=\"middle\" font-size=\"11\">" << i << "</text>\n";
  }
  s << "<text x=\"" << margin - 8 << "\" y=\"" << margin
    << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(top) << "</text>\n";
  s << "</svg>\n";
  return s.str();
}

std::string svg_heatmap(const Trajectory& traj, const std::string& title) {
  const std::size_t rows = traj.distributions.size();
  if (rows == 0) return "<svg xmlns=\"http://www.w3.org/2000/svg\"/>\n";
  const Index cols = traj.distributions.front().probs.size();
  double pmax = 0.0;
  for (const auto& d : traj.distributions) pmax = std::max(pmax, d.probs.maxCoeff());
  if (pmax <= 0.0) pmax = 1.0;

  const int margin = 40, cell_w = 14;
  const int cell_h = std::max(1, int(520 / rows));
  const int width = margin * 2 + cell_w * int(cols);
  const int height = margin * 2 + cell_h * int(rows);

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
    << "\" height=\"" << height << "\">\n";
  s << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
       "font-size=\"13\">" << title << "</text>\n";
  for (std::size_t t = 0; t < rows; ++t) {
    const RealVector& p = traj.distributions[t].probs;
    for (Index i = 0; i < cols; ++i) {
      const int shade = 255 - int(std::lround(255.0 * std::min(1.0, p(i) / pmax)));
      s << "<rect x=\"" << margin + cell_w * i << "\" y=\"" << margin + cell_h * t
        << "\" width=\"" << cell_w << "\" height=\"" << cell_h << "\" fill=\"rgb("
        << shade << "," << shade << ",255)\"/>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

std::vector<std::vector<double>> parse_numeric_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      // Header detection: any alphabetic character disqualifies the row.
      if (std::any_of(line.begin(), line.end(),
                      [](char c) { return std::isalpha(static_cast<unsigned char>(c)) &&
                                          c != 'e' && c != 'E'; })) {
        continue;
      }
    }
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      row.push_back(std::stod(cell));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file '" + path + "'");
  out << content;
  if (!out) throw Error("write failure on '" + path + "'");
}

namespace {

bool wants(const ExperimentConfig& cfg, const std::string& fmt) {
  return std::find(cfg.output.formats.begin(), cfg.output.formats.end(), fmt) !=
         cfg.output.formats.end();
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::filesystem::create_directories(dir);
}

}  // namespace

std::vector<std::string> write_simulate_outputs(const SimulateResult& result,
                                                const ExperimentConfig& cfg,
                                                const std::string& dir) {
  ensure_dir(dir);
  std::vector<std::string> written;
  if (wants(cfg, "csv")) {
    auto p = join(dir, "trajectory.csv");
    write_text_file(p, trajectory_csv(result.trajectory));
    written.push_back(p);
    p = join(dir, "heatmap.dat");
    write_text_file(p, heatmap_matrix(result.trajectory));
    written.push_back(p);
    p = join(dir, "norms_per_state.csv");
    write_text_file(p, norm_history_csv(result.per_state));
    written.push_back(p);
    if (result.operator_level) {
      p = join(dir, "norms_operator.csv");
      write_text_file(p, norm_history_csv(*result.operator_level));
      written.push_back(p);
    }
  }
  if (wants(cfg, "json")) {
    const auto p = join(dir, "report.json");
    write_text_file(p, report_json(result, cfg).dump(2) + "\n");
    written.push_back(p);
  }
  if (wants(cfg, "svg")) {
    const auto p = join(dir, "trajectory.svg");
    write_text_file(p, svg_heatmap(result.trajectory, "queue-length distribution over time"));
    written.push_back(p);
  }
  return written;
}

std::vector<std::string> write_spectrum_outputs(const SpectrumResult& result,
                                                const ExperimentConfig& cfg,
                                                const std::string& dir) {
  ensure_dir(dir);
  std::vector<std::string> written;
  if (wants(cfg, "csv") && result.full) {
    const auto p = join(dir, "spectrum.csv");
    write_text_file(p, spectrum_csv(*result.full));
    written.push_back(p);
  }
  if (wants(cfg, "json")) {
    const auto p = join(dir, "classification.json");
    write_text_file(p, spectrum_json(result, cfg).dump(2) + "\n");
    written.push_back(p);
  }
  return written;
}

std::vector<std::string> write_montecarlo_outputs(const MonteCarloSummary& summary,
                                                  const ExperimentConfig& cfg,
                                                  const std::string& dir) {
  ensure_dir(dir);
  std::vector<std::string> written;
  if (wants(cfg, "csv")) {
    const auto p = join(dir, "summary.csv");
    write_text_file(p, summary_csv(summary));
    written.push_back(p);
  }
  if (wants(cfg, "json")) {
    const auto p = join(dir, "summary.json");
    write_text_file(p, summary_json(summary, cfg).dump(2) + "\n");
    written.push_back(p);
  }
  if (wants(cfg, "svg")) {
    const auto p = join(dir, "summary.svg");
    write_text_file(p, svg_bar_chart(summary.mean.probs, summary.stddev,
                                     "mean queue-length distribution"));
    written.push_back(p);
  }
  return written;
}

std::vector<std::string> write_classical_matrix_outputs(const StochasticMatrix& m,
                                                        const ExperimentConfig& cfg,
                                                        const std::string& dir) {
  ensure_dir(dir);
  std::vector<std::string> written;
  if (wants(cfg, "csv")) {
    const auto p = join(dir, "stochastic_matrix.csv");
    write_text_file(p, stochastic_csv(m));
    written.push_back(p);
  }
  if (wants(cfg, "json")) {
    const auto p = join(dir, "verification.json");
    write_text_file(p, stochastic_json(m, cfg).dump(2) + "\n");
    written.push_back(p);
  }
  return written;
}

}  // namespace dtqmc
