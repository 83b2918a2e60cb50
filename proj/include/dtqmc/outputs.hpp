#pragma once

#include <string>
#include <vector>

#include "dtqmc/config.hpp"

namespace dtqmc {

// Shortest exact decimal form (17 significant digits round-trips an
// IEEE double bit-exactly).
std::string format_double(double x);

// CSV renderers. Every emitted CSV re-parses to the in-memory values.
std::string trajectory_csv(const Trajectory& traj);
std::string spectrum_csv(const SpectrumReport& rep);           // re,im,modulus
std::string summary_csv(const MonteCarloSummary& summary);     // bin,mean,stddev
std::string stochastic_csv(const StochasticMatrix& m);
std::string norm_history_csv(const SemistabilityReport& rep);  // t,norm

// Gnuplot-compatible matrix block: one row per step, one column per
// queue length.
std::string heatmap_matrix(const Trajectory& traj);

nlohmann::json report_json(const SimulateResult& result, const ExperimentConfig& cfg);
nlohmann::json spectrum_json(const SpectrumResult& result, const ExperimentConfig& cfg);
nlohmann::json summary_json(const MonteCarloSummary& summary, const ExperimentConfig& cfg);
nlohmann::json stochastic_json(const StochasticMatrix& m, const ExperimentConfig& cfg);

// Self-contained SVG renderers (no external plotting dependency).
std::string svg_bar_chart(const RealVector& mean, const RealVector& stddev,
                          const std::string& title);
std::string svg_heatmap(const Trajectory& traj, const std::string& title);

// Parses numeric CSV produced by the renderers above (first line is
// skipped when it contains a header). For round-trip checks.
std::vector<std::vector<double>> parse_numeric_csv(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);

// Command wrappers: compute, then write every requested format into the
// directory. Return the files written.
std::vector<std::string> write_simulate_outputs(const SimulateResult& result,
                                                const ExperimentConfig& cfg,
                                                const std::string& dir);
std::vector<std::string> write_spectrum_outputs(const SpectrumResult& result,
                                                const ExperimentConfig& cfg,
                                                const std::string& dir);
std::vector<std::string> write_montecarlo_outputs(const MonteCarloSummary& summary,
                                                  const ExperimentConfig& cfg,
                                                  const std::string& dir);
std::vector<std::string> write_classical_matrix_outputs(const StochasticMatrix& m,
                                                        const ExperimentConfig& cfg,
                                                        const std::string& dir);

}  // namespace dtqmc
