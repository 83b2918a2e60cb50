#include "dtqmc/randstates.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <thread>
#include <vector>

namespace dtqmc {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_subseed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

double GaussianRng::uniform() {
  return double(engine_() >> 11) * 0x1.0p-53;
}

double GaussianRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]: keeps the log finite
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

ComplexMatrix ginibre(Index n, GaussianRng& rng) {
  if (n < 1) throw InvalidDimsError("ginibre: n must be positive");
  ComplexMatrix a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      a(i, j) = Complex(re, im);
    }
  }
  return a;
}

DensityMatrix hs_random_state(Index n, GaussianRng& rng) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    const ComplexMatrix a = ginibre(n, rng);
    ComplexMatrix w = a * a.adjoint();
    const double tr = w.trace().real();
    if (tr > 0.0 && std::isfinite(tr)) {
      w /= tr;
      w = 0.5 * (w + w.adjoint().eval());
      return DensityMatrix(std::move(w));
    }
  }
  throw NumericalError("hs_random_state: degenerate Ginibre draw twice in a row");
}

void SampleConfig::validate() const {
  if (n_samples < 1) throw InvalidValueError("SampleConfig: n_samples must be >= 1");
  if (eps <= 0.0) throw InvalidValueError("SampleConfig: eps must be > 0");
  if (t_max < 1) throw InvalidValueError("SampleConfig: t_max must be >= 1");
  if (n_threads < 0) throw InvalidValueError("SampleConfig: n_threads must be >= 0");
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = x[0];
    for (std::size_t i = 1; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

namespace {

struct SampleResult {
  RealVector dist;
  bool converged = false;
  long t_stop = 0;
  double final_norm = 0.0;
};

DensityMatrix draw_initial_state(const QueueDims& dims, const SampleConfig& cfg,
                                 GaussianRng& rng) {
  if (cfg.state_kind == StateKind::kFullSystem) {
    return hs_random_state(dims.total_dim(), rng);
  }
  const int q = cfg.queue_basis_index >= 0 ? cfg.queue_basis_index : dims.d_q / 2;
  if (q >= dims.d_q) {
    throw InvalidDimsError("monte_carlo: queue_basis_index out of range");
  }
  const DensityMatrix coin = hs_random_state(dims.coin_dim(), rng);
  ComplexMatrix qmat = ComplexMatrix::Zero(dims.d_q, dims.d_q);
  qmat(q, q) = 1.0;
  return DensityMatrix(kron(coin.mat(), qmat));
}

SampleResult run_sample(const KrausChannel& step, const QueueDims& dims,
                        const SampleConfig& cfg, std::uint64_t subseed) {
  GaussianRng rng(subseed);
  const DensityMatrix rho0 = draw_initial_state(dims, cfg, rng);

  SampleResult res;
  ConvergenceDetector detector(cfg.eps);
  ComplexMatrix cur = rho0.mat();
  ComplexMatrix next, scratch(step.dim(), step.dim());
  RealVector prev = queue_distribution(cur, dims).probs;
  for (long t = 1; t <= cfg.t_max; ++t) {
    step.apply_into(cur, next, scratch);
    cur.swap(next);
    if (t % 100 == 0) cur = 0.5 * (cur + cur.adjoint().eval());
    RealVector p = queue_distribution(cur, dims).probs;
    res.final_norm = l1_distance(p, prev);
    prev.swap(p);
    if (detector.push(t, res.final_norm)) break;
  }
  res.converged = detector.converged();
  res.t_stop = detector.converged() ? detector.t_stop() - 1 : cfg.t_max;
  res.dist = std::move(prev);
  return res;
}

}  // namespace

MonteCarloSummary monte_carlo_mean(const KrausChannel& step, const QueueDims& dims,
                                   const SampleConfig& cfg) {
  cfg.validate();
  if (step.dim() != dims.total_dim()) {
    throw InvalidDimsError("monte_carlo_mean: dimension mismatch");
  }
  const long n = cfg.n_samples;
  std::vector<SampleResult> results(static_cast<std::size_t>(n));

  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const unsigned n_threads =
      cfg.n_threads > 0 ? static_cast<unsigned>(cfg.n_threads)
                        : std::min<unsigned>(hw, static_cast<unsigned>(n));

  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&](unsigned tid) {
    for (long k = tid; k < n; k += n_threads) {
      try {
        results[static_cast<std::size_t>(k)] = run_sample(
            step, dims, cfg, derive_subseed(cfg.seed, static_cast<std::uint64_t>(k)));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (n_threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned tid = 0; tid < n_threads; ++tid) pool.emplace_back(worker, tid);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  MonteCarloSummary summary;
  summary.n_samples = n;
  summary.seed = cfg.seed;
  summary.generator = GaussianRng::kName;
  summary.eps = cfg.eps;
  summary.t_max = cfg.t_max;

  std::vector<std::size_t> converged_idx;
  double worst_norm = 0.0;
  for (std::size_t k = 0; k < results.size(); ++k) {
    if (results[k].converged) {
      converged_idx.push_back(k);
      summary.max_t_stop = std::max(summary.max_t_stop, results[k].t_stop);
    } else {
      worst_norm = std::max(worst_norm, results[k].final_norm);
    }
  }
  summary.n_converged = static_cast<long>(converged_idx.size());
  if (converged_idx.empty()) {
    throw NumericalError(
        "monte_carlo_mean: no sample met the semistability criterion within t_max=" +
        std::to_string(cfg.t_max) + " (worst final norm " +
        std::to_string(worst_norm) + "); raise t_max or eps");
  }

  // Index-ordered pairwise reduction keeps the result independent of
  // scheduling; only converged samples contribute.
  const Index d_q = dims.d_q;
  const std::size_t m = converged_idx.size();
  summary.mean.probs.resize(d_q);
  summary.stddev.resize(d_q);
  std::vector<double> column(m);
  for (Index b = 0; b < d_q; ++b) {
    for (std::size_t k = 0; k < m; ++k) {
      column[k] = results[converged_idx[k]].dist(b);
    }
    const double mean = pairwise_sum(column.data(), m) / double(m);
    summary.mean.probs(b) = mean;
    if (m > 1) {
      for (std::size_t k = 0; k < m; ++k) {
        const double d = column[k] - mean;
        column[k] = d * d;
      }
      summary.stddev(b) =
          std::sqrt(pairwise_sum(column.data(), m) / double(m - 1));
    } else {
      summary.stddev(b) = 0.0;
    }
  }
  return summary;
}

}  // namespace dtqmc
