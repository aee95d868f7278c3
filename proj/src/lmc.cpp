#include "ewa/lmc.hpp"

#include <cmath>
#include <thread>
#include <vector>

namespace ewa {

void LmcConfig::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("LmcConfig: h must be positive");
  if (k_max < 1) throw std::invalid_argument("LmcConfig: k_max must be >= 1");
  if (chains < 1) throw std::invalid_argument("LmcConfig: chains must be >= 1");
  if (gd_steps < 0) throw std::invalid_argument("LmcConfig: gd_steps must be >= 0");
}

ChainDivergence::ChainDivergence(int step, int chain)
    : std::runtime_error("lmc chain " + std::to_string(chain) + " diverged at step " +
                         std::to_string(step) + "; reduce the step size h"),
      step_(step),
      chain_(chain) {}

namespace {

Matrix run_chain(const Matrix& y, const PosteriorConfig& cfg, const LmcConfig& lmc,
                 std::uint64_t seed, int chain_index) {
  Rng rng(seed);
  Matrix f;
  switch (lmc.init) {
    case LmcInit::Zeros:
      f = Matrix::Zero(y.rows(), y.cols());
      break;
    case LmcInit::Data:
      f = y;
      break;
    case LmcInit::PriorDraw:
      f = sample_prior(cfg.prior, rng);
      break;
  }
  const double noise_scale = lmc.noise_enabled ? std::sqrt(2.0 * lmc.h) : 0.0;
  std::normal_distribution<double> normal;
  for (int k = 0; k < lmc.k_max; ++k) {
    f += lmc.h * grad_log_posterior(f, y, cfg, lmc.gd_steps);
    if (noise_scale != 0.0) {
      for (Index j = 0; j < f.cols(); ++j)
        for (Index i = 0; i < f.rows(); ++i) f(i, j) += noise_scale * normal(rng);
    }
    if (!f.allFinite()) throw ChainDivergence(k, chain_index);
  }
  return f;
}

}  // namespace

Matrix lmc_chain(const Matrix& y, const PosteriorConfig& cfg, const LmcConfig& lmc) {
  cfg.validate();
  lmc.validate();
  require_finite(y, "lmc_chain");
  return run_chain(y, cfg, lmc, lmc.seed, 0);
}

Matrix mc_ewa(const Matrix& y, const PosteriorConfig& cfg, const LmcConfig& lmc) {
  cfg.validate();
  lmc.validate();
  require_finite(y, "mc_ewa");

  const int n_chains = lmc.chains;
  std::vector<Matrix> results(n_chains);
  std::vector<std::exception_ptr> errors(n_chains);

  unsigned hw = std::thread::hardware_concurrency();
  int workers = lmc.threads > 0 ? lmc.threads : static_cast<int>(hw > 0 ? hw : 1);
  workers = std::min(workers, n_chains);

  auto work = [&](int first) {
    for (int l = first; l < n_chains; l += workers) {
      try {
        results[l] = run_chain(y, cfg, lmc, split_seed(lmc.seed, static_cast<std::uint64_t>(l)), l);
      } catch (...) {
        errors[l] = std::current_exception();
      }
    }
  };

  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }

  for (int l = 0; l < n_chains; ++l) {
    if (errors[l]) std::rethrow_exception(errors[l]);
  }

  // Fixed-order reduction keeps the average bit-reproducible regardless of
  // how chains were scheduled.
  Matrix acc = Matrix::Zero(y.rows(), y.cols());
  for (int l = 0; l < n_chains; ++l) acc += results[l];
  return acc / static_cast<double>(n_chains);
}

Matrix newa(const Matrix& y, double b_xi, const PosteriorConfig& cfg,
            const LmcConfig& lmc, Rng& rng) {
  if (!(b_xi > 0.0)) throw std::invalid_argument("newa: b_xi must be positive");
  // One perturbation per call, shared by all chains.
  Matrix perturbed = y + uniform_matrix(y.rows(), y.cols(), -b_xi, b_xi, rng);
  return mc_ewa(perturbed, cfg, lmc);
}

}  // namespace ewa
