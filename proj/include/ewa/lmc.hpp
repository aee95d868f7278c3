#pragma once

#include <cstdint>
#include <stdexcept>

#include "ewa/posterior.hpp"
#include "ewa/rng.hpp"

namespace ewa {

enum class LmcInit { Zeros, Data, PriorDraw };

struct LmcConfig {
  double h = 0.01;       // step size
  int k_max = 1000;      // iterations per chain
  int chains = 1;        // Monte Carlo samples / independent chains
  int gd_steps = 0;      // inner ridge solve iterations, 0 = exact
  std::uint64_t seed = 0;
  LmcInit init = LmcInit::Data;
  bool noise_enabled = true;  // diagnostic: false degenerates to gradient ascent
  int threads = 0;            // worker cap for multi-chain runs, 0 = hardware

  void validate() const;
};

// Thrown when an iterate leaves the finite range; usually means h too large.
class ChainDivergence : public std::runtime_error {
 public:
  ChainDivergence(int step, int chain);
  int step() const { return step_; }
  int chain() const { return chain_; }

 private:
  int step_;
  int chain_;
};

// One constant-step Langevin chain
//   F_{k+1} = F_k + h grad log pi_n(F_k) + sqrt(2h) W_k
// with iid standard Gaussian increment matrices W_k. Returns the final
// iterate, one approximate posterior draw. Deterministic given cfg.seed.
Matrix lmc_chain(const Matrix& y, const PosteriorConfig& cfg, const LmcConfig& lmc);

// Average of `chains` independent chains with per-chain seeds
// split_seed(seed, chain_index). Chains may run concurrently; the average is
// accumulated in chain-index order, so results are bit-reproducible.
Matrix mc_ewa(const Matrix& y, const PosteriorConfig& cfg, const LmcConfig& lmc);

// Noisy variant: perturbs Y once by iid Uniform[-b_xi, b_xi] entries drawn
// from `rng`, then averages chains on the perturbed matrix.
Matrix newa(const Matrix& y, double b_xi, const PosteriorConfig& cfg,
            const LmcConfig& lmc, Rng& rng);

}  // namespace ewa
