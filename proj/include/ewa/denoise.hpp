#pragma once

#include <cstdint>
#include <optional>

#include "ewa/image.hpp"
#include "ewa/lmc.hpp"

namespace ewa {

// Patch-based denoiser settings. tau and lambda default to the values
// derived from sigma and the patch-matrix shape: tau = 2 sigma^2 / n,
// lambda = 10 sigma sqrt((n+K)/K). Chain count and iteration budget default
// to desk scale; full_scale switches to 400 chains x 4000 iterations.
struct ExperimentConfig {
  double sigma = 30.0;
  double tau = 0.0;     // 0 -> derived
  double lambda = 0.0;  // 0 -> derived
  double h = 0.0;       // 0 -> 10, capped at the explicit-scheme stability bound
  int k_max = 1000;
  int chains = 20;
  int gd_steps = 0;
  int patch = 10;
  double perturb = 0.0;  // > 0 adds the uniform label perturbation before sampling
  bool add_noise = true;
  bool full_scale = false;
  int threads = 0;
  std::uint64_t seed = 0;

  double derived_tau(Index n) const { return 2.0 * sigma * sigma / static_cast<double>(n); }
  double derived_lambda(Index k, Index n) const;
};

struct DenoiseResult {
  Image noisy;
  Image denoised;
  Matrix f_hat;          // the estimated patch matrix, pre-clamping
  double psnr_noisy = 0.0;
  double psnr_denoised = 0.0;
  double tau = 0.0;
  double lambda = 0.0;
  double h = 0.0;
  double seconds = 0.0;
};

// Full pipeline: (optionally) add Gaussian noise, patchify, average Langevin
// chains under the low-rank prior, unpatchify. PSNR values are computed
// against `reference` when given, else against `input` (the usual case:
// input is clean and noise is added here). With add_noise = false the input
// is treated as already noisy.
DenoiseResult run_denoise(const Image& input, const ExperimentConfig& cfg,
                          const std::optional<Image>& reference = std::nullopt);

}  // namespace ewa
