// Command line front end: image denoising, bound verification, prior
// sampling, and loss evaluation over the matrix file formats.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "ewa/config.hpp"
#include "ewa/core.hpp"
#include "ewa/denoise.hpp"
#include "ewa/matrix_io.hpp"
#include "ewa/prior.hpp"
#include "ewa/skorokhod.hpp"
#include "ewa/stein.hpp"
#include "ewa/verify.hpp"

namespace fs = std::filesystem;
using namespace ewa;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitBoundFailed = 2;

std::uint64_t env_seed_fallback() {
  if (const char* env = std::getenv("EWA_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

NoiseModel noise_from_name(const std::string& name, double scale, double corr, Index k) {
  if (name == "gaussian") return NoiseModel::gaussian(scale);
  if (name == "uniform") return NoiseModel::uniform(scale);
  if (name == "rademacher") return NoiseModel::rademacher(scale);
  if (name == "discrete") {
    return NoiseModel::discrete_bounded({-1.5 * scale, -0.5 * scale, 0.5 * scale, 1.5 * scale},
                                        {0.2, 0.3, 0.3, 0.2});
  }
  auto toeplitz = [&](double rho) {
    Matrix sigma(k, k);
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < k; ++j) sigma(i, j) = std::pow(rho, std::abs(i - j));
    return sigma;
  };
  if (name == "shared_rademacher")
    return NoiseModel::shared_magnitude_symmetric(NoiseModel::rademacher(scale));
  if (name == "shared_uniform")
    return NoiseModel::shared_magnitude_symmetric(NoiseModel::uniform(scale));
  if (name == "correlated_rademacher")
    return NoiseModel::correlated(toeplitz(corr), NoiseModel::rademacher(scale));
  if (name == "correlated_uniform")
    return NoiseModel::correlated(toeplitz(corr), NoiseModel::uniform(scale));
  if (name == "correlated_gaussian")
    return NoiseModel::correlated(toeplitz(corr), NoiseModel::gaussian(scale));
  throw std::invalid_argument("unknown noise model: " + name);
}

TheoremScenario scenario_from_config(Theorem which, const KeyValueConfig& cfg) {
  TheoremScenario s;
  s.which = which;
  s.id = cfg.get_string("id", "scenario_" + to_string(which));
  const Index k = cfg.get_int("K", 4);
  const Index n = cfg.get_int("n", 12);
  const int dict_size = cfg.get_int("dict_size", 8);
  const double spread = cfg.get_double("dict_spread", 0.8);
  const bool include_f_star = cfg.get_bool("include_f_star", true);
  const std::uint64_t dict_seed = cfg.get_u64("dict_seed", 101);

  Rng rng(dict_seed);
  s.f_star = gaussian_matrix(k, n, rng);
  std::vector<Matrix> cands;
  if (include_f_star) cands.push_back(s.f_star);
  while (static_cast<int>(cands.size()) < dict_size) {
    cands.push_back(s.f_star + uniform_matrix(k, n, -spread, spread, rng));
  }
  s.dict = DiscreteDictionary::uniform(std::move(cands));

  std::string default_noise;
  switch (which) {
    case Theorem::T1: default_noise = "shared_rademacher"; break;
    case Theorem::T2: default_noise = "correlated_rademacher"; break;
    case Theorem::T3: default_noise = "gaussian"; break;
    case Theorem::T4: default_noise = "rademacher"; break;
  }
  s.noise = noise_from_name(cfg.get_string("noise", default_noise),
                            cfg.get_double("noise_scale", 1.0),
                            cfg.get_double("corr", 0.5), k);
  s.b_xi = cfg.get_double("b_xi", 1.0);
  s.tau = cfg.get_double("tau", 0.0);
  s.perturb = cfg.get_double("perturb", 0.0);
  s.trials = cfg.get_int("trials", 2000);
  s.seed = cfg.get_u64("seed", 1);
  return s;
}

int run_verify_theorems(Theorem which, const std::optional<KeyValueConfig>& cfg,
                        int trials_override, std::uint64_t seed_override,
                        const std::string& out_path) {
  std::vector<TheoremScenario> scenarios;
  if (cfg) {
    scenarios.push_back(scenario_from_config(which, *cfg));
  } else {
    for (auto& s : scenario_library()) {
      if (s.which == which) scenarios.push_back(std::move(s));
    }
  }
  std::ofstream csv;
  if (!out_path.empty()) {
    csv.open(out_path);
    csv << risk_report_csv_header() << '\n';
  }
  bool all = true;
  for (auto& s : scenarios) {
    if (trials_override > 0) s.trials = trials_override;
    if (seed_override != 0) s.seed = seed_override;
    const RiskReport report = verify_theorem(s);
    print_report(std::cout, report);
    if (csv.is_open()) csv << to_csv_row(report) << '\n';
    all = all && report.passed;
  }
  return all ? kExitOk : kExitBoundFailed;
}

int run_verify_t5(const std::optional<KeyValueConfig>& cfg, int trials_override,
                  std::uint64_t seed_override, const std::string& out_path) {
  LowRankScenario s;
  if (cfg) {
    s.id = cfg->get_string("id", s.id);
    s.k = cfg->get_int("K", static_cast<int>(s.k));
    s.n = cfg->get_int("n", static_cast<int>(s.n));
    s.rank = cfg->get_int("rank", s.rank);
    s.b_xi = cfg->get_double("b_xi", s.b_xi);
    s.f_star_scale = cfg->get_double("f_star_scale", s.f_star_scale);
    s.tau = cfg->get_double("tau", 0.0);
    s.lambda = cfg->get_double("lambda", 0.0);
    s.h = cfg->get_double("h", s.h);
    s.k_max = cfg->get_int("k_max", s.k_max);
    s.chains = cfg->get_int("chains", s.chains);
    s.trials = cfg->get_int("trials", s.trials);
    s.seed = cfg->get_u64("seed", s.seed);
    s.threads = cfg->get_int("threads", s.threads);
  }
  if (trials_override > 0) s.trials = trials_override;
  if (seed_override != 0) s.seed = seed_override;
  const RiskReport report = verify_theorem5_lmc(s);
  print_report(std::cout, report);
  if (!out_path.empty()) {
    std::ofstream csv(out_path);
    csv << risk_report_csv_header() << '\n' << to_csv_row(report) << '\n';
  }
  return report.passed ? kExitOk : kExitBoundFailed;
}

int run_verify_mcewa(const std::optional<KeyValueConfig>& base, int trials_override,
                     std::uint64_t seed_override, const std::string& out_path) {
  KeyValueConfig cfg = base ? *base : KeyValueConfig{};
  const Index k = cfg.get_int("K", 3);
  const Index n = cfg.get_int("n", 8);
  const int dict_size = cfg.get_int("dict_size", 5);
  const double spread = cfg.get_double("dict_spread", 0.7);
  const double tau = cfg.get_double("tau", 0.35);
  const double noise_scale = cfg.get_double("noise_scale", 0.5);
  const int n_samples = cfg.get_int("n_samples", 8);
  int trials = cfg.get_int("trials", 4000);
  std::uint64_t seed = cfg.get_u64("seed", 7);
  if (trials_override > 0) trials = trials_override;
  if (seed_override != 0) seed = seed_override;

  Rng rng(seed);
  Matrix f_star = gaussian_matrix(k, n, rng);
  std::vector<Matrix> cands;
  for (int j = 0; j < dict_size; ++j) {
    cands.push_back(f_star + spread * gaussian_matrix(k, n, rng));
  }
  auto dict = DiscreteDictionary::uniform(std::move(cands));
  auto report = mcewa_identity_check(dict, f_star, NoiseModel::gaussian(noise_scale), tau,
                                     n_samples, trials, rng);
  const bool pass = std::abs(report.gap) < 4.0 * report.gap_se;
  std::cout << (pass ? "[pass] " : "[FAIL] ") << "mcewa identity: lhs " << report.lhs
            << ", rhs " << report.rhs << ", gap " << report.gap << " (4 se "
            << 4.0 * report.gap_se << "), excess term " << report.mc_excess << " over "
            << report.trials << " trials at N=" << report.n_samples << "\n";
  if (!out_path.empty()) {
    std::ofstream csv(out_path);
    csv << "n_samples,trials,lhs,rhs,gap,gap_se,mc_excess,passed\n";
    csv.precision(12);
    csv << report.n_samples << ',' << report.trials << ',' << report.lhs << ',' << report.rhs
        << ',' << report.gap << ',' << report.gap_se << ',' << report.mc_excess << ','
        << (pass ? "true" : "false") << '\n';
  }
  return pass ? kExitOk : kExitBoundFailed;
}

int run_verify_skorokhod(const std::optional<KeyValueConfig>& base, std::uint64_t seed_override,
                         const std::string& out_path) {
  KeyValueConfig cfg = base ? *base : KeyValueConfig{};
  const std::string dist_name = cfg.get_string("dist", "gaussian");
  const double scale = cfg.get_double("scale", 1.0);
  const double gamma = cfg.get_double("gamma", 0.25);
  const std::int64_t samples = cfg.get_int("samples", 1000000);
  const double tol = cfg.get_double("cdf_tol", 0.005);
  std::uint64_t seed = cfg.get_u64("seed", 3);
  if (seed_override != 0) seed = seed_override;

  NoiseModel dist = noise_from_name(dist_name, scale, 0.0, 1);
  Rng rng(seed);
  auto report = skorokhod_check(dist, gamma, samples, rng);
  const bool pass = report.cdf_distance < tol && report.conditional_means_ok;
  std::cout << (pass ? "[pass] " : "[FAIL] ") << "skorokhod: cdf distance "
            << report.cdf_distance << " (tolerance " << tol << "), conditional means "
            << (report.conditional_means_ok ? "centered" : "biased") << " across "
            << report.bins.size() << " bins\n";
  if (!out_path.empty()) {
    std::ofstream csv(out_path);
    csv << "bin,xi_low,xi_high,zeta_mean,zeta_se,count\n";
    csv.precision(12);
    for (std::size_t b = 0; b < report.bins.size(); ++b) {
      const auto& bin = report.bins[b];
      csv << b << ',' << bin.xi_low << ',' << bin.xi_high << ',' << bin.zeta_mean << ','
          << bin.zeta_se << ',' << bin.count << '\n';
    }
  }
  return pass ? kExitOk : kExitBoundFailed;
}

int run_verify_stein(const std::optional<KeyValueConfig>& base, const std::string& out_path) {
  KeyValueConfig cfg = base ? *base : KeyValueConfig{};
  const std::string dist_name = cfg.get_string("dist", "uniform");
  const double scale = cfg.get_double("scale", 1.0);
  const int points = cfg.get_int("grid_points", 801);
  const double tol = cfg.get_double("tol", 1e-3);

  double analytic = 0.0;
  SteinProfile profile;
  if (dist_name == "convolved_rademacher") {
    analytic = convolved_stein_constant(scale);
    auto density = uniform_convolution_density(NoiseModel::rademacher(scale), scale);
    profile = stein_profile(density, linspace(-density.support * 0.9995,
                                              density.support * 0.9995, points));
  } else {
    NoiseModel dist = noise_from_name(dist_name, scale, 0.0, 1);
    analytic = stein_constant(dist);
    const double reach = dist.kind() == NoiseKind::Gaussian ? 6.0 * scale : scale;
    profile = stein_profile(dist, linspace(-reach, reach, points));
  }
  const double err = std::abs(profile.g_max - analytic);
  const bool pass = err < tol;
  std::cout << (pass ? "[pass] " : "[FAIL] ") << "stein: grid max " << profile.g_max
            << " vs analytic constant " << analytic << " (|error| " << err << ", tolerance "
            << tol << ")\n";
  if (!out_path.empty()) {
    std::ofstream csv(out_path);
    csv << "x,m,g\n";
    csv.precision(12);
    for (std::size_t i = 0; i < profile.grid.size(); ++i) {
      csv << profile.grid[i] << ',' << profile.m_values[i] << ',' << profile.g_values[i] << '\n';
    }
  }
  return pass ? kExitOk : kExitBoundFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponentially weighted aggregation for multivariate regression "
               "with a low-rank spectral Student prior"};
  app.require_subcommand(1);
  // --h is a real option below, so help stays on --help only
  app.set_help_flag("--help", "Print help");

  // ---- denoise ----
  auto* denoise = app.add_subcommand("denoise", "Patch-based image denoiser");
  denoise->set_help_flag("--help", "Print help");
  std::string image_path, out_path, noisy_path, reference_path, config_path;
  ExperimentConfig exp;
  double flag_sigma = 30.0, flag_tau = 0.0, flag_lambda = 0.0, flag_h = 0.0, flag_perturb = 0.0;
  int flag_kmax = 1000, flag_chains = 20, flag_gd = 0, flag_patch = 10, flag_threads = 0;
  std::uint64_t flag_seed = 0;
  bool no_add_noise = false, full_scale = false;
  denoise->add_option("image", image_path, "Input image (binary PPM/PGM)")->required();
  auto* o_sigma = denoise->add_option("--sigma", flag_sigma, "Noise standard deviation");
  auto* o_tau = denoise->add_option("--tau", flag_tau, "Temperature (default 2 sigma^2 / n)");
  auto* o_lambda = denoise->add_option("--lambda", flag_lambda,
                                       "Prior scale (default 10 sigma sqrt((n+K)/K))");
  auto* o_h = denoise->add_option("--h", flag_h, "Langevin step size (default 10, capped)");
  auto* o_kmax = denoise->add_option("--kmax", flag_kmax, "Langevin iterations per chain");
  auto* o_chains = denoise->add_option("--n-chains", flag_chains, "Number of chains");
  auto* o_seed = denoise->add_option("--seed", flag_seed, "RNG seed (EWA_SEED fallback)");
  auto* o_perturb = denoise->add_option("--perturb", flag_perturb,
                                        "Uniform label perturbation half-width");
  auto* o_gd = denoise->add_option("--gd-steps", flag_gd, "Inner solve GD steps (0 = exact)");
  auto* o_patch = denoise->add_option("--patch", flag_patch, "Patch side length");
  auto* o_threads = denoise->add_option("--threads", flag_threads, "Worker thread cap");
  denoise->add_flag("--no-add-noise", no_add_noise, "Input is already noisy");
  denoise->add_flag("--full", full_scale, "Full scale: 400 chains x 4000 iterations");
  denoise->add_option("--out", out_path, "Output image path");
  denoise->add_option("--save-noisy", noisy_path, "Also save the noisy image");
  denoise->add_option("--reference", reference_path, "Clean reference for PSNR");
  denoise->add_option("--config", config_path, "key = value config file (flags win)");

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "Certify risk bounds and structural checks");
  std::string theorem_name, scenario_path, report_path;
  int verify_trials = 0;
  std::uint64_t verify_seed = 0;
  verify->add_option("--theorem", theorem_name,
                     "One of t1|t2|t3|t4|t5|mcewa|skorokhod|stein")->required();
  verify->add_option("--scenario", scenario_path, "Scenario config file");
  verify->add_option("--trials", verify_trials, "Trial count override");
  verify->add_option("--seed", verify_seed, "Seed override");
  verify->add_option("--out", report_path, "Write the report as CSV");

  // ---- sample-prior ----
  auto* sample = app.add_subcommand("sample-prior", "Draw matrices from the low-rank prior");
  int sp_k = 4, sp_n = 6, sp_draws = 1;
  double sp_lambda = 1.0;
  std::uint64_t sp_seed = 0;
  std::string sp_out = "prior.bin";
  sample->add_option("--k", sp_k, "Rows")->required();
  sample->add_option("--n", sp_n, "Columns")->required();
  sample->add_option("--lambda", sp_lambda, "Prior scale");
  sample->add_option("--draws", sp_draws, "Number of draws");
  auto* sp_o_seed = sample->add_option("--seed", sp_seed, "RNG seed (EWA_SEED fallback)");
  sample->add_option("--out", sp_out, "Output path (.csv for text, else binary)");

  // ---- loss ----
  auto* loss_cmd = app.add_subcommand("loss", "Empirical loss between two matrix files");
  std::string loss_a, loss_b;
  loss_cmd->add_option("a", loss_a, "First matrix")->required();
  loss_cmd->add_option("b", loss_b, "Second matrix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*denoise) {
      KeyValueConfig cfg;
      if (!config_path.empty()) cfg = KeyValueConfig::from_file(config_path);
      exp.sigma = o_sigma->count() ? flag_sigma : cfg.get_double("sigma", flag_sigma);
      exp.tau = o_tau->count() ? flag_tau : cfg.get_double("tau", 0.0);
      exp.lambda = o_lambda->count() ? flag_lambda : cfg.get_double("lambda", 0.0);
      exp.h = o_h->count() ? flag_h : cfg.get_double("h", 0.0);
      exp.k_max = o_kmax->count() ? flag_kmax : cfg.get_int("kmax", flag_kmax);
      exp.chains = o_chains->count() ? flag_chains : cfg.get_int("n_chains", flag_chains);
      exp.gd_steps = o_gd->count() ? flag_gd : cfg.get_int("gd_steps", flag_gd);
      exp.patch = o_patch->count() ? flag_patch : cfg.get_int("patch", flag_patch);
      exp.threads = o_threads->count() ? flag_threads : cfg.get_int("threads", flag_threads);
      exp.perturb = o_perturb->count() ? flag_perturb : cfg.get_double("perturb", 0.0);
      exp.seed = o_seed->count() ? flag_seed : cfg.get_u64("seed", env_seed_fallback());
      exp.add_noise = !no_add_noise && cfg.get_bool("add_noise", true);
      exp.full_scale = full_scale || cfg.get_bool("full", false);

      const Image input = read_ppm(image_path);
      std::optional<Image> reference;
      if (!reference_path.empty()) reference = read_ppm(reference_path);
      const DenoiseResult result = run_denoise(input, exp, reference);

      std::cout << "patch matrix " << result.f_hat.rows() << "x" << result.f_hat.cols()
                << ", tau " << result.tau << ", lambda " << result.lambda << ", h " << result.h
                << ", chains " << (exp.full_scale ? 400 : exp.chains) << ", iterations "
                << (exp.full_scale ? 4000 : exp.k_max) << "\n";
      const bool have_ref = exp.add_noise || !reference_path.empty();
      if (have_ref) {
        std::cout << "psnr noisy    " << result.psnr_noisy << " dB\n"
                  << "psnr denoised " << result.psnr_denoised << " dB\n";
      } else {
        std::cout << "psnr: n/a (no clean reference)\n";
      }
      std::cout << "elapsed " << result.seconds << " s\n";

      if (out_path.empty()) {
        out_path = (fs::path(image_path).parent_path() /
                    (fs::path(image_path).stem().string() + ".denoised" +
                     fs::path(image_path).extension().string()))
                       .string();
      }
      write_ppm(result.denoised, out_path);
      std::cout << "wrote " << out_path << "\n";
      if (!noisy_path.empty()) {
        write_ppm(result.noisy, noisy_path);
        std::cout << "wrote " << noisy_path << "\n";
      }
      return kExitOk;
    }

    if (*verify) {
      std::optional<KeyValueConfig> cfg;
      if (!scenario_path.empty()) cfg = KeyValueConfig::from_file(scenario_path);
      if (theorem_name == "t5") {
        return run_verify_t5(cfg, verify_trials, verify_seed, report_path);
      }
      if (theorem_name == "mcewa") {
        return run_verify_mcewa(cfg, verify_trials, verify_seed, report_path);
      }
      if (theorem_name == "skorokhod") {
        return run_verify_skorokhod(cfg, verify_seed, report_path);
      }
      if (theorem_name == "stein") {
        return run_verify_stein(cfg, report_path);
      }
      return run_verify_theorems(theorem_from_string(theorem_name), cfg, verify_trials,
                                 verify_seed, report_path);
    }

    if (*sample) {
      if (sp_draws < 1) throw std::invalid_argument("sample-prior: draws must be >= 1");
      const std::uint64_t seed = sp_o_seed->count() ? sp_seed : env_seed_fallback();
      Rng rng(seed);
      PriorConfig cfg{sp_lambda, sp_k, sp_n};
      for (int d = 0; d < sp_draws; ++d) {
        fs::path path(sp_out);
        if (sp_draws > 1) {
          path = path.parent_path() /
                 (path.stem().string() + "_" + std::to_string(d) + path.extension().string());
        }
        write_matrix(sample_prior(cfg, rng), path);
        std::cout << "wrote " << path.string() << "\n";
      }
      return kExitOk;
    }

    if (*loss_cmd) {
      const Matrix a = read_matrix(loss_a);
      const Matrix b = read_matrix(loss_b);
      std::printf("%.17g\n", empirical_loss(a, b));
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
