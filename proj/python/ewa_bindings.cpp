#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ewa/core.hpp"
#include "ewa/denoise.hpp"
#include "ewa/discrete.hpp"
#include "ewa/image.hpp"
#include "ewa/lmc.hpp"
#include "ewa/prior.hpp"
#include "ewa/skorokhod.hpp"
#include "ewa/stein.hpp"
#include "ewa/verify.hpp"

namespace py = pybind11;
using namespace ewa;

namespace {

Image image_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
  if (arr.ndim() == 2) {
    Image img(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)), 1);
    std::copy(arr.data(), arr.data() + arr.size(), img.pixels.begin());
    return img;
  }
  if (arr.ndim() == 3) {
    Image img(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)),
              static_cast<int>(arr.shape(2)));
    std::copy(arr.data(), arr.data() + arr.size(), img.pixels.begin());
    return img;
  }
  throw std::invalid_argument("image array must be HxW or HxWxC");
}

py::array_t<double> image_to_array(const Image& img) {
  py::array_t<double> arr(img.channels == 1
                              ? std::vector<py::ssize_t>{img.height, img.width}
                              : std::vector<py::ssize_t>{img.height, img.width, img.channels});
  std::copy(img.pixels.begin(), img.pixels.end(), arr.mutable_data());
  return arr;
}

}  // namespace

PYBIND11_MODULE(_ewa, m) {
  m.doc() = "Exponentially weighted aggregation for multivariate regression with a "
            "low-rank spectral Student prior";

  // ---- core ----
  m.def("empirical_loss", &empirical_loss, py::arg("a"), py::arg("b"));
  m.def("psnr",
        [](const Matrix& reference, const Matrix& test, double peak) {
          return psnr(reference, test, peak);
        },
        py::arg("reference"), py::arg("test"), py::arg("peak") = 255.0);

  py::class_<NoiseModel>(m, "NoiseModel")
      .def_static("gaussian", &NoiseModel::gaussian, py::arg("sigma"))
      .def_static("uniform", &NoiseModel::uniform, py::arg("half_width"))
      .def_static("rademacher", &NoiseModel::rademacher, py::arg("magnitude"))
      .def_static("discrete_bounded", &NoiseModel::discrete_bounded, py::arg("support"),
                  py::arg("probs"))
      .def_static("shared_magnitude_symmetric", &NoiseModel::shared_magnitude_symmetric,
                  py::arg("base"))
      .def_static("correlated", &NoiseModel::correlated, py::arg("covariance"), py::arg("base"))
      .def("sample", [](const NoiseModel& model, Index k, Index n, std::uint64_t seed) {
        Rng rng(seed);
        return model.sample(k, n, rng);
      }, py::arg("k"), py::arg("n"), py::arg("seed"));

  py::class_<AssumptionReport>(m, "AssumptionReport")
      .def_readonly("b_xi_observed", &AssumptionReport::b_xi_observed)
      .def_readonly("l_observed", &AssumptionReport::l_observed)
      .def_readonly("holds", &AssumptionReport::holds);
  m.def("check_assumption_c", &check_assumption_c, py::arg("noise_draws"),
        py::arg("candidates"), py::arg("b_xi"), py::arg("l"));

  // ---- prior ----
  py::class_<PriorConfig>(m, "PriorConfig")
      .def(py::init([](double lambda, Index k, Index n) {
             PriorConfig cfg{lambda, k, n};
             cfg.validate();
             return cfg;
           }),
           py::arg("lam"), py::arg("k"), py::arg("n"))
      .def_readonly("lam", &PriorConfig::lambda)
      .def_readonly("k", &PriorConfig::k)
      .def_readonly("n", &PriorConfig::n);
  m.def("log_prior_unnormalized", &log_prior_unnormalized, py::arg("f"), py::arg("cfg"));
  m.def("grad_log_prior", &grad_log_prior, py::arg("f"), py::arg("cfg"));
  m.def("sample_prior", [](const PriorConfig& cfg, std::uint64_t seed) {
    Rng rng(seed);
    return sample_prior(cfg, rng);
  }, py::arg("cfg"), py::arg("seed"));
  m.def("kl_shift_bound",
        [](const Matrix& f_bar, const PriorConfig& cfg, bool spectral) {
          return kl_shift_bound(f_bar, cfg, spectral ? KlNorm::Spectral : KlNorm::Frobenius);
        },
        py::arg("f_bar"), py::arg("cfg"), py::arg("spectral") = false);
  m.def("student_t3_cdf", &student_t3_cdf, py::arg("x"));

  // ---- posterior and sampling ----
  py::class_<PosteriorConfig>(m, "PosteriorConfig")
      .def(py::init([](double tau, const PriorConfig& prior) {
             PosteriorConfig cfg{tau, prior};
             cfg.validate();
             return cfg;
           }),
           py::arg("tau"), py::arg("prior"))
      .def_readonly("tau", &PosteriorConfig::tau)
      .def_readonly("prior", &PosteriorConfig::prior);
  m.def("log_posterior_unnormalized", &log_posterior_unnormalized, py::arg("f"), py::arg("y"),
        py::arg("cfg"));
  m.def("solve_ridge_m", &solve_ridge_m, py::arg("f"), py::arg("lam"), py::arg("gd_steps") = 0);
  m.def("grad_log_posterior", &grad_log_posterior, py::arg("f"), py::arg("y"), py::arg("cfg"),
        py::arg("gd_steps") = 0);

  py::class_<LmcConfig>(m, "LmcConfig")
      .def(py::init([](double h, int k_max, int chains, int gd_steps, std::uint64_t seed,
                       const std::string& init, bool noise_enabled, int threads) {
             LmcConfig cfg;
             cfg.h = h;
             cfg.k_max = k_max;
             cfg.chains = chains;
             cfg.gd_steps = gd_steps;
             cfg.seed = seed;
             if (init == "zeros") cfg.init = LmcInit::Zeros;
             else if (init == "data") cfg.init = LmcInit::Data;
             else if (init == "prior_draw") cfg.init = LmcInit::PriorDraw;
             else throw std::invalid_argument("init must be zeros|data|prior_draw");
             cfg.noise_enabled = noise_enabled;
             cfg.threads = threads;
             cfg.validate();
             return cfg;
           }),
           py::arg("h"), py::arg("k_max") = 1000, py::arg("chains") = 1,
           py::arg("gd_steps") = 0, py::arg("seed") = 0, py::arg("init") = "data",
           py::arg("noise_enabled") = true, py::arg("threads") = 0);
  m.def("lmc_chain", &lmc_chain, py::arg("y"), py::arg("cfg"), py::arg("lmc"));
  m.def("mc_ewa", &mc_ewa, py::arg("y"), py::arg("cfg"), py::arg("lmc"),
        py::call_guard<py::gil_scoped_release>());
  m.def("newa", [](const Matrix& y, double b_xi, const PosteriorConfig& cfg,
                   const LmcConfig& lmc, std::uint64_t perturb_seed) {
    Rng rng(perturb_seed);
    return newa(y, b_xi, cfg, lmc, rng);
  }, py::arg("y"), py::arg("b_xi"), py::arg("cfg"), py::arg("lmc"), py::arg("perturb_seed"));

  // ---- discrete aggregation ----
  py::class_<DiscreteDictionary>(m, "DiscreteDictionary")
      .def_static("uniform", &DiscreteDictionary::uniform, py::arg("candidates"))
      .def_static("weighted", &DiscreteDictionary::weighted, py::arg("candidates"),
                  py::arg("weights"))
      .def_readonly("candidates", &DiscreteDictionary::candidates)
      .def_readonly("weights", &DiscreteDictionary::weights);
  m.def("gibbs_weights", &gibbs_weights, py::arg("losses"), py::arg("prior_mass"),
        py::arg("tau"));
  m.def("discrete_ewa", &discrete_ewa, py::arg("dict"), py::arg("y"), py::arg("tau"));
  m.def("oracle_rhs_discrete", [](const DiscreteDictionary& dict, const Matrix& f_star,
                                  double tau) {
    const OracleRhs rhs = oracle_rhs_discrete(dict, f_star, tau);
    return py::make_tuple(rhs.gibbs, rhs.point_mass);
  }, py::arg("dict"), py::arg("f_star"), py::arg("tau"));

  // ---- theory ----
  m.def("stein_constant", &stein_constant, py::arg("dist"));
  m.def("convolved_stein_constant", &convolved_stein_constant, py::arg("b_xi"));
  m.def("theorem5_rhs", &theorem5_rhs, py::arg("f_bar"), py::arg("f_star"), py::arg("lam"),
        py::arg("tau"));
  m.def("eta_mean_is_zero_rational", &eta_mean_is_zero_rational, py::arg("num"), py::arg("den"));

  py::class_<RiskReport>(m, "RiskReport")
      .def_readonly("scenario_id", &RiskReport::scenario_id)
      .def_readonly("trials", &RiskReport::trials)
      .def_readonly("empirical_risk", &RiskReport::empirical_risk)
      .def_readonly("std_error", &RiskReport::std_error)
      .def_readonly("bound_rhs", &RiskReport::bound_rhs)
      .def_readonly("slack", &RiskReport::slack)
      .def_readonly("passed", &RiskReport::passed);
  m.def("verify_scenario",
        [](const std::string& id, int trials) {
          for (auto& s : scenario_library()) {
            if (s.id == id) {
              if (trials > 0) s.trials = trials;
              return verify_theorem(s);
            }
          }
          throw std::invalid_argument("unknown scenario id: " + id);
        },
        py::arg("scenario_id"), py::arg("trials") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("scenario_ids", [] {
    std::vector<std::string> ids;
    for (const auto& s : scenario_library()) ids.push_back(s.id);
    return ids;
  });

  // ---- images ----
  m.def("patchify", [](const py::array_t<double, py::array::c_style | py::array::forcecast>& arr,
                       int patch) {
    const Image img = image_from_array(arr);
    PatchGrid grid{img.height, img.width, img.channels, patch, patch};
    return patchify(img, grid);
  }, py::arg("image"), py::arg("patch") = 10);
  m.def("unpatchify", [](const Matrix& matrix, int height, int width, int channels, int patch) {
    PatchGrid grid{height, width, channels, patch, patch};
    return image_to_array(unpatchify(matrix, grid));
  }, py::arg("matrix"), py::arg("height"), py::arg("width"), py::arg("channels") = 1,
     py::arg("patch") = 10);
  m.def("make_low_rank_image", [](int height, int width, int channels, int rank,
                                  std::uint64_t seed, int patch) {
    return image_to_array(make_low_rank_image(height, width, channels, rank, seed, patch));
  }, py::arg("height"), py::arg("width"), py::arg("channels") = 1, py::arg("rank") = 2,
     py::arg("seed") = 0, py::arg("patch") = 10);

  m.def("denoise_image",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& arr,
           double sigma, double tau, double lambda, double h, int k_max, int chains,
           double perturb, bool add_noise, std::uint64_t seed, int threads, int patch) {
          const Image input = image_from_array(arr);
          ExperimentConfig cfg;
          cfg.sigma = sigma;
          cfg.tau = tau;
          cfg.lambda = lambda;
          cfg.h = h;
          cfg.k_max = k_max;
          cfg.chains = chains;
          cfg.perturb = perturb;
          cfg.add_noise = add_noise;
          cfg.seed = seed;
          cfg.threads = threads;
          cfg.patch = patch;
          DenoiseResult result;
          {
            py::gil_scoped_release release;
            result = run_denoise(input, cfg);
          }
          py::dict out;
          out["denoised"] = image_to_array(result.denoised);
          out["noisy"] = image_to_array(result.noisy);
          out["psnr_noisy"] = result.psnr_noisy;
          out["psnr_denoised"] = result.psnr_denoised;
          out["tau"] = result.tau;
          out["lam"] = result.lambda;
          out["h"] = result.h;
          out["seconds"] = result.seconds;
          return out;
        },
        py::arg("image"), py::arg("sigma"), py::arg("tau") = 0.0, py::arg("lam") = 0.0,
        py::arg("h") = 0.0, py::arg("k_max") = 1000, py::arg("chains") = 20,
        py::arg("perturb") = 0.0, py::arg("add_noise") = true, py::arg("seed") = 0,
        py::arg("threads") = 0, py::arg("patch") = 10);
}
