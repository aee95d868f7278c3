#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "ewa/core.hpp"
#include "ewa/denoise.hpp"
#include "ewa/image.hpp"
#include "ewa/matrix_io.hpp"

using namespace ewa;

TEST_CASE("patchify shapes match the reference layout") {
  PatchGrid grid{120, 160, 3, 10, 10};
  CHECK(grid.rows() == 192);
  CHECK(grid.cols() == 300);

  Image img(120, 160, 3, 37.0);
  Matrix m = patchify(img, grid);
  CHECK(m.rows() == 192);
  CHECK(m.cols() == 300);
  CHECK(m.minCoeff() == 37.0);
  CHECK(m.maxCoeff() == 37.0);
}

TEST_CASE("patchify index arithmetic against full enumeration") {
  PatchGrid grid{20, 20, 1, 10, 10};
  Image img(20, 20, 1);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x) img.at(y, x, 0) = 1000.0 * y + x;

  Matrix m = patchify(img, grid);
  REQUIRE(m.rows() == 4);
  REQUIRE(m.cols() == 100);
  CHECK(m(0, 0) == img.at(0, 0, 0));
  // enumerate every position: patch p = by*2+bx, column (dy*10+dx)
  for (int by = 0; by < 2; ++by)
    for (int bx = 0; bx < 2; ++bx)
      for (int dy = 0; dy < 10; ++dy)
        for (int dx = 0; dx < 10; ++dx) {
          CHECK(m(by * 2 + bx, dy * 10 + dx) == img.at(by * 10 + dy, bx * 10 + dx, 0));
        }
}

TEST_CASE("patchify and unpatchify are exact inverses") {
  Rng rng(61);
  PatchGrid grid{30, 40, 3, 10, 10};
  Image img(30, 40, 3);
  std::normal_distribution<double> normal(100.0, 400.0);  // values far outside [0,255]
  for (double& p : img.pixels) p = normal(rng);

  Image back = unpatchify(patchify(img, grid), grid);
  for (std::size_t i = 0; i < img.size(); ++i) CHECK(back.pixels[i] == img.pixels[i]);

  Image zero = unpatchify(Matrix::Zero(grid.rows(), grid.cols()), grid);
  for (double p : zero.pixels) CHECK(p == 0.0);
}

TEST_CASE("non-dividing grids are rejected") {
  PatchGrid grid{25, 40, 1, 10, 10};
  CHECK_THROWS_AS(grid.validate(), std::invalid_argument);
}

TEST_CASE("ppm write clamps and rounds, read recovers byte values") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ewa_ppm_test";
  fs::create_directories(dir);

  Image img(2, 3, 3);
  img.at(0, 0, 0) = 300.0;   // clamps to 255
  img.at(0, 0, 1) = -40.0;   // clamps to 0
  img.at(0, 0, 2) = 17.4;    // rounds to 17
  img.at(1, 2, 0) = 254.6;   // rounds to 255
  write_ppm(img, dir / "x.ppm");
  Image back = read_ppm(dir / "x.ppm");
  CHECK(back.at(0, 0, 0) == 255.0);
  CHECK(back.at(0, 0, 1) == 0.0);
  CHECK(back.at(0, 0, 2) == 17.0);
  CHECK(back.at(1, 2, 0) == 255.0);

  // grayscale round trip through P5
  Image gray(4, 5, 1);
  for (std::size_t i = 0; i < gray.size(); ++i) gray.pixels[i] = static_cast<double>(i * 7 % 256);
  write_ppm(gray, dir / "g.pgm");
  Image gback = read_ppm(dir / "g.pgm");
  for (std::size_t i = 0; i < gray.size(); ++i) CHECK(gback.pixels[i] == gray.pixels[i]);
  fs::remove_all(dir);
}

TEST_CASE("noisy psnr matches the gaussian formula") {
  Image img = make_low_rank_image(60, 80, 3, 2, 71);
  Rng rng(62);
  for (double sigma : {10.0, 30.0}) {
    Image noisy = add_gaussian_noise(img, sigma, rng);
    CHECK(psnr(img, noisy) ==
          doctest::Approx(20.0 * std::log10(255.0 / sigma)).epsilon(0.02));
  }
}

TEST_CASE("low rank test images have the advertised rank and range") {
  Image img = make_low_rank_image(120, 160, 3, 2, 5);
  PatchGrid grid{120, 160, 3, 10, 10};
  Matrix m = patchify(img, grid);
  Eigen::JacobiSVD<Matrix> svd(m);
  CHECK(svd.singularValues()(0) > 0.0);
  CHECK(svd.singularValues()(1) > 1e-8 * svd.singularValues()(0));
  CHECK(svd.singularValues()(2) < 1e-8 * svd.singularValues()(0));
  CHECK(m.maxCoeff() == doctest::Approx(255.0));
  CHECK(m.minCoeff() >= 0.0);
}

TEST_CASE("denoise pipeline improves a small low-rank target") {
  // At this tiny patch-matrix shape the default lambda leaves the prior
  // nearly flat across the noise directions, so the gain is modest; the
  // strong-gain claims are exercised at the 120x160 shapes below.
  Image img = make_low_rank_image(40, 60, 1, 2, 7);
  ExperimentConfig cfg;
  cfg.sigma = 30.0;
  cfg.k_max = 400;
  cfg.chains = 8;
  cfg.seed = 1;
  cfg.threads = 2;
  auto result = run_denoise(img, cfg);
  CHECK(result.psnr_denoised - result.psnr_noisy >= 0.3);
  CHECK(result.tau == doctest::Approx(2.0 * 900.0 / 100.0));
  CHECK(result.lambda == doctest::Approx(10.0 * 30.0 * std::sqrt(124.0 / 24.0)));
}

TEST_CASE("denoise gains at least 3 dB on a grayscale low-rank target") {
  Image img = make_low_rank_image(120, 160, 1, 2, 8);
  ExperimentConfig cfg;
  cfg.sigma = 30.0;
  cfg.k_max = 1000;
  cfg.chains = 20;
  cfg.seed = 4;
  cfg.threads = 2;
  auto result = run_denoise(img, cfg);
  CHECK(result.psnr_denoised - result.psnr_noisy >= 3.0);
}

TEST_CASE("denoise with near-zero noise leaves a clean image intact") {
  // wide prior, enough chains that the Monte Carlo spread (about
  // 2 sigma^2 / chains per entry) stays well under the 0.1 dB budget
  Image img = make_low_rank_image(30, 30, 1, 2, 9);
  ExperimentConfig cfg;
  cfg.sigma = 1e-6;
  cfg.lambda = 1000.0;
  cfg.k_max = 60;
  cfg.chains = 256;
  cfg.seed = 2;
  cfg.threads = 2;
  auto result = run_denoise(img, cfg);
  CHECK(result.psnr_denoised >= result.psnr_noisy - 0.1);
}

TEST_CASE("denoise is bit-reproducible for a fixed seed") {
  Image img = make_low_rank_image(20, 30, 1, 1, 3);
  ExperimentConfig cfg;
  cfg.sigma = 20.0;
  cfg.k_max = 120;
  cfg.chains = 3;
  cfg.seed = 11;
  auto a = run_denoise(img, cfg);
  auto b = run_denoise(img, cfg);
  CHECK((a.f_hat - b.f_hat).cwiseAbs().maxCoeff() == 0.0);
  for (std::size_t i = 0; i < a.noisy.size(); ++i) CHECK(a.noisy.pixels[i] == b.noisy.pixels[i]);
}

TEST_CASE("derived defaults follow the sigma-based formulas exactly") {
  ExperimentConfig cfg;
  cfg.sigma = 30.0;
  const Index k = 192, n = 300;
  CHECK(cfg.derived_tau(n) == 2.0 * 30.0 * 30.0 / 300.0);
  CHECK(cfg.derived_lambda(k, n) == 10.0 * 30.0 * std::sqrt(492.0 / 192.0));
}
