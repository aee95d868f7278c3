#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "ewa/core.hpp"
#include "ewa/matrix_io.hpp"
#include "ewa/noise.hpp"
#include "ewa/stats.hpp"

using namespace ewa;

TEST_CASE("empirical loss: identity and hand values") {
  Matrix a(2, 2), b(2, 2);
  a << 1, 0, 0, 1;
  b.setZero();
  CHECK(empirical_loss(a, a) == 0.0);
  CHECK(empirical_loss(a, b) == doctest::Approx(1.0));

  Matrix c(1, 2), d(1, 2);
  c << 1, 2;
  d << 0, 0;
  CHECK(empirical_loss(c, d) == doctest::Approx(2.5));

  Matrix wrong(3, 2);
  CHECK_THROWS_AS(empirical_loss(a, wrong), std::invalid_argument);
}

TEST_CASE("empirical loss: symmetry, positivity, quadratic scaling") {
  Rng rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    Matrix a = gaussian_matrix(3, 5, rng);
    Matrix b = gaussian_matrix(3, 5, rng);
    const double l = empirical_loss(a, b);
    CHECK(l >= 0.0);
    CHECK(empirical_loss(b, a) == l);
    const double c = 3.7;
    CHECK(empirical_loss(c * a, c * b) == doctest::Approx(c * c * l).epsilon(1e-12));
  }
  // zero iff equal
  Matrix a = gaussian_matrix(2, 3, rng);
  Matrix b = a;
  b(1, 2) += 1e-13;
  CHECK(empirical_loss(a, b) > 0.0);
}

TEST_CASE("psnr: sentinel and reference points") {
  Matrix a(4, 4);
  a.setConstant(80.0);
  CHECK(std::isinf(psnr(a, a)));

  Matrix b = a;
  b.array() += 255.0;  // MSE = peak^2
  CHECK(psnr(a, b) == doctest::Approx(0.0));
}

TEST_CASE("psnr of gaussian perturbation concentrates at 20 log10(peak/sigma)") {
  Rng rng(2);
  const double sigma = 50.0;
  Matrix x = uniform_matrix(100, 120, 0.0, 255.0, rng);
  Matrix e = sigma * gaussian_matrix(100, 120, rng);
  const double expected = 20.0 * std::log10(255.0 / sigma);
  CHECK(psnr(x, x + e) == doctest::Approx(expected).epsilon(0.015));
}

TEST_CASE("noise support checks") {
  Rng rng(3);
  Matrix r = sample_noise(NoiseModel::rademacher(1.0), 4, 9, rng);
  for (Index j = 0; j < r.cols(); ++j)
    for (Index i = 0; i < r.rows(); ++i) CHECK(std::abs(r(i, j)) == 1.0);

  Matrix u = sample_noise(NoiseModel::uniform(2.0), 5, 200, rng);
  CHECK(u.maxCoeff() <= 2.0);
  CHECK(u.minCoeff() >= -2.0);
  CHECK(std::abs(u.mean()) < 4.0 * 2.0 / std::sqrt(3.0 * u.size()));
}

TEST_CASE("every model has zero per-entry mean within 4 standard errors") {
  auto models = std::vector<NoiseModel>{
      NoiseModel::gaussian(1.3),
      NoiseModel::uniform(0.8),
      NoiseModel::rademacher(2.0),
      NoiseModel::discrete_bounded({-1.5, -0.5, 0.5, 1.5}, {0.2, 0.3, 0.3, 0.2}),
      NoiseModel::shared_magnitude_symmetric(NoiseModel::gaussian(1.0)),
      NoiseModel::correlated((Matrix(2, 2) << 1.0, 0.5, 0.5, 1.0).finished(),
                             NoiseModel::uniform(1.0)),
  };
  Rng rng(4);
  for (const auto& model : models) {
    std::vector<double> entries;
    entries.reserve(100000);
    for (int d = 0; d < 12500; ++d) {
      Matrix s = model.sample(2, 4, rng);
      for (Index j = 0; j < 4; ++j)
        for (Index i = 0; i < 2; ++i) entries.push_back(s(i, j));
    }
    const MeanSe ms = mean_se(entries);
    CHECK(std::abs(ms.mean) < 4.0 * ms.se);
  }
}

TEST_CASE("discrete model rejects asymmetric support") {
  CHECK_THROWS_AS(NoiseModel::discrete_bounded({-1.0, 2.0}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(NoiseModel::discrete_bounded({-1.0, 1.0}, {0.3, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(NoiseModel::gaussian(-1.0), std::invalid_argument);
}

TEST_CASE("correlated noise reproduces the covariance spectral norm") {
  // Sigma = c * ones * ones^T has spectral norm c*K.
  const Index k = 4;
  const double c = 0.5;
  Matrix sigma = Matrix::Constant(k, k, c);
  NoiseModel model = NoiseModel::correlated(sigma, NoiseModel::gaussian(1.0));
  Rng rng(5);
  Matrix cov = Matrix::Zero(k, k);
  const int draws = 40000;
  for (int d = 0; d < draws; ++d) {
    Matrix s = model.sample(k, 1, rng);
    cov += s * s.transpose();
  }
  cov /= static_cast<double>(draws);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
  CHECK(eig.eigenvalues().maxCoeff() == doctest::Approx(c * k).epsilon(0.05));
}

TEST_CASE("shared magnitude noise: column sign flips leave statistics invariant") {
  NoiseModel model = NoiseModel::shared_magnitude_symmetric(NoiseModel::gaussian(1.0));
  Rng rng(6);
  const Index k = 3, n = 5;
  Matrix probe = gaussian_matrix(k, n, rng);
  Vector signs(n);
  for (Index j = 0; j < n; ++j) signs(j) = (j % 2 == 0) ? 1.0 : -1.0;

  std::vector<double> plain, flipped;
  for (int d = 0; d < 20000; ++d) {
    Matrix a = model.sample(k, n, rng);
    plain.push_back((probe.array() * a.array()).sum());
    Matrix b = model.sample(k, n, rng);
    for (Index j = 0; j < n; ++j) b.col(j) *= signs(j);
    flipped.push_back((probe.array() * b.array()).sum());
  }
  CHECK(ks_distance_two_sample(plain, flipped) < 0.02);
}

TEST_CASE("assumption constants") {
  Rng rng(7);
  std::vector<Matrix> zero_noise{Matrix::Zero(4, 3)};

  SUBCASE("identical candidates have zero diameter") {
    std::vector<Matrix> cands{Matrix::Zero(4, 3), Matrix::Zero(4, 3)};
    auto rep = check_assumption_c(zero_noise, cands, 1.0, 0.0);
    CHECK(rep.l_observed == 0.0);
    CHECK(rep.holds);
  }
  SUBCASE("all-ones offset normalizes to exactly 1 at K=4") {
    Matrix base = gaussian_matrix(4, 3, rng);
    std::vector<Matrix> cands{base, base + Matrix::Ones(4, 3)};
    auto rep = check_assumption_c(zero_noise, cands, 1.0, 1.0);
    CHECK(rep.l_observed == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.holds);
  }
  SUBCASE("rademacher noise saturates b_xi at exactly 1") {
    std::vector<Matrix> draws;
    for (int d = 0; d < 10; ++d) draws.push_back(sample_noise(NoiseModel::rademacher(1.0), 6, 4, rng));
    std::vector<Matrix> cands{Matrix::Zero(6, 4)};
    auto rep = check_assumption_c(draws, cands, 1.0, 0.0);
    CHECK(rep.b_xi_observed == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.holds);
  }
  SUBCASE("empty input rejected") {
    std::vector<Matrix> empty;
    std::vector<Matrix> one{Matrix::Zero(2, 2)};
    CHECK_THROWS_AS(check_assumption_c(empty, one, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(check_assumption_c(one, empty, 1, 1), std::invalid_argument);
  }
}

TEST_CASE("matrix io round trips are bit exact") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ewa_io_test";
  fs::create_directories(dir);
  Rng rng(8);
  Matrix m = gaussian_matrix(5, 7, rng);
  m(0, 0) = 1.0 / 3.0;
  m(1, 1) = -1e-17;
  m(2, 2) = 12345678.987654321;

  write_matrix_csv(m, dir / "m.csv");
  Matrix c = read_matrix_csv(dir / "m.csv");
  REQUIRE(c.rows() == m.rows());
  CHECK((c - m).cwiseAbs().maxCoeff() == 0.0);

  write_matrix_binary(m, dir / "m.bin");
  Matrix b = read_matrix_binary(dir / "m.bin");
  CHECK((b - m).cwiseAbs().maxCoeff() == 0.0);

  // header: magic + dims
  std::ifstream in(dir / "m.bin", std::ios::binary);
  char magic[4];
  std::uint32_t dims[3];
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(dims), 12);
  CHECK(std::string(magic, 4) == "EWAM");
  CHECK(dims[0] == 5);
  CHECK(dims[1] == 7);
  fs::remove_all(dir);
}
