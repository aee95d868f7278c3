#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ewa/core.hpp"
#include "ewa/skorokhod.hpp"
#include "ewa/stats.hpp"
#include "ewa/stein.hpp"
#include "ewa/verify.hpp"

using namespace ewa;

TEST_CASE("stein profile: uniform and gaussian reference constants") {
  const auto grid = linspace(-1.0, 1.0, 401);
  auto unif = stein_profile(NoiseModel::uniform(1.0), grid);
  CHECK(unif.g_values[200] == doctest::Approx(0.5).epsilon(1e-12));  // x = 0
  CHECK(unif.g_max == doctest::Approx(0.5).epsilon(1e-12));

  auto gauss = stein_profile(NoiseModel::gaussian(2.0), linspace(-6.0, 6.0, 301));
  for (double g : gauss.g_values) CHECK(g == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(gauss.g_max == doctest::Approx(4.0));
}

TEST_CASE("stein profile rejects discrete noise") {
  const auto grid = linspace(-1.0, 1.0, 11);
  CHECK_THROWS_AS(stein_profile(NoiseModel::rademacher(1.0), grid), std::invalid_argument);
  CHECK_THROWS_AS(
      stein_profile(NoiseModel::discrete_bounded({-1.0, 1.0}, {0.5, 0.5}), grid),
      std::invalid_argument);
}

TEST_CASE("unimodal compact densities satisfy the b^2/2 constant") {
  // triangular density on [-1, 1]
  BoundedDensity tri;
  tri.support = 1.0;
  tri.pdf = [](double x) { return std::abs(x) <= 1.0 ? 1.0 - std::abs(x) : 0.0; };
  tri.breakpoints = {0.0};
  auto p = stein_profile(tri, linspace(-0.999, 0.999, 999));
  CHECK(p.g_max <= 0.5 * (1.0 + 1e-9));
  for (double g : p.g_values) CHECK(g >= 0.0);
  // known value at 0: m(0) = 1/6, pdf(0) = 1
  auto p0 = stein_profile(tri, std::vector<double>{0.0});
  CHECK(p0.m_values[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
}

TEST_CASE("integral of m equals the variance") {
  // Uniform[-b,b]: integral of (b^2-x^2)/(4b) over [-b,b] is b^2/3 = Var.
  const double b = 1.7;
  const double analytic = (b * b / (4.0 * b)) * (2.0 * b) - (2.0 * b * b * b / 3.0) / (4.0 * b);
  CHECK(analytic == doctest::Approx(b * b / 3.0).epsilon(1e-9));

  // numeric route on the triangular density: Var = 1/6
  BoundedDensity tri;
  tri.support = 1.0;
  tri.pdf = [](double x) { return std::abs(x) <= 1.0 ? 1.0 - std::abs(x) : 0.0; };
  tri.breakpoints = {0.0};
  const auto grid = linspace(-1.0, 1.0, 2001);
  auto p = stein_profile(tri, grid);
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    integral += 0.5 * (p.m_values[i] + p.m_values[i + 1]) * (grid[i + 1] - grid[i]);
  }
  CHECK(integral == doctest::Approx(1.0 / 6.0).epsilon(1e-4));
}

TEST_CASE("convolved stein constant: formula and numeric cross check") {
  CHECK(convolved_stein_constant(1.0) == doctest::Approx(2.0));
  CHECK(convolved_stein_constant(0.5) == doctest::Approx(0.5));

  // Rademacher(1) + Uniform[-1,1] has density uniform on [-2,2]; the profile
  // maximum is b^2/2 = 2 at the origin.
  auto density = uniform_convolution_density(NoiseModel::rademacher(1.0), 1.0);
  auto p = stein_profile(density, linspace(-1.99, 1.99, 399));
  CHECK(p.g_max >= 1.99);
  CHECK(p.g_max <= 2.0 + 1e-9);
}

TEST_CASE("convolved density: exact support and unimodal shape") {
  auto density = uniform_convolution_density(NoiseModel::rademacher(1.0), 1.0);
  CHECK(density.support == doctest::Approx(2.0));
  CHECK(density.pdf(2.01) == 0.0);
  CHECK(density.pdf(-2.01) == 0.0);

  // sampled xi + zeta never leaves [-2, 2]
  Rng rng(53);
  NoiseModel base = NoiseModel::rademacher(1.0);
  std::uniform_real_distribution<double> zeta(-1.0, 1.0);
  for (int i = 0; i < 50000; ++i) {
    CHECK(std::abs(base.sample_scalar(rng) + zeta(rng)) <= 2.0);
  }
  // nondecreasing to the mode, nonincreasing after
  const auto grid = linspace(-1.95, 1.95, 79);
  double prev = density.pdf(-1.999);
  bool rising = true;
  for (double x : grid) {
    const double v = density.pdf(x);
    if (rising && v < prev - 1e-12) rising = false;
    if (!rising) CHECK(v <= prev + 1e-12);
    prev = v;
  }
}

TEST_CASE("eta law: probabilities, sample mean, exact rational expectation") {
  EtaSpec spec(0.5);
  CHECK(spec.value_down == doctest::Approx(-3.0));
  CHECK(spec.prob_down == doctest::Approx(0.25));

  Rng rng(41);
  std::vector<double> draws;
  for (int i = 0; i < 100000; ++i) draws.push_back(sample_eta(spec, rng));
  const MeanSe ms = mean_se(draws);
  CHECK(std::abs(ms.mean) < 4.0 * ms.se);

  CHECK(eta_mean_is_zero_rational(1, 2));
  CHECK(eta_mean_is_zero_rational(3, 7));
  CHECK(eta_mean_is_zero_rational(1234, 991));
}

TEST_CASE("skorokhod identity: rademacher noise gives the exact two-point law") {
  // xi + 2 gamma zeta takes values +-(1+2gamma) with equal mass; enumerate
  // the four (xi, eta) combinations through actual draws.
  const double gamma = 0.7;
  NoiseModel dist = NoiseModel::rademacher(1.0);
  Rng rng(42);
  auto report = skorokhod_check(dist, gamma, 200000, rng);
  CHECK(report.cdf_distance < 0.01);
  CHECK(report.conditional_means_ok);

  EtaSpec spec(gamma);
  Rng rng2(43);
  int positive = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const double xi = dist.sample_scalar(rng2);
    const double zeta = xi * sample_eta(spec, rng2);
    const double value = xi + 2.0 * gamma * zeta;
    CHECK(std::abs(std::abs(value) - (1.0 + 2.0 * gamma)) < 1e-12);
    if (value > 0.0) ++positive;
  }
  // equal mass on the two atoms, within 4 binomial standard errors
  CHECK(std::abs(positive - draws / 2) < 4.0 * std::sqrt(draws / 4.0));
}

TEST_CASE("skorokhod identity: gaussian noise at moderate sample size") {
  Rng rng(44);
  auto report = skorokhod_check(NoiseModel::gaussian(1.0), 0.25, 200000, rng);
  CHECK(report.cdf_distance < 0.01);
  CHECK(report.conditional_means_ok);
  CHECK(report.bins.size() == 20);
}

TEST_CASE("skorokhod rejects non-scalar models") {
  Rng rng(45);
  auto shared = NoiseModel::shared_magnitude_symmetric(NoiseModel::gaussian(1.0));
  CHECK_THROWS_AS(skorokhod_check(shared, 0.5, 1000, rng), std::invalid_argument);
}

TEST_CASE("oracle rhs on a discrete dictionary") {
  Rng rng(46);
  Matrix f_star = gaussian_matrix(2, 4, rng);

  SUBCASE("single candidate equal to the target: zero") {
    auto dict = DiscreteDictionary::uniform({f_star});
    auto rhs = oracle_rhs_discrete(dict, f_star, 0.5);
    CHECK(rhs.gibbs == doctest::Approx(0.0));
    CHECK(rhs.point_mass == doctest::Approx(0.0));
  }
  SUBCASE("one good and one far candidate approaches 2 tau log 2") {
    const double tau = 0.3;
    Matrix far = f_star + Matrix::Constant(2, 4, 1e4);
    auto dict = DiscreteDictionary::uniform({f_star, far});
    CHECK(oracle_rhs_discrete(dict, f_star, tau).gibbs ==
          doctest::Approx(2.0 * tau * std::log(2.0)).epsilon(1e-9));
  }
  SUBCASE("gibbs value never exceeds the point-mass value") {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<Matrix> cands;
      for (int j = 0; j < 6; ++j) cands.push_back(gaussian_matrix(2, 4, rng));
      auto dict = DiscreteDictionary::uniform(cands);
      auto rhs = oracle_rhs_discrete(dict, f_star, 0.4);
      CHECK(rhs.gibbs <= rhs.point_mass + 1e-12);
    }
  }
  SUBCASE("invariant under relabeling and under translating the whole problem") {
    std::vector<Matrix> cands;
    for (int j = 0; j < 5; ++j) cands.push_back(gaussian_matrix(2, 4, rng));
    auto dict = DiscreteDictionary::uniform(cands);
    const double base = oracle_rhs_discrete(dict, f_star, 0.4).gibbs;

    std::vector<Matrix> shuffled{cands[3], cands[1], cands[4], cands[0], cands[2]};
    auto dict2 = DiscreteDictionary::uniform(shuffled);
    CHECK(oracle_rhs_discrete(dict2, f_star, 0.4).gibbs == doctest::Approx(base).epsilon(1e-12));

    const Matrix shift = Matrix::Constant(2, 4, 3.5);
    std::vector<Matrix> moved;
    for (const auto& c : cands) moved.push_back(c + shift);
    auto dict3 = DiscreteDictionary::uniform(moved);
    CHECK(oracle_rhs_discrete(dict3, f_star + shift, 0.4).gibbs ==
          doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("verify_theorem: degenerate dictionary passes with zero slack") {
  Rng rng(47);
  TheoremScenario s;
  s.id = "degenerate";
  s.which = Theorem::T4;
  s.f_star = gaussian_matrix(3, 6, rng);
  s.dict = DiscreteDictionary::uniform({s.f_star});
  s.noise = NoiseModel::rademacher(1.0);
  s.b_xi = 1.0;
  s.trials = 50;
  auto report = verify_theorem(s);
  CHECK(report.empirical_risk == doctest::Approx(0.0));
  CHECK(report.bound_rhs == doctest::Approx(0.0));
  CHECK(report.passed);
}

TEST_CASE("verify_theorem: desk-scale certification of t1 and t4") {
  auto lib = scenario_library();
  for (auto& s : lib) {
    if (s.id != "t1_shared_rademacher" && s.id != "t4_rademacher") continue;
    s.trials = 400;
    auto report = verify_theorem(s);
    CHECK(report.passed);
    CHECK(report.slack > 0.0);
  }
}

TEST_CASE("verify_theorem: temperature below the threshold is a configuration error") {
  auto lib = scenario_library();
  auto s = lib.front();
  s.tau = theorem_tau_threshold(s) * 0.5;
  CHECK_THROWS_AS(verify_theorem(s), std::invalid_argument);
}

TEST_CASE("discrete noise cannot enter the stein route but passes the perturbed one") {
  Rng rng(48);
  TheoremScenario s;
  s.f_star = gaussian_matrix(3, 8, rng);
  std::vector<Matrix> cands{s.f_star, s.f_star + Matrix::Constant(3, 8, 0.5)};
  s.dict = DiscreteDictionary::uniform(cands);
  s.noise = NoiseModel::rademacher(1.0);
  s.b_xi = 1.0;
  s.trials = 100;

  s.which = Theorem::T3;
  CHECK_THROWS_AS(verify_theorem(s), std::invalid_argument);

  s.which = Theorem::T4;
  CHECK(verify_theorem(s).passed);
}

TEST_CASE("theorem5 rhs closed form") {
  Rng rng(49);
  Matrix f_star = gaussian_matrix(4, 10, rng);
  const double lambda = 1.3, tau = 0.2;

  const double at_zero = theorem5_rhs(Matrix::Zero(4, 10), f_star, lambda, tau);
  CHECK(at_zero == doctest::Approx(empirical_loss(Matrix::Zero(4, 10), f_star) +
                                   4.0 * lambda * lambda));

  Matrix rank2 = gaussian_matrix(4, 2, rng) * gaussian_matrix(2, 10, rng);
  const double expected = empirical_loss(rank2, f_star) +
                          4.0 * 2.0 * (10 + 4 + 2) * tau *
                              std::log1p(rank2.norm() / (std::sqrt(4.0) * lambda)) +
                          4.0 * lambda * lambda;
  CHECK(theorem5_rhs(rank2, f_star, lambda, tau) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("theorem5 rhs: temperature term scales like (n+K)/n up to the log factor") {
  Rng rng(50);
  const Index k = 8;
  const double b = 1.0;
  auto log_term = [&](Index n) {
    const double tau = 2.0 * b * b / static_cast<double>(n);
    const double lambda = b * std::sqrt(static_cast<double>(n + k) / static_cast<double>(k));
    Matrix f = gaussian_matrix(k, 1, rng) * gaussian_matrix(1, n, rng);
    Matrix f_star = f;
    const double whole = theorem5_rhs(f, f_star, lambda, tau);
    return whole - k * lambda * lambda;  // isolates 4 r (n+K+2) tau log(...)
  };
  // normalized by (n+K+2)/n the term changes only through the slowly varying log
  const double v40 = log_term(40) * 40.0 / (40 + 8 + 2);
  const double v80 = log_term(80) * 80.0 / (80 + 8 + 2);
  CHECK(v80 <= v40 * 1.2);
  CHECK(v80 >= v40 * 0.5);
}

TEST_CASE("mcewa identity: trivial single-candidate case is exact") {
  Rng rng(51);
  Matrix f_star = gaussian_matrix(2, 5, rng);
  Matrix only = f_star + Matrix::Constant(2, 5, 0.3);
  auto dict = DiscreteDictionary::uniform({only});
  auto report = mcewa_identity_check(dict, f_star, NoiseModel::gaussian(0.5), 0.3, 1, 50, rng);
  CHECK(report.gap == doctest::Approx(0.0));
  CHECK(report.lhs == doctest::Approx(empirical_loss(only, f_star)));
}

TEST_CASE("mcewa identity: gap within 4 standard errors on a generic dictionary") {
  Rng rng(52);
  Matrix f_star = gaussian_matrix(3, 8, rng);
  std::vector<Matrix> cands;
  for (int j = 0; j < 5; ++j) cands.push_back(f_star + 0.7 * gaussian_matrix(3, 8, rng));
  auto dict = DiscreteDictionary::uniform(cands);
  auto report = mcewa_identity_check(dict, f_star, NoiseModel::gaussian(0.5), 0.35, 8, 4000, rng);
  CHECK(std::abs(report.gap) < 4.0 * report.gap_se);
}

TEST_CASE("risk report csv schema") {
  RiskReport r;
  r.scenario_id = "demo";
  r.trials = 10;
  r.empirical_risk = 0.5;
  r.std_error = 0.01;
  r.bound_rhs = 1.0;
  r.slack = 0.5;
  r.passed = true;
  CHECK(risk_report_csv_header() ==
        "scenario,trials,empirical_risk,std_error,bound_rhs,slack,passed");
  CHECK(to_csv_row(r).find("demo,10,0.5,0.01,1,0.5,true") != std::string::npos);
}
