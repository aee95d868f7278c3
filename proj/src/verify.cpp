#include "ewa/verify.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "ewa/core.hpp"
#include "ewa/prior.hpp"
#include "ewa/stats.hpp"
#include "ewa/stein.hpp"

namespace ewa {

Theorem theorem_from_string(const std::string& name) {
  if (name == "t1" || name == "T1") return Theorem::T1;
  if (name == "t2" || name == "T2") return Theorem::T2;
  if (name == "t3" || name == "T3") return Theorem::T3;
  if (name == "t4" || name == "T4") return Theorem::T4;
  throw std::invalid_argument("unknown theorem id: " + name);
}

std::string to_string(Theorem t) {
  switch (t) {
    case Theorem::T1: return "t1";
    case Theorem::T2: return "t2";
    case Theorem::T3: return "t3";
    case Theorem::T4: return "t4";
  }
  return "?";
}

namespace {

double spectral_norm(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

// Largest column diameter of the dictionary, normalized by sqrt(K).
double dictionary_l(const TheoremScenario& s) {
  std::vector<Matrix> no_noise{Matrix::Zero(s.f_star.rows(), 1)};
  return check_assumption_c(no_noise, s.dict.candidates, 0.0, 0.0).l_observed;
}

// T2 diameter: max over pairs and columns of || Sigma^{1/2} (F_i - F'_i) ||_inf.
double dictionary_l_bar(const TheoremScenario& s) {
  const Matrix sq = psd_sqrt(s.noise.covariance());
  double l_bar = 0.0;
  const auto& cands = s.dict.candidates;
  for (std::size_t a = 0; a < cands.size(); ++a) {
    for (std::size_t b = a + 1; b < cands.size(); ++b) {
      l_bar = std::max(l_bar, (sq * (cands[a] - cands[b])).cwiseAbs().maxCoeff());
    }
  }
  return l_bar;
}

}  // namespace

double theorem_tau_threshold(const TheoremScenario& s) {
  const double k = static_cast<double>(s.f_star.rows());
  const double n = static_cast<double>(s.f_star.cols());
  switch (s.which) {
    case Theorem::T1: {
      if (!(s.b_xi > 0.0)) throw std::invalid_argument("t1: b_xi must be positive");
      const double l = dictionary_l(s);
      return (k / n) * s.b_xi * std::max(2.0 * l, 3.0 * s.b_xi);
    }
    case Theorem::T2: {
      if (s.noise.kind() != NoiseKind::Correlated) {
        throw std::invalid_argument("t2: noise must be a correlated model");
      }
      const double b_bar = s.noise.base().entry_bound();
      const double l_bar = dictionary_l_bar(s);
      const double s_norm = spectral_norm(s.noise.covariance());
      return (1.0 / n) * b_bar * std::max(2.0 * l_bar, 3.0 * s_norm * b_bar);
    }
    case Theorem::T3: {
      // stein_constant rejects kinds without a finite profile, in particular
      // every discrete distribution.
      if (s.noise.kind() == NoiseKind::Correlated) {
        const double g = stein_constant(s.noise.base());
        return spectral_norm(s.noise.covariance()) * g / n;
      }
      return stein_constant(s.noise) / n;  // Sigma = I
    }
    case Theorem::T4: {
      const double b = s.noise.entry_bound();
      if (s.b_xi > 0.0 && b > s.b_xi * (1.0 + 1e-12)) {
        throw std::invalid_argument("t4: noise entries exceed the declared b_xi");
      }
      const double bound = s.b_xi > 0.0 ? s.b_xi : b;
      return 2.0 * bound * bound / n;
    }
  }
  throw std::invalid_argument("unknown theorem");
}

RiskReport verify_theorem(const TheoremScenario& s) {
  s.dict.validate();
  require_same_shape(s.f_star, s.dict.candidates.front(), "verify_theorem");
  if (s.trials < 1) throw std::invalid_argument("verify_theorem: trials must be >= 1");

  const double tau_min = theorem_tau_threshold(s);
  double tau = s.tau;
  if (tau <= 0.0) {
    tau = tau_min;
  } else if (tau < tau_min * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << to_string(s.which) << ": tau = " << tau
        << " is below the admissible threshold " << tau_min;
    throw std::invalid_argument(msg.str());
  }

  double perturb = 0.0;
  if (s.which == Theorem::T4) {
    perturb = s.perturb > 0.0 ? s.perturb : (s.b_xi > 0.0 ? s.b_xi : s.noise.entry_bound());
  }

  Rng rng(s.seed);
  const Index k = s.f_star.rows();
  const Index n = s.f_star.cols();
  std::vector<double> risks(static_cast<std::size_t>(s.trials));
  for (int t = 0; t < s.trials; ++t) {
    Matrix y = s.f_star + s.noise.sample(k, n, rng);
    if (perturb > 0.0) y += uniform_matrix(k, n, -perturb, perturb, rng);
    risks[static_cast<std::size_t>(t)] = empirical_loss(discrete_ewa(s.dict, y, tau), s.f_star);
  }
  const MeanSe ms = mean_se(risks);

  RiskReport report;
  report.scenario_id = s.id;
  report.trials = s.trials;
  report.empirical_risk = ms.mean;
  report.std_error = ms.se;
  report.bound_rhs = oracle_rhs_discrete(s.dict, s.f_star, tau).gibbs;
  report.slack = report.bound_rhs - report.empirical_risk;
  report.passed = report.empirical_risk <= report.bound_rhs + 3.0 * report.std_error;
  return report;
}

double theorem5_rhs(const Matrix& f_bar, const Matrix& f_star, double lambda, double tau) {
  require_same_shape(f_bar, f_star, "theorem5_rhs");
  if (!(lambda > 0.0) || !(tau > 0.0)) {
    throw std::invalid_argument("theorem5_rhs: lambda and tau must be positive");
  }
  const double k = static_cast<double>(f_star.rows());
  const double n = static_cast<double>(f_star.cols());
  const int r = numerical_rank(f_bar);
  double value = empirical_loss(f_bar, f_star) + k * lambda * lambda;
  if (r > 0) {
    value += 4.0 * r * (n + k + 2.0) * tau *
             std::log1p(f_bar.norm() / (std::sqrt(2.0 * r) * lambda));
  }
  return value;
}

RiskReport verify_theorem5_lmc(const LowRankScenario& s) {
  if (s.rank < 1 || s.rank > std::min(s.k, s.n)) {
    throw std::invalid_argument("verify_theorem5_lmc: bad rank");
  }
  const double n = static_cast<double>(s.n);
  const double k = static_cast<double>(s.k);
  const double tau = s.tau > 0.0 ? s.tau : 2.0 * s.b_xi * s.b_xi / n;
  const double lambda = s.lambda > 0.0 ? s.lambda : s.b_xi * std::sqrt((n + k) / k);

  Rng rng(s.seed);
  Matrix f_star = Matrix::Zero(s.k, s.n);
  for (int j = 0; j < s.rank; ++j) {
    f_star += gaussian_matrix(s.k, 1, rng) * gaussian_matrix(1, s.n, rng);
  }
  f_star *= s.f_star_scale / std::sqrt(empirical_loss(f_star, Matrix::Zero(s.k, s.n)));

  PosteriorConfig post{tau, PriorConfig{lambda, s.k, s.n}};
  const NoiseModel noise = NoiseModel::rademacher(s.b_xi);

  std::vector<double> risks(static_cast<std::size_t>(s.trials));
  for (int t = 0; t < s.trials; ++t) {
    Matrix y = f_star + noise.sample(s.k, s.n, rng);
    LmcConfig lmc;
    lmc.h = s.h;
    lmc.k_max = s.k_max;
    lmc.chains = s.chains;
    lmc.seed = split_seed(s.seed, 1000003ULL + static_cast<std::uint64_t>(t));
    lmc.threads = s.threads;
    Matrix f_hat = newa(y, s.b_xi, post, lmc, rng);
    risks[static_cast<std::size_t>(t)] = empirical_loss(f_hat, f_star);
  }
  const MeanSe ms = mean_se(risks);

  RiskReport report;
  report.scenario_id = s.id;
  report.trials = s.trials;
  report.empirical_risk = ms.mean;
  report.std_error = ms.se;
  report.bound_rhs = std::min(theorem5_rhs(Matrix::Zero(s.k, s.n), f_star, lambda, tau),
                              theorem5_rhs(f_star, f_star, lambda, tau));
  report.slack = report.bound_rhs - report.empirical_risk;
  report.passed = report.empirical_risk <= report.bound_rhs + 3.0 * report.std_error;
  return report;
}

McEwaIdentityReport mcewa_identity_check(const DiscreteDictionary& dict,
                                         const Matrix& f_star, const NoiseModel& noise,
                                         double tau, int n_samples, int trials, Rng& rng) {
  dict.validate();
  if (n_samples < 1 || trials < 1) {
    throw std::invalid_argument("mcewa_identity_check: need n_samples, trials >= 1");
  }
  const Index k = f_star.rows();
  const Index n = f_star.cols();
  const std::size_t m = dict.candidates.size();
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  std::vector<double> diffs(static_cast<std::size_t>(trials));
  std::vector<double> excess(static_cast<std::size_t>(trials));
  double lhs_total = 0.0;
  double rhs_total = 0.0;
  std::vector<double> losses(m);
  for (int t = 0; t < trials; ++t) {
    const Matrix y = f_star + noise.sample(k, n, rng);
    for (std::size_t j = 0; j < m; ++j) losses[j] = empirical_loss(dict.candidates[j], y);
    const std::vector<double> w = gibbs_weights(losses, dict.weights, tau);
    Matrix ewa = Matrix::Zero(k, n);
    for (std::size_t j = 0; j < m; ++j) ewa += w[j] * dict.candidates[j];

    // MC-EWA from actual categorical posterior draws.
    Matrix mc = Matrix::Zero(k, n);
    for (int l = 0; l < n_samples; ++l) {
      double u = unif(rng);
      std::size_t pick = m - 1;
      double acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        acc += w[j];
        if (u <= acc) {
          pick = j;
          break;
        }
      }
      mc += dict.candidates[pick];
    }
    mc /= static_cast<double>(n_samples);

    double posterior_spread = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      posterior_spread += w[j] * empirical_loss(dict.candidates[j], ewa);
    }
    const double lhs = empirical_loss(mc, f_star);
    const double rhs = empirical_loss(ewa, f_star) + posterior_spread / n_samples;
    lhs_total += lhs;
    rhs_total += rhs;
    diffs[static_cast<std::size_t>(t)] = lhs - rhs;
    excess[static_cast<std::size_t>(t)] = empirical_loss(mc, ewa);
  }

  const MeanSe gap = mean_se(diffs);
  const MeanSe ex = mean_se(excess);
  McEwaIdentityReport report;
  report.lhs = lhs_total / trials;
  report.rhs = rhs_total / trials;
  report.gap = gap.mean;
  report.gap_se = gap.se;
  report.mc_excess = ex.mean;
  report.mc_excess_se = ex.se;
  report.n_samples = n_samples;
  report.trials = trials;
  return report;
}

namespace {

// Bounded dictionary spread around a base matrix; entries stay within
// spread of the base, so the diameter constants are finite by construction.
std::vector<Matrix> make_candidates(const Matrix& base, int count, double spread,
                                    bool include_base, Rng& rng) {
  std::vector<Matrix> cands;
  if (include_base) cands.push_back(base);
  while (static_cast<int>(cands.size()) < count) {
    cands.push_back(base + uniform_matrix(base.rows(), base.cols(), -spread, spread, rng));
  }
  return cands;
}

Matrix toeplitz_covariance(Index k, double rho) {
  Matrix sigma(k, k);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < k; ++j) sigma(i, j) = std::pow(rho, std::abs(i - j));
  return sigma;
}

}  // namespace

std::vector<TheoremScenario> scenario_library() {
  std::vector<TheoremScenario> lib;

  {
    TheoremScenario s;
    s.id = "t1_shared_rademacher";
    s.which = Theorem::T1;
    Rng rng(101);
    s.f_star = gaussian_matrix(4, 12, rng);
    s.dict = DiscreteDictionary::uniform(make_candidates(s.f_star, 8, 0.8, true, rng));
    s.noise = NoiseModel::shared_magnitude_symmetric(NoiseModel::rademacher(1.0));
    s.b_xi = 1.0;
    s.seed = 11;
    lib.push_back(std::move(s));
  }
  {
    TheoremScenario s;
    s.id = "t1_shared_uniform";
    s.which = Theorem::T1;
    Rng rng(102);
    s.f_star = gaussian_matrix(5, 10, rng);
    s.dict = DiscreteDictionary::uniform(make_candidates(s.f_star, 6, 0.6, false, rng));
    s.noise = NoiseModel::shared_magnitude_symmetric(NoiseModel::uniform(1.0));
    s.b_xi = 1.0;
    s.seed = 12;
    lib.push_back(std::move(s));
  }
  {
    TheoremScenario s;
    s.id = "t2_correlated_rademacher";
    s.which = Theorem::T2;
    Rng rng(103);
    s.f_star = gaussian_matrix(4, 12, rng);
    s.dict = DiscreteDictionary::uniform(make_candidates(s.f_star, 8, 0.8, true, rng));
    s.noise = NoiseModel::correlated(toeplitz_covariance(4, 0.5), NoiseModel::rademacher(1.0));
    s.b_xi = 1.0;
    s.seed = 13;
    lib.push_back(std::move(s));
  }
  {
    TheoremScenario s;
    s.id = "t2_correlated_uniform";
    s.which = Theorem::T2;
    Rng rng(104);
    s.f_star = gaussian_matrix(3, 15, rng);
    s.dict = DiscreteDictionary::uniform(make_candidates(s.f_star, 5, 0.5, false, rng));
    s.noise = NoiseModel::correlated(toeplitz_covariance(3, 0.6), NoiseModel::uniform(1.0));
    s.b_xi = 1.0;
    s.seed = 14;
    lib.push_back(std::move(s));
  }
  {
    TheoremScenario s;
    s.id = "t3_gaussian";
    s.which = Theorem::T3;
    Rng rng(105);
    s.f_star = gaussian_matrix(4, 12, rng);
    s.dict = DiscreteDictionary::uniform(make_candidates(s.f_star, 8, 0.8, true, rng));
    s.noise = NoiseModel::gaussian(0.7);
    s.seed = 15;
    lib.push_back(std::move(s));
  }
  {
    TheoremScenario s;
    s.id = "t3_uniform";
    s.which = Theorem::T3;
    Rng rng(106);
    s.f_star = gaussian_matrix(6, 9, rng);
    s.dict = DiscreteDictionary::uniform(make_candidates(s.f_star, 7, 0.7, false, rng));
    s.noise = NoiseModel::uniform(1.2);
    s.seed = 16;
    lib.push_back(std::move(s));
  }
  {
    TheoremScenario s;
    s.id = "t3_correlated_gaussian";
    s.which = Theorem::T3;
    Rng rng(107);
    s.f_star = gaussian_matrix(4, 10, rng);
    s.dict = DiscreteDictionary::uniform(make_candidates(s.f_star, 6, 0.6, true, rng));
    s.noise = NoiseModel::correlated(toeplitz_covariance(4, 0.4), NoiseModel::gaussian(0.8));
    s.seed = 17;
    lib.push_back(std::move(s));
  }
  {
    TheoremScenario s;
    s.id = "t4_rademacher";
    s.which = Theorem::T4;
    Rng rng(108);
    s.f_star = gaussian_matrix(4, 12, rng);
    s.dict = DiscreteDictionary::uniform(make_candidates(s.f_star, 8, 0.8, true, rng));
    s.noise = NoiseModel::rademacher(1.0);
    s.b_xi = 1.0;
    s.seed = 18;
    lib.push_back(std::move(s));
  }
  {
    TheoremScenario s;
    s.id = "t4_discrete";
    s.which = Theorem::T4;
    Rng rng(109);
    s.f_star = gaussian_matrix(5, 14, rng);
    s.dict = DiscreteDictionary::uniform(make_candidates(s.f_star, 6, 0.9, false, rng));
    s.noise = NoiseModel::discrete_bounded({-1.5, -0.5, 0.5, 1.5}, {0.2, 0.3, 0.3, 0.2});
    s.b_xi = 1.5;
    s.seed = 19;
    lib.push_back(std::move(s));
  }
  return lib;
}

std::string risk_report_csv_header() {
  return "scenario,trials,empirical_risk,std_error,bound_rhs,slack,passed";
}

std::string to_csv_row(const RiskReport& r) {
  std::ostringstream os;
  os.precision(12);
  os << r.scenario_id << ',' << r.trials << ',' << r.empirical_risk << ',' << r.std_error
     << ',' << r.bound_rhs << ',' << r.slack << ',' << (r.passed ? "true" : "false");
  return os.str();
}

void print_report(std::ostream& os, const RiskReport& r) {
  os << (r.passed ? "[pass] " : "[FAIL] ") << r.scenario_id << ": empirical risk "
     << r.empirical_risk << " (se " << r.std_error << ") vs bound " << r.bound_rhs
     << ", slack " << r.slack << " over " << r.trials << " trials\n";
}

}  // namespace ewa
