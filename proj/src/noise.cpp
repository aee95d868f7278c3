#include "ewa/noise.hpp"

#include <cmath>
#include <numeric>

namespace ewa {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("NoiseModel: ") + what + " must be positive");
  }
}

}  // namespace

NoiseModel NoiseModel::gaussian(double sigma) {
  require_positive(sigma, "sigma");
  NoiseModel m;
  m.kind_ = NoiseKind::Gaussian;
  m.scale_ = sigma;
  return m;
}

NoiseModel NoiseModel::uniform(double half_width) {
  require_positive(half_width, "half width");
  NoiseModel m;
  m.kind_ = NoiseKind::Uniform;
  m.scale_ = half_width;
  return m;
}

NoiseModel NoiseModel::rademacher(double magnitude) {
  require_positive(magnitude, "magnitude");
  NoiseModel m;
  m.kind_ = NoiseKind::Rademacher;
  m.scale_ = magnitude;
  return m;
}

NoiseModel NoiseModel::discrete_bounded(std::vector<double> support, std::vector<double> probs) {
  if (support.empty() || support.size() != probs.size()) {
    throw std::invalid_argument("NoiseModel: support/probability size mismatch");
  }
  double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("NoiseModel: probabilities must sum to 1");
  }
  // Symmetry about zero: each atom needs a mirror atom with equal mass.
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (probs[i] < 0.0) throw std::invalid_argument("NoiseModel: negative probability");
    bool mirrored = false;
    for (std::size_t j = 0; j < support.size(); ++j) {
      if (std::abs(support[j] + support[i]) <= 1e-12 * std::max(1.0, std::abs(support[i])) &&
          std::abs(probs[j] - probs[i]) <= 1e-12) {
        mirrored = true;
        break;
      }
    }
    if (!mirrored) {
      throw std::invalid_argument("NoiseModel: discrete support must be symmetric about 0");
    }
  }
  NoiseModel m;
  m.kind_ = NoiseKind::DiscreteBounded;
  m.support_ = std::move(support);
  m.probs_ = std::move(probs);
  m.scale_ = 0.0;
  for (double v : m.support_) m.scale_ = std::max(m.scale_, std::abs(v));
  return m;
}

NoiseModel NoiseModel::shared_magnitude_symmetric(NoiseModel base) {
  if (base.kind_ == NoiseKind::Correlated || base.kind_ == NoiseKind::SharedMagnitudeSymmetric) {
    throw std::invalid_argument("NoiseModel: shared-magnitude base must be entry-level");
  }
  NoiseModel m;
  m.kind_ = NoiseKind::SharedMagnitudeSymmetric;
  m.base_ = std::make_shared<NoiseModel>(std::move(base));
  m.scale_ = m.base_->scale_;
  return m;
}

NoiseModel NoiseModel::correlated(Matrix covariance, NoiseModel base) {
  if (covariance.rows() != covariance.cols() || covariance.rows() < 1) {
    throw std::invalid_argument("NoiseModel: covariance must be square");
  }
  if (!covariance.isApprox(covariance.transpose(), 1e-12)) {
    throw std::invalid_argument("NoiseModel: covariance must be symmetric");
  }
  if (base.kind_ == NoiseKind::Correlated) {
    throw std::invalid_argument("NoiseModel: nested correlated models are not supported");
  }
  NoiseModel m;
  m.kind_ = NoiseKind::Correlated;
  m.sqrt_covariance_ = psd_sqrt(covariance);  // validates eigenvalues >= 0
  m.covariance_ = std::move(covariance);
  m.base_ = std::make_shared<NoiseModel>(std::move(base));
  m.scale_ = m.base_->scale_;
  return m;
}

double NoiseModel::entry_bound() const {
  switch (kind_) {
    case NoiseKind::Uniform:
    case NoiseKind::Rademacher:
    case NoiseKind::DiscreteBounded:
      return scale_;
    default:
      throw std::invalid_argument("NoiseModel: no entry bound for this kind");
  }
}

double NoiseModel::sample_scalar(Rng& rng) const {
  switch (kind_) {
    case NoiseKind::Gaussian: {
      std::normal_distribution<double> normal(0.0, scale_);
      return normal(rng);
    }
    case NoiseKind::Uniform: {
      std::uniform_real_distribution<double> unif(-scale_, scale_);
      return unif(rng);
    }
    case NoiseKind::Rademacher: {
      return (rng() & 1ULL) ? scale_ : -scale_;
    }
    case NoiseKind::DiscreteBounded: {
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      double u = unif(rng);
      double acc = 0.0;
      for (std::size_t i = 0; i < support_.size(); ++i) {
        acc += probs_[i];
        if (u <= acc) return support_[i];
      }
      return support_.back();
    }
    default:
      throw std::invalid_argument("NoiseModel: not a scalar entry distribution");
  }
}

Matrix NoiseModel::sample(Index k, Index n, Rng& rng) const {
  if (k < 1 || n < 1) throw std::invalid_argument("NoiseModel: dimensions must be positive");
  switch (kind_) {
    case NoiseKind::Gaussian:
    case NoiseKind::Uniform:
    case NoiseKind::Rademacher:
    case NoiseKind::DiscreteBounded: {
      Matrix m(k, n);
      for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < k; ++i) m(i, j) = sample_scalar(rng);
      return m;
    }
    case NoiseKind::SharedMagnitudeSymmetric: {
      // One magnitude vector for every column; only the column signs vary.
      Vector mag(k);
      for (Index i = 0; i < k; ++i) mag(i) = std::abs(base_->sample_scalar(rng));
      Matrix m(k, n);
      for (Index j = 0; j < n; ++j) {
        double sign = (rng() & 1ULL) ? 1.0 : -1.0;
        m.col(j) = sign * mag;
      }
      return m;
    }
    case NoiseKind::Correlated: {
      if (sqrt_covariance_.rows() != k) {
        throw std::invalid_argument("NoiseModel: covariance dimension does not match K");
      }
      return sqrt_covariance_ * base_->sample(k, n, rng);
    }
  }
  throw std::invalid_argument("NoiseModel: unknown kind");
}

Matrix sample_noise(const NoiseModel& model, Index k, Index n, Rng& rng) {
  return model.sample(k, n, rng);
}

Matrix psd_sqrt(const Matrix& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
  if (eig.info() != Eigen::Success) {
    throw std::invalid_argument("psd_sqrt: eigendecomposition failed");
  }
  Vector vals = eig.eigenvalues();
  const double tol = 1e-12 * std::max(1.0, vals.cwiseAbs().maxCoeff());
  for (Index i = 0; i < vals.size(); ++i) {
    if (vals(i) < -tol) {
      throw std::invalid_argument("psd_sqrt: matrix has a negative eigenvalue");
    }
    vals(i) = std::sqrt(std::max(vals(i), 0.0));
  }
  return eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace ewa
