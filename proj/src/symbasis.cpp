#include "l0fa/symbasis.hpp"

#include <cmath>
#include <string>

#include "l0fa/errors.hpp"

namespace l0fa {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::InfeasiblePoint: return "infeasible-point";
    case ErrorKind::InfeasibleData: return "infeasible-data";
    case ErrorKind::NumericalBreakdown: return "numerical-breakdown";
    case ErrorKind::InvalidConfig: return "invalid-config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

BasisSet::BasisSet(int p) : p_(p), m_(0) {
  if (p < 1) {
    throw Error(ErrorKind::InvalidDimension,
                "basis dimension must be positive, got " + std::to_string(p));
  }
  m_ = p * (p + 1) / 2;
  pairs_.reserve(static_cast<std::size_t>(m_));
  weights_.reserve(static_cast<std::size_t>(m_));
  index_.setConstant(p, p, -1);
  const double off = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < p; ++i) {
    for (int j = i; j < p; ++j) {
      index_(i, j) = index_(j, i) = static_cast<int>(pairs_.size());
      pairs_.emplace_back(i, j);
      weights_.push_back(i == j ? 0.5 : off);
    }
  }
}

int BasisSet::index_of(int i, int j) const {
  if (i < 0 || j < 0 || i >= p_ || j >= p_) {
    throw Error(ErrorKind::Shape, "basis index pair out of range");
  }
  return index_(i, j);
}

Eigen::MatrixXd BasisSet::element(int a) const {
  const auto [i, j] = pair(a);
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(p_, p_);
  if (i == j) {
    E(i, i) = 1.0;
  } else {
    E(i, j) = E(j, i) = 1.0 / std::sqrt(2.0);
  }
  return E;
}

double relative_asymmetry(const Eigen::MatrixXd& S) {
  const double scale = S.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (S - S.transpose()).cwiseAbs().maxCoeff() / scale;
}

Eigen::VectorXd BasisSet::to_vec(const Eigen::MatrixXd& S) const {
  if (S.rows() != p_ || S.cols() != p_) {
    throw Error(ErrorKind::Shape, "expected a " + std::to_string(p_) + "x" +
                                      std::to_string(p_) + " matrix, got " +
                                      std::to_string(S.rows()) + "x" +
                                      std::to_string(S.cols()));
  }
  if (!S.allFinite() || relative_asymmetry(S) > kSymmetryTolerance) {
    throw Error(ErrorKind::Shape, "matrix is not symmetric");
  }
  return project(S);
}

Eigen::VectorXd BasisSet::project(const Eigen::MatrixXd& X) const {
  const double root2 = std::sqrt(2.0);
  Eigen::VectorXd s(m_);
  for (int a = 0; a < m_; ++a) {
    const auto [i, j] = pairs_[static_cast<std::size_t>(a)];
    s[a] = (i == j) ? X(i, i) : 0.5 * root2 * (X(i, j) + X(j, i));
  }
  return s;
}

Eigen::MatrixXd BasisSet::to_mat(const Eigen::VectorXd& s) const {
  if (s.size() != m_) {
    throw Error(ErrorKind::Shape, "coordinate vector has length " +
                                      std::to_string(s.size()) + ", expected " +
                                      std::to_string(m_));
  }
  const double inv_root2 = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd S(p_, p_);
  for (int a = 0; a < m_; ++a) {
    const auto [i, j] = pairs_[static_cast<std::size_t>(a)];
    if (i == j) {
      S(i, i) = s[a];
    } else {
      S(i, j) = S(j, i) = inv_root2 * s[a];
    }
  }
  return S;
}

Eigen::MatrixXd BasisSet::congruence_gram(const Eigen::MatrixXd& X) const {
  // tr(E_a X E_b X) = 2 w_a w_b (X_jk X_il + X_jl X_ik) for a = (i,j), b = (k,l).
  Eigen::MatrixXd G(m_, m_);
  for (int a = 0; a < m_; ++a) {
    const auto [i, j] = pairs_[static_cast<std::size_t>(a)];
    const double wa = 2.0 * weights_[static_cast<std::size_t>(a)];
    for (int b = a; b < m_; ++b) {
      const auto [k, l] = pairs_[static_cast<std::size_t>(b)];
      const double v =
          wa * weights_[static_cast<std::size_t>(b)] * (X(j, k) * X(i, l) + X(j, l) * X(i, k));
      G(a, b) = v;
      G(b, a) = v;
    }
  }
  return G;
}

Eigen::VectorXd mat_to_vec(const Eigen::MatrixXd& S, const BasisSet& basis) {
  return basis.to_vec(S);
}

Eigen::MatrixXd vec_to_mat(const Eigen::VectorXd& s, const BasisSet& basis) {
  return basis.to_mat(s);
}

}  // namespace l0fa
