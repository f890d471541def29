#pragma once

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "lrspin/errors.hpp"

namespace lrspin {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using QuantumState = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;

// Spin-j irreducible representation. Basis index k carries m = j - k, so J_z is
// diag(j, j-1, ..., -j) and |m> is the k-th unit vector.
class SpinRepresentation {
 public:
  explicit SpinRepresentation(int twice_j) : twice_j_(twice_j) {
    if (twice_j < 1) {
      throw InvalidArgument("spin label must satisfy 2j >= 1, got 2j=" +
                            std::to_string(twice_j));
    }
    const Eigen::Index n = dim();
    const double jj = j();
    jz_ = ComplexMatrix::Zero(n, n);
    ComplexMatrix raise = ComplexMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double m = m_at(k);
      jz_(k, k) = m;
      // <m+1|J+|m> sits one row above the diagonal.
      if (k > 0) raise(k - 1, k) = std::sqrt(jj * (jj + 1.0) - m * (m + 1.0));
    }
    const ComplexMatrix lower = raise.adjoint();
    jx_ = 0.5 * (raise + lower);
    jy_ = Complex(0.0, -0.5) * (raise - lower);

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(jy_);
    jy_vectors_ = es.eigenvectors();
    jy_values_ = es.eigenvalues();
  }

  int twice_j() const noexcept { return twice_j_; }
  double j() const noexcept { return 0.5 * twice_j_; }
  Eigen::Index dim() const noexcept { return twice_j_ + 1; }

  const ComplexMatrix& jx() const noexcept { return jx_; }
  const ComplexMatrix& jy() const noexcept { return jy_; }
  const ComplexMatrix& jz() const noexcept { return jz_; }

  double m_at(Eigen::Index k) const noexcept { return j() - static_cast<double>(k); }

  Eigen::Index index_of(double m) const {
    const double k = j() - m;
    const double rounded = std::round(k);
    if (std::abs(k - rounded) > 1e-9 || rounded < 0 ||
        rounded > static_cast<double>(twice_j_)) {
      throw InvalidArgument("m=" + std::to_string(m) + " is not in {j, ..., -j}");
    }
    return static_cast<Eigen::Index>(rounded);
  }

  QuantumState basis_state(double m) const {
    QuantumState v = QuantumState::Zero(dim());
    v(index_of(m)) = 1.0;
    return v;
  }

  // j(j+1)(2j+1)/3, the common value of tr(J_i J_i).
  double trace_metric() const noexcept {
    const double jj = j();
    return jj * (jj + 1.0) * (2.0 * jj + 1.0) / 3.0;
  }

  // exp(i c J_y) from the cached eigendecomposition of J_y.
  ComplexMatrix exp_i_jy(double c) const {
    Eigen::VectorXcd phases(dim());
    for (Eigen::Index k = 0; k < dim(); ++k) {
      phases(k) = std::polar(1.0, c * jy_values_(k));
    }
    return jy_vectors_ * phases.asDiagonal() * jy_vectors_.adjoint();
  }

  // exp(i c J_z), diagonal in the m basis.
  ComplexMatrix exp_i_jz(double c) const {
    ComplexMatrix u = ComplexMatrix::Zero(dim(), dim());
    for (Eigen::Index k = 0; k < dim(); ++k) u(k, k) = std::polar(1.0, c * m_at(k));
    return u;
  }

 private:
  int twice_j_;
  ComplexMatrix jx_, jy_, jz_;
  ComplexMatrix jy_vectors_;
  Eigen::VectorXd jy_values_;
};

// Accepts j as a number; 2j must be a positive integer.
inline SpinRepresentation make_spin_rep(double j) {
  const double twice = 2.0 * j;
  const double rounded = std::round(twice);
  if (!std::isfinite(j) || rounded < 1.0 || std::abs(twice - rounded) > 1e-12) {
    throw InvalidArgument("j must be a positive half-integer, got " + std::to_string(j));
  }
  return SpinRepresentation(static_cast<int>(rounded));
}

// v_x J_x + v_y J_y + v_z J_z.
inline ComplexMatrix spin_operator(const SpinRepresentation& rep, const Vec3& v) {
  return v.x() * rep.jx() + v.y() * rep.jy() + v.z() * rep.jz();
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw DimensionMismatch(static_cast<std::size_t>(a.rows()),
                            static_cast<std::size_t>(b.rows()));
  }
  return a * b - b * a;
}

// tr(a^dagger b).
inline Complex frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(static_cast<std::size_t>(a.rows()),
                            static_cast<std::size_t>(b.rows()));
  }
  return (a.adjoint() * b).trace();
}

// exp(i c g) for Hermitian g, by spectral decomposition.
inline ComplexMatrix unitary_from_generator(const ComplexMatrix& g, double c) {
  if (g.rows() != g.cols()) {
    throw DimensionMismatch(static_cast<std::size_t>(g.rows()),
                            static_cast<std::size_t>(g.cols()));
  }
  const double defect = (g - g.adjoint()).norm();
  if (defect > 1e-10) throw NotHermitian(defect);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (g + g.adjoint()));
  Eigen::VectorXcd phases(g.rows());
  for (Eigen::Index k = 0; k < g.rows(); ++k) {
    phases(k) = std::polar(1.0, c * es.eigenvalues()(k));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace lrspin
