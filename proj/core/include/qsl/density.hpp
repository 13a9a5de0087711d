#pragma once

#include <memory>
#include <mutex>

#include "qsl/linalg.hpp"

namespace qsl {

// Hermitian, positive, trace-one operator. Immutable; the eigendecomposition
// and square root are computed once on first use and shared between copies.
class DensityOperator {
 public:
  // Checks Hermiticity (1e-12) and trace (1e-9); positivity (-1e-10) is
  // checked when the spectrum is first computed, or eagerly by validate().
  explicit DensityOperator(Matrix m);

  static DensityOperator pure(const Vector& psi);
  static DensityOperator maximally_mixed(int dim);

  const Matrix& matrix() const { return m_; }
  int dim() const { return static_cast<int>(m_.rows()); }

  const HermitianEig& eig() const;
  const Matrix& sqrt() const;
  void validate() const { (void)eig(); }

  // U m U*, reusing the spectrum of m.
  DensityOperator conjugated(const Matrix& u) const;

 private:
  struct Cache {
    std::once_flag eig_once, sqrt_once;
    HermitianEig eig;
    Matrix sqrt;
  };
  DensityOperator(Matrix m, std::shared_ptr<Cache> cache) : m_(std::move(m)), cache_(std::move(cache)) {}

  Matrix m_;
  std::shared_ptr<Cache> cache_;
};

// Square root with negative and round-off-level eigenvalues set to zero.
Matrix psd_sqrt(const HermitianEig& e);

}  // namespace qsl
