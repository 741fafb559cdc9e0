#pragma once

#include "phystrack/rotation.hpp"

namespace phystrack {

struct LsqrResult {
  VecX x;
  int iterations = 0;
  bool converged = false;
  double residual_norm = 0.0;         // |b - A x|
  double normal_residual_norm = 0.0;  // |Aᵀ(b - A x)|, as estimated by the recurrence
};

/// Paige-Saunders LSQR for min |A x - b|, no damping. Stops when
/// |r| <= tol (|b| + |A| |x|) or |Aᵀr| <= tol |A| |r|, with |A| the running
/// Frobenius estimate. The matrix is held densely; only products with A and
/// Aᵀ are used.
LsqrResult lsqr(const MatX& a, const VecX& b, double tol, int max_iterations);

}  // namespace phystrack
