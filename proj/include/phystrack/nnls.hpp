#pragma once

#include <vector>

#include "phystrack/rotation.hpp"

namespace phystrack {

struct NnlsResult {
  VecX x;
  int iterations = 0;
  double residual_norm = 0.0;
};

/// Lawson-Hanson active set for min |A x - b| with x_i >= 0 wherever
/// nonnegative[i] is set; the other variables are unconstrained. Throws
/// NumericalError if the iteration cap (3 * columns + 10) is hit.
NnlsResult nnls(const MatX& a, const VecX& b, const std::vector<bool>& nonnegative);

}  // namespace phystrack
