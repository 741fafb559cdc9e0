#include "phystrack/nnls.hpp"

#include <Eigen/QR>
#include <limits>

#include "phystrack/error.hpp"

namespace phystrack {
namespace {

// Least squares on the passive columns; the rest of z is zero.
VecX passive_solve(const MatX& a, const VecX& b, const std::vector<bool>& passive) {
  std::vector<int> cols;
  for (int j = 0; j < static_cast<int>(passive.size()); ++j) {
    if (passive[j]) cols.push_back(j);
  }
  VecX z = VecX::Zero(a.cols());
  if (cols.empty()) return z;
  MatX sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
  const VecX zs = sub.colPivHouseholderQr().solve(b);
  for (size_t k = 0; k < cols.size(); ++k) z(cols[k]) = zs(static_cast<Eigen::Index>(k));
  return z;
}

}  // namespace

NnlsResult nnls(const MatX& a, const VecX& b, const std::vector<bool>& nonnegative) {
  const int n = static_cast<int>(a.cols());
  if (a.rows() != b.size() || static_cast<int>(nonnegative.size()) != n) {
    throw ConfigurationError("nnls: inconsistent problem dimensions");
  }
  // Gradient entries scale with both |A| and |b|.
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     a.cwiseAbs().colwise().sum().maxCoeff() * std::max(1.0, b.norm()) *
                     static_cast<double>(std::max<Eigen::Index>(a.rows(), n));

  std::vector<bool> passive(n);
  for (int j = 0; j < n; ++j) passive[j] = !nonnegative[j];
  VecX x = passive_solve(a, b, passive);

  NnlsResult out;
  const int cap = 3 * n + 10;
  while (true) {
    const VecX w = a.transpose() * (b - a * x);
    int enter = -1;
    double best = tol;
    for (int j = 0; j < n; ++j) {
      if (!passive[j] && w(j) > best) {
        best = w(j);
        enter = j;
      }
    }
    if (enter < 0) break;
    if (++out.iterations > cap) throw NumericalError("nnls: iteration cap reached");
    passive[enter] = true;

    VecX z = passive_solve(a, b, passive);
    if (nonnegative[enter] && z(enter) <= 0.0) {
      // Column is numerically dependent on the passive set; its gradient
      // entry was round-off.
      passive[enter] = false;
      break;
    }
    while (true) {
      double alpha = std::numeric_limits<double>::infinity();
      for (int j = 0; j < n; ++j) {
        if (passive[j] && nonnegative[j] && z(j) <= 0.0) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      }
      if (!std::isfinite(alpha)) break;
      x += alpha * (z - x);
      for (int j = 0; j < n; ++j) {
        if (passive[j] && nonnegative[j] && x(j) <= tol) {
          passive[j] = false;
          x(j) = 0.0;
        }
      }
      z = passive_solve(a, b, passive);
    }
    x = z;
  }
  out.x = x;
  out.residual_norm = (a * x - b).norm();
  return out;
}

}  // namespace phystrack
