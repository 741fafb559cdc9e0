#include "phystrack/lsqr.hpp"

#include <cmath>

#include "phystrack/error.hpp"

namespace phystrack {

LsqrResult lsqr(const MatX& a, const VecX& b, double tol, int max_iterations) {
  if (a.rows() != b.size()) throw ConfigurationError("lsqr: A and b disagree in size");
  LsqrResult out;
  out.x = VecX::Zero(a.cols());

  VecX u = b;
  double beta = u.norm();
  const double bnorm = beta;
  if (beta > 0.0) u /= beta;
  VecX v = a.transpose() * u;
  double alpha = v.norm();
  if (alpha > 0.0) v /= alpha;
  out.residual_norm = beta;
  out.normal_residual_norm = alpha * beta;
  if (out.normal_residual_norm == 0.0) {
    out.converged = true;
    return out;
  }

  VecX w = v;
  double phibar = beta, rhobar = alpha, anorm = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    out.iterations = it;
    // Bidiagonalization step.
    u = a * v - alpha * u;
    beta = u.norm();
    if (beta > 0.0) u /= beta;
    anorm = std::sqrt(anorm * anorm + alpha * alpha + beta * beta);
    v = a.transpose() * u - beta * v;
    alpha = v.norm();
    if (alpha > 0.0) v /= alpha;

    // Plane rotation eliminating the subdiagonal.
    const double rho = std::hypot(rhobar, beta);
    const double c = rhobar / rho, s = beta / rho;
    const double theta = s * alpha;
    rhobar = -c * alpha;
    const double phi = c * phibar;
    phibar = s * phibar;

    out.x += (phi / rho) * w;
    w = v - (theta / rho) * w;

    out.residual_norm = phibar;
    out.normal_residual_norm = alpha * std::abs(s * phi);
    const double xnorm = out.x.norm();
    if (out.residual_norm <= tol * (bnorm + anorm * xnorm) ||
        out.normal_residual_norm <= tol * anorm * out.residual_norm) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace phystrack
