#include "phystrack/contact.hpp"

#include <algorithm>
#include <cmath>

#include <spdlog/spdlog.h>

#include "phystrack/error.hpp"
#include "phystrack/kinematics.hpp"
#include "phystrack/nnls.hpp"

namespace phystrack {
namespace {

bool is_stationary(double s, const ContactConfig& c) { return s > c.stationary_threshold; }

Vec3 horizontal(const SkeletonModel& model, const Vec3& p) {
  const Vec3 up = model.up();
  return p - up.dot(p) * up;
}

Vec3 endpoint_position(const SkeletonModel& model, const VecX& positions, Endpoint e) {
  return positions.segment<3>(3 * model.endpoint_joint(e));
}

bool touches_ground(double h, double ground, const ContactConfig& c) {
  return h - ground <= c.height_tolerance;
}

}  // namespace

void ContactConfig::validate() const {
  for (double x : {beta_lambda, mu, e_th, height_tolerance, pairing_distance}) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw ConfigurationError("contact weights and thresholds must be positive");
    }
  }
  if (!(stationary_threshold > 0.0 && stationary_threshold < 1.0)) {
    throw ConfigurationError("stationary_threshold must lie in (0, 1)");
  }
  if (counter_threshold < 1) throw ConfigurationError("counter_threshold must be >= 1");
  if (pyramid_edges != 4) throw ConfigurationError("only a 4-edge friction pyramid is supported");
}

const char* status_name(ContactStatus s) {
  switch (s) {
    case ContactStatus::kFree: return "free";
    case ContactStatus::kPotential: return "potential";
    case ContactStatus::kContact: return "contact";
  }
  return "?";
}

const char* event_name(ContactEvent::Kind k) {
  switch (k) {
    case ContactEvent::Kind::kAccepted: return "accepted";
    case ContactEvent::Kind::kRejected: return "rejected";
    case ContactEvent::Kind::kCommitted: return "committed";
  }
  return "?";
}

double height_of(const SkeletonModel& model, const Vec3& p) { return model.up().dot(p); }

ContactSet mark_contacts(const SkeletonModel& model, const ContactSet& previous,
                         const std::array<double, kEndpointCount>& s, const VecX& positions,
                         double ground_height, const ContactConfig& config) {
  if (positions.size() != 3 * model.joint_count()) {
    throw ConfigurationError("mark_contacts: positions do not match the skeleton");
  }
  ContactSet out = previous;
  std::array<double, kEndpointCount> height{};
  for (Endpoint e : kAllEndpoints) height[static_cast<int>(e)] = height_of(model, endpoint_position(model, positions, e));

  for (Endpoint e : kAllEndpoints) {
    const int i = static_cast<int>(e);
    EndpointContact& c = out.endpoints[i];
    const EndpointContact& before = previous.endpoints[i];
    if (!is_stationary(s[i], config)) {
      c.status = ContactStatus::kFree;
      c.counter = 0;
      c.lambda = Vec3::Zero();
      continue;
    }
    if (before.status == ContactStatus::kContact) {
      c.status = ContactStatus::kContact;
    } else if (touches_ground(height[i], ground_height, config)) {
      c.status = ContactStatus::kContact;
      c.surface_height = ground_height;
    } else if (before.surface_height &&
               std::abs(height[i] - *before.surface_height) <= config.height_tolerance) {
      c.status = ContactStatus::kContact;
    } else {
      c.status = ContactStatus::kPotential;
    }
  }

  // Pairing: a stationary endpoint next to a contact at the same height joins
  // it. Repeat until nothing changes so chains resolve in any order.
  bool changed = true;
  while (changed) {
    changed = false;
    for (Endpoint e : kAllEndpoints) {
      const int i = static_cast<int>(e);
      if (out.endpoints[i].status != ContactStatus::kPotential) continue;
      for (Endpoint f : kAllEndpoints) {
        const int k = static_cast<int>(f);
        if (out.endpoints[k].status != ContactStatus::kContact) continue;
        const double dh = std::abs(height[i] - height[k]);
        const double dist = (horizontal(model, endpoint_position(model, positions, e)) -
                             horizontal(model, endpoint_position(model, positions, f)))
                                .norm();
        if (dh <= config.height_tolerance && dist <= config.pairing_distance) {
          out.endpoints[i].status = ContactStatus::kContact;
          out.endpoints[i].surface_height = out.endpoints[k].surface_height;
          changed = true;
          break;
        }
      }
    }
  }
  for (EndpointContact& c : out.endpoints) {
    if (c.status == ContactStatus::kContact) c.counter = std::max(c.counter, config.counter_threshold);
  }
  return out;
}

std::array<Vec3, 4> pyramid_edges(const Vec3& up, double mu) {
  const Vec3 n = up.normalized();
  int k = 0;
  n.cwiseAbs().minCoeff(&k);
  Vec3 t1 = Vec3::Unit(k);
  t1 = (t1 - t1.dot(n) * n).normalized();
  const Vec3 t2 = n.cross(t1);
  return {n + mu * t1, n + mu * t2, n - mu * t1, n - mu * t2};
}

Vec6 residual_after(const Vec6& residual, const MatX& jacobian, const VecX& lambda) {
  if (lambda.size() == 0) return residual;
  return residual - (jacobian.transpose() * lambda).head<6>();
}

ContactForces solve_contact_forces(const SkeletonModel& model, const VecX& q,
                                   const std::vector<ContactPoint>& points, const Vec6& residual,
                                   const ContactConfig& config) {
  ContactForces out;
  out.points = points;
  out.generalized_force = VecX::Zero(model.dof_count());
  out.e = residual;
  out.e_norm = residual.norm();
  if (points.empty()) {
    out.jacobian = MatX(0, model.dof_count());
    return out;
  }

  std::vector<int> joints;
  for (const ContactPoint& p : points) joints.push_back(model.endpoint_joint(p.endpoint));
  out.jacobian = joint_jacobian_rows(model, q, joints);

  // λ = L x, with 4 edge weights per coned point and 3 free components
  // otherwise.
  const auto edges = pyramid_edges(model.up(), config.mu);
  int vars = 0;
  for (const ContactPoint& p : points) vars += p.friction_cone ? 4 : 3;
  const int c3 = 3 * static_cast<int>(points.size());
  MatX lift = MatX::Zero(c3, vars);
  std::vector<bool> nonneg;
  int col = 0;
  for (size_t i = 0; i < points.size(); ++i) {
    const int row = 3 * static_cast<int>(i);
    if (points[i].friction_cone) {
      for (const Vec3& d : edges) {
        lift.block<3, 1>(row, col++) = d;
        nonneg.push_back(true);
      }
    } else {
      lift.block<3, 3>(row, col).setIdentity();
      col += 3;
      nonneg.insert(nonneg.end(), 3, false);
    }
  }
  const MatX root_map = out.jacobian.leftCols<6>().transpose();  // (Jᵀ)_{:6}, 6 x 3c
  MatX a(6 + c3, vars);
  a.topRows<6>() = root_map * lift;
  a.bottomRows(c3) = std::sqrt(config.beta_lambda) * lift;
  VecX b = VecX::Zero(6 + c3);
  b.head<6>() = residual;

  const NnlsResult sol = nnls(a, b, nonneg);
  const VecX lambda = lift * sol.x;
  for (size_t i = 0; i < points.size(); ++i) out.forces.push_back(lambda.segment<3>(3 * static_cast<Eigen::Index>(i)));
  out.generalized_force = out.jacobian.transpose() * lambda;
  out.e = residual_after(residual, out.jacobian, lambda);
  out.e_norm = out.e.norm();
  return out;
}

ContactEstimate estimate_contacts(const SkeletonModel& model, const VecX& q,
                                  const ContactSet& marked, const Vec6& residual,
                                  double ground_height, const ContactConfig& config) {
  const std::vector<Vec3> pos = forward_kinematics(model, q);
  auto height = [&](Endpoint e) { return height_of(model, pos[model.endpoint_joint(e)]); };
  auto point = [&](Endpoint e) {
    return ContactPoint{e, !is_hand(e) || touches_ground(height(e), ground_height, config)};
  };

  ContactEstimate out;
  out.set = marked;
  std::vector<ContactPoint> committed;
  std::vector<Endpoint> potentials;
  for (Endpoint e : kAllEndpoints) {
    const ContactStatus st = marked[e].status;
    if (st == ContactStatus::kContact) committed.push_back(point(e));
    if (st == ContactStatus::kPotential) potentials.push_back(e);
  }
  std::stable_sort(potentials.begin(), potentials.end(),
                   [&](Endpoint a, Endpoint b) { return height(a) < height(b); });

  std::vector<ContactPoint> trial = committed;
  ContactForces current = solve_contact_forces(model, q, trial, residual, config);
  std::vector<bool> examined(kEndpointCount, false), kept(kEndpointCount, false);
  for (Endpoint e : potentials) {
    if (current.e_norm <= config.e_th) break;
    examined[static_cast<int>(e)] = true;
    trial.push_back(point(e));
    ContactForces candidate = solve_contact_forces(model, q, trial, residual, config);
    EndpointContact& c = out.set[e];
    ContactEvent ev{ContactEvent::Kind::kRejected, e, current.e_norm, candidate.e_norm, 0};
    if (candidate.e_norm < 0.5 * current.e_norm) {
      ev.kind = ContactEvent::Kind::kAccepted;
      kept[static_cast<int>(e)] = true;
      ev.counter = ++c.counter;
      current = std::move(candidate);
    } else {
      trial.pop_back();
      c.counter = 0;
    }
    out.events.push_back(ev);
  }
  for (Endpoint e : potentials) {
    EndpointContact& c = out.set[e];
    if (!examined[static_cast<int>(e)]) c.counter = 0;
    if (kept[static_cast<int>(e)] && c.counter >= config.counter_threshold) {
      c.status = ContactStatus::kContact;
      c.surface_height = height(e);
      committed.push_back(point(e));
      out.events.push_back({ContactEvent::Kind::kCommitted, e, 0.0, 0.0, c.counter});
    }
  }

  out.forces = solve_contact_forces(model, q, committed, residual, config);
  for (EndpointContact& c : out.set.endpoints) c.lambda = Vec3::Zero();
  for (size_t i = 0; i < committed.size(); ++i) out.set[committed[i].endpoint].lambda = out.forces.forces[i];
  for (const ContactEvent& ev : out.events) {
    spdlog::debug("contact {} {}: |e| {:.1f} -> {:.1f}, counter {}", endpoint_name(ev.endpoint),
                  event_name(ev.kind), ev.e_before, ev.e_after, ev.counter);
  }
  return out;
}

VecX adjust_references(const SkeletonModel& model, const VecX& r_ref, const ContactSet& contacts,
                       double d_th, double pull_factor) {
  VecX out = r_ref;
  const Vec3 up = model.up();
  for (Endpoint e : kAllEndpoints) {
    const EndpointContact& c = contacts[e];
    if (c.status != ContactStatus::kContact || !c.surface_height) continue;
    const int j = model.endpoint_joint(e);
    const Vec3 p = out.segment<3>(3 * j);
    const double gap = up.dot(p) - *c.surface_height;
    if (gap < 0.0) {
      out.segment<3>(3 * j) = p - gap * up;
    } else if (gap > 0.0 && gap <= d_th) {
      out.segment<3>(3 * j) = p - pull_factor * gap * up;
    }
  }
  return out;
}

}  // namespace phystrack
