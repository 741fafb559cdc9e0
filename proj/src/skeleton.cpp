#include "phystrack/skeleton.hpp"

#include <charconv>
#include <optional>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "bundled_models.hpp"
#include "phystrack/error.hpp"

namespace phystrack {
namespace {

constexpr std::array<std::string_view, kEndpointCount> kEndpointNames = {
    "left_hand", "right_hand", "left_foot", "right_foot", "pelvis"};
constexpr std::array<std::string_view, kEndpointCount> kDefaultEndpointJoints = {
    "L_Hand", "R_Hand", "L_Foot", "R_Foot", "Pelvis"};

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

double to_double(const std::string& tok, int line_no) {
  double value = 0.0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigurationError("skeleton line " + std::to_string(line_no) +
                             ": bad number '" + tok + "'");
  }
  return value;
}

}  // namespace

std::string_view endpoint_name(Endpoint e) { return kEndpointNames[static_cast<int>(e)]; }

bool is_hand(Endpoint e) { return e == Endpoint::kLeftHand || e == Endpoint::kRightHand; }

SkeletonModel::SkeletonModel(std::vector<Joint> joints, std::vector<BodyInertia> bodies,
                             std::array<int, kEndpointCount> endpoints, Vec3 gravity)
    : joints_(std::move(joints)),
      bodies_(std::move(bodies)),
      endpoints_(endpoints),
      gravity_(gravity) {
  if (joints_.empty()) throw ConfigurationError("skeleton has no joints");
  if (bodies_.size() != joints_.size()) {
    throw ConfigurationError("skeleton needs exactly one body per joint");
  }
  if (!gravity_.allFinite() || gravity_.norm() <= 0.0) {
    throw ConfigurationError("gravity must be finite and nonzero");
  }
  children_.assign(joints_.size(), {});
  for (int j = 0; j < joint_count(); ++j) {
    const Joint& jt = joints_[j];
    if (j == 0) {
      if (jt.parent != -1) throw ConfigurationError("joint 0 must be the root");
      if (!jt.offset.isZero()) {
        throw ConfigurationError("root joint offset must be zero");
      }
    } else if (jt.parent < 0 || jt.parent >= j) {
      throw ConfigurationError("joint '" + jt.name + "' is not in topological order");
    }
    if (!jt.offset.allFinite()) {
      throw ConfigurationError("joint '" + jt.name + "' has a non-finite offset");
    }
    if (j > 0) children_[jt.parent].push_back(j);

    const BodyInertia& b = bodies_[j];
    if (!(b.mass > 0.0) || !std::isfinite(b.mass) || !b.com.allFinite()) {
      throw ConfigurationError("body of '" + jt.name + "' needs a positive finite mass");
    }
    if ((b.inertia - b.inertia.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw ConfigurationError("inertia of '" + jt.name + "' is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat3> eig(b.inertia, Eigen::EigenvaluesOnly);
    if (!(eig.eigenvalues().minCoeff() > 0.0)) {
      throw ConfigurationError("inertia of '" + jt.name + "' is not positive definite");
    }
    total_mass_ += b.mass;
  }
  for (int idx : endpoints_) {
    if (idx < 0 || idx >= joint_count()) {
      throw ConfigurationError("tracked endpoint index out of range");
    }
  }
}

SkeletonModel SkeletonModel::parse(std::string_view text) {
  std::vector<Joint> joints;
  std::vector<std::optional<BodyInertia>> bodies;
  std::vector<std::string> endpoint_names;
  Vec3 gravity(0.0, -9.8, 0.0);

  auto find = [&joints](const std::string& name) -> int {
    for (int j = 0; j < static_cast<int>(joints.size()); ++j) {
      if (joints[j].name == name) return j;
    }
    return -1;
  };

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    const auto bad = [&](const std::string& what) {
      return ConfigurationError("skeleton line " + std::to_string(line_no) + ": " + what);
    };
    if (tok[0] == "joint") {
      if (tok.size() != 6) throw bad("expected 'joint <name> <parent|-> ox oy oz'");
      if (find(tok[1]) >= 0) throw bad("duplicate joint '" + tok[1] + "'");
      Joint jt;
      jt.name = tok[1];
      if (tok[2] == "-") {
        jt.parent = -1;
        if (!joints.empty()) throw bad("only the first joint may be the root");
      } else {
        jt.parent = find(tok[2]);
        if (jt.parent < 0) throw bad("unknown parent '" + tok[2] + "'");
      }
      jt.offset = Vec3(to_double(tok[3], line_no), to_double(tok[4], line_no),
                       to_double(tok[5], line_no));
      joints.push_back(std::move(jt));
      bodies.emplace_back();
    } else if (tok[0] == "mass") {
      if (tok.size() != 12) throw bad("expected 'mass <name> m cx cy cz Ixx Iyy Izz Ixy Ixz Iyz'");
      const int j = find(tok[1]);
      if (j < 0) throw bad("mass for unknown joint '" + tok[1] + "'");
      double v[10];
      for (int i = 0; i < 10; ++i) v[i] = to_double(tok[2 + i], line_no);
      BodyInertia b;
      b.mass = v[0];
      b.com = Vec3(v[1], v[2], v[3]);
      b.inertia << v[4], v[7], v[8],
                   v[7], v[5], v[9],
                   v[8], v[9], v[6];
      bodies[j] = b;
    } else if (tok[0] == "endpoints") {
      if (tok.size() != 1 + kEndpointCount) throw bad("expected five endpoint joint names");
      endpoint_names.assign(tok.begin() + 1, tok.end());
    } else if (tok[0] == "gravity") {
      if (tok.size() != 4) throw bad("expected 'gravity gx gy gz'");
      gravity = Vec3(to_double(tok[1], line_no), to_double(tok[2], line_no),
                     to_double(tok[3], line_no));
    } else {
      throw bad("unknown record '" + tok[0] + "'");
    }
  }

  std::vector<BodyInertia> resolved;
  for (std::size_t j = 0; j < joints.size(); ++j) {
    if (!bodies[j]) throw ConfigurationError("joint '" + joints[j].name + "' has no mass record");
    resolved.push_back(*bodies[j]);
  }
  std::array<int, kEndpointCount> endpoints{};
  for (int e = 0; e < kEndpointCount; ++e) {
    const std::string name = endpoint_names.empty() ? std::string(kDefaultEndpointJoints[e])
                                                    : endpoint_names[e];
    endpoints[e] = find(name);
    if (endpoints[e] < 0) {
      throw ConfigurationError("tracked endpoint joint '" + name + "' not in skeleton");
    }
  }
  return SkeletonModel(std::move(joints), std::move(resolved), endpoints, gravity);
}

SkeletonModel SkeletonModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open skeleton file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

const SkeletonModel& SkeletonModel::humanoid() {
  static const SkeletonModel model = parse(bundled::kHumanoid24);
  return model;
}

const SkeletonModel& SkeletonModel::test_chain() {
  static const SkeletonModel model = parse(bundled::kChain4);
  return model;
}

int SkeletonModel::find_joint(std::string_view name) const {
  for (int j = 0; j < joint_count(); ++j) {
    if (joints_[j].name == name) return j;
  }
  return -1;
}

bool SkeletonModel::is_ancestor_or_self(int ancestor, int joint) const {
  for (int j = joint; j >= 0; j = joints_[j].parent) {
    if (j == ancestor) return true;
  }
  return false;
}

SkeletonModel SkeletonModel::with_gravity(const Vec3& gravity) const {
  return SkeletonModel(joints_, bodies_, endpoints_, gravity);
}

CharacterState CharacterState::zero(const SkeletonModel& model) {
  return {VecX::Zero(model.dof_count()), VecX::Zero(model.dof_count())};
}

void CharacterState::validate(const SkeletonModel& model) const {
  if (q.size() != model.dof_count() || qdot.size() != model.dof_count()) {
    throw ConfigurationError("state length does not match the skeleton DOF count");
  }
  if (!q.allFinite() || !qdot.allFinite()) {
    throw ConfigurationError("state contains non-finite entries");
  }
}

}  // namespace phystrack
