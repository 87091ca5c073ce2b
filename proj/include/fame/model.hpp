#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <array>
#include <map>
#include <string>
#include <vector>

#include "fame/error.hpp"

namespace fame {

enum class Side { kLeft = 0, kRight = 1 };

inline const char* side_name(Side s) { return s == Side::kLeft ? "left" : "right"; }

/// Rigid transform; the quaternion is kept unit-norm (renormalized after
/// every composition).
struct Transform {
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();

  Transform compose(const Transform& child) const {
    Transform out;
    out.translation = translation + rotation * child.translation;
    out.rotation = (rotation * child.rotation).normalized();
    return out;
  }

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
    return translation + rotation * p;
  }
};

struct JointSpec {
  std::string name;
  std::string parent_link;
  std::string child_link;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();  // in the joint frame
  Transform origin;  // parent link frame -> joint frame
  double q_min = 0.0;
  double q_max = 0.0;
  double torque_limit = 0.0;    // N·m, > 0
  double velocity_limit = 0.0;  // rad/s, > 0
};

struct LinkSpec {
  std::string name;
  double mass = 0.0;                             // kg, >= 0
  Eigen::Vector3d com = Eigen::Vector3d::Zero();  // m, link frame
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();  // kg·m² about com
};

struct WristFrame {
  std::string parent_link;
  Transform origin;  // parent link frame -> wrist frame
};

/// Named joint index sets. Optional in small test models; when declared the
/// canonical ordering (torso, left arm, right arm, then legs) is enforced.
struct Subchains {
  bool declared = false;
  std::vector<int> left_arm;    // 7
  std::vector<int> right_arm;   // 7
  std::vector<int> upper_body;  // 15, indices 0..14 in order
  std::vector<int> lower_body;  // 12, indices 15..26 in order
};

struct ChainModel {
  std::string name = "unnamed";
  std::vector<JointSpec> joints;  // canonical order = q index order
  std::vector<LinkSpec> links;
  Eigen::Vector3d gravity = Eigen::Vector3d(0.0, 0.0, -9.81);
  Subchains subchains;
  bool has_wrists = false;
  std::array<WristFrame, 2> wrists;  // [left, right]

  // Derived topology, filled by finalize().
  int root_link = -1;
  std::vector<int> joint_parent_link;   // per joint
  std::vector<int> joint_child_link;    // per joint
  std::vector<int> link_parent_joint;   // per link, -1 for the root
  std::vector<int> topo_joints;         // joints ordered root -> leaves

  int dof() const { return static_cast<int>(joints.size()); }

  int joint_index(const std::string& n) const;
  int link_index(const std::string& n) const;
  const WristFrame& wrist(Side s) const;
  const std::vector<int>& arm_indices(Side s) const;

  /// Validates every invariant and (re)builds the derived topology.
  /// Throws ValidationError naming the offending entity.
  void finalize();

 private:
  std::map<std::string, int> joint_by_name_;
  std::map<std::string, int> link_by_name_;
};

ChainModel parse_model(std::istream& in, const std::string& origin);
ChainModel load_model(const std::string& path);
std::string serialize_model(const ChainModel& model);

// ----- Arm configuration presets (five fixed upper-body poses) -----

enum class ArmConfigId { kC1 = 1, kC2, kC3, kC4, kC5 };

struct ArmConfigPreset {
  ArmConfigId id;
  const char* label;
  Eigen::Matrix<double, 15, 1> q_ub;  // canonical upper-body order
};

ArmConfigPreset preset(ArmConfigId id);
ArmConfigPreset preset(const std::string& id);  // "C1".."C5"
std::vector<ArmConfigPreset> all_presets();
const char* config_id_name(ArmConfigId id);

}  // namespace fame
