#include "fame/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "fame/textformat.hpp"

namespace fame {

namespace {

constexpr double kUnitNormTol = 1e-9;

bool finite(double v) { return std::isfinite(v); }

Eigen::Vector3d read_vec3(textfmt::Cursor& c, const char* what) {
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i) v[i] = c.next_double(what);
  return v;
}

Eigen::Quaterniond read_quat(textfmt::Cursor& c, const char* what) {
  const double w = c.next_double(what);
  const double x = c.next_double(what);
  const double y = c.next_double(what);
  const double z = c.next_double(what);
  return Eigen::Quaterniond(w, x, y, z);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

int ChainModel::joint_index(const std::string& n) const {
  auto it = joint_by_name_.find(n);
  if (it == joint_by_name_.end()) throw ValidationError("unknown joint: " + n);
  return it->second;
}

int ChainModel::link_index(const std::string& n) const {
  auto it = link_by_name_.find(n);
  if (it == link_by_name_.end()) throw ValidationError("unknown link: " + n);
  return it->second;
}

const WristFrame& ChainModel::wrist(Side s) const {
  if (!has_wrists) throw ValidationError("model '" + name + "' declares no wrist frames");
  return wrists[static_cast<int>(s)];
}

const std::vector<int>& ChainModel::arm_indices(Side s) const {
  if (!subchains.declared) {
    throw ValidationError("model '" + name + "' declares no subchains");
  }
  return s == Side::kLeft ? subchains.left_arm : subchains.right_arm;
}

void ChainModel::finalize() {
  joint_by_name_.clear();
  link_by_name_.clear();

  if (links.empty()) throw ValidationError("model '" + name + "' has no links");

  for (std::size_t i = 0; i < links.size(); ++i) {
    if (!link_by_name_.emplace(links[i].name, static_cast<int>(i)).second) {
      throw ValidationError("duplicate link name: " + links[i].name);
    }
  }
  for (std::size_t i = 0; i < joints.size(); ++i) {
    if (!joint_by_name_.emplace(joints[i].name, static_cast<int>(i)).second) {
      throw ValidationError("duplicate joint name: " + joints[i].name);
    }
    if (link_by_name_.count(joints[i].name)) {
      throw ValidationError("name used for both a joint and a link: " + joints[i].name);
    }
  }

  // Per-entity invariants.
  if (!gravity.allFinite()) throw ValidationError("gravity vector is not finite");
  for (auto& l : links) {
    if (!finite(l.mass) || l.mass < 0.0) {
      throw ValidationError("link '" + l.name + "': mass must be finite and >= 0");
    }
    if (!l.com.allFinite()) throw ValidationError("link '" + l.name + "': com not finite");
    if (!l.inertia.allFinite() || (l.inertia - l.inertia.transpose()).norm() > 1e-12) {
      throw ValidationError("link '" + l.name + "': inertia must be finite and symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(l.inertia);
    if (es.eigenvalues().minCoeff() < -1e-12) {
      throw ValidationError("link '" + l.name + "': inertia is not positive semi-definite");
    }
  }
  for (auto& j : joints) {
    if (std::abs(j.axis.norm() - 1.0) > kUnitNormTol) {
      throw ValidationError("joint '" + j.name + "': axis is not unit norm (|" +
                            fmt(j.axis.norm()) + "| != 1)");
    }
    j.axis.normalize();
    if (std::abs(j.origin.rotation.norm() - 1.0) > kUnitNormTol) {
      throw ValidationError("joint '" + j.name + "': origin quaternion is not unit norm");
    }
    j.origin.rotation.normalize();
    if (!j.origin.translation.allFinite()) {
      throw ValidationError("joint '" + j.name + "': origin translation not finite");
    }
    if (!finite(j.q_min) || !finite(j.q_max) || j.q_min > j.q_max) {
      throw ValidationError("joint '" + j.name + "': requires finite q_min <= q_max");
    }
    if (!finite(j.torque_limit) || j.torque_limit <= 0.0) {
      throw ValidationError("joint '" + j.name + "': torque limit must be finite and > 0");
    }
    if (!finite(j.velocity_limit) || j.velocity_limit <= 0.0) {
      throw ValidationError("joint '" + j.name + "': velocity limit must be finite and > 0");
    }
  }

  // Topology: every link except one root is the child of exactly one joint.
  joint_parent_link.assign(joints.size(), -1);
  joint_child_link.assign(joints.size(), -1);
  link_parent_joint.assign(links.size(), -1);
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const auto& j = joints[i];
    joint_parent_link[i] = link_index(j.parent_link);
    joint_child_link[i] = link_index(j.child_link);
    if (link_parent_joint[joint_child_link[i]] != -1) {
      throw ValidationError("link '" + j.child_link + "' has two parent joints");
    }
    link_parent_joint[joint_child_link[i]] = static_cast<int>(i);
  }
  root_link = -1;
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (link_parent_joint[i] == -1) {
      if (root_link != -1) {
        throw ValidationError("model has multiple roots: '" + links[root_link].name +
                              "' and '" + links[i].name + "'");
      }
      root_link = static_cast<int>(i);
    }
  }
  if (root_link == -1) throw ValidationError("model has a joint cycle (no root link)");

  // Reachability from the root proves the tree is connected and acyclic.
  std::vector<int> link_depth(links.size(), -1);
  link_depth[root_link] = 0;
  topo_joints.clear();
  std::vector<int> frontier{root_link};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int l : frontier) {
      for (std::size_t j = 0; j < joints.size(); ++j) {
        if (joint_parent_link[j] == l) {
          int c = joint_child_link[j];
          if (link_depth[c] != -1) {
            throw ValidationError("cycle through joint '" + joints[j].name + "'");
          }
          link_depth[c] = link_depth[l] + 1;
          topo_joints.push_back(static_cast<int>(j));
          next.push_back(c);
        }
      }
    }
    frontier = std::move(next);
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (link_depth[i] == -1) {
      throw ValidationError("link '" + links[i].name + "' is not connected to the root");
    }
  }

  // Subchains, when declared, must follow the canonical layout.
  if (subchains.declared) {
    auto check_size = [&](const std::vector<int>& v, std::size_t n, const char* which) {
      if (v.size() != n) {
        throw ValidationError(std::string("subchain '") + which + "' must have " +
                              std::to_string(n) + " joints, got " + std::to_string(v.size()));
      }
    };
    check_size(subchains.left_arm, 7, "left_arm");
    check_size(subchains.right_arm, 7, "right_arm");
    check_size(subchains.upper_body, 15, "upper_body");
    check_size(subchains.lower_body, 12, "lower_body");
    for (int i = 0; i < 15; ++i) {
      if (subchains.upper_body[i] != i) {
        throw ValidationError("subchain 'upper_body' must cover joint indices 0..14 in "
                              "canonical order; entry " + std::to_string(i) + " is joint '" +
                              joints[subchains.upper_body[i]].name + "'");
      }
    }
    if (dof() < 27) {
      throw ValidationError("subchains declared but model has fewer than 27 joints");
    }
    for (int i = 0; i < 12; ++i) {
      if (subchains.lower_body[i] != 15 + i) {
        throw ValidationError("subchain 'lower_body' must cover joint indices 15..26 in order");
      }
    }
    for (int i = 0; i < 7; ++i) {
      if (subchains.left_arm[i] != subchains.upper_body[1 + i]) {
        throw ValidationError("subchain 'left_arm' must equal upper_body entries 2..8");
      }
      if (subchains.right_arm[i] != subchains.upper_body[8 + i]) {
        throw ValidationError("subchain 'right_arm' must equal upper_body entries 9..15");
      }
    }
  }

  if (has_wrists) {
    for (int s = 0; s < 2; ++s) {
      link_index(wrists[s].parent_link);  // throws if unknown
      if (std::abs(wrists[s].origin.rotation.norm() - 1.0) > kUnitNormTol) {
        throw ValidationError(std::string("wrist '") + (s == 0 ? "left" : "right") +
                              "': origin quaternion is not unit norm");
      }
      wrists[s].origin.rotation.normalize();
    }
  }
}

// ----------------------------------------------------------------------------
// File format

ChainModel parse_model(std::istream& in, const std::string& origin) {
  textfmt::Document doc = textfmt::parse(in, origin);
  ChainModel m;

  static const std::set<std::string> known = {"model",     "gravity", "links",
                                              "joints",    "subchains", "wrists"};
  for (const auto& sec : doc.sections) {
    if (!known.count(sec.name)) {
      throw ParseError(origin + ":" + std::to_string(sec.number) +
                       ": unknown section [" + sec.name + "]");
    }
  }

  if (const auto* sec = doc.find("model")) {
    for (const auto& line : sec->lines) {
      textfmt::Cursor c(doc, *sec, line);
      c.expect("name");
      m.name = c.next_token("model name");
      c.expect_done();
    }
  }

  if (const auto* sec = doc.find("gravity")) {
    if (sec->lines.size() != 1) throw ParseError(origin + ": [gravity] wants one line");
    textfmt::Cursor c(doc, *sec, sec->lines.front());
    m.gravity = read_vec3(c, "gravity");
    c.expect_done();
  }

  {
    const auto& sec = doc.require("links");
    for (const auto& line : sec.lines) {
      textfmt::Cursor c(doc, sec, line);
      LinkSpec l;
      l.name = c.next_token("link name");
      while (!c.done()) {
        if (c.accept("mass")) {
          l.mass = c.next_double("mass");
        } else if (c.accept("com")) {
          l.com = read_vec3(c, "com");
        } else if (c.accept("inertia")) {
          // ixx iyy izz ixy ixz iyz
          const double xx = c.next_double("inertia");
          const double yy = c.next_double("inertia");
          const double zz = c.next_double("inertia");
          const double xy = c.next_double("inertia");
          const double xz = c.next_double("inertia");
          const double yz = c.next_double("inertia");
          l.inertia << xx, xy, xz, xy, yy, yz, xz, yz, zz;
        } else {
          c.expect_done();
        }
      }
      m.links.push_back(std::move(l));
    }
  }

  {
    const auto& sec = doc.require("joints");
    for (const auto& line : sec.lines) {
      textfmt::Cursor c(doc, sec, line);
      JointSpec j;
      j.name = c.next_token("joint name");
      while (!c.done()) {
        if (c.accept("parent")) {
          j.parent_link = c.next_token("parent link");
        } else if (c.accept("child")) {
          j.child_link = c.next_token("child link");
        } else if (c.accept("axis")) {
          j.axis = read_vec3(c, "axis");
        } else if (c.accept("origin")) {
          j.origin.translation = read_vec3(c, "origin translation");
        } else if (c.accept("quat")) {
          j.origin.rotation = read_quat(c, "origin quaternion");
        } else if (c.accept("limits")) {
          j.q_min = c.next_double("q_min");
          j.q_max = c.next_double("q_max");
        } else if (c.accept("torque")) {
          j.torque_limit = c.next_double("torque limit");
        } else if (c.accept("velocity")) {
          j.velocity_limit = c.next_double("velocity limit");
        } else {
          c.expect_done();
        }
      }
      if (j.parent_link.empty() || j.child_link.empty()) {
        throw ParseError(origin + ":" + std::to_string(line.number) + ": joint '" + j.name +
                         "' needs parent and child");
      }
      m.joints.push_back(std::move(j));
    }
  }

  if (const auto* sec = doc.find("subchains")) {
    m.subchains.declared = true;
    auto joint_id = [&](const std::string& n, int lineno) {
      for (std::size_t i = 0; i < m.joints.size(); ++i) {
        if (m.joints[i].name == n) return static_cast<int>(i);
      }
      throw ParseError(origin + ":" + std::to_string(lineno) +
                       ": subchain references unknown joint '" + n + "'");
    };
    for (const auto& line : sec->lines) {
      textfmt::Cursor c(doc, *sec, line);
      const std::string which = c.next_token("subchain name");
      std::vector<int>* target = nullptr;
      if (which == "left_arm") target = &m.subchains.left_arm;
      else if (which == "right_arm") target = &m.subchains.right_arm;
      else if (which == "upper_body") target = &m.subchains.upper_body;
      else if (which == "lower_body") target = &m.subchains.lower_body;
      else c.fail("unknown subchain '" + which + "'");
      while (!c.done()) target->push_back(joint_id(c.next_token("joint name"), line.number));
    }
  }

  if (const auto* sec = doc.find("wrists")) {
    m.has_wrists = true;
    bool seen[2] = {false, false};
    for (const auto& line : sec->lines) {
      textfmt::Cursor c(doc, *sec, line);
      const std::string side = c.next_token("wrist side");
      int idx = -1;
      if (side == "left") idx = 0;
      else if (side == "right") idx = 1;
      else c.fail("wrist side must be left or right, got '" + side + "'");
      WristFrame w;
      while (!c.done()) {
        if (c.accept("parent")) w.parent_link = c.next_token("parent link");
        else if (c.accept("origin")) w.origin.translation = read_vec3(c, "origin");
        else if (c.accept("quat")) w.origin.rotation = read_quat(c, "quaternion");
        else c.expect_done();
      }
      if (w.parent_link.empty()) c.fail("wrist needs a parent link");
      m.wrists[idx] = std::move(w);
      seen[idx] = true;
    }
    if (!seen[0] || !seen[1]) {
      throw ParseError(origin + ": [wrists] must define both left and right");
    }
  }

  m.finalize();
  return m;
}

ChainModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file: " + path);
  return parse_model(in, path);
}

std::string serialize_model(const ChainModel& m) {
  std::ostringstream out;
  out << "[model]\nname " << m.name << "\n\n";
  out << "[gravity]\n" << fmt(m.gravity.x()) << " " << fmt(m.gravity.y()) << " "
      << fmt(m.gravity.z()) << "\n\n";
  out << "[links]\n";
  for (const auto& l : m.links) {
    out << l.name << " mass " << fmt(l.mass) << " com " << fmt(l.com.x()) << " "
        << fmt(l.com.y()) << " " << fmt(l.com.z()) << " inertia " << fmt(l.inertia(0, 0))
        << " " << fmt(l.inertia(1, 1)) << " " << fmt(l.inertia(2, 2)) << " "
        << fmt(l.inertia(0, 1)) << " " << fmt(l.inertia(0, 2)) << " " << fmt(l.inertia(1, 2))
        << "\n";
  }
  out << "\n[joints]\n";
  for (const auto& j : m.joints) {
    out << j.name << " parent " << j.parent_link << " child " << j.child_link << " axis "
        << fmt(j.axis.x()) << " " << fmt(j.axis.y()) << " " << fmt(j.axis.z()) << " origin "
        << fmt(j.origin.translation.x()) << " " << fmt(j.origin.translation.y()) << " "
        << fmt(j.origin.translation.z()) << " quat " << fmt(j.origin.rotation.w()) << " "
        << fmt(j.origin.rotation.x()) << " " << fmt(j.origin.rotation.y()) << " "
        << fmt(j.origin.rotation.z()) << " limits " << fmt(j.q_min) << " " << fmt(j.q_max)
        << " torque " << fmt(j.torque_limit) << " velocity " << fmt(j.velocity_limit) << "\n";
  }
  if (m.subchains.declared) {
    out << "\n[subchains]\n";
    auto emit = [&](const char* which, const std::vector<int>& idx) {
      out << which;
      for (int i : idx) out << " " << m.joints[i].name;
      out << "\n";
    };
    emit("left_arm", m.subchains.left_arm);
    emit("right_arm", m.subchains.right_arm);
    emit("upper_body", m.subchains.upper_body);
    emit("lower_body", m.subchains.lower_body);
  }
  if (m.has_wrists) {
    out << "\n[wrists]\n";
    for (int s = 0; s < 2; ++s) {
      const auto& w = m.wrists[s];
      out << (s == 0 ? "left" : "right") << " parent " << w.parent_link << " origin "
          << fmt(w.origin.translation.x()) << " " << fmt(w.origin.translation.y()) << " "
          << fmt(w.origin.translation.z()) << " quat " << fmt(w.origin.rotation.w()) << " "
          << fmt(w.origin.rotation.x()) << " " << fmt(w.origin.rotation.y()) << " "
          << fmt(w.origin.rotation.z()) << "\n";
    }
  }
  return out.str();
}

// ----------------------------------------------------------------------------
// Presets

namespace {

struct PresetRow {
  ArmConfigId id;
  const char* label;
  double q[15];
};

// Canonical upper-body order: torso, left arm (7), right arm (7).
const PresetRow kPresets[5] = {
    {ArmConfigId::kC1, "forward_extended",
     {0, -0.9, 0, 0, 0.5, 0, 0, 0, -0.9, 0, 0, 0.5, 0, 0, 0}},
    {ArmConfigId::kC2, "mid_sideways",
     {0, -0.9, 1.3, 0, 0, 0, 0, 0, -0.9, -1.3, 0, 0, 0, 0, 0}},
    {ArmConfigId::kC3, "full_sideways",
     {0, 1.3, 0, 1.2, 0, 0, 0, 0, -1.3, 0, 1.2, 0, 0, 0, 0}},
    {ArmConfigId::kC4, "near_full_sideways",
     {0, 1.0, 0, 0.9, 0, 0, 0, 0, -1.0, 0, 0.9, 0, 0, 0, 0}},
    {ArmConfigId::kC5, "asym_forward_full",
     {0, -0.9, 0, 0, 0.5, 0, 0, 0, 1.3, 0, 1.2, 0, 0, 0, 0}},
};

}  // namespace

ArmConfigPreset preset(ArmConfigId id) {
  for (const auto& row : kPresets) {
    if (row.id == id) {
      ArmConfigPreset p;
      p.id = row.id;
      p.label = row.label;
      for (int i = 0; i < 15; ++i) p.q_ub[i] = row.q[i];
      return p;
    }
  }
  throw ValidationError("unknown arm configuration id");
}

ArmConfigPreset preset(const std::string& id) {
  if (id.size() == 2 && (id[0] == 'C' || id[0] == 'c') && id[1] >= '1' && id[1] <= '5') {
    return preset(static_cast<ArmConfigId>(id[1] - '0'));
  }
  throw ValidationError("unknown arm configuration id: '" + id + "' (want C1..C5)");
}

std::vector<ArmConfigPreset> all_presets() {
  std::vector<ArmConfigPreset> out;
  for (const auto& row : kPresets) out.push_back(preset(row.id));
  return out;
}

const char* config_id_name(ArmConfigId id) {
  switch (id) {
    case ArmConfigId::kC1: return "C1";
    case ArmConfigId::kC2: return "C2";
    case ArmConfigId::kC3: return "C3";
    case ArmConfigId::kC4: return "C4";
    case ArmConfigId::kC5: return "C5";
  }
  return "?";
}

}  // namespace fame
