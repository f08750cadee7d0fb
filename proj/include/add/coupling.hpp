#pragma once

#include <optional>
#include <string>
#include <vector>

#include "add/bodies.hpp"
#include "add/types.hpp"

namespace add {

/// Attachment site of a coupling: a body-frame point on a rigid body, a node of a
/// soft/point-mass body, a fixed world point, or a world point driven by a
/// per-time-step control schedule.
struct Anchor {
  enum class Kind { RigidPoint, Node, World, WorldSchedule };
  Kind kind = Kind::World;
  int body = -1;              // RigidPoint / Node
  Vec3 local = Vec3::Zero();  // RigidPoint: body frame; World: fixed world point
  int node = -1;              // Node index for soft bodies (0 for point masses)
  int schedule = -1;          // WorldSchedule: control schedule id
};

struct Coupling {
  enum class Kind { DistanceSpring, Cable, BallSocket, Hinge, Motor, MotorDamping };
  Kind kind = Kind::DistanceSpring;
  std::string name;
  double stiffness = 0.0;    // k_c (k_md for MotorDamping)
  double rest_length = 0.0;  // DistanceSpring / Cable
  Anchor a, b;

  // Hinge / Motor / MotorDamping: rotation axes in each body frame (unit).
  Vec3 axis_a = Vec3::UnitZ();
  Vec3 axis_b = Vec3::UnitZ();
  // Motor: reference axes orthogonal to the rotation axes.
  Vec3 baxis_a = Vec3::UnitX();
  Vec3 baxis_b = Vec3::UnitX();
  // Motor target angle schedule: knot values, piecewise-linear in step index with
  // `knot_stride` steps between knots. A single value means a constant target.
  std::vector<double> motor_targets{0.0};
  int knot_stride = 1;

  void validate(int body_count) const;
};

/// Piecewise-linear schedule interpolation: value plus the sparse derivative
/// stencil d(alpha)/d(knot values) at a given step.
struct ScheduleSample {
  double value = 0.0;
  std::vector<std::pair<int, double>> weights;  // (knot index, weight)
};
ScheduleSample sample_schedule(const std::vector<double>& knots, int knot_stride, int step);

struct CouplingEval {
  double energy = 0.0;
  std::vector<int> dofs;  // global DOF indices touched
  VecX force;             // generalized force on `dofs`
  MatX dforce_dq;
  MatX dforce_dqdot;      // nonzero for MotorDamping only
  VecX dforce_dalpha;     // Motor: derivative w.r.t. the target angle
  MatX dforce_dtarget;    // WorldSchedule anchor: derivative w.r.t. the target point
  bool degenerate = false;
};

struct CouplingContext {
  const VecX* q = nullptr;
  const VecX* qdot = nullptr;
  const std::vector<int>* body_offset = nullptr;
  const std::vector<const RigidKinematics*>* kin = nullptr;  // per body, null unless rigid
  double motor_alpha = 0.0;
  Vec3 schedule_point = Vec3::Zero();  // world position of a WorldSchedule anchor
};

CouplingEval evaluate_coupling(const Coupling& c, const CouplingContext& ctx, bool with_jacobians,
                               bool with_param_partials);

}  // namespace add
