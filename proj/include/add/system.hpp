#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "add/bodies.hpp"
#include "add/contact.hpp"
#include "add/coupling.hpp"
#include "add/parameters.hpp"
#include "add/types.hpp"

namespace add {

/// World-point schedule for kinematic control handles (one knot per `stride` steps).
struct HandleSchedule {
  std::vector<Vec3> knots;
  int stride = 1;
};

struct MultiBodySystem {
  std::vector<Body> bodies;
  std::vector<Obstacle> obstacles;
  std::vector<Coupling> couplings;
  std::vector<HandleSchedule> handles;
  Vec3 gravity = Vec3(0, 0, -9.81);
  double gravity_scale = 1.0;
  ContactModel contact;
  double poisson = 0.3;  // shared Poisson ratio backing the Young's-modulus parameterization

  // Filled by finalize().
  int ndof = 0;
  std::vector<int> body_offset;
  bool finalized = false;

  void finalize();
  int body_index(const std::string& name) const;
  int dof_of(int body) const { return body_offset[body]; }
  Vec3 effective_gravity() const { return gravity_scale * gravity; }

  /// chi: the integrator's initial state.
  VecX initial_position() const;
  VecX initial_velocity() const;
  /// Jacobians of chi w.r.t. a parameter layout (columns for non-IC blocks are zero).
  void initial_state_jacobians(const ParameterLayout& layout, MatX& dq0_dp, MatX& dv0_dp) const;
};

/// Per-contact diagnostics captured during assembly; also drives the hybrid protocol.
struct ContactRecord {
  int obstacle = -1;
  int body = -1;
  int dof_base = -1;     // owner DOF base (node base for soft, body base for rigid)
  bool rigid = false;
  Vec3 local = Vec3::Zero();   // rigid: proxy point, or sphere center for sphere proxies
  double sphere_radius = -1.0;  // >= 0 marks a sphere proxy
  Vec3 x = Vec3::Zero();  // world contact point
  double g = 1.0;
  Vec3 n = Vec3::UnitZ();
  double fn = 0.0;
  Vec3 friction = Vec3::Zero();
  double slip_speed = 0.0;
  bool clamped = false;
  bool stick = false;
};

struct AssemblyRequest {
  bool with_jacobians = true;
  bool with_params = false;
  const ParameterLayout* layout = nullptr;
  int step = 0;  // current step index (schedules)
  const std::vector<uint8_t>* stick = nullptr;  // per-contact stick labels (hybrid)
};

struct Assembly {
  VecX r;
  SpMat dr_dq;   // partial w.r.t. q at fixed qdot/qddot
  SpMat dr_dv;   // partial w.r.t. qdot
  SpMat mass;    // M-hat(q)
  MatX dr_dp;
  std::vector<ContactRecord> contacts;
  double elastic_energy = 0.0;
  double kinetic_energy = 0.0;
  double gravity_potential = 0.0;
};

/// r = M(q,p) qddot + C(q,qdot) - f(q,qdot,p), with analytic partial blocks.
/// Contact enumeration order is deterministic: bodies in order, nodes/proxies in
/// order, obstacles in order.
Assembly assemble_residual(const MultiBodySystem& sys, const VecX& q, const VecX& qdot,
                           const VecX& qddot, const AssemblyRequest& req);

/// Rebuilds only the contact records (labels/velocities) at a given state.
std::vector<ContactRecord> enumerate_contacts(const MultiBodySystem& sys, const VecX& q,
                                              const VecX& qdot);

}  // namespace add
