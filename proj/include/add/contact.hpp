#pragma once

#include <string>

#include "add/types.hpp"

namespace add {

struct Obstacle {
  enum class Kind { HalfSpace, Sphere };
  Kind kind = Kind::HalfSpace;
  std::string name;
  Vec3 point = Vec3::Zero();    // half-space: point on the plane; sphere: center
  Vec3 normal = Vec3::UnitZ();  // half-space outward normal (unit)
  double radius = 1.0;          // sphere
  bool inside = false;          // sphere: contact felt from the inside (container)
  double friction = 0.0;        // c_f

  void validate() const;
};

struct ContactModel {
  enum class Variant { LinearPenalty, TanhPenalty, Hybrid };
  Variant variant = Variant::LinearPenalty;
  double k_n = 1e3;
  double k_t = 0.0;       // 0 means "use k_n * dt", resolved at scene finalize
  double eps_reg = 1e-8;  // tangent-direction regularizer for the clamped linear force
  bool active_set = false;  // hybrid: label-driven protocol instead of residual-threshold
};

struct GapResult {
  double g = 0.0;
  Vec3 n = Vec3::UnitZ();
  Mat3 dn_dx = Mat3::Zero();
};

/// Signed distance (negative inside) and outward unit normal.
GapResult gap(const Obstacle& obs, const Vec3& x);

/// World-space contact response at a point: penalty normal force, friction
/// (per the model variant) and normal-direction damping, with derivatives.
struct ContactForceResult {
  double g = 1.0;
  Vec3 n = Vec3::UnitZ();
  double fn = 0.0;         // normal force magnitude k_n max(-g, 0)
  Vec3 force = Vec3::Zero();     // total world force
  Vec3 friction = Vec3::Zero();  // tangential component of `force`
  Mat3 df_dx = Mat3::Zero();
  Mat3 df_dv = Mat3::Zero();
  Vec3 df_dcf = Vec3::Zero();  // derivative w.r.t. the obstacle's friction coefficient
  bool clamped = false;        // linear model: friction sits on the Coulomb circle
  double slip_speed = 0.0;     // ||T xdot||
  bool active = false;         // g < 0
};

ContactForceResult contact_force(const ContactModel& model, const Obstacle& obs, const Vec3& x,
                                 const Vec3& v, double k_d, bool skip_friction);

/// Orthonormal tangent basis completing n.
void tangent_basis(const Vec3& n, Vec3& t1, Vec3& t2);

}  // namespace add
