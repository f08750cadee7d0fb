#pragma once

#include <string>
#include <vector>

#include "add/types.hpp"

namespace add {

struct MultiBodySystem;

/// One typed slice of the parameter vector p.
struct ParameterBlock {
  enum class Kind {
    SoftYoung,         // Young's modulus of a soft body (Poisson ratio held fixed)
    SoftViscosity,     // nu of a soft body
    ObstacleFriction,  // c_f of an obstacle
    GravityScale,      // scale factor on the scene gravity vector
    InitialPosition,   // 3
    InitialOrientation,  // 3 (exponential coordinates)
    InitialVelocity,   // 3
    InitialSpin,       // 3 (world angular velocity)
    MotorSchedule,     // knot values of a motor coupling's target schedule
    HandleSchedule,    // 3 * knots of a world-schedule handle
  };
  Kind kind = Kind::GravityScale;
  int target = -1;  // body / obstacle / coupling / schedule index per kind
  int offset = 0;
  int dim = 1;
  bool log_scale = false;  // optimizer works on log(p) for this block
  VecX lower, upper;       // physical-space box bounds (sized dim, +-inf allowed)
  std::string name;

  bool is_initial_condition() const {
    return kind == Kind::InitialPosition || kind == Kind::InitialOrientation ||
           kind == Kind::InitialVelocity || kind == Kind::InitialSpin;
  }
};

struct ParameterLayout {
  std::vector<ParameterBlock> blocks;
  int total = 0;

  int add(ParameterBlock b);
  bool empty() const { return total == 0; }
  /// Default parameter values read off the system.
  VecX pack_defaults(const MultiBodySystem& sys) const;
  std::vector<std::string> component_names() const;
};

/// Returns a copy of the template system with the parameter vector applied
/// (materials, friction, initial conditions, schedules, gravity scale).
MultiBodySystem apply_parameters(const MultiBodySystem& templ, const ParameterLayout& layout,
                                 const VecX& p);

}  // namespace add
