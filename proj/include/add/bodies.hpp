#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "add/rotation.hpp"
#include "add/types.hpp"

namespace add {

struct ProxySphere {
  Vec3 center = Vec3::Zero();  // body frame
  double radius = 0.0;
};

/// Rigid body with 6 DOF: world position followed by exponential rotation coordinates.
struct RigidBody {
  std::string name;
  double mass = 1.0;
  Mat3 inertia_body = Mat3::Identity();  // body-frame inertia about the COM
  double contact_damping = 0.0;          // k_d, normal-direction contact damping

  std::vector<Vec3> proxy_points;    // body frame
  std::vector<ProxySphere> proxy_spheres;

  // Initial conditions.
  Vec3 position0 = Vec3::Zero();
  Vec3 theta0 = Vec3::Zero();
  Vec3 velocity0 = Vec3::Zero();
  Vec3 omega0 = Vec3::Zero();  // world angular velocity

  void validate() const;
};

/// 3-DOF degenerate body (mass-spring sheets, test particles).
struct PointMass {
  std::string name;
  double mass = 1.0;
  double contact_damping = 0.0;
  Vec3 position0 = Vec3::Zero();
  Vec3 velocity0 = Vec3::Zero();

  void validate() const;
};

struct TetMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;  // positively oriented
};

TetMesh make_box_mesh(const Vec3& size, double cell);
TetMesh make_cylinder_mesh(double radius, double height, double cell);  // axis = z
TetMesh make_sphere_mesh(double radius, double cell);
TetMesh make_torus_mesh(double major_radius, double minor_radius, double cell);

// Line-oriented text format: "v x y z" and "t i j k l" (0-based).
TetMesh read_tet_mesh(std::istream& in);
void write_tet_mesh(std::ostream& out, const TetMesh& mesh);

/// Tetrahedral FEM body: Neo-Hookean elasticity + Green strain-rate viscosity.
struct SoftBody {
  std::string name;
  TetMesh mesh;  // rest configuration
  double mu = 0.0;      // Lame shear modulus [Pa]
  double lambda = 0.0;  // Lame first parameter [Pa]
  double viscosity = 0.0;  // nu [Pa s]
  double density = 1000.0;

  // Rigid initial placement applied to the rest mesh about its COM.
  Vec3 position0 = Vec3::Zero();
  Vec3 theta0 = Vec3::Zero();
  Vec3 velocity0 = Vec3::Zero();
  Vec3 omega0 = Vec3::Zero();

  // Derived, filled by finalize().
  std::vector<Mat3> inv_rest_shape;
  std::vector<double> rest_volume;
  VecX lumped_mass;  // per node
  Vec3 rest_com = Vec3::Zero();

  void finalize();
  void validate() const;
  int node_count() const { return static_cast<int>(mesh.vertices.size()); }

  static void lame_from_young(double young, double poisson, double& mu, double& lambda);
  static double young_from_lame(double mu, double lambda);
};

using Body = std::variant<RigidBody, PointMass, SoftBody>;

int body_dof(const Body& b);
const std::string& body_name(const Body& b);

/// Pose-dependent rigid kinematics shared by mass, force mapping and couplings.
struct RigidKinematics {
  Vec3 position;
  Vec3 theta;
  Mat3 R, J;
  std::array<Mat3, 3> dR, dJ;
  std::array<Mat3, 9> d2R, d2J;

  explicit RigidKinematics(const Vec3& pos, const Vec3& th);

  Vec3 world_point(const Vec3& local) const { return position + R * local; }
  Vec3 world_dir(const Vec3& local) const { return R * local; }

  /// d(world point)/dq as a 3x6 block [I | -[R x]x J].
  Eigen::Matrix<double, 3, 6> point_jacobian(const Vec3& local) const;
  /// d(world dir)/dtheta (3x3).
  Mat3 dir_jacobian(const Vec3& local) const;

  /// theta-derivative of the angular part of point_jacobian times a fixed world vector:
  /// d/dtheta_k [ -[Rx]x J ]^T f  (used for generalized-force Jacobians).
  Mat3 point_force_angular_jacobian(const Vec3& local, const Vec3& f) const;

  /// d^2(world point)/dtheta_k dtheta_l (same as dir since position is linear).
  Mat3 point_hessian(const Vec3& local, int k, int l) const;
};

/// Generalized 6x6 mass matrix blockdiag(m I, J^T R I_b R^T J) and its theta-derivatives.
struct RigidMass {
  Mat6 M;
  std::array<Mat3, 3> dIq;      // d(angular block)/dtheta_k
  std::array<Mat3, 9> d2Iq;     // second derivatives, row-major (3k+l)
  Vec3 fictitious;              // angular part of C(q, qdot); linear part is zero
  Mat3 dC_dtheta;
  Mat3 dC_dthetadot;
};

RigidMass rigid_mass_and_fictitious(const RigidBody& body, const RigidKinematics& kin,
                                    const Vec3& theta_dot);

/// Projects a world force/torque applied at a body-frame point to generalized coordinates.
Vec6 map_world_force(const RigidKinematics& kin, const Vec3& force, const Vec3& torque,
                     const Vec3& local_point);

/// Restitution ratio of the linearly damped penalty contact: exp(-pi k_d / sqrt(4 k_n m - k_d^2)).
double restitution_ratio(double k_n, double k_d, double mass);

}  // namespace add
