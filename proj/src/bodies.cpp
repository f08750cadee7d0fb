#include "add/bodies.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace add {

void RigidBody::validate() const {
  if (!(mass > 0.0)) throw EngineError("rigid body '" + name + "': mass must be positive");
  if (!inertia_body.isApprox(inertia_body.transpose(), 1e-12))
    throw EngineError("rigid body '" + name + "': inertia tensor must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat3> es(inertia_body);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw EngineError("rigid body '" + name + "': inertia tensor must be positive definite");
  for (const auto& s : proxy_spheres)
    if (s.radius < 0.0) throw EngineError("rigid body '" + name + "': proxy sphere radius < 0");
}

void PointMass::validate() const {
  if (!(mass > 0.0)) throw EngineError("point mass '" + name + "': mass must be positive");
}

// ---------------------------------------------------------------------------
// Mesh generation: lattice cells carved by an implicit shape, split into the
// six Kuhn tetrahedra sharing the main cell diagonal.

namespace {

template <typename Inside>
TetMesh carve_lattice(const Vec3& lo, const Vec3& hi, double cell, Inside inside) {
  const int nx = std::max(1, static_cast<int>(std::round((hi.x() - lo.x()) / cell)));
  const int ny = std::max(1, static_cast<int>(std::round((hi.y() - lo.y()) / cell)));
  const int nz = std::max(1, static_cast<int>(std::round((hi.z() - lo.z()) / cell)));

  auto corner = [&](int i, int j, int k) {
    return Vec3(lo.x() + i * cell, lo.y() + j * cell, lo.z() + k * cell);
  };

  std::map<std::array<int, 3>, int> index;
  TetMesh mesh;
  auto node = [&](int i, int j, int k) {
    auto it = index.find({i, j, k});
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(mesh.vertices.size());
    index[{i, j, k}] = id;
    mesh.vertices.push_back(corner(i, j, k));
    return id;
  };

  // Kuhn subdivision corner patterns, each tet listed with positive volume.
  static const int kTets[6][4][3] = {
      {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}}, {{0, 0, 0}, {1, 1, 0}, {0, 1, 0}, {1, 1, 1}},
      {{0, 0, 0}, {0, 1, 0}, {0, 1, 1}, {1, 1, 1}}, {{0, 0, 0}, {0, 1, 1}, {0, 0, 1}, {1, 1, 1}},
      {{0, 0, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}}, {{0, 0, 0}, {1, 0, 1}, {1, 0, 0}, {1, 1, 1}}};

  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int k = 0; k < nz; ++k) {
        const Vec3 center = corner(i, j, k) + 0.5 * Vec3(cell, cell, cell);
        if (!inside(center)) continue;
        for (const auto& t : kTets) {
          std::array<int, 4> ids;
          for (int v = 0; v < 4; ++v) ids[v] = node(i + t[v][0], j + t[v][1], k + t[v][2]);
          Mat3 d;
          d.col(0) = mesh.vertices[ids[1]] - mesh.vertices[ids[0]];
          d.col(1) = mesh.vertices[ids[2]] - mesh.vertices[ids[0]];
          d.col(2) = mesh.vertices[ids[3]] - mesh.vertices[ids[0]];
          if (d.determinant() < 0.0) std::swap(ids[2], ids[3]);
          mesh.tets.push_back(ids);
        }
      }
  return mesh;
}

}  // namespace

TetMesh make_box_mesh(const Vec3& size, double cell) {
  const Vec3 h = 0.5 * size;
  return carve_lattice(-h, h, cell, [](const Vec3&) { return true; });
}

TetMesh make_cylinder_mesh(double radius, double height, double cell) {
  const Vec3 h(radius, radius, 0.5 * height);
  return carve_lattice(-h, h, cell, [&](const Vec3& c) {
    return c.head<2>().norm() <= radius;
  });
}

TetMesh make_sphere_mesh(double radius, double cell) {
  const Vec3 h(radius, radius, radius);
  return carve_lattice(-h, h, cell, [&](const Vec3& c) { return c.norm() <= radius; });
}

TetMesh make_torus_mesh(double major_radius, double minor_radius, double cell) {
  const double R = major_radius, r = minor_radius;
  const Vec3 h(R + r, R + r, r);
  return carve_lattice(-h, h, cell, [&](const Vec3& c) {
    const double ring = c.head<2>().norm() - R;
    return ring * ring + c.z() * c.z() <= r * r;
  });
}

TetMesh read_tet_mesh(std::istream& in) {
  TetMesh mesh;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x() >> p.y() >> p.z()))
        throw SchemaError("tet mesh line " + std::to_string(lineno) + ": bad vertex");
      mesh.vertices.push_back(p);
    } else if (tag == "t") {
      std::array<int, 4> t;
      if (!(ls >> t[0] >> t[1] >> t[2] >> t[3]))
        throw SchemaError("tet mesh line " + std::to_string(lineno) + ": bad tet");
      mesh.tets.push_back(t);
    } else {
      throw SchemaError("tet mesh line " + std::to_string(lineno) + ": unknown tag '" + tag + "'");
    }
  }
  return mesh;
}

void write_tet_mesh(std::ostream& out, const TetMesh& mesh) {
  for (const auto& v : mesh.vertices)
    out << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
  for (const auto& t : mesh.tets)
    out << "t " << t[0] << " " << t[1] << " " << t[2] << " " << t[3] << "\n";
}

// ---------------------------------------------------------------------------

void SoftBody::lame_from_young(double young, double poisson, double& mu_out, double& lambda_out) {
  mu_out = young / (2.0 * (1.0 + poisson));
  lambda_out = young * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
}

double SoftBody::young_from_lame(double mu_in, double lambda_in) {
  return mu_in * (3.0 * lambda_in + 2.0 * mu_in) / (lambda_in + mu_in);
}

void SoftBody::finalize() {
  const int nt = static_cast<int>(mesh.tets.size());
  inv_rest_shape.resize(nt);
  rest_volume.resize(nt);
  lumped_mass = VecX::Zero(node_count());
  for (int e = 0; e < nt; ++e) {
    const auto& t = mesh.tets[e];
    Mat3 dm;
    dm.col(0) = mesh.vertices[t[1]] - mesh.vertices[t[0]];
    dm.col(1) = mesh.vertices[t[2]] - mesh.vertices[t[0]];
    dm.col(2) = mesh.vertices[t[3]] - mesh.vertices[t[0]];
    const double vol = dm.determinant() / 6.0;
    if (!(vol > 0.0))
      throw EngineError("soft body '" + name + "': tet " + std::to_string(e) +
                        " is degenerate or inverted in the rest mesh");
    inv_rest_shape[e] = dm.inverse();
    rest_volume[e] = vol;
    for (int v = 0; v < 4; ++v) lumped_mass[t[v]] += density * vol / 4.0;
  }
  Vec3 weighted = Vec3::Zero();
  for (int n = 0; n < node_count(); ++n) weighted += lumped_mass[n] * mesh.vertices[n];
  rest_com = weighted / lumped_mass.sum();
  validate();
}

void SoftBody::validate() const {
  if (!(mu > 0.0)) throw EngineError("soft body '" + name + "': mu must be positive");
  if (lambda < 0.0) throw EngineError("soft body '" + name + "': lambda must be >= 0");
  if (viscosity < 0.0) throw EngineError("soft body '" + name + "': viscosity must be >= 0");
  if (!(density > 0.0)) throw EngineError("soft body '" + name + "': density must be positive");
  if (mesh.tets.empty()) throw EngineError("soft body '" + name + "': empty mesh");
}

int body_dof(const Body& b) {
  if (std::holds_alternative<RigidBody>(b)) return 6;
  if (std::holds_alternative<PointMass>(b)) return 3;
  return 3 * std::get<SoftBody>(b).node_count();
}

const std::string& body_name(const Body& b) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; }, b);
}

// ---------------------------------------------------------------------------

RigidKinematics::RigidKinematics(const Vec3& pos, const Vec3& th) : position(pos), theta(th) {
  R = rotation_matrix(th);
  J = rotation_left_jacobian(th);
  dR = rotation_derivative(th);
  dJ = left_jacobian_derivative(th);
  d2R = rotation_second_derivative(th);
  d2J = left_jacobian_second_derivative(th);
}

Eigen::Matrix<double, 3, 6> RigidKinematics::point_jacobian(const Vec3& local) const {
  Eigen::Matrix<double, 3, 6> out;
  out.leftCols<3>() = Mat3::Identity();
  out.rightCols<3>() = -skew(R * local) * J;
  return out;
}

Mat3 RigidKinematics::dir_jacobian(const Vec3& local) const { return -skew(R * local) * J; }

Mat3 RigidKinematics::point_force_angular_jacobian(const Vec3& local, const Vec3& f) const {
  // g(theta) = J^T ((R local) x f); return dg/dtheta.
  const Vec3 rl = R * local;
  Mat3 out;
  for (int k = 0; k < 3; ++k) {
    const Vec3 drl = dR[k] * local;
    out.col(k) = dJ[k].transpose() * (rl.cross(f)) + J.transpose() * (drl.cross(f));
  }
  return out;
}

Mat3 RigidKinematics::point_hessian(const Vec3& local, int k, int l) const {
  return d2R[3 * k + l] * local;
}

RigidMass rigid_mass_and_fictitious(const RigidBody& body, const RigidKinematics& kin,
                                    const Vec3& theta_dot) {
  RigidMass out;
  const Mat3 W = kin.R * body.inertia_body * kin.R.transpose();
  const Mat3 Iq = kin.J.transpose() * W * kin.J;
  out.M.setZero();
  out.M.topLeftCorner<3, 3>() = body.mass * Mat3::Identity();
  out.M.bottomRightCorner<3, 3>() = Iq;

  std::array<Mat3, 3> dW;
  for (int k = 0; k < 3; ++k) {
    dW[k] = kin.dR[k] * body.inertia_body * kin.R.transpose() +
            kin.R * body.inertia_body * kin.dR[k].transpose();
    out.dIq[k] = kin.dJ[k].transpose() * W * kin.J + kin.J.transpose() * dW[k] * kin.J +
                 kin.J.transpose() * W * kin.dJ[k];
  }
  for (int k = 0; k < 3; ++k)
    for (int l = k; l < 3; ++l) {
      const Mat3& d2Rkl = kin.d2R[3 * k + l];
      const Mat3& d2Jkl = kin.d2J[3 * k + l];
      const Mat3 d2W = d2Rkl * body.inertia_body * kin.R.transpose() +
                       kin.dR[k] * body.inertia_body * kin.dR[l].transpose() +
                       kin.dR[l] * body.inertia_body * kin.dR[k].transpose() +
                       kin.R * body.inertia_body * d2Rkl.transpose();
      Mat3 h = d2Jkl.transpose() * W * kin.J + kin.J.transpose() * d2W * kin.J +
               kin.J.transpose() * W * d2Jkl;
      h += kin.dJ[k].transpose() * dW[l] * kin.J + kin.dJ[k].transpose() * W * kin.dJ[l];
      h += kin.dJ[l].transpose() * dW[k] * kin.J + kin.dJ[l].transpose() * W * kin.dJ[k];
      h += kin.J.transpose() * dW[k] * kin.dJ[l] + kin.J.transpose() * dW[l] * kin.dJ[k];
      out.d2Iq[3 * k + l] = h;
      out.d2Iq[3 * l + k] = h;
    }

  // Lagrangian fictitious force: C = Idot_q w - 1/2 d(w^T Iq w)/dtheta, w = theta_dot.
  const Vec3& w = theta_dot;
  Vec3 C = Vec3::Zero();
  for (int k = 0; k < 3; ++k) C += (out.dIq[k] * w) * w[k];
  for (int a = 0; a < 3; ++a) C[a] -= 0.5 * w.dot(out.dIq[a] * w);
  out.fictitious = C;

  Mat3 dCdw;
  for (int a = 0; a < 3; ++a)
    for (int m = 0; m < 3; ++m) {
      double v = (out.dIq[m] * w)(a) - (out.dIq[a] * w)(m);
      for (int k = 0; k < 3; ++k) v += out.dIq[k](a, m) * w[k];
      dCdw(a, m) = v;
    }
  out.dC_dthetadot = dCdw;

  Mat3 dCdth;
  for (int a = 0; a < 3; ++a)
    for (int l = 0; l < 3; ++l) {
      double v = -0.5 * w.dot(out.d2Iq[3 * a + l] * w);
      for (int k = 0; k < 3; ++k) v += (out.d2Iq[3 * k + l] * w)(a)*w[k];
      dCdth(a, l) = v;
    }
  out.dC_dtheta = dCdth;
  return out;
}

Vec6 map_world_force(const RigidKinematics& kin, const Vec3& force, const Vec3& torque,
                     const Vec3& local_point) {
  Vec6 out;
  out.head<3>() = force;
  out.tail<3>() = kin.J.transpose() * ((kin.R * local_point).cross(force) + torque);
  return out;
}

double restitution_ratio(double k_n, double k_d, double mass) {
  if (!(k_n > 0.0) || !(mass > 0.0) || k_d < 0.0)
    throw EngineError("restitution_ratio: need k_n > 0, m > 0, k_d >= 0");
  const double disc = 4.0 * k_n * mass - k_d * k_d;
  if (disc <= 0.0)
    throw EngineError("restitution_ratio: overdamped contact (k_d^2 >= 4 k_n m), no rebound");
  return std::exp(-M_PI * k_d / std::sqrt(disc));
}

}  // namespace add
