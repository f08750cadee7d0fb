#include "add/coupling.hpp"

#include <cmath>

namespace add {

void Coupling::validate(int body_count) const {
  auto check_anchor = [&](const Anchor& an, const char* which) {
    if ((an.kind == Anchor::Kind::RigidPoint || an.kind == Anchor::Kind::Node) &&
        (an.body < 0 || an.body >= body_count))
      throw EngineError("coupling '" + name + "': anchor " + which + " references missing body");
  };
  check_anchor(a, "a");
  check_anchor(b, "b");
  if (!(stiffness > 0.0)) throw EngineError("coupling '" + name + "': stiffness must be > 0");
  if (kind == Kind::Hinge || kind == Kind::Motor || kind == Kind::MotorDamping) {
    if (std::abs(axis_a.norm() - 1.0) > 1e-9 || std::abs(axis_b.norm() - 1.0) > 1e-9)
      throw EngineError("coupling '" + name + "': hinge/motor axes must be unit length");
  }
  if (kind == Kind::Motor) {
    if (std::abs(baxis_a.dot(axis_a)) > 1e-9 || std::abs(baxis_b.dot(axis_b)) > 1e-9)
      throw EngineError("coupling '" + name + "': motor reference axes must be orthogonal to "
                        "the rotation axes");
    if (motor_targets.empty())
      throw EngineError("coupling '" + name + "': motor needs at least one target knot");
  }
}

ScheduleSample sample_schedule(const std::vector<double>& knots, int knot_stride, int step) {
  ScheduleSample out;
  if (knots.empty()) return out;
  const int K = static_cast<int>(knots.size());
  const double t = static_cast<double>(step) / std::max(1, knot_stride);
  if (t <= 0.0 || K == 1) {
    out.value = knots.front();
    out.weights = {{0, 1.0}};
    return out;
  }
  if (t >= K - 1) {
    out.value = knots.back();
    out.weights = {{K - 1, 1.0}};
    return out;
  }
  const int i0 = static_cast<int>(std::floor(t));
  const double w = t - i0;
  out.value = (1.0 - w) * knots[i0] + w * knots[i0 + 1];
  out.weights = {{i0, 1.0 - w}, {i0 + 1, w}};
  return out;
}

namespace {

// Local variable blocks of one coupling evaluation. The world-schedule target
// point, when present, is always the trailing block so parameter columns can be
// split off the assembled local matrices.
struct Blocks {
  std::vector<int> global_base;  // -1 marks the schedule-target block
  std::vector<int> size;
  std::vector<int> local_base;
  int total = 0;
  int q_total = 0;  // DOFs excluding the schedule block

  int add(int gbase, int n) {
    global_base.push_back(gbase);
    size.push_back(n);
    local_base.push_back(total);
    total += n;
    if (gbase >= 0) q_total = total;
    return static_cast<int>(global_base.size()) - 1;
  }

  std::vector<int> dof_list() const {
    std::vector<int> dofs(q_total);
    for (size_t bi = 0; bi < global_base.size(); ++bi) {
      if (global_base[bi] < 0) continue;
      for (int d = 0; d < size[bi]; ++d) dofs[local_base[bi] + d] = global_base[bi] + d;
    }
    return dofs;
  }
};

struct PointEval {
  Vec3 x = Vec3::Zero();
  int block = -1;  // -1: fixed world point
  int n = 0;
  Eigen::Matrix<double, 3, 6> J = Eigen::Matrix<double, 3, 6>::Zero();
  const RigidKinematics* kin = nullptr;  // set for rigid anchors
  Vec3 local = Vec3::Zero();
  bool is_schedule = false;
};

PointEval eval_anchor_point(const Anchor& an, const CouplingContext& ctx) {
  PointEval pe;
  switch (an.kind) {
    case Anchor::Kind::World:
      pe.x = an.local;
      break;
    case Anchor::Kind::WorldSchedule:
      pe.x = ctx.schedule_point;
      pe.is_schedule = true;
      pe.n = 3;
      pe.J.leftCols<3>() = Mat3::Identity();
      break;
    case Anchor::Kind::Node:
      pe.n = 3;
      pe.J.leftCols<3>() = Mat3::Identity();
      break;
    case Anchor::Kind::RigidPoint:
      pe.n = 6;
      pe.kin = (*ctx.kin)[an.body];
      pe.local = an.local;
      pe.x = pe.kin->world_point(an.local);
      pe.J = pe.kin->point_jacobian(an.local);
      break;
  }
  return pe;
}

// Registers blocks for both anchors, body blocks first, schedule target last.
void register_blocks(const Anchor& aa, const Anchor& ab, const CouplingContext& ctx,
                     PointEval& pa, PointEval& pb, Blocks& blocks) {
  auto body_base = [&](const Anchor& an) {
    if (an.kind == Anchor::Kind::RigidPoint) return (*ctx.body_offset)[an.body];
    return (*ctx.body_offset)[an.body] + 3 * std::max(0, an.node);
  };
  if (!pa.is_schedule && pa.n > 0) {
    pa.block = blocks.add(body_base(aa), pa.n);
    if (aa.kind == Anchor::Kind::Node) pa.x = ctx.q->segment<3>(blocks.global_base[pa.block]);
  }
  if (!pb.is_schedule && pb.n > 0) {
    pb.block = blocks.add(body_base(ab), pb.n);
    if (ab.kind == Anchor::Kind::Node) pb.x = ctx.q->segment<3>(blocks.global_base[pb.block]);
  }
  if (pa.is_schedule) pa.block = blocks.add(-1, 3);
  if (pb.is_schedule) pb.block = blocks.add(-1, 3);
}

void add_point_hessian_contraction(const PointEval& pe, const Blocks& blocks, const Vec3& y,
                                   double sign, MatX& H) {
  if (!pe.kin) return;
  const int base = blocks.local_base[pe.block] + 3;
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 3; ++l)
      H(base + k, base + l) += sign * y.dot(pe.kin->point_hessian(pe.local, k, l));
}

void scatter_jacobian(const PointEval& pe, const Blocks& blocks, double sign,
                      Eigen::Ref<MatX> Jc) {
  if (pe.block < 0) return;
  Jc.middleCols(blocks.local_base[pe.block], pe.n) += sign * pe.J.leftCols(pe.n);
}

}  // namespace

CouplingEval evaluate_coupling(const Coupling& c, const CouplingContext& ctx, bool with_jacobians,
                               bool with_param_partials) {
  CouplingEval out;
  Blocks blocks;
  const double k = c.stiffness;

  if (c.kind == Coupling::Kind::MotorDamping) {
    // tau = k_md (w1 - w2), applied as -tau on body a and +tau on body b.
    const RigidKinematics* k1 = (*ctx.kin)[c.a.body];
    const bool b_rigid = c.b.kind == Anchor::Kind::RigidPoint;
    const RigidKinematics* k2 = b_rigid ? (*ctx.kin)[c.b.body] : nullptr;
    if (!k1) throw EngineError("coupling '" + c.name + "': motor damping needs rigid body a");
    const int b1 = blocks.add((*ctx.body_offset)[c.a.body], 6);
    const int b2 = k2 ? blocks.add((*ctx.body_offset)[c.b.body], 6) : -1;
    const Vec3 w1dot = ctx.qdot->segment<3>((*ctx.body_offset)[c.a.body] + 3);
    const Vec3 w2dot =
        k2 ? Vec3(ctx.qdot->segment<3>((*ctx.body_offset)[c.b.body] + 3)) : Vec3::Zero();
    const Vec3 omega1 = k1->J * w1dot;
    const Vec3 omega2 = k2 ? Vec3(k2->J * w2dot) : Vec3::Zero();
    const Vec3 tau = k * (omega1 - omega2);

    out.dofs = blocks.dof_list();
    out.force = VecX::Zero(blocks.total);
    const int r1 = blocks.local_base[b1] + 3;
    out.force.segment<3>(r1) = -k1->J.transpose() * tau;
    if (k2) out.force.segment<3>(blocks.local_base[b2] + 3) = k2->J.transpose() * tau;

    if (with_jacobians) {
      out.dforce_dq = MatX::Zero(blocks.total, blocks.total);
      out.dforce_dqdot = MatX::Zero(blocks.total, blocks.total);
      out.dforce_dqdot.block<3, 3>(r1, r1) = -k * k1->J.transpose() * k1->J;
      for (int m = 0; m < 3; ++m)
        out.dforce_dq.block<3, 1>(r1, r1 + m) =
            -k1->dJ[m].transpose() * tau - k * k1->J.transpose() * (k1->dJ[m] * w1dot);
      if (k2) {
        const int r2 = blocks.local_base[b2] + 3;
        out.dforce_dqdot.block<3, 3>(r1, r2) = k * k1->J.transpose() * k2->J;
        out.dforce_dqdot.block<3, 3>(r2, r1) = k * k2->J.transpose() * k1->J;
        out.dforce_dqdot.block<3, 3>(r2, r2) = -k * k2->J.transpose() * k2->J;
        for (int m = 0; m < 3; ++m) {
          out.dforce_dq.block<3, 1>(r1, r2 + m) = k * k1->J.transpose() * (k2->dJ[m] * w2dot);
          out.dforce_dq.block<3, 1>(r2, r1 + m) = k * k2->J.transpose() * (k1->dJ[m] * w1dot);
          out.dforce_dq.block<3, 1>(r2, r2 + m) =
              k2->dJ[m].transpose() * tau - k * k2->J.transpose() * (k2->dJ[m] * w2dot);
        }
      }
    }
    return out;
  }

  // Potential-based kinds: E = k/2 c(q)^T c(q).
  PointEval pa = eval_anchor_point(c.a, ctx);
  PointEval pb = eval_anchor_point(c.b, ctx);
  register_blocks(c.a, c.b, ctx, pa, pb, blocks);

  VecX cvec;
  MatX Jc, CH;
  VecX dc_dalpha;
  MatX dJc_dalpha;
  auto init_mats = [&](int cdim) {
    cvec = VecX::Zero(cdim);
    Jc = MatX::Zero(cdim, blocks.total);
    CH = MatX::Zero(blocks.total, blocks.total);
  };

  switch (c.kind) {
    case Coupling::Kind::BallSocket: {
      init_mats(3);
      cvec = pa.x - pb.x;
      scatter_jacobian(pa, blocks, 1.0, Jc);
      scatter_jacobian(pb, blocks, -1.0, Jc);
      add_point_hessian_contraction(pa, blocks, cvec, 1.0, CH);
      add_point_hessian_contraction(pb, blocks, cvec, -1.0, CH);
      break;
    }
    case Coupling::Kind::DistanceSpring:
    case Coupling::Kind::Cable: {
      const Vec3 d = pa.x - pb.x;
      double L = d.norm();
      if (L < 1e-12) {
        out.degenerate = true;
        L = 1e-12;
      }
      const double stretch = L - c.rest_length;
      if (c.kind == Coupling::Kind::Cable && stretch <= 0.0) {
        out.dofs = blocks.dof_list();
        out.force = VecX::Zero(blocks.q_total);
        if (with_jacobians) {
          out.dforce_dq = MatX::Zero(blocks.q_total, blocks.q_total);
          out.dforce_dqdot = MatX::Zero(blocks.q_total, blocks.q_total);
        }
        return out;
      }
      init_mats(1);
      const Vec3 dhat = d / L;
      cvec[0] = stretch;
      MatX W = MatX::Zero(3, blocks.total);
      scatter_jacobian(pa, blocks, 1.0, W);
      scatter_jacobian(pb, blocks, -1.0, W);
      Jc = dhat.transpose() * W;
      const Mat3 P = (Mat3::Identity() - dhat * dhat.transpose()) / L;
      CH = W.transpose() * P * W;  // d2(||d||)/dvars^2, pre-contraction
      // Contract with c: CH holds sum_m c_m d2c_m below, so scale and add anchor terms.
      CH *= stretch;
      add_point_hessian_contraction(pa, blocks, stretch * dhat, 1.0, CH);
      add_point_hessian_contraction(pb, blocks, stretch * dhat, -1.0, CH);
      // Signal that CH is already contracted (shared epilogue expects that form).
      break;
    }
    case Coupling::Kind::Hinge: {
      const RigidKinematics* k1 = pa.kin;
      const RigidKinematics* k2 = pb.kin;
      if (!k1 || !k2)
        throw EngineError("coupling '" + c.name + "': hinge requires rigid anchors");
      init_mats(6);
      cvec.head<3>() = pa.x - pb.x;
      scatter_jacobian(pa, blocks, 1.0, Jc.topRows<3>());
      scatter_jacobian(pb, blocks, -1.0, Jc.topRows<3>());
      add_point_hessian_contraction(pa, blocks, cvec.head<3>(), 1.0, CH);
      add_point_hessian_contraction(pb, blocks, cvec.head<3>(), -1.0, CH);
      const Vec3 wa = k1->world_dir(c.axis_a);
      const Vec3 wb = k2->world_dir(c.axis_b);
      cvec.tail<3>() = wb - wa;
      const int t1 = blocks.local_base[pa.block] + 3;
      const int t2 = blocks.local_base[pb.block] + 3;
      Jc.block<3, 3>(3, t1) -= k1->dir_jacobian(c.axis_a);
      Jc.block<3, 3>(3, t2) += k2->dir_jacobian(c.axis_b);
      const Vec3 y = cvec.tail<3>();
      for (int kk = 0; kk < 3; ++kk)
        for (int ll = 0; ll < 3; ++ll) {
          CH(t1 + kk, t1 + ll) -= y.dot(k1->d2R[3 * kk + ll] * c.axis_a);
          CH(t2 + kk, t2 + ll) += y.dot(k2->d2R[3 * kk + ll] * c.axis_b);
        }
      break;
    }
    case Coupling::Kind::Motor: {
      const RigidKinematics* k1 = pa.kin;
      const RigidKinematics* k2 = pb.kin;
      if (!k1 || !k2)
        throw EngineError("coupling '" + c.name + "': motor requires rigid anchors");
      init_mats(3);
      const double alpha = ctx.motor_alpha;
      const Vec3 axis = k1->world_dir(c.axis_a);  // rotate about body a's world hinge axis
      const Vec3 p = k1->world_dir(c.baxis_a);
      const Vec3 u = k2->world_dir(c.baxis_b);
      const Mat3 Q = axis_angle_matrix(alpha, axis);
      const auto dQda = axis_angle_daxis(alpha, axis);
      const Mat3 Da = k1->dir_jacobian(c.axis_a);
      const Mat3 Dp = k1->dir_jacobian(c.baxis_a);
      const Mat3 Du = k2->dir_jacobian(c.baxis_b);

      cvec = p - Q * u;
      Mat3 Vmat;
      for (int r = 0; r < 3; ++r) Vmat.col(r) = dQda[r] * u;

      const int t1 = blocks.local_base[pa.block] + 3;
      const int t2 = blocks.local_base[pb.block] + 3;
      Jc.block<3, 3>(0, t1) = Dp - Vmat * Da;
      Jc.block<3, 3>(0, t2) = -Q * Du;

      const Vec3 y = cvec;
      for (int kk = 0; kk < 3; ++kk)
        for (int ll = 0; ll < 3; ++ll) {
          double h = y.dot(k1->d2R[3 * kk + ll] * c.baxis_a);
          const Vec3 d2a = k1->d2R[3 * kk + ll] * c.axis_a;
          for (int r = 0; r < 3; ++r) {
            for (int s = 0; s < 3; ++s)
              h -= y.dot(axis_angle_daxis2(alpha, r, s) * u) * Da(r, kk) * Da(s, ll);
            h -= y.dot(Vmat.col(r)) * d2a[r];
          }
          CH(t1 + kk, t1 + ll) += h;
          CH(t2 + kk, t2 + ll) -= y.dot(Q * (k2->d2R[3 * kk + ll] * c.baxis_b));
        }
      for (int kk = 0; kk < 3; ++kk) {
        Eigen::RowVector3d row = Eigen::RowVector3d::Zero();
        for (int r = 0; r < 3; ++r) row -= Da(r, kk) * (y.transpose() * dQda[r] * Du);
        CH.block<1, 3>(t1 + kk, t2) += row;
        CH.block<3, 1>(t2, t1 + kk) += row.transpose();
      }

      if (with_param_partials) {
        const Mat3 Qa = axis_angle_dalpha(alpha, axis);
        const auto dQada = axis_angle_dalpha_daxis(alpha, axis);
        dc_dalpha = -(Qa * u);
        dJc_dalpha = MatX::Zero(3, blocks.total);
        Mat3 VmatA;
        for (int r = 0; r < 3; ++r) VmatA.col(r) = dQada[r] * u;
        dJc_dalpha.block<3, 3>(0, t1) = -VmatA * Da;
        dJc_dalpha.block<3, 3>(0, t2) = -Qa * Du;
      }
      break;
    }
    default:
      throw EngineError("unhandled coupling kind");
  }

  out.energy = 0.5 * k * cvec.squaredNorm();
  const VecX full_force = -k * Jc.transpose() * cvec;
  const int qn = blocks.q_total;
  out.dofs = blocks.dof_list();
  out.force = full_force.head(qn);
  if (with_jacobians) {
    const MatX full_Kq = -k * (Jc.transpose() * Jc + CH);
    out.dforce_dq = full_Kq.topLeftCorner(qn, qn);
    out.dforce_dqdot = MatX::Zero(qn, qn);
    if (blocks.total > qn && with_param_partials)
      out.dforce_dtarget = full_Kq.topRightCorner(qn, 3);
  }
  if (with_param_partials && dc_dalpha.size() > 0)
    out.dforce_dalpha =
        (-k * (dJc_dalpha.transpose() * cvec + Jc.transpose() * dc_dalpha)).head(qn);
  return out;
}

}  // namespace add
