#include "add/contact.hpp"

#include <cmath>

namespace add {

void Obstacle::validate() const {
  if (kind == Kind::HalfSpace && std::abs(normal.norm() - 1.0) > 1e-9)
    throw EngineError("obstacle '" + name + "': half-space normal must be unit length");
  if (kind == Kind::Sphere && !(radius > 0.0))
    throw EngineError("obstacle '" + name + "': sphere radius must be positive");
  if (friction < 0.0) throw EngineError("obstacle '" + name + "': friction must be >= 0");
}

GapResult gap(const Obstacle& obs, const Vec3& x) {
  GapResult out;
  if (obs.kind == Obstacle::Kind::HalfSpace) {
    out.g = obs.normal.dot(x - obs.point);
    out.n = obs.normal;
    out.dn_dx.setZero();
    return out;
  }
  const Vec3 d = x - obs.point;
  const double dist = d.norm();
  if (dist < 1e-12) {
    // Degenerate center coincidence; pick an arbitrary direction.
    out.g = obs.inside ? obs.radius : -obs.radius;
    out.n = obs.inside ? -Vec3::UnitZ() : Vec3::UnitZ();
    out.dn_dx.setZero();
    return out;
  }
  const Vec3 dhat = d / dist;
  if (!obs.inside) {
    out.g = dist - obs.radius;
    out.n = dhat;
    out.dn_dx = (Mat3::Identity() - dhat * dhat.transpose()) / dist;
  } else {
    out.g = obs.radius - dist;
    out.n = -dhat;
    out.dn_dx = -(Mat3::Identity() - dhat * dhat.transpose()) / dist;
  }
  return out;
}

void tangent_basis(const Vec3& n, Vec3& t1, Vec3& t2) {
  const Vec3 ref = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  t1 = n.cross(ref).normalized();
  t2 = n.cross(t1);
}

namespace {

// tanh(b w)/w and d/dw of it, smooth through w = 0.
void tanh_over_w(double b, double w, double& h, double& dh_dw) {
  const double bw = b * w;
  if (bw < 1e-4) {
    const double b3 = b * b * b;
    h = b - b3 * w * w / 3.0;
    dh_dw = -2.0 / 3.0 * b3 * w + 8.0 / 15.0 * b3 * b * b * w * w * w;
    return;
  }
  const double th = std::tanh(bw);
  const double sech2 = 1.0 - th * th;
  h = th / w;
  dh_dw = (b * w * sech2 - th) / (w * w);
}

}  // namespace

ContactForceResult contact_force(const ContactModel& model, const Obstacle& obs, const Vec3& x,
                                 const Vec3& v, double k_d, bool skip_friction) {
  ContactForceResult out;
  const GapResult gp = gap(obs, x);
  out.g = gp.g;
  out.n = gp.n;
  if (gp.g >= 0.0) return out;  // max(-g, 0) branch: inactive at the kink itself
  out.active = true;

  const Vec3& n = gp.n;
  const Mat3 N = n * n.transpose();
  const Mat3 T = Mat3::Identity() - N;
  const bool curved = gp.dn_dx.squaredNorm() > 0.0;

  // Normal penalty f_n = k_n (-g) n.
  const double fn = model.k_n * (-gp.g);
  out.fn = fn;
  out.force = fn * n;
  out.df_dx = -model.k_n * n * n.transpose();
  if (curved) out.df_dx += fn * gp.dn_dx;

  // Normal-direction contact damping (rigid bodies / point masses).
  if (k_d != 0.0) {
    const double vn = n.dot(v);
    out.force += -k_d * vn * n;
    out.df_dv += -k_d * N;
    if (curved) out.df_dx += -k_d * (vn * gp.dn_dx + n * (v.transpose() * gp.dn_dx));
  }

  if (skip_friction || obs.friction == 0.0) return out;

  const double cf = obs.friction;
  const Vec3 u = T * v;
  const double w = u.norm();
  out.slip_speed = w;

  // d(Tv)/dx, nonzero only for curved obstacles.
  Mat3 du_dx = Mat3::Zero();
  if (curved) du_dx = -(n.dot(v)) * gp.dn_dx - n * (v.transpose() * gp.dn_dx);
  const Eigen::RowVector3d dfn_dx = -model.k_n * n.transpose();

  Vec3 ft;
  if (model.variant == ContactModel::Variant::TanhPenalty) {
    const double limit = cf * fn;
    const double beta = model.k_t / limit;
    double h, dh;
    tanh_over_w(beta, w, h, dh);
    ft = -limit * h * u;
    out.df_dv += -limit * (h * T + (w > 0 ? dh / w : 0.0) * u * u.transpose());
    // d(limit * h)/dlimit = tanh(beta w)/w - (k_t/limit) sech^2(beta w); smooth at w = 0.
    double dLh_dlimit;
    {
      const double bw = beta * w;
      if (bw < 1e-4) {
        dLh_dlimit = 2.0 / 3.0 * beta * bw * bw;
      } else {
        const double th = std::tanh(bw);
        dLh_dlimit = th / w - beta * (1.0 - th * th);
      }
    }
    out.df_dcf = -u * dLh_dlimit * fn;
    out.df_dx += -u * dLh_dlimit * (cf * dfn_dx);
    if (curved) {
      out.df_dx += -limit * h * du_dx;
      if (w > 0) out.df_dx += -limit * (dh / w) * u * (u.transpose() * du_dx);
    }
  } else {  // linear (also the penalty phase of the hybrid protocol)
    const double limit = cf * fn;
    if (model.k_t * w <= limit) {
      ft = -model.k_t * u;
      out.df_dv += -model.k_t * T;
      if (curved) out.df_dx += -model.k_t * du_dx;
    } else {
      out.clamped = true;
      const double wr = w + model.eps_reg;
      const Vec3 dir = u / wr;
      ft = -limit * dir;
      out.df_dv += -limit * (T / wr - u * (u.transpose() / (w * wr * wr)));
      out.df_dcf = -fn * dir;
      out.df_dx += -dir * (cf * dfn_dx);
      if (curved) {
        const Eigen::RowVector3d dw_dx = (u.transpose() * du_dx) / w;
        out.df_dx += -limit * (du_dx / wr - dir * dw_dx / wr);
      }
    }
  }
  out.friction = ft;
  out.force += ft;
  return out;
}

}  // namespace add
