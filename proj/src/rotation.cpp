#include "add/rotation.hpp"

#include <cmath>

namespace add {

namespace {
constexpr double kSeriesThreshold = 1e-8;  // on u = ||theta||^2
constexpr double kPi = 3.14159265358979323846;

const Mat3 kSkewBasis[3] = {skew(Vec3::UnitX()), skew(Vec3::UnitY()), skew(Vec3::UnitZ())};
}  // namespace

void sinc_coeffs(double u, double& f, double& df, double& ddf) {
  if (u < kSeriesThreshold) {
    f = 1.0 - u / 6.0 + u * u / 120.0;
    df = -1.0 / 6.0 + u / 60.0 - u * u / 1680.0;
    ddf = 1.0 / 60.0 - u / 840.0;
    return;
  }
  const double s = std::sqrt(u);
  const double sn = std::sin(s), cs = std::cos(s);
  f = sn / s;
  df = (s * cs - sn) / (2.0 * s * s * s);
  ddf = ((3.0 - u) * sn - 3.0 * s * cs) / (4.0 * s * s * s * s * s);
}

void cos_coeffs(double u, double& f, double& df, double& ddf) {
  if (u < kSeriesThreshold) {
    f = 0.5 - u / 24.0 + u * u / 720.0;
    df = -1.0 / 24.0 + u / 360.0 - u * u / 13440.0;
    ddf = 1.0 / 360.0 - u / 6720.0;
    return;
  }
  const double s = std::sqrt(u);
  const double sn = std::sin(s), cs = std::cos(s);
  f = (1.0 - cs) / u;
  df = (s * sn - 2.0 + 2.0 * cs) / (2.0 * u * u);
  ddf = (u * cs - 5.0 * s * sn + 8.0 - 8.0 * cs) / (4.0 * u * u * u);
}

void jexp_coeffs(double u, double& f, double& df, double& ddf) {
  if (u < kSeriesThreshold) {
    f = 1.0 / 6.0 - u / 120.0 + u * u / 5040.0;
    df = -1.0 / 120.0 + u / 2520.0 - u * u / 120960.0;
    ddf = 1.0 / 2520.0 - u / 60480.0;
    return;
  }
  const double s = std::sqrt(u);
  const double sn = std::sin(s), cs = std::cos(s);
  f = (s - sn) / (s * u);
  df = (3.0 * sn - 2.0 * s - s * cs) / (2.0 * u * u * s);
  ddf = (7.0 * s * cs + 8.0 * s + u * sn - 15.0 * sn) / (4.0 * u * u * u * s);
}

namespace {

// R and J_l share the shape M = I + beta(u)[theta]x + gamma(u)[theta]x^2, so the
// derivative code is written once against the coefficient functions.
using CoeffFn = void (*)(double, double&, double&, double&);

Mat3 eval_form(const Vec3& th, CoeffFn beta_fn, CoeffFn gamma_fn) {
  const double u = th.squaredNorm();
  double b, db, ddb, g, dg, ddg;
  beta_fn(u, b, db, ddb);
  gamma_fn(u, g, dg, ddg);
  const Mat3 K = skew(th);
  return Mat3::Identity() + b * K + g * K * K;
}

std::array<Mat3, 3> eval_form_derivative(const Vec3& th, CoeffFn beta_fn, CoeffFn gamma_fn) {
  const double u = th.squaredNorm();
  double b, db, ddb, g, dg, ddg;
  beta_fn(u, b, db, ddb);
  gamma_fn(u, g, dg, ddg);
  const Mat3 K = skew(th);
  const Mat3 K2 = K * K;
  std::array<Mat3, 3> out;
  for (int k = 0; k < 3; ++k) {
    const Mat3& E = kSkewBasis[k];
    out[k] = 2.0 * th[k] * (db * K + dg * K2) + b * E + g * (E * K + K * E);
  }
  return out;
}

std::array<Mat3, 9> eval_form_second_derivative(const Vec3& th, CoeffFn beta_fn,
                                                CoeffFn gamma_fn) {
  const double u = th.squaredNorm();
  double b, db, ddb, g, dg, ddg;
  beta_fn(u, b, db, ddb);
  gamma_fn(u, g, dg, ddg);
  const Mat3 K = skew(th);
  const Mat3 K2 = K * K;
  std::array<Mat3, 9> out;
  for (int k = 0; k < 3; ++k) {
    const Mat3& Ek = kSkewBasis[k];
    for (int l = k; l < 3; ++l) {
      const Mat3& El = kSkewBasis[l];
      Mat3 m = 4.0 * th[k] * th[l] * (ddb * K + ddg * K2);
      if (k == l) m += 2.0 * (db * K + dg * K2);
      m += 2.0 * db * (th[k] * El + th[l] * Ek);
      m += 2.0 * dg * (th[k] * (El * K + K * El) + th[l] * (Ek * K + K * Ek));
      m += g * (Ek * El + El * Ek);
      out[3 * k + l] = m;
      out[3 * l + k] = m;
    }
  }
  return out;
}

}  // namespace

Mat3 rotation_matrix(const Vec3& theta) { return eval_form(theta, sinc_coeffs, cos_coeffs); }

Mat3 rotation_left_jacobian(const Vec3& theta) {
  return eval_form(theta, cos_coeffs, jexp_coeffs);
}

std::array<Mat3, 3> rotation_derivative(const Vec3& theta) {
  return eval_form_derivative(theta, sinc_coeffs, cos_coeffs);
}

std::array<Mat3, 9> rotation_second_derivative(const Vec3& theta) {
  return eval_form_second_derivative(theta, sinc_coeffs, cos_coeffs);
}

std::array<Mat3, 3> left_jacobian_derivative(const Vec3& theta) {
  return eval_form_derivative(theta, cos_coeffs, jexp_coeffs);
}

std::array<Mat3, 9> left_jacobian_second_derivative(const Vec3& theta) {
  return eval_form_second_derivative(theta, cos_coeffs, jexp_coeffs);
}

Mat3 axis_angle_matrix(double alpha, const Vec3& a) {
  const double c = std::cos(alpha), s = std::sin(alpha);
  return c * Mat3::Identity() + s * skew(a) + (1.0 - c) * a * a.transpose();
}

Mat3 axis_angle_dalpha(double alpha, const Vec3& a) {
  const double c = std::cos(alpha), s = std::sin(alpha);
  return -s * Mat3::Identity() + c * skew(a) + s * a * a.transpose();
}

std::array<Mat3, 3> axis_angle_daxis(double alpha, const Vec3& a) {
  const double c = std::cos(alpha), s = std::sin(alpha);
  std::array<Mat3, 3> out;
  for (int k = 0; k < 3; ++k) {
    const Vec3 ek = Vec3::Unit(k);
    out[k] = s * kSkewBasis[k] + (1.0 - c) * (ek * a.transpose() + a * ek.transpose());
  }
  return out;
}

Mat3 axis_angle_daxis2(double alpha, int k, int l) {
  const double c = std::cos(alpha);
  const Vec3 ek = Vec3::Unit(k), el = Vec3::Unit(l);
  return (1.0 - c) * (ek * el.transpose() + el * ek.transpose());
}

std::array<Mat3, 3> axis_angle_dalpha_daxis(double alpha, const Vec3& a) {
  const double c = std::cos(alpha), s = std::sin(alpha);
  std::array<Mat3, 3> out;
  for (int k = 0; k < 3; ++k) {
    const Vec3 ek = Vec3::Unit(k);
    out[k] = c * kSkewBasis[k] + s * (ek * a.transpose() + a * ek.transpose());
  }
  return out;
}

bool needs_recenter(const Vec3& theta) { return theta.norm() > kPi; }

Vec3 recenter(const Vec3& theta) {
  const double s = theta.norm();
  if (s <= kPi) return theta;
  return theta * (1.0 - 2.0 * kPi / s);
}

Mat3 recenter_jacobian(const Vec3& theta) {
  const double s = theta.norm();
  if (s <= kPi) return Mat3::Identity();
  return (1.0 - 2.0 * kPi / s) * Mat3::Identity() +
         (2.0 * kPi / (s * s * s)) * theta * theta.transpose();
}

Mat3 recenter_jacobian_derivative(const Vec3& theta, const Vec3& v) {
  const double s = theta.norm();
  if (s <= kPi) return Mat3::Zero();
  const double s3 = s * s * s, s5 = s3 * s * s;
  const double tv = theta.dot(v);
  return (2.0 * kPi / s3) *
             (v * theta.transpose() + tv * Mat3::Identity() + theta * v.transpose()) -
         (6.0 * kPi / s5) * tv * theta * theta.transpose();
}

}  // namespace add
