#pragma once

#include <array>

#include "add/types.hpp"

namespace add {

// Exponential-coordinate rotations. theta is an axis-angle vector; R = exp([theta]x).
// All scalar coefficient functions are even in ||theta||, so we express them in
// u = ||theta||^2 and switch to truncated series below u = 1e-8. This keeps every
// quantity (including second derivatives) C^2 through theta = 0.

/// Value and first/second derivative w.r.t. u = s^2 of sin(s)/s.
void sinc_coeffs(double u, double& f, double& df, double& ddf);
/// Same for (1 - cos(s))/s^2.
void cos_coeffs(double u, double& f, double& df, double& ddf);
/// Same for (s - sin(s))/s^3.
void jexp_coeffs(double u, double& f, double& df, double& ddf);

Mat3 rotation_matrix(const Vec3& theta);

/// Left Jacobian of SO(3): world angular velocity omega = J(theta) * theta_dot.
Mat3 rotation_left_jacobian(const Vec3& theta);

/// dR/dtheta_k, k = 0..2.
std::array<Mat3, 3> rotation_derivative(const Vec3& theta);

/// d^2R/dtheta_k dtheta_l packed row-major (index 3k + l, symmetric in k,l).
std::array<Mat3, 9> rotation_second_derivative(const Vec3& theta);

std::array<Mat3, 3> left_jacobian_derivative(const Vec3& theta);
std::array<Mat3, 9> left_jacobian_second_derivative(const Vec3& theta);

/// Rotation by angle alpha about a unit axis, plus derivatives w.r.t. alpha and axis.
Mat3 axis_angle_matrix(double alpha, const Vec3& axis);
Mat3 axis_angle_dalpha(double alpha, const Vec3& axis);
std::array<Mat3, 3> axis_angle_daxis(double alpha, const Vec3& axis);
// d^2/daxis_k daxis_l is constant in the axis: (1-cos a)(e_k e_l^T + e_l e_k^T).
Mat3 axis_angle_daxis2(double alpha, int k, int l);
std::array<Mat3, 3> axis_angle_dalpha_daxis(double alpha, const Vec3& axis);

/// True when ||theta|| > pi and the representation should be wrapped.
bool needs_recenter(const Vec3& theta);

/// Wraps ||theta|| into (-pi, pi] without changing the rotation: theta * (1 - 2pi/||theta||).
Vec3 recenter(const Vec3& theta);

/// Jacobian of recenter() at theta.
Mat3 recenter_jacobian(const Vec3& theta);

/// d(recenter_jacobian(theta) * v)/dtheta for a fixed tangent vector v.
Mat3 recenter_jacobian_derivative(const Vec3& theta, const Vec3& v);

}  // namespace add
