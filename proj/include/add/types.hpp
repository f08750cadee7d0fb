#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace add {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using VecX = Eigen::VectorXd;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using MatX = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

inline Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

/// Base class for all engine errors.
struct EngineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Newton failed to reach the residual tolerance within the iteration budget.
struct NonconvergenceError : EngineError {
  NonconvergenceError(const std::string& msg, int step, double residual,
                      std::vector<double> trace)
      : EngineError(msg), step_index(step), residual_norm(residual),
        iteration_trace(std::move(trace)) {}
  int step_index = -1;
  double residual_norm = 0.0;
  std::vector<double> iteration_trace;
};

/// Raised when a tetrahedron inverts (det F <= 0) during assembly.
struct InvertedElementError : EngineError {
  InvertedElementError(const std::string& msg, int tet) : EngineError(msg), tet_index(tet) {}
  int tet_index = -1;
};

/// Scene file / schema problems, with location info where available.
struct SchemaError : EngineError {
  using EngineError::EngineError;
};

}  // namespace add
