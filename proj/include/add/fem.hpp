#pragma once

#include "add/bodies.hpp"
#include "add/types.hpp"

namespace add {

/// Per-tet deformation gradient F = Ds * Dm^{-1} and its rate.
struct DeformationGradient {
  Mat3 F;
  Mat3 Fdot;
};

std::vector<DeformationGradient> deformation_gradients(const SoftBody& body,
                                                       Eigen::Ref<const VecX> x,
                                                       Eigen::Ref<const VecX> v);

/// Neo-Hookean energy density: mu/2 (tr(F^T F) - 3) - mu ln J + lambda/2 (ln J)^2.
double neo_hookean_energy_density(const Mat3& F, double mu, double lambda);

struct FemWorkspace {
  // Assembled over the body's local DOFs (3 * node count).
  double elastic_energy = 0.0;
  VecX force;           // elastic + viscous
  VecX dforce_dmu;      // optional parameter partials (empty unless requested)
  VecX dforce_dlambda;
  VecX dforce_dnu;
};

struct FemOptions {
  bool with_jacobians = true;
  bool with_param_partials = false;
  int global_offset = 0;  // added to local DOF indices when emitting triplets
};

/// Assembles elastic + viscous nodal forces; appends df/dx into `stiffness` and
/// df/dv into `damping` when requested. Throws InvertedElementError on det F <= 0.
void fem_assemble(const SoftBody& body, Eigen::Ref<const VecX> x, Eigen::Ref<const VecX> v,
                  const FemOptions& opts, FemWorkspace& out, std::vector<Triplet>* stiffness,
                  std::vector<Triplet>* damping);

}  // namespace add
