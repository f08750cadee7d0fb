#include "add/fem.hpp"

#include <cmath>

namespace add {

namespace {

Mat3 shape_matrix(const std::array<int, 4>& t, Eigen::Ref<const VecX> x) {
  Mat3 d;
  for (int c = 0; c < 3; ++c)
    d.col(c) = x.segment<3>(3 * t[c + 1]) - x.segment<3>(3 * t[0]);
  return d;
}

// Scatter a 3x3 "H" matrix (columns act on nodes 1..3, node 0 takes -sum) into a
// 12-vector ordered (node0.xyz, node1.xyz, ...).
Eigen::Matrix<double, 12, 1> scatter(const Mat3& H) {
  Eigen::Matrix<double, 12, 1> f;
  f.segment<3>(3) = H.col(0);
  f.segment<3>(6) = H.col(1);
  f.segment<3>(9) = H.col(2);
  f.segment<3>(0) = -(H.col(0) + H.col(1) + H.col(2));
  return f;
}

// dDs for a unit perturbation of node m, coordinate c.
Mat3 shape_matrix_variation(int m, int c) {
  Mat3 d = Mat3::Zero();
  if (m == 0) {
    d.row(c).setConstant(-1.0);
  } else {
    d(c, m - 1) = 1.0;
  }
  return d;
}

}  // namespace

std::vector<DeformationGradient> deformation_gradients(const SoftBody& body,
                                                       Eigen::Ref<const VecX> x,
                                                       Eigen::Ref<const VecX> v) {
  std::vector<DeformationGradient> out(body.mesh.tets.size());
  for (size_t e = 0; e < body.mesh.tets.size(); ++e) {
    const auto& t = body.mesh.tets[e];
    out[e].F = shape_matrix(t, x) * body.inv_rest_shape[e];
    out[e].Fdot = shape_matrix(t, v) * body.inv_rest_shape[e];
  }
  return out;
}

double neo_hookean_energy_density(const Mat3& F, double mu, double lambda) {
  const double J = F.determinant();
  if (!(J > 0.0)) throw InvertedElementError("inverted element in energy evaluation", -1);
  const double lnJ = std::log(J);
  return 0.5 * mu * ((F.transpose() * F).trace() - 3.0) - mu * lnJ + 0.5 * lambda * lnJ * lnJ;
}

void fem_assemble(const SoftBody& body, Eigen::Ref<const VecX> x, Eigen::Ref<const VecX> v,
                  const FemOptions& opts, FemWorkspace& out, std::vector<Triplet>* stiffness,
                  std::vector<Triplet>* damping) {
  const int n = 3 * body.node_count();
  out.elastic_energy = 0.0;
  out.force = VecX::Zero(n);
  if (opts.with_param_partials) {
    out.dforce_dmu = VecX::Zero(n);
    out.dforce_dlambda = VecX::Zero(n);
    out.dforce_dnu = VecX::Zero(n);
  }

  const double mu = body.mu, lambda = body.lambda, nu = body.viscosity;

  for (size_t e = 0; e < body.mesh.tets.size(); ++e) {
    const auto& t = body.mesh.tets[e];
    const Mat3& Bm = body.inv_rest_shape[e];
    const double V = body.rest_volume[e];

    const Mat3 F = shape_matrix(t, x) * Bm;
    const Mat3 Fdot = shape_matrix(t, v) * Bm;
    const double J = F.determinant();
    if (!(J > 0.0))
      throw InvertedElementError(
          "soft body '" + body.name + "': tet " + std::to_string(e) + " inverted (det F <= 0)",
          static_cast<int>(e));
    const double lnJ = std::log(J);
    const Mat3 Fit = F.inverse().transpose();

    out.elastic_energy +=
        V * (0.5 * mu * ((F.transpose() * F).trace() - 3.0) - mu * lnJ + 0.5 * lambda * lnJ * lnJ);

    const Mat3 P_mu = F - Fit;          // dPsi/dF per unit mu
    const Mat3 P_lam = lnJ * Fit;       // per unit lambda
    const Mat3 Dgr = 0.5 * (F.transpose() * Fdot + Fdot.transpose() * F);
    const Mat3 P_nu = F * Dgr;          // viscous stress per unit nu

    const Mat3 P = mu * P_mu + lambda * P_lam + nu * P_nu;
    const auto f_tet = scatter(-V * P * Bm.transpose());

    int gi[12];
    for (int m = 0; m < 4; ++m)
      for (int c = 0; c < 3; ++c) gi[3 * m + c] = 3 * t[m] + c;
    for (int i = 0; i < 12; ++i) out.force[gi[i]] += f_tet[i];

    if (opts.with_param_partials) {
      const auto f_mu = scatter(-V * P_mu * Bm.transpose());
      const auto f_lam = scatter(-V * P_lam * Bm.transpose());
      const auto f_nu = scatter(-V * P_nu * Bm.transpose());
      for (int i = 0; i < 12; ++i) {
        out.dforce_dmu[gi[i]] += f_mu[i];
        out.dforce_dlambda[gi[i]] += f_lam[i];
        out.dforce_dnu[gi[i]] += f_nu[i];
      }
    }

    if (!opts.with_jacobians) continue;

    const Mat3 Finv = F.inverse();
    for (int m = 0; m < 4; ++m)
      for (int c = 0; c < 3; ++c) {
        const int col = 3 * m + c;
        const Mat3 dF = shape_matrix_variation(m, c) * Bm;

        // Elastic dP(F; dF).
        Mat3 dP = mu * dF + (mu - lambda * lnJ) * Fit * dF.transpose() * Fit +
                  lambda * (Finv * dF).trace() * Fit;
        // Viscous dP/dF at fixed Fdot.
        if (nu != 0.0) {
          const Mat3 dD = 0.5 * (dF.transpose() * Fdot + Fdot.transpose() * dF);
          dP += nu * (dF * Dgr + F * dD);
        }
        const auto df = scatter(-V * dP * Bm.transpose());
        for (int i = 0; i < 12; ++i)
          stiffness->emplace_back(opts.global_offset + gi[i], opts.global_offset + gi[col],
                                  df[i]);

        if (nu != 0.0 && damping) {
          const Mat3 dDv = 0.5 * (F.transpose() * dF + dF.transpose() * F);
          const auto dfv = scatter(-V * nu * (F * dDv) * Bm.transpose());
          for (int i = 0; i < 12; ++i)
            damping->emplace_back(opts.global_offset + gi[i], opts.global_offset + gi[col],
                                  dfv[i]);
        }
      }
  }
}

}  // namespace add
