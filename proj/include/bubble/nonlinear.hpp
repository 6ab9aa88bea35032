#pragma once

#include <vector>

#include "bubble/evolve.hpp"
#include "bubble/extension.hpp"
#include "bubble/stokes_mode.hpp"

namespace bubble {

/// Stress of the pulled-back flow: nu (grad_u inv_jac + inv_jac^T grad_u^T) - p I,
/// where inv_jac = (grad X-tilde)^{-1} at the evaluation point.
Eigen::Matrix2d transformed_stress(const Eigen::Matrix2d& grad_u, double p,
                                   const Eigen::Matrix2d& inv_jac, double nu);

/// Quadratic remainder data of the transformed interface problem at one time
/// node, ready for the forced mode solver: per-mode volume forcing and
/// divergence profiles on the FD grids, and the interface forcing G.
struct RhsFields {
  // indexed [k][node], k = 0..K
  std::vector<std::vector<Complex>> force_r_inner, force_th_inner;
  std::vector<std::vector<Complex>> force_r_outer, force_th_outer;
  std::vector<std::vector<Complex>> div_inner, div_outer;
  FrameField G;                    ///< interface forcing (frame modes)
  Complex volume_source{0.0};      ///< (1/(2 pi R_s)) int_{inner} H dx
  double min_jacobian_det = 1.0;   ///< min det grad(Id + Z-tilde) over the grids
  double max_radius = 0.0;         ///< max |X| over the deformed interface
};

/// Assemble (F, G, H) of the transformed system at one time node from the
/// per-mode Dirichlet flow solves (FD representation, k = 0..K), the harmonic
/// extension of the physical displacement, and the shifted displacement Zhat
/// at time t. Pointwise products use an oversampled angular grid (n_theta)
/// so the retained modes are alias-free.
RhsFields assemble_rhs(const std::vector<ModeFlowSolution>& flow, const ExtensionField& E,
                       const FrameField& Zhat, double t, const BubbleConfig& cfg, int n_theta);

/// One fixed-point sweep: differentiate the input trajectory in time, run the
/// per-node Dirichlet flow solves, assemble the quadratic remainders, lift the
/// volume terms into interface tractions, and integrate the stabilized linear
/// dynamics with the resulting forcing. Solvers must hold modes 0..cfg.K.
SimTrajectory picard_step(const SimTrajectory& Zin, const FeedbackLaw& law,
                          const SteklovOperator& P, const BubbleConfig& cfg,
                          const std::vector<FdDirichletSolver>& solvers, int n_theta);

struct NonlinearOptions {
  double tol = 1e-8;  ///< sup-in-time H^2 increment for convergence
  int max_iter = 30;
  int n_theta = 0;  ///< angular samples for the assembly; 0 picks 3(K+2)
};

struct NonlinearReport {
  SimTrajectory shifted;   ///< converged e^{lambda t}-weighted trajectory
  SimTrajectory physical;  ///< same trajectory in physical variables
  std::vector<double> increments;  ///< sup-in-time H^2 distance between sweeps
  std::vector<double> ratios;      ///< successive increment ratios
  bool converged = false;
  int iterations = 0;
  double C_s = 0.0;         ///< measured stability constant of the linear loop
  double ball_radius = 0.0; ///< invariant-ball radius 2 C_s ||Z0||_{H^2}
  double decay_rate = 0.0;  ///< fitted physical decay rate
  double area_drift = 0.0;  ///< max relative enclosed-area deviation
  double min_jacobian_det = 1.0;
};

/// Fixed-point solution of the transformed nonlinear interface problem with
/// the stabilizing feedback, seeded with the homogeneous closed-loop solution.
/// Z0 must be volume-free (zero mode-0 normal component).
NonlinearReport stabilize_nonlinear(const FrameField& Z0, const FeedbackLaw& law,
                                    const SteklovOperator& P, const BubbleConfig& cfg,
                                    const NonlinearOptions& opt = {});

}  // namespace bubble
