#pragma once

#include <vector>

#include "bubble/modal_control.hpp"
#include "bubble/steklov.hpp"

namespace bubble {

/// Time history of the interface displacement under the linearized dynamics,
/// in shifted (e^{lambda t}-weighted) or physical variables.
struct SimTrajectory {
  std::vector<double> times;
  std::vector<FrameField> states;
  std::vector<FrameField> controls;     ///< feedback g at each node (zero in open loop)
  std::vector<FrameField> forcing_mid;  ///< applied external forcing at step midpoints
  bool shifted = false;
  double lambda = 0.0;

  // per-node diagnostics
  std::vector<double> raw_h2;       ///< Sobolev s=2 norm
  std::vector<double> quotient_h2;  ///< same, rigid modes removed
  std::vector<double> grad_norm_sq;
  std::vector<double> dissipation;  ///< <G, PG> = E+ + E- of the instantaneous solve
};

struct LinearSimOptions {
  const FeedbackLaw* law = nullptr;  ///< closed loop when set
  bool shifted = true;               ///< evolve e^{lambda t} Z with the lambda shift
  double lambda = 0.0;               ///< shift rate (ignored unless shifted)
  /// External forcing at step midpoints: one entry per step, or a single
  /// entry reused for every step; empty means none. Lifted traction jumps
  /// from forced subproblems enter here as additional interface data.
  std::vector<FrameField> forcing;
  /// Net-flux source of the conserved mode-0 normal direction (step
  /// midpoints, length 1 or one per step): the divergence data of the
  /// transformed problem carries a net interface flux (1/(2 pi R_s)) int H
  /// that drives d/dt z_n(0) outside the range of the Steklov operator.
  std::vector<Complex> volume_source;
};

/// Exact per-mode exponential integrator for
///   dZ/dt = (lambda I + A + P K) Z + P G_ext,
/// with the variation-of-constants forcing increment evaluated through the
/// phi_1 matrix function. Z0 must be volume-free.
SimTrajectory simulate_linear(const FrameField& Z0, const SteklovOperator& P,
                              const BubbleConfig& cfg, const LinearSimOptions& opt);

/// Convert a shifted trajectory to physical variables (states, controls, and
/// forcing scaled by e^{-lambda t}).
SimTrajectory to_physical(const SimTrajectory& traj);

/// Discrete residual of the interfacial energy identity
///   d/dt (mu/2)||grad Z||^2 + (E+ + E-) = <g, u>,
/// evaluated at step midpoints; requires a physical (unshifted) trajectory.
std::vector<double> energy_audit(const SimTrajectory& traj, const SteklovOperator& P,
                                 const BubbleConfig& cfg);

/// Least-squares decay rate of log(norm) vs t over the window where the
/// selected norm exceeds 1e-12. Throws on an (all-zero) undefined fit.
double decay_fit(const SimTrajectory& traj, bool quotient);

}  // namespace bubble
