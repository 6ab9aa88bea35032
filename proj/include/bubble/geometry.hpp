#pragma once

#include "bubble/frame_field.hpp"

namespace bubble {

/// Frame-basis representation of the Laplace-Beltrami operator on vector
/// fields of the circle of radius R_s, at azimuthal mode k:
///   L(k) = (1/R_s^2) [[-k^2-1, -2ik], [2ik, -k^2-1]].
Mat2c laplace_beltrami_block(int k, double R_s);

/// Arclength-derivative block: mode-k representation of d/ds in the frame
/// basis, so that grad_norm and energy identities share one definition.
Mat2c surface_gradient_block(int k, double R_s);

/// Cartesian positions of the deformed curve (Id + Z) X_s at M equispaced
/// parameter angles, with X_s(theta) = R_s (cos theta, sin theta).
std::vector<Eigen::Vector2d> curve_samples(const FrameField& Z, double R_s, int M);

/// Pointwise geometric data of a deformed closed curve sampled at M angles.
struct CurveGeometry {
  std::vector<double> metric;          ///< g(theta_j) = |d_theta (X o X_s)|^2
  std::vector<double> det_g;           ///< same as metric (scalar metric tensor)
  std::vector<double> inv_sqrt_det_g;  ///< (det g)^{-1/2}
  std::vector<double> curvature;       ///< kappa(theta_j), kappa = -1/R for circles
  std::vector<Eigen::Vector2d> tangent;  ///< unit tangent
  std::vector<Eigen::Vector2d> normal;   ///< outward unit normal of the deformed curve
};

/// Metric and curvature of the curve (Id + Z) X_s via spectral differentiation.
/// Throws if the immersion degenerates (|d_theta| < 1e-8 at some node).
CurveGeometry deformed_geometry(const FrameField& Z, double R_s, int M);

/// Spectral derivative of periodic samples (trigonometric interpolation).
std::vector<double> spectral_derivative(const std::vector<double>& samples);

}  // namespace bubble
