#pragma once

#include "bubble/config.hpp"
#include "bubble/frame_field.hpp"

namespace bubble {

/// Componentwise-harmonic extension of an interface displacement into the
/// inner disk and the annulus (zero trace on the outer wall), stored as
/// Cartesian-combination modes w = Z_x + i Z_y = sum_m a_m G_m(r) e^{i m theta}
/// with G_m the exact radial solutions (r^{|m|} inside; a span of r^{+-|m|},
/// or 1 and log r at m = 0, in the annulus).
class ExtensionField {
 public:
  ExtensionField(int max_cart_mode, double R_s, double R_out);

  int max_cart_mode() const { return M_; }
  double interface_radius() const { return R_s_; }
  double wall_radius() const { return R_out_; }

  Complex& inner_coeff(int m) { return inner_[idx(m)]; }
  Complex& annulus_alpha(int m) { return alpha_[idx(m)]; }
  Complex& annulus_beta(int m) { return beta_[idx(m)]; }
  Complex inner_coeff(int m) const { return inner_[idx(m)]; }
  Complex annulus_alpha(int m) const { return alpha_[idx(m)]; }
  Complex annulus_beta(int m) const { return beta_[idx(m)]; }

  /// Displacement Z-tilde at (r, theta); side selected by r <= R_s.
  Eigen::Vector2d displacement(double r, double theta) const;
  /// Cartesian gradient of the displacement (rows = components).
  Eigen::Matrix2d grad_displacement(double r, double theta) const;
  /// det grad(Id + Z-tilde) at a point.
  double jacobian_det(double r, double theta) const;

  /// Residual of the polar Laplacian of every radial profile, evaluated with
  /// the closed-form derivatives on a radial sample grid (consistency check
  /// of the profile/derivative formulas).
  double harmonic_residual() const;

  /// Value, radial derivative, and value/r of the radial profile of mode m
  /// (used by bulk samplers that amortize the per-radius power evaluations).
  void profile(int m, double r, bool inner, Complex& g, Complex& dg, Complex& g_over_r) const;

 private:
  size_t idx(int m) const;

  int M_ = 0;
  double R_s_ = 1.0, R_out_ = 2.0;
  std::vector<Complex> inner_, alpha_, beta_;
};

/// Exact per-mode extension of the boundary displacement. The frame modes k
/// map to Cartesian modes m = k + 1.
ExtensionField harmonic_extend(const FrameField& Z_boundary, const BubbleConfig& cfg);

/// Minimum of det grad(Id + Z-tilde) over product grids in both subdomains.
double min_det(const ExtensionField& E, int n_r = 64, int n_theta = 256);

struct InverseJacobianReport {
  double min_det = 0.0;
  double sup_grad_minus_id = 0.0;  ///< sup ||grad X-tilde - I||
  double sup_inv_minus_id = 0.0;   ///< sup ||(grad X-tilde)^{-1} - I||
  bool neumann_bound_holds = false;  ///< sup_inv <= sup_grad / (1 - sup_grad)
};

/// Pointwise inversion statistics; refuses (throws) when min_det < 0.05.
InverseJacobianReport inverse_jacobian(const ExtensionField& E, int n_r = 64, int n_theta = 256);

}  // namespace bubble
