#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace bubble {

using Complex = std::complex<double>;
using Vec2c = Eigen::Vector2cd;
using Mat2c = Eigen::Matrix2cd;

/// Fourier coefficients of a vector field on the reference circle, expressed in
/// the moving frame (outward normal n_s, tangent tau_s). Modes run over
/// k in {-K..K}; a real-valued field satisfies coeffs(-k) = conj(coeffs(k)).
class FrameField {
 public:
  FrameField() = default;
  explicit FrameField(int max_mode);

  int max_mode() const { return K_; }

  Vec2c& mode(int k) { return coeffs_[static_cast<size_t>(k + K_)]; }
  const Vec2c& mode(int k) const { return coeffs_[static_cast<size_t>(k + K_)]; }

  /// Symmetrize toward coeffs(-k) = conj(coeffs(k)) and a real mode 0.
  void enforce_reality();
  /// Max deviation from the reality constraint.
  double reality_defect() const;
  bool is_volume_free(double tol = 1e-12) const { return std::abs(mode(0)(0)) <= tol; }

  /// Resize to a new mode cap, truncating or zero-padding.
  FrameField truncated(int new_max_mode) const;

  FrameField& operator+=(const FrameField& o);
  FrameField& operator-=(const FrameField& o);
  FrameField& operator*=(double a);
  friend FrameField operator+(FrameField a, const FrameField& b) { return a += b; }
  friend FrameField operator-(FrameField a, const FrameField& b) { return a -= b; }
  friend FrameField operator*(double a, FrameField f) { return f *= a; }

  double max_abs() const;

 private:
  int K_ = 0;
  std::vector<Vec2c> coeffs_;  // index k + K_
};

/// Discrete Fourier analysis of Cartesian samples at M equispaced angles into
/// frame components. Requires M >= 2*max_mode + 2 (else aliasing is signaled).
FrameField frame_decompose(const std::vector<Eigen::Vector2d>& samples, int max_mode);

/// Inverse of frame_decompose on band-limited fields.
std::vector<Eigen::Vector2d> frame_reconstruct(const FrameField& f, int M);

/// Orthogonal removal (per-mode Hermitian inner product) of the SE(2)
/// generators: rotation (0,1) at k=0 and translations (1,i)/(1,-i) at k=+-1.
/// With remove_volume also zeroes the normal component of mode 0. Idempotent.
FrameField rigid_project(const FrameField& f, bool remove_volume);

/// (2 pi R_s sum_k (1 + (k/R_s)^2)^s |coeffs(k)|^2)^{1/2}.
double sobolev_norm(const FrameField& f, double s, double R_s);

/// Quotient norm modulo SE(2): sobolev_norm after rigid_project (volume kept).
double quotient_sobolev_norm(const FrameField& f, double s, double R_s);

/// Squared L^2 norm of the arclength gradient of the field on the circle.
double surface_gradient_norm_sq(const FrameField& f, double R_s);

/// L^2(Gamma_s) pairing of two real frame fields.
double l2_pairing(const FrameField& a, const FrameField& b, double R_s);

}  // namespace bubble
