#pragma once

#include <vector>

#include "bubble/steklov.hpp"

namespace bubble {

/// Eigenpair of the per-mode generator A(k) = mu P(k) L(k).
struct ModeEigenpair {
  int k = 0;
  double eigenvalue = 0.0;
  Vec2c eigenvector = Vec2c::Zero();
  bool volume = false;  ///< k=0 normal direction (conserved enclosed area)
  bool rigid = false;   ///< k=0 rotation or k=1 translation direction
};

struct ModalSpectrum {
  /// Eigenpairs grouped by mode, eigenvalues sorted descending within a mode.
  std::vector<ModeEigenpair> pairs;
  double max_imag_part = 0.0;  ///< largest |Im| zeroed during realification
};

/// A(k) = mu P(k) L(k) with L the Laplace-Beltrami block.
Mat2c generator_block(int k, const SteklovOperator& P, const BubbleConfig& cfg);

/// Per-mode eigen-decomposition for k = 0..K. Throws if an eigenvalue has
/// |imaginary part| > 1e-8 (the product of Hermitian PSD and NSD blocks must
/// have real spectrum; violation indicates a solver defect).
ModalSpectrum mode_spectrum(const SteklovOperator& P, const BubbleConfig& cfg);

/// All directions decaying slower than lambda (eigenvalue > -lambda),
/// excluding the conserved volume direction. The k=0 rotation direction is
/// included only when include_rotation is set (default); translations are
/// always retained so the closed loop damps drift.
std::vector<ModeEigenpair> unstable_set(const ModalSpectrum& spec, double lambda,
                                        bool include_rotation = true);

/// Stabilizing solution of Pi A + A^H Pi - Pi B B^H Pi + I = 0 via the stable
/// invariant subspace of the Hamiltonian matrix. A is the lambda-shifted
/// restriction. Result is Hermitian PSD; residual verified by the caller.
Eigen::MatrixXcd solve_are(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B);

/// Rank of the controllability matrix [B, AB, ...] on the restricted block.
int controllability_rank(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B);

struct FeedbackLaw {
  double lambda = 0.0;
  bool include_rotation = true;
  std::vector<ModeEigenpair> unstable;  ///< directions the law acts on
  std::vector<Mat2c> Pi_blocks;         ///< per mode 0..K, zero off the unstable set
  std::vector<Mat2c> K_blocks;          ///< K(k) = -P(k)^H Pi(k)
  double riccati_residual = 0.0;        ///< max over unstable blocks
  double closed_loop_margin = 0.0;      ///< max_k Re eig(A(k)+P(k)K(k)) + lambda
  std::string fingerprint;

  int max_mode() const { return static_cast<int>(K_blocks.size()) - 1; }
  Mat2c gain(int k) const;  ///< K(-k) = conj(K(k))
  /// g = K Z per mode (zero beyond K).
  FrameField apply(const FrameField& Z) const;
};

/// Restrict, solve the shifted Riccati equation, and assemble the gain for
/// every mode carrying unstable directions. Throws if lambda collides with an
/// open-loop rate (within 1e-9) or a restricted block is not stabilizable.
FeedbackLaw build_feedback(const SteklovOperator& P, const BubbleConfig& cfg, double lambda,
                           bool include_rotation = true);

}  // namespace bubble
