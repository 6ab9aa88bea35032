#pragma once

#include <string>
#include <vector>

#include "bubble/config.hpp"
#include "bubble/frame_field.hpp"
#include "bubble/stokes_mode.hpp"

namespace bubble {

enum class Backend { Analytic, Fd };

std::string backend_name(Backend b);
Backend parse_backend(const std::string& name);

/// (u_n, u_tau) trace of a per-mode flow solution at R_s.
inline Vec2c interface_trace(const ModeFlowSolution& s) { return s.trace; }

/// Interface traction-to-velocity (Neumann-to-Dirichlet) operator of the
/// two-phase transmission problem, stored as one 2x2 block per azimuthal
/// mode 0..K; negative modes follow by conjugation symmetry.
class SteklovOperator {
 public:
  SteklovOperator() = default;
  SteklovOperator(std::vector<Mat2c> blocks, Backend backend, std::string fingerprint,
                  double R_s);

  int max_mode() const { return static_cast<int>(blocks_.size()) - 1; }
  Backend backend() const { return backend_; }
  const std::string& fingerprint() const { return fingerprint_; }
  double interface_radius() const { return R_s_; }

  /// Block for any k in [-K, K]; P(-k) = conj(P(k)).
  Mat2c block(int k) const;
  const std::vector<Mat2c>& blocks() const { return blocks_; }

  /// Per-mode matrix-vector application; modes beyond K are truncated.
  FrameField apply(const FrameField& G) const;
  /// <G, P G> with the 2 pi R_s Parseval factor; equals E+ + E- of the
  /// underlying transmission solves.
  double quadratic_form(const FrameField& G) const;

  double hermitian_defect() const;
  double min_eigenvalue() const;
  /// || P(0) (1,0)^T || — the incompressibility kernel direction.
  double kernel_defect() const;

 private:
  std::vector<Mat2c> blocks_;
  Backend backend_ = Backend::Analytic;
  std::string fingerprint_;
  double R_s_ = 1.0;
};

/// Columns of each block are interface traces of transmission solves with
/// unit jumps (1,0) and (0,1).
SteklovOperator assemble_steklov(const BubbleConfig& cfg, Backend backend);

}  // namespace bubble
