#pragma once

#include <string>
#include <string_view>

namespace bubble {

/// Physical and numerical parameters of the circle-in-disk reference geometry.
struct BubbleConfig {
  double R_s = 1.0;     ///< interface radius
  double R_out = 2.0;   ///< outer wall radius
  double nu = 1.0;      ///< viscosity
  double mu = 1.0;      ///< surface tension coefficient
  double lambda = 1.0;  ///< target decay rate
  int K = 32;           ///< max azimuthal mode
  int N_r = 128;        ///< radial grid points per subdomain
  double dt = 0.01;     ///< time step
  double T = 5.0;       ///< horizon

  /// Throws std::invalid_argument with a field-level message on violation.
  void validate() const;

  /// Canonical fingerprint of the fields a cached operator depends on.
  /// Doubles are rendered as hexfloats so the fingerprint is bit-exact.
  std::string fingerprint(std::string_view backend) const;
};

/// Parse a key=value config file ('#' starts a comment). Unknown keys are errors.
BubbleConfig load_config(const std::string& path);

}  // namespace bubble
