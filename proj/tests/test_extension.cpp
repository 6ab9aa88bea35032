#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bubble/extension.hpp"
#include "bubble/geometry.hpp"

using namespace bubble;
using doctest::Approx;

namespace {

FrameField sample_boundary(int K) {
  FrameField Z(K);
  Z.mode(1) = Vec2c(Complex(0.01, 0.004), Complex(-0.006, 0.002));
  Z.mode(3) = Vec2c(Complex(0.0, 0.008), Complex(0.005, 0.0));
  Z.enforce_reality();
  return Z;
}

}  // namespace

TEST_CASE("boundary reproduction on both sides") {
  BubbleConfig cfg;
  cfg.K = 6;
  const FrameField Z = sample_boundary(6);
  const ExtensionField E = harmonic_extend(Z, cfg);
  const int M = 64;
  const auto samples = frame_reconstruct(Z, M);
  for (int j = 0; j < M; ++j) {
    const double th = 2.0 * std::numbers::pi * j / M;
    const Eigen::Vector2d inner = E.displacement(cfg.R_s * (1.0 - 1e-14), th);
    const Eigen::Vector2d outer = E.displacement(cfg.R_s * (1.0 + 1e-14), th);
    CHECK((inner - samples[j]).norm() <= 1e-10);
    CHECK((outer - samples[j]).norm() <= 1e-10);
  }
  // zero trace on the outer wall
  for (int j = 0; j < M; ++j)
    CHECK(E.displacement(cfg.R_out, 2.0 * std::numbers::pi * j / M).norm() <= 1e-12);
}

TEST_CASE("harmonicity of the radial profiles") {
  BubbleConfig cfg;
  cfg.K = 6;
  const ExtensionField E = harmonic_extend(sample_boundary(6), cfg);
  CHECK(E.harmonic_residual() <= 1e-8);
}

TEST_CASE("annulus coefficients of a single Cartesian mode") {
  // boundary data with Cartesian mode m=2 amplitude c, R_s=1, R_out=2:
  // alpha r^2 + beta r^{-2} with alpha + beta = c, 4 alpha + beta/4 = 0
  BubbleConfig cfg;  // R_s = 1, R_out = 2
  cfg.K = 4;
  const double c = 0.37;
  FrameField Z(4);
  Z.mode(1) = Vec2c(c, 0.0);  // a_m = z_n + i z_tau at m = k + 1
  Z.mode(-1) = Z.mode(1).conjugate();
  const ExtensionField E = harmonic_extend(Z, cfg);
  CHECK(E.annulus_alpha(2).real() == Approx(-c / 15.0).epsilon(1e-12));
  CHECK(E.annulus_beta(2).real() == Approx(16.0 * c / 15.0).epsilon(1e-12));
  CHECK(std::abs(E.annulus_alpha(2).imag()) <= 1e-14);
  CHECK(E.inner_coeff(2).real() == Approx(c).epsilon(1e-14));  // c r^2 inside
}

TEST_CASE("maximum principle on sample grids") {
  BubbleConfig cfg;
  cfg.K = 6;
  const FrameField Z = sample_boundary(6);
  const ExtensionField E = harmonic_extend(Z, cfg);
  double bmax = 0.0;
  const int M = 256;
  for (const auto& s : frame_reconstruct(Z, M)) bmax = std::max(bmax, s.norm());
  // componentwise-harmonic fields obey |w| <= max boundary |w| (wall trace is zero)
  for (int ir = 1; ir <= 20; ++ir)
    for (int jt = 0; jt < 48; ++jt) {
      const double th = 2.0 * std::numbers::pi * jt / 48;
      const double ri = cfg.R_s * ir / 21.0;
      const double ro = cfg.R_s + (cfg.R_out - cfg.R_s) * ir / 21.0;
      CHECK(E.displacement(ri, th).norm() <= bmax * (1.0 + 1e-12));
      CHECK(E.displacement(ro, th).norm() <= bmax * (1.0 + 1e-12));
    }
}

TEST_CASE("gradient consistency by finite differences") {
  BubbleConfig cfg;
  cfg.K = 6;
  const ExtensionField E = harmonic_extend(sample_boundary(6), cfg);
  const double h = 1e-6;
  for (const double r : {0.4, 1.7}) {
    const double th = 0.9;
    const double x = r * std::cos(th), y = r * std::sin(th);
    const Eigen::Matrix2d G = E.grad_displacement(r, th);
    auto disp = [&](double px, double py) {
      return E.displacement(std::hypot(px, py), std::atan2(py, px));
    };
    const Eigen::Vector2d dx = (disp(x + h, y) - disp(x - h, y)) / (2 * h);
    const Eigen::Vector2d dy = (disp(x, y + h) - disp(x, y - h)) / (2 * h);
    CHECK((G.col(0) - dx).norm() <= 1e-8);
    CHECK((G.col(1) - dy).norm() <= 1e-8);
  }
}

TEST_CASE("invertibility at moderate amplitude") {
  BubbleConfig cfg;
  cfg.K = 6;
  FrameField Z(6);
  Z.mode(2) = Vec2c(0.025, 0.0);  // amplitude 0.05 normal perturbation
  Z.mode(-2) = Z.mode(2).conjugate();
  const ExtensionField E = harmonic_extend(Z, cfg);
  CHECK(min_det(E) >= 0.5);
  const InverseJacobianReport rep = inverse_jacobian(E);
  CHECK(rep.min_det >= 0.5);
  CHECK(rep.neumann_bound_holds);
  CHECK(rep.sup_inv_minus_id <= rep.sup_grad_minus_id / (1.0 - rep.sup_grad_minus_id) + 1e-12);
}

TEST_CASE("folding refusal for large deformations") {
  BubbleConfig cfg;
  cfg.K = 6;
  FrameField Z(6);
  Z.mode(2) = Vec2c(0.5, 0.0);  // far beyond the invertibility threshold
  Z.mode(-2) = Z.mode(2).conjugate();
  const ExtensionField E = harmonic_extend(Z, cfg);
  CHECK(min_det(E) < 0.05);
  CHECK_THROWS(inverse_jacobian(E));
}

TEST_CASE("identity deformation statistics") {
  BubbleConfig cfg;
  cfg.K = 2;
  const ExtensionField E = harmonic_extend(FrameField(2), cfg);
  CHECK(min_det(E) == Approx(1.0).epsilon(1e-14));
  const InverseJacobianReport rep = inverse_jacobian(E);
  CHECK(rep.sup_grad_minus_id <= 1e-14);
  CHECK(rep.sup_inv_minus_id <= 1e-14);
}
