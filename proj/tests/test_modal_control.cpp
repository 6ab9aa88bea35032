#include <doctest.h>

#include <cmath>

#include "bubble/modal_control.hpp"

using namespace bubble;
using doctest::Approx;

namespace {

SteklovOperator default_P(int K = 8) {
  BubbleConfig cfg;
  cfg.K = K;
  return assemble_steklov(cfg, Backend::Analytic);
}

double rate_of(const ModalSpectrum& spec, int k, int which) {
  // which = 0: slowest (largest) eigenvalue of mode k
  int seen = 0;
  for (const auto& p : spec.pairs)
    if (p.k == k && seen++ == which) return p.eigenvalue;
  REQUIRE(false);
  return 0.0;
}

}  // namespace

TEST_CASE("spectrum regression anchors for the default physics") {
  BubbleConfig cfg;
  cfg.K = 8;
  const SteklovOperator P = default_P();
  const ModalSpectrum spec = mode_spectrum(P, cfg);
  CHECK(spec.max_imag_part <= 1e-8);
  CHECK(rate_of(spec, 0, 0) <= 1e-10);  // conserved volume
  CHECK(rate_of(spec, 0, 1) == Approx(-0.375).epsilon(1e-6));        // rotation-adjacent
  CHECK(rate_of(spec, 1, 0) <= 1e-10);  // translation
  CHECK(rate_of(spec, 1, 1) == Approx(-0.46875).epsilon(1e-6));
  CHECK(rate_of(spec, 2, 0) == Approx(-0.0801533).epsilon(1e-5));
  CHECK(rate_of(spec, 2, 1) == Approx(-0.740159).epsilon(1e-5));
  CHECK(rate_of(spec, 3, 0) == Approx(-0.327304).epsilon(1e-5));
  // all rates are nonpositive: the uncontrolled interface is neutrally stable
  for (const auto& p : spec.pairs) CHECK(p.eigenvalue <= 1e-10);
}

TEST_CASE("translation kernel of the mode-1 generator") {
  BubbleConfig cfg;
  cfg.K = 2;
  const SteklovOperator P = default_P(2);
  const Mat2c A1 = generator_block(1, P, cfg);
  const Vec2c t(Complex(1.0, 0.0), Complex(0.0, 1.0));
  CHECK((A1 * t).norm() <= 1e-10);
}

TEST_CASE("unstable set selection") {
  BubbleConfig cfg;
  cfg.K = 8;
  const SteklovOperator P = default_P();
  const ModalSpectrum spec = mode_spectrum(P, cfg);
  const double lambda = 0.5;
  const auto with_rot = unstable_set(spec, lambda, true);
  const auto without_rot = unstable_set(spec, lambda, false);
  CHECK(with_rot.size() == without_rot.size() + 1);
  for (const auto& u : with_rot) {
    CHECK(!u.volume);                 // conserved direction never targeted
    CHECK(u.eigenvalue > -lambda);    // selected by rate threshold
  }
  // rotation present only when requested
  bool rot = false;
  for (const auto& u : without_rot) rot |= (u.k == 0 && u.rigid);
  CHECK(!rot);
  // a larger lambda captures more directions
  CHECK(unstable_set(spec, 0.9, true).size() > with_rot.size());
}

TEST_CASE("scalar Riccati reference solutions") {
  Eigen::MatrixXcd A(1, 1), B(1, 1);
  B(0, 0) = 1.0;
  A(0, 0) = -1.0;
  Eigen::MatrixXcd Pi = solve_are(A, B);
  // pi^2 + 2 pi - 1 = 0 -> pi = sqrt(2) - 1
  CHECK(Pi(0, 0).real() == Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
  CHECK(std::abs(Pi(0, 0).imag()) <= 1e-14);
  A(0, 0) = 0.0;
  Pi = solve_are(A, B);
  CHECK(Pi(0, 0).real() == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("controllability rank") {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2, 2);
  A(0, 1) = 1.0;
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(2, 1);
  B(1, 0) = 1.0;
  CHECK(controllability_rank(A, B) == 2);  // chain is controllable
  B(1, 0) = 0.0;
  B(0, 0) = 1.0;
  CHECK(controllability_rank(A, B) == 1);  // upper state unreachable
}

TEST_CASE("feedback synthesis: residual, margin, symmetry") {
  BubbleConfig cfg;
  cfg.K = 8;
  cfg.lambda = 1.0;
  const SteklovOperator P = default_P();
  const FeedbackLaw law = build_feedback(P, cfg, cfg.lambda);
  CHECK(law.riccati_residual <= 1e-9);
  CHECK(law.closed_loop_margin <= 0.0);  // max Re eig(A + PK) <= -lambda
  CHECK(law.gain(-3).isApprox(law.gain(3).conjugate(), 1e-14));
  // gains vanish on modes without slow directions
  const ModalSpectrum spec = mode_spectrum(P, cfg);
  const auto slow = unstable_set(spec, cfg.lambda, true);
  int max_slow_k = 0;
  for (const auto& u : slow) max_slow_k = std::max(max_slow_k, u.k);
  for (int k = max_slow_k + 1; k <= 8; ++k) CHECK(law.gain(k).norm() == 0.0);
  // feedback application is per-mode multiplication
  FrameField Z(8);
  Z.mode(2) = Vec2c(Complex(0.1, 0.0), Complex(0.0, 0.2));
  Z.enforce_reality();
  const FrameField g = law.apply(Z);
  CHECK((g.mode(2) - law.gain(2) * Z.mode(2)).norm() <= 1e-14);
}

TEST_CASE("lambda colliding with a natural rate is refused") {
  BubbleConfig cfg;
  cfg.K = 8;
  const SteklovOperator P = default_P();
  const ModalSpectrum spec = mode_spectrum(P, cfg);
  double rate = 0.0;
  for (const auto& p : spec.pairs)
    if (p.k == 2 && p.eigenvalue < -1e-6) {
      rate = -p.eigenvalue;
      break;
    }
  CHECK_THROWS(build_feedback(P, cfg, rate));
}

TEST_CASE("rotation direction damped only when included") {
  // the tangential k=0 direction relaxes at its natural rate (-0.375 for the
  // defaults), slower than lambda = 0.5, so it is a candidate for the law
  BubbleConfig cfg;
  cfg.K = 4;
  cfg.lambda = 0.5;
  const SteklovOperator P = default_P(4);
  const FeedbackLaw with_rot = build_feedback(P, cfg, cfg.lambda, true);
  const FeedbackLaw without = build_feedback(P, cfg, cfg.lambda, false);
  CHECK(with_rot.gain(0).norm() > 0.0);
  CHECK(without.gain(0).norm() == 0.0);  // mode 0 untouched without the rotation
  const Mat2c A0 = generator_block(0, P, cfg);
  const Mat2c closed_with = A0 + P.block(0) * with_rot.gain(0);
  // with the law, every nonconserved k=0 direction decays at least at lambda
  Eigen::ComplexEigenSolver<Mat2c> es(closed_with);
  double max_re = -1e300;
  for (int i = 0; i < 2; ++i) {
    const double re = es.eigenvalues()(i).real();
    if (std::abs(es.eigenvalues()(i)) > 1e-9)  // skip the conserved zero
      max_re = std::max(max_re, re);
  }
  CHECK(max_re <= -cfg.lambda + 1e-9);
  // without it, the rotation keeps its natural rate
  const Vec2c rot(0.0, 1.0);
  const Mat2c closed_without = A0 + P.block(0) * without.gain(0);
  CHECK((closed_without * rot + 0.375 * rot).norm() <= 1e-6);
}
