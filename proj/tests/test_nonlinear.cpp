#include <doctest.h>

#include <cmath>

#include "bubble/nonlinear.hpp"

using namespace bubble;
using doctest::Approx;

namespace {

BubbleConfig small_cfg() {
  BubbleConfig cfg;
  cfg.K = 8;
  cfg.N_r = 64;
  cfg.dt = 0.05;
  cfg.T = 2.0;
  cfg.lambda = 1.0;
  return cfg;
}

std::vector<FdDirichletSolver> make_solvers(const BubbleConfig& cfg) {
  std::vector<FdDirichletSolver> s;
  for (int k = 0; k <= cfg.K; ++k) s.emplace_back(k, cfg);
  return s;
}

std::vector<ModeFlowSolution> flow_for(const FrameField& d, const BubbleConfig& cfg,
                                       const std::vector<FdDirichletSolver>& solvers) {
  std::vector<ModeFlowSolution> sols(static_cast<size_t>(cfg.K) + 1);
  for (int k = 0; k <= cfg.K; ++k) {
    ModeProblem p;
    p.k = k;
    p.dirichlet = d.mode(k);
    sols[static_cast<size_t>(k)] = solvers[static_cast<size_t>(k)].solve(p);
  }
  return sols;
}

double rhs_magnitude(const RhsFields& rhs) {
  double m = rhs.G.max_abs();
  auto scan = [&m](const std::vector<std::vector<Complex>>& grid) {
    for (const auto& row : grid)
      for (const Complex& v : row) m = std::max(m, std::abs(v));
  };
  scan(rhs.force_r_inner);
  scan(rhs.force_th_inner);
  scan(rhs.force_r_outer);
  scan(rhs.force_th_outer);
  scan(rhs.div_inner);
  scan(rhs.div_outer);
  return m;
}

}  // namespace

TEST_CASE("transformed stress reduces to the Newtonian stress at identity") {
  Eigen::Matrix2d gu;
  gu << 0.3, -0.1, 0.2, 0.05;
  const double p = 0.7, nu = 1.3;
  const Eigen::Matrix2d sig = transformed_stress(gu, p, Eigen::Matrix2d::Identity(), nu);
  const Eigen::Matrix2d expected = nu * (gu + gu.transpose()) - p * Eigen::Matrix2d::Identity();
  CHECK((sig - expected).norm() <= 1e-14);
  // zero velocity: pure pressure
  const Eigen::Matrix2d sp = transformed_stress(Eigen::Matrix2d::Zero(), p,
                                                Eigen::Matrix2d::Identity() * 0.9, nu);
  CHECK((sp + p * Eigen::Matrix2d::Identity()).norm() <= 1e-14);
}

TEST_CASE("zero state produces identically zero right-hand sides") {
  const BubbleConfig cfg = small_cfg();
  const auto solvers = make_solvers(cfg);
  const FrameField Z(cfg.K);
  const auto flow = flow_for(Z, cfg, solvers);
  const ExtensionField E = harmonic_extend(Z, cfg);
  const RhsFields rhs = assemble_rhs(flow, E, Z, 0.0, cfg, 3 * (cfg.K + 2));
  CHECK(rhs_magnitude(rhs) <= 1e-12);
  CHECK(std::abs(rhs.volume_source) <= 1e-13);
  CHECK(rhs.min_jacobian_det == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rigid translation with quiescent flow has vanishing remainders") {
  const BubbleConfig cfg = small_cfg();
  const auto solvers = make_solvers(cfg);
  const double c = 0.02;
  FrameField Z(cfg.K);
  Z.mode(1) = 0.5 * c * Vec2c(Complex(1.0, 0.0), Complex(0.0, 1.0));
  Z.mode(-1) = Z.mode(1).conjugate();
  const auto flow = flow_for(FrameField(cfg.K), cfg, solvers);  // u = 0, p = 0
  const ExtensionField E = harmonic_extend(Z, cfg);
  const RhsFields rhs = assemble_rhs(flow, E, Z, 0.0, cfg, 3 * (cfg.K + 2));
  // the curvature of a translated circle matches the reference term exactly
  CHECK(rhs_magnitude(rhs) <= 1e-10);
}

TEST_CASE("right-hand sides are quadratically small in the amplitude") {
  const BubbleConfig cfg = small_cfg();
  const auto solvers = make_solvers(cfg);
  auto magnitude = [&](double eps) {
    FrameField Z(cfg.K);
    Z.mode(2) = Vec2c(0.5 * eps, 0.0);
    Z.mode(-2) = Z.mode(2).conjugate();
    FrameField d(cfg.K);
    for (int k = -cfg.K; k <= cfg.K; ++k) d.mode(k) = -cfg.lambda * Z.mode(k);
    d.mode(0)(0) = 0.0;
    const auto flow = flow_for(d, cfg, solvers);
    const ExtensionField E = harmonic_extend(Z, cfg);
    return rhs_magnitude(assemble_rhs(flow, E, Z, 0.0, cfg, 3 * (cfg.K + 2)));
  };
  const double m1 = magnitude(1e-3);
  const double m2 = magnitude(2e-3);
  const double exponent = std::log2(m2 / m1);
  CHECK(exponent == Approx(2.0).epsilon(0.1));  // ratio 4 +- 20%
}

TEST_CASE("fixed point at the steady state") {
  const BubbleConfig cfg = small_cfg();
  const SteklovOperator P = assemble_steklov(cfg, Backend::Analytic);
  const FeedbackLaw law = build_feedback(P, cfg, cfg.lambda);
  const NonlinearReport rep = stabilize_nonlinear(FrameField(cfg.K), law, P, cfg);
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);
  for (const auto& s : rep.physical.states) CHECK(s.max_abs() <= 1e-12);
}

TEST_CASE("small-amplitude Picard iteration contracts and decays") {
  const BubbleConfig cfg = small_cfg();
  const SteklovOperator P = assemble_steklov(cfg, Backend::Analytic);
  const FeedbackLaw law = build_feedback(P, cfg, cfg.lambda);
  FrameField Z0(cfg.K);
  Z0.mode(2) = Vec2c(0.5 * 2e-3, 0.0);
  Z0.mode(-2) = Z0.mode(2).conjugate();
  const NonlinearReport rep = stabilize_nonlinear(Z0, law, P, cfg);
  CHECK(rep.converged);
  CHECK(rep.iterations <= 30);
  for (double r : rep.ratios) CHECK(r < 1.0);
  CHECK(rep.decay_rate >= 0.9 * cfg.lambda);
  CHECK(rep.area_drift <= 1e-5);
  CHECK(rep.min_jacobian_det >= 0.9);
  CHECK(rep.C_s > 0.0);
  CHECK(rep.ball_radius > 0.0);
}

TEST_CASE("volume-carrying initial data is refused") {
  const BubbleConfig cfg = small_cfg();
  const SteklovOperator P = assemble_steklov(cfg, Backend::Analytic);
  const FeedbackLaw law = build_feedback(P, cfg, cfg.lambda);
  FrameField bad(cfg.K);
  bad.mode(0) = Vec2c(0.01, 0.0);
  CHECK_THROWS(stabilize_nonlinear(bad, law, P, cfg));
}
