#include <doctest.h>

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "bubble/evolve.hpp"
#include "bubble/geometry.hpp"

using namespace bubble;
using doctest::Approx;

namespace {

SteklovOperator default_P(int K) {
  BubbleConfig cfg;
  cfg.K = K;
  return assemble_steklov(cfg, Backend::Analytic);
}

}  // namespace

TEST_CASE("integrator is exact for the homogeneous modal flow") {
  BubbleConfig cfg;
  cfg.K = 4;
  cfg.dt = 0.25;  // deliberately coarse: the exponential map has no step error
  cfg.T = 2.0;
  const SteklovOperator P = default_P(4);
  FrameField Z0(4);
  Z0.mode(3) = Vec2c(Complex(0.2, 0.1), Complex(-0.05, 0.3));
  Z0.enforce_reality();
  LinearSimOptions opt;
  opt.shifted = false;
  const SimTrajectory traj = simulate_linear(Z0, P, cfg, opt);
  const Mat2c M = generator_block(3, P, cfg);
  const Mat2c E = (cfg.T * M).exp();
  CHECK((traj.states.back().mode(3) - E * Z0.mode(3)).norm() <= 1e-12);
}

TEST_CASE("open-loop surface energy is monotone") {
  BubbleConfig cfg;
  cfg.K = 6;
  cfg.dt = 0.05;
  cfg.T = 3.0;
  const SteklovOperator P = default_P(6);
  FrameField Z0(6);
  Z0.mode(2) = Vec2c(Complex(0.01, 0.0), Complex(0.0, 0.004));
  Z0.mode(5) = Vec2c(Complex(0.0, 0.006), Complex(0.002, 0.0));
  Z0.enforce_reality();
  LinearSimOptions opt;
  opt.shifted = false;
  const SimTrajectory traj = simulate_linear(Z0, P, cfg, opt);
  for (size_t j = 0; j + 1 < traj.grad_norm_sq.size(); ++j)
    CHECK(traj.grad_norm_sq[j + 1] <= traj.grad_norm_sq[j] + 1e-12);
}

TEST_CASE("trajectory is linear in the initial data") {
  BubbleConfig cfg;
  cfg.K = 4;
  cfg.dt = 0.1;
  cfg.T = 1.0;
  const SteklovOperator P = default_P(4);
  FrameField Z0(4);
  Z0.mode(2) = Vec2c(Complex(0.02, 0.01), 0.0);
  Z0.enforce_reality();
  LinearSimOptions opt;
  opt.shifted = false;
  const SimTrajectory t1 = simulate_linear(Z0, P, cfg, opt);
  FrameField Z0s = Z0;
  Z0s *= 7.0;
  const SimTrajectory t7 = simulate_linear(Z0s, P, cfg, opt);
  for (size_t j = 0; j < t1.times.size(); ++j) {
    FrameField scaled = t1.states[j];
    scaled *= 7.0;
    CHECK((t7.states[j] - scaled).max_abs() <= 1e-12);
  }
}

TEST_CASE("energy audit residual shrinks at second order in dt") {
  BubbleConfig cfg;
  cfg.K = 4;
  cfg.T = 1.0;
  const SteklovOperator P = default_P(4);
  FrameField Z0(4);
  Z0.mode(2) = Vec2c(Complex(0.01, 0.0), Complex(0.0, 0.005));
  Z0.enforce_reality();
  auto max_resid = [&](double dt) {
    BubbleConfig c = cfg;
    c.dt = dt;
    LinearSimOptions opt;
    opt.shifted = false;
    const SimTrajectory traj = simulate_linear(Z0, P, c, opt);
    double m = 0.0;
    for (double r : energy_audit(traj, P, c)) m = std::max(m, std::abs(r));
    return m;
  };
  const double r1 = max_resid(0.05);
  const double r2 = max_resid(0.025);
  CHECK(r1 / r2 == Approx(4.0).epsilon(0.125));  // 4 +- 0.5
}

TEST_CASE("closed shifted loop decays and converts to physical variables") {
  BubbleConfig cfg;
  cfg.K = 6;
  cfg.lambda = 1.0;
  cfg.dt = 0.02;
  cfg.T = 4.0;
  const SteklovOperator P = default_P(6);
  const FeedbackLaw law = build_feedback(P, cfg, cfg.lambda);
  FrameField Z0(6);
  Z0.mode(1) = Vec2c(Complex(0.004, 0.0), Complex(0.0, 0.002));
  Z0.mode(3) = Vec2c(Complex(0.0, 0.003), Complex(0.001, 0.0));
  Z0.enforce_reality();
  LinearSimOptions opt;
  opt.law = &law;
  opt.shifted = true;
  opt.lambda = cfg.lambda;
  const SimTrajectory traj = simulate_linear(Z0, P, cfg, opt);
  // the shifted loop is uniformly bounded (margin < 0)
  CHECK(traj.raw_h2.back() <= traj.raw_h2.front());
  const SimTrajectory phys = to_physical(traj);
  CHECK(phys.raw_h2.back() ==
        Approx(std::exp(-cfg.lambda * cfg.T) * traj.raw_h2.back()).epsilon(1e-12));
  CHECK(decay_fit(phys, false) >= 0.99 * cfg.lambda);
}

TEST_CASE("constant forcing drives the known modal equilibrium") {
  BubbleConfig cfg;
  cfg.K = 4;
  cfg.lambda = 1.0;
  cfg.dt = 0.05;
  cfg.T = 2.0;
  const SteklovOperator P = default_P(4);
  const FeedbackLaw law = build_feedback(P, cfg, cfg.lambda);
  FrameField Z0(4);
  FrameField f(4);
  f.mode(2) = Vec2c(Complex(1e-3, 0.0), Complex(0.0, 5e-4));
  f.enforce_reality();
  LinearSimOptions opt;
  opt.law = &law;
  opt.shifted = true;
  opt.lambda = cfg.lambda;
  opt.forcing = {f};
  const SimTrajectory traj = simulate_linear(Z0, P, cfg, opt);
  const Mat2c M = generator_block(2, P, cfg) + cfg.lambda * Mat2c::Identity() +
                  P.block(2) * law.gain(2);
  // variation of constants from Z(0) = 0 toward the equilibrium -M^{-1} P f
  const Vec2c zeq = -M.inverse() * (P.block(2) * f.mode(2));
  const Vec2c expected = zeq - (cfg.T * M).exp() * zeq;
  CHECK((traj.states.back().mode(2) - expected).norm() <= 1e-12);
}

TEST_CASE("volume source integrates the conserved direction exactly") {
  BubbleConfig cfg;
  cfg.K = 2;
  cfg.lambda = 0.8;
  cfg.dt = 0.1;
  cfg.T = 1.0;
  const SteklovOperator P = default_P(2);
  FrameField Z0(2);
  LinearSimOptions opt;
  opt.shifted = true;
  opt.lambda = cfg.lambda;
  const Complex s(2e-4, 0.0);
  opt.volume_source = {s};
  const SimTrajectory traj = simulate_linear(Z0, P, cfg, opt);
  // dz/dt = lambda z + s with z(0)=0 -> z(T) = s (e^{lambda T} - 1)/lambda
  const Complex expected = s * std::expm1(cfg.lambda * cfg.T) / cfg.lambda;
  CHECK(std::abs(traj.states.back().mode(0)(0) - expected) <= 1e-14);
}

TEST_CASE("input validation") {
  BubbleConfig cfg;
  cfg.K = 2;
  const SteklovOperator P = default_P(2);
  FrameField bad(2);
  bad.mode(0) = Vec2c(0.1, 0.0);  // volume-carrying
  LinearSimOptions opt;
  CHECK_THROWS(simulate_linear(bad, P, cfg, opt));
  FrameField ok(2);
  opt.forcing.assign(3, FrameField(2));  // wrong series length
  CHECK_THROWS(simulate_linear(ok, P, cfg, opt));
  // audit requires physical variables
  opt = LinearSimOptions{};
  opt.shifted = true;
  opt.lambda = 1.0;
  const SimTrajectory traj = simulate_linear(ok, P, cfg, opt);
  CHECK_THROWS(energy_audit(traj, P, cfg));
}
