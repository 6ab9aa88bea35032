#include "bubble/evolve.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "bubble/geometry.hpp"

namespace bubble {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// e^{dt M} and the forcing propagator dt*phi_1(dt M), computed together from
// the exponential of the augmented block matrix [[dt M, dt I], [0, 0]].
void propagators(const Mat2c& M, double dt, Mat2c& E, Mat2c& Phi) {
  Eigen::Matrix<Complex, 4, 4> aug = Eigen::Matrix<Complex, 4, 4>::Zero();
  aug.topLeftCorner<2, 2>() = dt * M;
  aug.topRightCorner<2, 2>() = dt * Mat2c::Identity();
  const Eigen::Matrix<Complex, 4, 4> X = aug.exp();
  E = X.topLeftCorner<2, 2>();
  Phi = X.topRightCorner<2, 2>();
}

}  // namespace

SimTrajectory simulate_linear(const FrameField& Z0, const SteklovOperator& P,
                              const BubbleConfig& cfg, const LinearSimOptions& opt) {
  cfg.validate();
  if (std::abs(Z0.mode(0)(0)) > 1e-12)
    throw std::invalid_argument("simulate_linear: Z0 is not volume-free (project it first)");
  const int K = std::min(Z0.max_mode(), P.max_mode());
  const int n_steps = static_cast<int>(std::llround(cfg.T / cfg.dt));
  if (n_steps < 1) throw std::invalid_argument("simulate_linear: T/dt yields no steps");
  if (!opt.forcing.empty() && opt.forcing.size() != 1 &&
      static_cast<int>(opt.forcing.size()) != n_steps)
    throw std::invalid_argument("simulate_linear: forcing series length must be 1 or T/dt");
  if (!opt.volume_source.empty() && opt.volume_source.size() != 1 &&
      static_cast<int>(opt.volume_source.size()) != n_steps)
    throw std::invalid_argument("simulate_linear: volume-source series length must be 1 or T/dt");

  const double lambda = opt.shifted ? opt.lambda : 0.0;
  // per-mode closed-loop generator and propagators (k >= 0; negatives conjugate)
  std::vector<Mat2c> M(static_cast<size_t>(K + 1)), E(static_cast<size_t>(K + 1)),
      Phi(static_cast<size_t>(K + 1)), Pb(static_cast<size_t>(K + 1));
  for (int k = 0; k <= K; ++k) {
    Mat2c Mk = generator_block(k, P, cfg) + lambda * Mat2c::Identity();
    if (opt.law) Mk += P.block(k) * opt.law->gain(k);
    M[static_cast<size_t>(k)] = Mk;
    propagators(Mk, cfg.dt, E[static_cast<size_t>(k)], Phi[static_cast<size_t>(k)]);
    Pb[static_cast<size_t>(k)] = P.block(k);
  }
  auto blk = [&](const std::vector<Mat2c>& v, int k) -> Mat2c {
    return k >= 0 ? v[static_cast<size_t>(k)] : v[static_cast<size_t>(-k)].conjugate();
  };

  SimTrajectory traj;
  traj.shifted = opt.shifted;
  traj.lambda = lambda;

  FrameField Z = Z0.truncated(K);
  Z.enforce_reality();
  auto record = [&](double t, const FrameField& state) {
    traj.times.push_back(t);
    traj.states.push_back(state);
    FrameField g(K);
    if (opt.law) g = opt.law->apply(state);
    traj.controls.push_back(g);
    traj.raw_h2.push_back(sobolev_norm(state, 2.0, cfg.R_s));
    traj.quotient_h2.push_back(quotient_sobolev_norm(state, 2.0, cfg.R_s));
    traj.grad_norm_sq.push_back(surface_gradient_norm_sq(state, cfg.R_s));
    FrameField G(K);
    for (int k = -K; k <= K; ++k)
      G.mode(k) = cfg.mu * laplace_beltrami_block(k, cfg.R_s) * state.mode(k) + g.mode(k);
    traj.dissipation.push_back(P.quadratic_form(G));
    if (!std::isfinite(traj.raw_h2.back()))
      throw std::runtime_error("simulate_linear: divergence at step " +
                               std::to_string(traj.times.size() - 1));
  };
  record(0.0, Z);

  for (int j = 0; j < n_steps; ++j) {
    FrameField f_mid(K);
    if (!opt.forcing.empty()) {
      const FrameField& src = opt.forcing.size() == 1 ? opt.forcing.front()
                                                      : opt.forcing[static_cast<size_t>(j)];
      f_mid = src.truncated(K);
    }
    traj.forcing_mid.push_back(f_mid);
    FrameField Znext(K);
    for (int k = -K; k <= K; ++k)
      Znext.mode(k) = blk(E, k) * Z.mode(k) + blk(Phi, k) * (blk(Pb, k) * f_mid.mode(k));
    if (!opt.volume_source.empty()) {
      // the conserved direction only sees the lambda shift and the net flux,
      // integrated exactly over the step
      const Complex s = opt.volume_source.size() == 1 ? opt.volume_source.front()
                                                      : opt.volume_source[static_cast<size_t>(j)];
      const double phi = lambda != 0.0 ? std::expm1(lambda * cfg.dt) / lambda : cfg.dt;
      Znext.mode(0)(0) += phi * s;
    }
    Z = Znext;
    Z.enforce_reality();
    record((j + 1) * cfg.dt, Z);
  }
  return traj;
}

SimTrajectory to_physical(const SimTrajectory& traj) {
  if (!traj.shifted) return traj;
  SimTrajectory out = traj;
  out.shifted = false;
  for (size_t j = 0; j < out.times.size(); ++j) {
    const double w = std::exp(-traj.lambda * out.times[j]);
    out.states[j] *= w;
    out.controls[j] *= w;
    out.raw_h2[j] *= w;
    out.quotient_h2[j] *= w;
    out.grad_norm_sq[j] *= w * w;
    out.dissipation[j] *= w * w;
  }
  for (size_t j = 0; j + 1 < out.times.size(); ++j) {
    const double w = std::exp(-traj.lambda * 0.5 * (out.times[j] + out.times[j + 1]));
    if (j < out.forcing_mid.size()) out.forcing_mid[j] *= w;
  }
  return out;
}

std::vector<double> energy_audit(const SimTrajectory& traj, const SteklovOperator& P,
                                 const BubbleConfig& cfg) {
  if (traj.shifted)
    throw std::invalid_argument("energy_audit: convert to physical variables first");
  std::vector<double> res;
  const int n = static_cast<int>(traj.times.size());
  for (int j = 0; j + 1 < n; ++j) {
    const double dt = traj.times[static_cast<size_t>(j + 1)] - traj.times[static_cast<size_t>(j)];
    FrameField Zmid = traj.states[static_cast<size_t>(j)];
    Zmid += traj.states[static_cast<size_t>(j + 1)];
    Zmid *= 0.5;
    FrameField gmid = traj.controls[static_cast<size_t>(j)];
    gmid += traj.controls[static_cast<size_t>(j + 1)];
    gmid *= 0.5;
    if (j < static_cast<int>(traj.forcing_mid.size()))
      gmid += traj.forcing_mid[static_cast<size_t>(j)].truncated(gmid.max_mode());
    const int K = Zmid.max_mode();
    FrameField G(K);
    for (int k = -K; k <= K; ++k)
      G.mode(k) = cfg.mu * laplace_beltrami_block(k, cfg.R_s) * Zmid.mode(k) + gmid.mode(k);
    const double dissipation = P.quadratic_form(G);
    // <g, u> with u = P G
    double pairing = 0.0;
    for (int k = -K; k <= K; ++k)
      pairing += gmid.mode(k).dot(P.block(k) * G.mode(k)).real();
    pairing *= kTwoPi * cfg.R_s;
    const double dE = 0.5 * cfg.mu *
                      (traj.grad_norm_sq[static_cast<size_t>(j + 1)] -
                       traj.grad_norm_sq[static_cast<size_t>(j)]) /
                      dt;
    res.push_back(dE + dissipation - pairing);
  }
  return res;
}

double decay_fit(const SimTrajectory& traj, bool quotient) {
  const auto& norms = quotient ? traj.quotient_h2 : traj.raw_h2;
  std::vector<double> ts, ys;
  for (size_t j = 0; j < norms.size(); ++j) {
    if (norms[j] > 1e-12) {
      ts.push_back(traj.times[j]);
      ys.push_back(std::log(norms[j]));
    }
  }
  if (ts.size() < 10)
    throw std::runtime_error("decay_fit: too few nonzero samples for a rate estimate");
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double n = static_cast<double>(ts.size());
  for (size_t j = 0; j < ts.size(); ++j) {
    st += ts[j];
    sy += ys[j];
    stt += ts[j] * ts[j];
    sty += ts[j] * ys[j];
  }
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  return -slope;
}

}  // namespace bubble
