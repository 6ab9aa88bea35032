#include "bubble/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bubble {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Mat2c laplace_beltrami_block(int k, double R_s) {
  const double kk = static_cast<double>(k);
  Mat2c L;
  L << Complex(-kk * kk - 1.0, 0.0), Complex(0.0, -2.0 * kk),
       Complex(0.0, 2.0 * kk), Complex(-kk * kk - 1.0, 0.0);
  return L / (R_s * R_s);
}

Mat2c surface_gradient_block(int k, double R_s) {
  const Complex ik(0.0, static_cast<double>(k));
  Mat2c D;
  D << ik, Complex(-1.0, 0.0), Complex(1.0, 0.0), ik;
  return D / R_s;
}

std::vector<Eigen::Vector2d> curve_samples(const FrameField& Z, double R_s, int M) {
  auto disp = frame_reconstruct(Z, M);
  for (int j = 0; j < M; ++j) {
    const double th = kTwoPi * j / M;
    disp[static_cast<size_t>(j)] += R_s * Eigen::Vector2d(std::cos(th), std::sin(th));
  }
  return disp;
}

std::vector<double> spectral_derivative(const std::vector<double>& samples) {
  const int M = static_cast<int>(samples.size());
  const int Kmax = (M - 1) / 2;  // ignore the unmatched Nyquist mode for even M
  std::vector<Complex> modes(static_cast<size_t>(2 * Kmax + 1));
  for (int k = -Kmax; k <= Kmax; ++k) {
    Complex acc = 0.0;
    for (int j = 0; j < M; ++j)
      acc += samples[static_cast<size_t>(j)] * std::exp(Complex(0.0, -k * kTwoPi * j / M));
    modes[static_cast<size_t>(k + Kmax)] = acc / static_cast<double>(M);
  }
  std::vector<double> out(static_cast<size_t>(M));
  for (int j = 0; j < M; ++j) {
    Complex acc = 0.0;
    for (int k = -Kmax; k <= Kmax; ++k)
      acc += Complex(0.0, k) * modes[static_cast<size_t>(k + Kmax)] *
             std::exp(Complex(0.0, k * kTwoPi * j / M));
    out[static_cast<size_t>(j)] = acc.real();
  }
  return out;
}

CurveGeometry deformed_geometry(const FrameField& Z, double R_s, int M) {
  if (M < 2 * Z.max_mode() + 4) M = 2 * Z.max_mode() + 4;
  auto pos = curve_samples(Z, R_s, M);
  std::vector<double> x(static_cast<size_t>(M)), y(static_cast<size_t>(M));
  for (int j = 0; j < M; ++j) {
    x[static_cast<size_t>(j)] = pos[static_cast<size_t>(j)].x();
    y[static_cast<size_t>(j)] = pos[static_cast<size_t>(j)].y();
  }
  auto xp = spectral_derivative(x);
  auto yp = spectral_derivative(y);
  auto xpp = spectral_derivative(xp);
  auto ypp = spectral_derivative(yp);

  CurveGeometry geo;
  geo.metric.resize(static_cast<size_t>(M));
  geo.det_g.resize(static_cast<size_t>(M));
  geo.inv_sqrt_det_g.resize(static_cast<size_t>(M));
  geo.curvature.resize(static_cast<size_t>(M));
  geo.tangent.resize(static_cast<size_t>(M));
  geo.normal.resize(static_cast<size_t>(M));
  for (int j = 0; j < M; ++j) {
    const size_t i = static_cast<size_t>(j);
    const double speed2 = xp[i] * xp[i] + yp[i] * yp[i];
    const double speed = std::sqrt(speed2);
    if (speed < 1e-8)
      throw std::runtime_error("deformed_geometry: immersion failure (degenerate tangent)");
    geo.metric[i] = speed2;
    geo.det_g[i] = speed2;
    geo.inv_sqrt_det_g[i] = 1.0 / speed;
    // sign convention: kappa = -1/R for a counterclockwise circle of radius R
    geo.curvature[i] = -(xp[i] * ypp[i] - yp[i] * xpp[i]) / (speed2 * speed);
    geo.tangent[i] = Eigen::Vector2d(xp[i], yp[i]) / speed;
    geo.normal[i] = Eigen::Vector2d(yp[i], -xp[i]) / speed;
  }
  return geo;
}

}  // namespace bubble
