#include "bubble/frame_field.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bubble {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

FrameField::FrameField(int max_mode) : K_(max_mode) {
  if (max_mode < 0) throw std::invalid_argument("FrameField: negative mode cap");
  coeffs_.assign(static_cast<size_t>(2 * K_ + 1), Vec2c::Zero());
}

void FrameField::enforce_reality() {
  mode(0) = Vec2c(Complex(mode(0)(0).real(), 0.0), Complex(mode(0)(1).real(), 0.0));
  for (int k = 1; k <= K_; ++k) {
    Vec2c avg = 0.5 * (mode(k) + mode(-k).conjugate());
    mode(k) = avg;
    mode(-k) = avg.conjugate();
  }
}

double FrameField::reality_defect() const {
  double d = std::abs(mode(0)(0).imag()) + std::abs(mode(0)(1).imag());
  for (int k = 1; k <= K_; ++k)
    d = std::max(d, (mode(k) - mode(-k).conjugate()).cwiseAbs().maxCoeff());
  return d;
}

FrameField FrameField::truncated(int new_max_mode) const {
  FrameField out(new_max_mode);
  for (int k = -std::min(K_, new_max_mode); k <= std::min(K_, new_max_mode); ++k)
    out.mode(k) = mode(k);
  return out;
}

FrameField& FrameField::operator+=(const FrameField& o) {
  if (o.K_ != K_) throw std::invalid_argument("FrameField: mode cap mismatch");
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

FrameField& FrameField::operator-=(const FrameField& o) {
  if (o.K_ != K_) throw std::invalid_argument("FrameField: mode cap mismatch");
  for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

FrameField& FrameField::operator*=(double a) {
  for (auto& c : coeffs_) c *= a;
  return *this;
}

double FrameField::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, c.cwiseAbs().maxCoeff());
  return m;
}

FrameField frame_decompose(const std::vector<Eigen::Vector2d>& samples, int max_mode) {
  const int M = static_cast<int>(samples.size());
  if (M < 2 * max_mode + 2)
    throw std::invalid_argument("frame_decompose: need M >= 2K+2 samples to avoid aliasing");
  FrameField f(max_mode);
  for (int j = 0; j < M; ++j) {
    const double th = kTwoPi * j / M;
    const double c = std::cos(th), s = std::sin(th);
    // frame components: n_s = (c, s), tau_s = (-s, c)
    const double vn = samples[j].x() * c + samples[j].y() * s;
    const double vt = -samples[j].x() * s + samples[j].y() * c;
    for (int k = -max_mode; k <= max_mode; ++k) {
      const Complex w = std::exp(Complex(0.0, -k * th));
      f.mode(k) += Vec2c(vn * w, vt * w);
    }
  }
  for (int k = -max_mode; k <= max_mode; ++k) f.mode(k) /= static_cast<double>(M);
  return f;
}

std::vector<Eigen::Vector2d> frame_reconstruct(const FrameField& f, int M) {
  if (M < 2 * f.max_mode() + 2)
    throw std::invalid_argument("frame_reconstruct: need M >= 2K+2 sample points");
  std::vector<Eigen::Vector2d> out(static_cast<size_t>(M));
  for (int j = 0; j < M; ++j) {
    const double th = kTwoPi * j / M;
    Complex vn = 0.0, vt = 0.0;
    for (int k = -f.max_mode(); k <= f.max_mode(); ++k) {
      const Complex w = std::exp(Complex(0.0, k * th));
      vn += f.mode(k)(0) * w;
      vt += f.mode(k)(1) * w;
    }
    const double c = std::cos(th), s = std::sin(th);
    out[static_cast<size_t>(j)] =
        Eigen::Vector2d(vn.real() * c - vt.real() * s, vn.real() * s + vt.real() * c);
  }
  return out;
}

FrameField rigid_project(const FrameField& f, bool remove_volume) {
  FrameField out = f;
  out.mode(0)(1) = 0.0;  // rotation generator R_s * tau_s occupies (0,1) at k=0
  if (remove_volume) out.mode(0)(0) = 0.0;
  if (f.max_mode() >= 1) {
    // translations: e1 -> (1, i)/sqrt(2) at k=1, conjugate at k=-1
    const Vec2c t(Complex(1.0, 0.0) / std::sqrt(2.0), Complex(0.0, 1.0) / std::sqrt(2.0));
    out.mode(1) -= t.dot(out.mode(1)) * t;
    const Vec2c tc = t.conjugate();
    out.mode(-1) -= tc.dot(out.mode(-1)) * tc;
  }
  return out;
}

double sobolev_norm(const FrameField& f, double s, double R_s) {
  double sum = 0.0;
  for (int k = -f.max_mode(); k <= f.max_mode(); ++k) {
    const double w = std::pow(1.0 + (k / R_s) * (k / R_s), s);
    sum += w * f.mode(k).squaredNorm();
  }
  return std::sqrt(kTwoPi * R_s * sum);
}

double quotient_sobolev_norm(const FrameField& f, double s, double R_s) {
  return sobolev_norm(rigid_project(f, /*remove_volume=*/false), s, R_s);
}

double surface_gradient_norm_sq(const FrameField& f, double R_s) {
  // arclength derivative of (z_n n + z_tau tau) e^{ik theta}:
  // modes (ik z_n - z_tau, ik z_tau + z_n) / R_s
  double sum = 0.0;
  for (int k = -f.max_mode(); k <= f.max_mode(); ++k) {
    const Complex ik(0.0, static_cast<double>(k));
    const Vec2c d(ik * f.mode(k)(0) - f.mode(k)(1), ik * f.mode(k)(1) + f.mode(k)(0));
    sum += d.squaredNorm();
  }
  return kTwoPi * R_s * sum / (R_s * R_s);
}

double l2_pairing(const FrameField& a, const FrameField& b, double R_s) {
  const int K = std::min(a.max_mode(), b.max_mode());
  double sum = 0.0;
  for (int k = -K; k <= K; ++k) sum += a.mode(k).dot(b.mode(k)).real();
  return kTwoPi * R_s * sum;
}

}  // namespace bubble
