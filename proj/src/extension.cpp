#include "bubble/extension.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace bubble {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

ExtensionField::ExtensionField(int max_cart_mode, double R_s, double R_out)
    : M_(max_cart_mode), R_s_(R_s), R_out_(R_out) {
  if (max_cart_mode < 0 || R_s <= 0.0 || R_out <= R_s)
    throw std::invalid_argument("ExtensionField: invalid geometry");
  inner_.assign(static_cast<size_t>(2 * M_ + 1), Complex(0.0));
  alpha_.assign(static_cast<size_t>(2 * M_ + 1), Complex(0.0));
  beta_.assign(static_cast<size_t>(2 * M_ + 1), Complex(0.0));
}

size_t ExtensionField::idx(int m) const {
  if (std::abs(m) > M_) throw std::out_of_range("ExtensionField: mode out of range");
  return static_cast<size_t>(m + M_);
}

void ExtensionField::profile(int m, double r, bool inner, Complex& g, Complex& dg,
                             Complex& g_over_r) const {
  const int a = std::abs(m);
  if (inner) {
    const Complex c = inner_[idx(m)];
    // c (r/R_s)^{|m|}; written with r^{|m|-1} factors so r -> 0 stays regular
    const double s = std::pow(R_s_, a);
    const double rp1 = a >= 1 ? std::pow(r, a - 1) : 0.0;
    g = a == 0 ? c : c * rp1 * r / s;
    dg = a == 0 ? Complex(0.0) : c * static_cast<double>(a) * rp1 / s;
    g_over_r = a == 0 ? c / r : c * rp1 / s;
    return;
  }
  const Complex al = alpha_[idx(m)], be = beta_[idx(m)];
  if (a == 0) {
    g = al + be * std::log(r);
    dg = be / r;
    g_over_r = g / r;
    return;
  }
  const double rp = std::pow(r, a), rm = std::pow(r, -a);
  g = al * rp + be * rm;
  dg = (al * static_cast<double>(a) * rp - be * static_cast<double>(a) * rm) / r;
  g_over_r = g / r;
}

Eigen::Vector2d ExtensionField::displacement(double r, double theta) const {
  const bool inner = r <= R_s_;
  Complex w = 0.0;
  for (int m = -M_; m <= M_; ++m) {
    Complex g, dg, gr;
    profile(m, r, inner, g, dg, gr);
    w += g * std::exp(Complex(0.0, m * theta));
  }
  return Eigen::Vector2d(w.real(), w.imag());
}

Eigen::Matrix2d ExtensionField::grad_displacement(double r, double theta) const {
  const bool inner = r <= R_s_;
  const double c = std::cos(theta), s = std::sin(theta);
  Complex dwx = 0.0, dwy = 0.0;
  for (int m = -M_; m <= M_; ++m) {
    Complex g, dg, gr;
    profile(m, r, inner, g, dg, gr);
    const Complex ph = std::exp(Complex(0.0, m * theta));
    const Complex im(0.0, static_cast<double>(m));
    dwx += ph * (dg * c - im * gr * s);
    dwy += ph * (dg * s + im * gr * c);
  }
  Eigen::Matrix2d G;
  G << dwx.real(), dwy.real(), dwx.imag(), dwy.imag();
  return G;
}

double ExtensionField::jacobian_det(double r, double theta) const {
  return (Eigen::Matrix2d::Identity() + grad_displacement(r, theta)).determinant();
}

double ExtensionField::harmonic_residual() const {
  double res = 0.0;
  const int n = 24;
  for (int m = -M_; m <= M_; ++m) {
    for (int j = 0; j < n; ++j) {
      // inner samples away from the origin, annulus samples across its span
      const double ri = R_s_ * (j + 1.0) / n;
      const double ro = R_s_ + (R_out_ - R_s_) * (j + 0.5) / n;
      for (bool inner : {true, false}) {
        const double r = inner ? ri : ro;
        Complex g, dg, gr;
        profile(m, r, inner, g, dg, gr);
        // second derivative in closed form per term
        const int a = std::abs(m);
        Complex d2g;
        if (inner) {
          d2g = a >= 2 ? inner_[idx(m)] * static_cast<double>(a) * (a - 1.0) *
                             std::pow(r, a - 2) / std::pow(R_s_, a)
                       : Complex(0.0);
        } else if (a == 0) {
          d2g = -beta_[idx(m)] / (r * r);
        } else {
          d2g = (alpha_[idx(m)] * static_cast<double>(a) * (a - 1.0) * std::pow(r, a) +
                 beta_[idx(m)] * static_cast<double>(a) * (a + 1.0) * std::pow(r, -a)) /
                (r * r);
        }
        const Complex lap = d2g + dg / r - static_cast<double>(a) * static_cast<double>(a) * gr / r;
        res = std::max(res, std::abs(lap));
      }
    }
  }
  return res;
}

ExtensionField harmonic_extend(const FrameField& Z_boundary, const BubbleConfig& cfg) {
  cfg.validate();
  const int K = Z_boundary.max_mode();
  ExtensionField E(K + 1, cfg.R_s, cfg.R_out);
  for (int k = -K; k <= K; ++k) {
    const int m = k + 1;  // Cartesian index shift: (n + i tau) e^{ik theta} = e^{i(k+1) theta}
    const Complex a = Z_boundary.mode(k)(0) + Complex(0.0, 1.0) * Z_boundary.mode(k)(1);
    E.inner_coeff(m) += a;
    const int q = std::abs(m);
    if (q == 0) {
      // alpha + beta log r with data (a at R_s, 0 at R_out)
      const double d = std::log(cfg.R_s) - std::log(cfg.R_out);
      const Complex be = a / d;
      E.annulus_beta(m) += be;
      E.annulus_alpha(m) += -be * std::log(cfg.R_out);
    } else {
      const double rs_p = std::pow(cfg.R_s, q), rs_m = std::pow(cfg.R_s, -q);
      const double ro_m2 = std::pow(cfg.R_out, -2.0 * q);
      const Complex be = a / (rs_m - rs_p * ro_m2);
      E.annulus_beta(m) += be;
      E.annulus_alpha(m) += -be * ro_m2;
    }
  }
  return E;
}

double min_det(const ExtensionField& E, int n_r, int n_theta) {
  double md = std::numeric_limits<double>::infinity();
  const double R_s = E.interface_radius(), R_out = E.wall_radius();
  for (int j = 0; j < n_theta; ++j) {
    const double th = kTwoPi * j / n_theta;
    for (int i = 0; i < n_r; ++i) {
      const double ri = R_s * (i + 0.5) / n_r;
      const double ro = R_s + (R_out - R_s) * (i + 0.5) / n_r;
      md = std::min(md, E.jacobian_det(ri, th));
      md = std::min(md, E.jacobian_det(ro, th));
    }
    md = std::min(md, E.jacobian_det(R_s, th));
  }
  return md;
}

InverseJacobianReport inverse_jacobian(const ExtensionField& E, int n_r, int n_theta) {
  InverseJacobianReport rep;
  rep.min_det = min_det(E, n_r, n_theta);
  if (rep.min_det < 0.05)
    throw std::runtime_error("inverse_jacobian: Jacobian determinant below the 0.05 threshold");
  const double R_s = E.interface_radius(), R_out = E.wall_radius();
  for (int j = 0; j < n_theta; ++j) {
    const double th = kTwoPi * j / n_theta;
    for (int i = 0; i <= n_r; ++i) {
      for (const double r : {R_s * (i + 0.5) / n_r, R_s + (R_out - R_s) * (i + 0.5) / n_r}) {
        if (r > R_out) continue;
        const Eigen::Matrix2d G = E.grad_displacement(r, th);
        const Eigen::Matrix2d J = Eigen::Matrix2d::Identity() + G;
        const Eigen::Matrix2d D = J.inverse() - Eigen::Matrix2d::Identity();
        rep.sup_grad_minus_id = std::max(rep.sup_grad_minus_id, G.norm());
        rep.sup_inv_minus_id = std::max(rep.sup_inv_minus_id, D.norm());
      }
    }
  }
  rep.neumann_bound_holds =
      rep.sup_grad_minus_id < 1.0 &&
      rep.sup_inv_minus_id <=
          rep.sup_grad_minus_id / (1.0 - rep.sup_grad_minus_id) + 1e-12;
  return rep;
}

}  // namespace bubble
