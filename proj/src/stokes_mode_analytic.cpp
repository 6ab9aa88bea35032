#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bubble/stokes_mode.hpp"

namespace bubble {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Complex kI(0.0, 1.0);

// Profile of a single unit-coefficient basis element at radius r.
RadialPoint eval_term(const AnalyticTerm& t, int k, double nu, double r) {
  RadialPoint out;
  switch (t.kind) {
    case AnalyticTerm::Power: {
      const double F = std::pow(r / t.r_ref, t.m);
      const Complex ik = kI * static_cast<double>(k);
      out.u_r = ik * F / r;
      out.u_th = -t.m * F / r;
      out.du_r = ik * (t.m - 1.0) * F / (r * r);
      out.du_th = -t.m * (t.m - 1.0) * F / (r * r);
      if (k >= 1 && t.m == static_cast<double>(k + 2))
        out.p = 4.0 * kI * nu * (k + 1.0) * F / (r * r);
      else if (k >= 2 && t.m == static_cast<double>(-k + 2))
        out.p = 4.0 * kI * nu * (k - 1.0) * F / (r * r);
      break;
    }
    case AnalyticTerm::RLogR: {  // k = 1 only: psi = r log r
      const double lr = std::log(r);
      out.u_r = kI * lr;
      out.u_th = -(lr + 1.0);
      out.du_r = kI / r;
      out.du_th = -1.0 / r;
      out.p = -2.0 * kI * nu / r;
      break;
    }
    case AnalyticTerm::LogR: {  // k = 0 only: psi = log r
      out.u_th = -1.0 / r;
      out.du_th = 1.0 / (r * r);
      break;
    }
  }
  return out;
}

Vec2c term_traction(const RadialPoint& q, int k, double nu, double r) {
  const Complex ik = kI * static_cast<double>(k);
  const Complex t_n = 2.0 * nu * q.du_r - q.p;
  const Complex t_t = nu * ((ik / r) * q.u_r + q.du_th - q.u_th / r);
  return Vec2c(t_n, t_t);
}

std::vector<AnalyticTerm> inner_basis(int k, double R_s) {
  std::vector<AnalyticTerm> b;
  if (k == 0) {
    b.push_back({AnalyticTerm::Power, 2.0, R_s, 1.0});  // rigid rotation
  } else if (k == 1) {
    b.push_back({AnalyticTerm::Power, 1.0, R_s, 1.0});  // translation
    b.push_back({AnalyticTerm::Power, 3.0, R_s, 1.0});
  } else {
    b.push_back({AnalyticTerm::Power, static_cast<double>(k), R_s, 1.0});
    b.push_back({AnalyticTerm::Power, static_cast<double>(k + 2), R_s, 1.0});
  }
  return b;
}

std::vector<AnalyticTerm> outer_basis(int k, double R_s, double R_out) {
  std::vector<AnalyticTerm> b;
  if (k == 0) {
    b.push_back({AnalyticTerm::Power, 2.0, R_out, 1.0});
    b.push_back({AnalyticTerm::LogR, 0.0, 1.0, 1.0});
  } else if (k == 1) {
    b.push_back({AnalyticTerm::Power, 1.0, R_out, 1.0});
    b.push_back({AnalyticTerm::Power, 3.0, R_out, 1.0});
    b.push_back({AnalyticTerm::Power, -1.0, R_s, 1.0});
    b.push_back({AnalyticTerm::RLogR, 0.0, 1.0, 1.0});
  } else {
    b.push_back({AnalyticTerm::Power, static_cast<double>(k), R_out, 1.0});
    b.push_back({AnalyticTerm::Power, static_cast<double>(k + 2), R_out, 1.0});
    b.push_back({AnalyticTerm::Power, static_cast<double>(-k), R_s, 1.0});
    b.push_back({AnalyticTerm::Power, static_cast<double>(-k + 2), R_s, 1.0});
  }
  return b;
}

// 64-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(static_cast<size_t>(n));
  w.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      const double dp = n * (t * p0 - p1) / (t * t - 1.0);
      const double dt = -p0 / dp;
      t += dt;
      if (std::abs(dt) < 1e-15) {
        x[static_cast<size_t>(i)] = t;
        w[static_cast<size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
        break;
      }
    }
  }
}

Eigen::VectorXcd solve_equilibrated(Eigen::MatrixXcd A, Eigen::VectorXcd rhs) {
  for (int i = 0; i < A.rows(); ++i) {
    const double s = A.row(i).cwiseAbs().maxCoeff();
    if (s > 0.0) {
      A.row(i) /= s;
      rhs(i) /= s;
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
  if (lu.rank() < A.rows())
    throw std::runtime_error("solve_mode_analytic: singular coupling matrix (ill-posed mode)");
  return lu.solve(rhs);
}

}  // namespace

RadialPoint ModeFlowSolution::eval_analytic(bool inner, double r) const {
  const auto& terms = inner ? terms_inner : terms_outer;
  RadialPoint acc;
  for (const auto& t : terms) {
    const RadialPoint q = eval_term(t, nu_mode, nu_visc, r);
    acc.u_r += t.coeff * q.u_r;
    acc.u_th += t.coeff * q.u_th;
    acc.du_r += t.coeff * q.du_r;
    acc.du_th += t.coeff * q.du_th;
    acc.p += t.coeff * q.p;
  }
  acc.p += inner ? p_const_inner : p_const_outer;
  return acc;
}

namespace {

double side_strain_energy(const ModeFlowSolution& s, bool inner, const BubbleConfig& cfg) {
  static std::vector<double> gx, gw;
  if (gx.empty()) gauss_legendre(64, gx, gw);
  const double a = inner ? 0.0 : cfg.R_s;
  const double b = inner ? cfg.R_s : cfg.R_out;
  const Complex ik = kI * static_cast<double>(s.k);
  double acc = 0.0;
  for (size_t i = 0; i < gx.size(); ++i) {
    const double r = 0.5 * (a + b) + 0.5 * (b - a) * gx[i];
    const RadialPoint q = s.eval_analytic(inner, r);
    const Complex e_rr = q.du_r;
    const Complex e_tt = (ik * q.u_th + q.u_r) / r;
    const Complex e_rt = 0.5 * ((ik / r) * q.u_r + q.du_th - q.u_th / r);
    acc += gw[i] * (std::norm(e_rr) + std::norm(e_tt) + 2.0 * std::norm(e_rt)) * r;
  }
  return 2.0 * cfg.nu * kTwoPi * 0.5 * (b - a) * acc;
}

}  // namespace

ModeFlowSolution solve_mode_analytic(const ModeProblem& p, const BubbleConfig& cfg) {
  if (p.k < 0) throw std::invalid_argument("solve_mode_analytic: k must be >= 0");
  if (p.has_forcing())
    throw std::invalid_argument("solve_mode_analytic: analytic backend is unforced");
  cfg.validate();
  const int k = p.k;
  const double nu = cfg.nu, R_s = cfg.R_s, R_out = cfg.R_out;

  ModeFlowSolution sol;
  sol.k = k;
  sol.nu_mode = k;
  sol.nu_visc = nu;
  sol.terms_inner = inner_basis(k, R_s);
  sol.terms_outer = outer_basis(k, R_s, R_out);
  const int ni = static_cast<int>(sol.terms_inner.size());
  const int no = static_cast<int>(sol.terms_outer.size());

  auto q_in = [&](int j, double r) { return eval_term(sol.terms_inner[static_cast<size_t>(j)], k, nu, r); };
  auto q_out = [&](int j, double r) { return eval_term(sol.terms_outer[static_cast<size_t>(j)], k, nu, r); };

  if (p.dirichlet) {
    const Vec2c d = *p.dirichlet;
    if (k == 0 && std::abs(d(0)) > 1e-13)
      throw std::runtime_error(
          "solve_mode_analytic: k=0 normal Dirichlet trace conflicts with incompressibility");
    // inner: match the trace at R_s
    {
      Eigen::MatrixXcd A(ni, ni);
      Eigen::VectorXcd rhs(ni);
      if (k == 0) {
        A(0, 0) = q_in(0, R_s).u_th;
        rhs(0) = d(1);
      } else {
        for (int j = 0; j < ni; ++j) {
          A(0, j) = q_in(j, R_s).u_r;
          A(1, j) = q_in(j, R_s).u_th;
        }
        rhs(0) = d(0);
        rhs(1) = d(1);
      }
      const Eigen::VectorXcd c = solve_equilibrated(A, rhs);
      for (int j = 0; j < ni; ++j) sol.terms_inner[static_cast<size_t>(j)].coeff = c(j);
    }
    // outer: no-slip at the wall plus the trace at R_s
    {
      Eigen::MatrixXcd A(no, no);
      Eigen::VectorXcd rhs(no);
      if (k == 0) {
        A(0, 0) = q_out(0, R_out).u_th;
        A(0, 1) = q_out(1, R_out).u_th;
        A(1, 0) = q_out(0, R_s).u_th;
        A(1, 1) = q_out(1, R_s).u_th;
        rhs(0) = 0.0;
        rhs(1) = d(1);
      } else {
        for (int j = 0; j < no; ++j) {
          A(0, j) = q_out(j, R_out).u_r;
          A(1, j) = q_out(j, R_out).u_th;
          A(2, j) = q_out(j, R_s).u_r;
          A(3, j) = q_out(j, R_s).u_th;
        }
        rhs << 0.0, 0.0, d(0), d(1);
      }
      const Eigen::VectorXcd c = solve_equilibrated(A, rhs);
      for (int j = 0; j < no; ++j) sol.terms_outer[static_cast<size_t>(j)].coeff = c(j);
    }
    sol.trace = d;
  } else if (k == 0) {
    // transmission, mode 0: tangential system + pressure constants
    Eigen::MatrixXcd A(3, 3);
    Eigen::VectorXcd rhs(3);
    A.setZero();
    A(0, 1) = q_out(0, R_out).u_th;
    A(0, 2) = q_out(1, R_out).u_th;
    A(1, 0) = q_in(0, R_s).u_th;
    A(1, 1) = -q_out(0, R_s).u_th;
    A(1, 2) = -q_out(1, R_s).u_th;
    A(2, 0) = -term_traction(q_in(0, R_s), k, nu, R_s)(1);
    A(2, 1) = term_traction(q_out(0, R_s), k, nu, R_s)(1);
    A(2, 2) = term_traction(q_out(1, R_s), k, nu, R_s)(1);
    rhs << 0.0, 0.0, -p.jump(1);
    const Eigen::VectorXcd c = solve_equilibrated(A, rhs);
    sol.terms_inner[0].coeff = c(0);
    sol.terms_outer[0].coeff = c(1);
    sol.terms_outer[1].coeff = c(2);
    sol.p_const_outer = 0.0;           // gauge
    sol.p_const_inner = -p.jump(0);    // normal jump carried by the pressures
    sol.pressure_jump0 = p.jump(0);    // [p] = p+ - p-
    sol.trace = Vec2c(0.0, sol.eval_analytic(true, R_s).u_th);
  } else {
    // transmission, k >= 1: continuity + traction jump + wall no-slip
    const int n = ni + no;
    Eigen::MatrixXcd A(n, n);
    Eigen::VectorXcd rhs(n);
    A.setZero();
    rhs.setZero();
    for (int j = 0; j < no; ++j) {
      const RadialPoint qw = q_out(j, R_out);
      A(0, ni + j) = qw.u_r;
      A(1, ni + j) = qw.u_th;
      const RadialPoint qs = q_out(j, R_s);
      A(2, ni + j) = -qs.u_r;
      A(3, ni + j) = -qs.u_th;
      const Vec2c t = term_traction(qs, k, nu, R_s);
      A(4, ni + j) = t(0);
      A(5, ni + j) = t(1);
    }
    for (int j = 0; j < ni; ++j) {
      const RadialPoint qs = q_in(j, R_s);
      A(2, j) = qs.u_r;
      A(3, j) = qs.u_th;
      const Vec2c t = term_traction(qs, k, nu, R_s);
      A(4, j) = -t(0);
      A(5, j) = -t(1);
    }
    rhs(4) = -p.jump(0);
    rhs(5) = -p.jump(1);
    const Eigen::VectorXcd c = solve_equilibrated(A, rhs);
    for (int j = 0; j < ni; ++j) sol.terms_inner[static_cast<size_t>(j)].coeff = c(j);
    for (int j = 0; j < no; ++j) sol.terms_outer[static_cast<size_t>(j)].coeff = c(ni + j);
    const RadialPoint tr = sol.eval_analytic(true, R_s);
    sol.trace = Vec2c(tr.u_r, tr.u_th);
  }

  {
    const RadialPoint qi = sol.eval_analytic(true, R_s);
    const RadialPoint qo = sol.eval_analytic(false, R_s);
    sol.traction_inner = term_traction(qi, k, nu, R_s);
    sol.traction_outer = term_traction(qo, k, nu, R_s);
  }
  sol.strain_energy_inner = side_strain_energy(sol, true, cfg);
  sol.strain_energy_outer = side_strain_energy(sol, false, cfg);
  return sol;
}

std::pair<double, double> strain_energy(const ModeFlowSolution& s) {
  return {s.strain_energy_outer, s.strain_energy_inner};
}

}  // namespace bubble
