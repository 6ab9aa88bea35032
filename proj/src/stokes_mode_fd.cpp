#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "bubble/stokes_mode.hpp"

namespace bubble {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Complex kI(0.0, 1.0);

using SpMat = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

Complex at(const std::vector<Complex>& v, int i) {
  return v.empty() ? Complex(0.0) : v[static_cast<size_t>(i)];
}

void check_len(const std::vector<Complex>& v, size_t n, const char* name) {
  if (!v.empty() && v.size() != n)
    throw std::invalid_argument(std::string("solve_mode_fd: bad length for ") + name);
}

// One-sided / central second-order radial derivative of equispaced samples.
std::vector<Complex> radial_diff(const std::vector<Complex>& u, double h) {
  const int n = static_cast<int>(u.size());
  std::vector<Complex> d(static_cast<size_t>(n));
  d[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
  for (int i = 1; i < n - 1; ++i)
    d[static_cast<size_t>(i)] =
        (u[static_cast<size_t>(i + 1)] - u[static_cast<size_t>(i - 1)]) / (2.0 * h);
  d[static_cast<size_t>(n - 1)] =
      (3.0 * u[static_cast<size_t>(n - 1)] - 4.0 * u[static_cast<size_t>(n - 2)] +
       u[static_cast<size_t>(n - 3)]) /
      (2.0 * h);
  return d;
}

double side_energy_fd(const std::vector<double>& r, const std::vector<Complex>& ur,
                      const std::vector<Complex>& uth, int k, double nu, bool from_origin) {
  const int n = static_cast<int>(r.size());
  const double h = r[1] - r[0];
  const auto dur = radial_diff(ur, h);
  const auto duth = radial_diff(uth, h);
  const Complex ik = kI * static_cast<double>(k);
  std::vector<double> f(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const size_t j = static_cast<size_t>(i);
    const Complex e_rr = dur[j];
    const Complex e_tt = (ik * uth[j] + ur[j]) / r[j];
    const Complex e_rt = 0.5 * ((ik / r[j]) * ur[j] + duth[j] - uth[j] / r[j]);
    f[j] = (std::norm(e_rr) + std::norm(e_tt) + 2.0 * std::norm(e_rt)) * r[j];
  }
  double acc = 0.0;
  for (int i = 0; i + 1 < n; ++i)
    acc += 0.5 * h * (f[static_cast<size_t>(i)] + f[static_cast<size_t>(i + 1)]);
  if (from_origin) acc += 0.5 * r[0] * f[0];  // [0, r_0] segment; integrand vanishes at r = 0
  return 2.0 * nu * kTwoPi * acc;
}

// Traction components at R_s from one-sided data:
// t_n = 2 nu u_r' - p,  t_tau = nu ((ik/r) u_r + u_th' - u_th / r).
struct SideTrace {
  Complex ur, uth, dur, duth, p;
};

Vec2c traction_of(const SideTrace& s, int k, double nu, double R_s) {
  const Complex ik = kI * static_cast<double>(k);
  return Vec2c(2.0 * nu * s.dur - s.p,
               nu * ((ik / R_s) * s.ur + s.duth - s.uth / R_s));
}

SideTrace inner_side(const ModeFlowSolution& sol, const FdGrid& g, int N) {
  SideTrace s;
  const double h = g.dr;
  s.ur = sol.ur_inner[static_cast<size_t>(N - 1)];
  s.uth = sol.uth_inner[static_cast<size_t>(N - 1)];
  s.dur = (3.0 * sol.ur_inner[static_cast<size_t>(N - 1)] -
           4.0 * sol.ur_inner[static_cast<size_t>(N - 2)] +
           sol.ur_inner[static_cast<size_t>(N - 3)]) /
          (2.0 * h);
  s.duth = (3.0 * sol.uth_inner[static_cast<size_t>(N - 1)] -
            4.0 * sol.uth_inner[static_cast<size_t>(N - 2)] +
            sol.uth_inner[static_cast<size_t>(N - 3)]) /
           (2.0 * h);
  s.p = 1.5 * sol.p_inner[static_cast<size_t>(N - 1)] - 0.5 * sol.p_inner[static_cast<size_t>(N - 2)];
  return s;
}

SideTrace outer_side(const ModeFlowSolution& sol, const FdGrid& g) {
  SideTrace s;
  const double h = g.dr;
  s.ur = sol.ur_outer[0];
  s.uth = sol.uth_outer[0];
  s.dur = (-3.0 * sol.ur_outer[0] + 4.0 * sol.ur_outer[1] - sol.ur_outer[2]) / (2.0 * h);
  s.duth = (-3.0 * sol.uth_outer[0] + 4.0 * sol.uth_outer[1] - sol.uth_outer[2]) / (2.0 * h);
  s.p = 1.5 * sol.p_outer[0] - 0.5 * sol.p_outer[1];
  return s;
}

double divergence_residual(const ModeFlowSolution& sol, const ModeProblem& p, const FdGrids& g,
                           int N) {
  const Complex ik = kI * static_cast<double>(p.k);
  double res = 0.0;
  const double di = g.inner.dr;
  if (p.k == 0)
    res = std::max(res, std::abs(4.0 * sol.ur_inner[0] / di - at(p.div_inner, 0)));
  for (int j = 1; j < N; ++j) {
    const double rp = g.inner.p_r[static_cast<size_t>(j)];
    const Complex r1 = g.inner.vel_r[static_cast<size_t>(j)] * sol.ur_inner[static_cast<size_t>(j)];
    const Complex r0 =
        g.inner.vel_r[static_cast<size_t>(j - 1)] * sol.ur_inner[static_cast<size_t>(j - 1)];
    const Complex avg =
        0.5 * (sol.uth_inner[static_cast<size_t>(j)] + sol.uth_inner[static_cast<size_t>(j - 1)]);
    res = std::max(res,
                   std::abs((r1 - r0) / (rp * di) + (ik / rp) * avg - at(p.div_inner, j)));
  }
  const double do_ = g.outer.dr;
  for (int i = 0; i < N; ++i) {
    const double rp = g.outer.p_r[static_cast<size_t>(i)];
    const Complex r1 =
        g.outer.vel_r[static_cast<size_t>(i + 1)] * sol.ur_outer[static_cast<size_t>(i + 1)];
    const Complex r0 = g.outer.vel_r[static_cast<size_t>(i)] * sol.ur_outer[static_cast<size_t>(i)];
    const Complex avg =
        0.5 * (sol.uth_outer[static_cast<size_t>(i + 1)] + sol.uth_outer[static_cast<size_t>(i)]);
    res = std::max(res,
                   std::abs((r1 - r0) / (rp * do_) + (ik / rp) * avg - at(p.div_outer, i)));
  }
  return res;
}

struct Assembler {
  std::vector<Triplet> trips;
  int row = 0;
  void add(int col, Complex v) { trips.emplace_back(row, col, v); }
  void next() { ++row; }
};

// Momentum rows for one subdomain on an equispaced velocity grid. `ghost`
// activates the symmetry closure u(-h/2) = s u(h/2) at the origin-adjacent
// node (inner subdomain only).  Column maps are passed in so the same code
// serves the per-subdomain and coupled layouts.
struct SubLayout {
  int ur0, uth0, p0;  // base column indices
  int nv, np;         // node counts
};

void momentum_rows(Assembler& a, const SubLayout& L, const std::vector<double>& r, double h, int k,
                   double nu, bool inner, int i) {
  const double ri = r[static_cast<size_t>(i)];
  const Complex ik = kI * static_cast<double>(k);
  const double cp = 1.0 / (h * h);
  const double cq = 1.0 / (2.0 * h * ri);
  const double diag = 2.0 * nu / (h * h) + nu * (k * k + 1.0) / (ri * ri);
  const double sgn = -std::pow(-1.0, k);  // origin parity
  // radial momentum
  auto lap = [&](int base) {
    a.add(base + i, diag);
    if (i + 1 < L.nv) a.add(base + i + 1, -nu * (cp + cq));
    if (i - 1 >= 0)
      a.add(base + i - 1, -nu * (cp - cq));
    else if (inner)
      a.add(base + i, sgn * -nu * (cp - cq));
  };
  lap(L.ur0);
  a.add(L.uth0 + i, nu * 2.0 * ik / (ri * ri));
  if (inner) {  // pressure nodes j*h flank velocity node (i+1/2)h
    a.add(L.p0 + i + 1, 1.0 / h);
    a.add(L.p0 + i, -1.0 / h);
  } else {  // pressure midpoints flank velocity node i
    a.add(L.p0 + i, 1.0 / h);
    a.add(L.p0 + i - 1, -1.0 / h);
  }
  a.next();
  // azimuthal momentum
  lap(L.uth0);
  a.add(L.ur0 + i, -nu * 2.0 * ik / (ri * ri));
  if (inner) {
    a.add(L.p0 + i, 0.5 * ik / ri);
    a.add(L.p0 + i + 1, 0.5 * ik / ri);
  } else {
    a.add(L.p0 + i - 1, 0.5 * ik / ri);
    a.add(L.p0 + i, 0.5 * ik / ri);
  }
  a.next();
}

// Divergence rows.  `gauge_last` replaces the final row with a pressure gauge
// (needed when k = 0, where the pressure constant is otherwise undetermined).
void divergence_rows(Assembler& a, const SubLayout& L, const FdGrid& g, int k, bool inner,
                     bool gauge_last) {
  const Complex ik = kI * static_cast<double>(k);
  const double h = g.dr;
  const int np = L.np;
  for (int j = 0; j < np; ++j) {
    if (gauge_last && j == np - 1) {
      a.add(L.p0 + j, 1.0);
      a.next();
      continue;
    }
    if (inner && j == 0) {
      if (k == 0)
        a.add(L.ur0 + 0, 4.0 / h);  // flux balance over the center cell
      else
        a.add(L.p0 + 0, 1.0);  // center regularity: p(0) = 0 for k >= 1
      a.next();
      continue;
    }
    const int iv1 = inner ? j : j + 1;
    const int iv0 = inner ? j - 1 : j;
    const double rp = g.p_r[static_cast<size_t>(j)];
    a.add(L.ur0 + iv1, g.vel_r[static_cast<size_t>(iv1)] / (rp * h));
    a.add(L.ur0 + iv0, -g.vel_r[static_cast<size_t>(iv0)] / (rp * h));
    a.add(L.uth0 + iv1, 0.5 * ik / rp);
    a.add(L.uth0 + iv0, 0.5 * ik / rp);
    a.next();
  }
}

void divergence_rhs(Eigen::VectorXcd& rhs, int& row, const std::vector<Complex>& data, int np,
                    bool inner, int k, bool gauge_last) {
  for (int j = 0; j < np; ++j) {
    Complex v = at(data, j);
    if (gauge_last && j == np - 1) v = 0.0;
    if (inner && j == 0 && k != 0) v = 0.0;
    rhs(row++) = v;
  }
}

// Traction stencil at R_s as column/coefficient pairs, for assembling the
// transmission jump rows.
void add_traction(Assembler& a, const SubLayout& L, const FdGrid& g, int N, int /*k*/, double nu,
                  double /*R_s*/, bool inner, double sign) {
  const double h = g.dr;
  const int iv = inner ? N - 1 : 0;
  const double d = inner ? 1.0 : -1.0;  // orientation of the one-sided stencil
  // normal component row is a.row; tangential row is a.row + 1 (caller
  // interleaves by invoking for both sides before next()).
  // normal: 2 nu u_r'(R_s) - p(R_s)
  a.add(L.ur0 + iv, sign * 2.0 * nu * d * 3.0 / (2.0 * h));
  a.add(L.ur0 + iv + (inner ? -1 : 1), sign * 2.0 * nu * d * -4.0 / (2.0 * h));
  a.add(L.ur0 + iv + (inner ? -2 : 2), sign * 2.0 * nu * d * 1.0 / (2.0 * h));
  const int ip_near = inner ? N - 1 : 0;
  const int ip_next = inner ? N - 2 : 1;
  a.add(L.p0 + ip_near, sign * -1.5);
  a.add(L.p0 + ip_next, sign * 0.5);
}

void add_traction_tau(Assembler& a, const SubLayout& L, const FdGrid& g, int N, int k, double nu,
                      double R_s, bool inner, double sign) {
  const double h = g.dr;
  const Complex ik = kI * static_cast<double>(k);
  const int iv = inner ? N - 1 : 0;
  const double d = inner ? 1.0 : -1.0;
  a.add(L.uth0 + iv, sign * nu * (d * 3.0 / (2.0 * h) - 1.0 / R_s));
  a.add(L.uth0 + iv + (inner ? -1 : 1), sign * nu * d * -4.0 / (2.0 * h));
  a.add(L.uth0 + iv + (inner ? -2 : 2), sign * nu * d * 1.0 / (2.0 * h));
  a.add(L.ur0 + iv, sign * nu * ik / R_s);
}

void finish_solution(ModeFlowSolution& sol, const ModeProblem& p, const BubbleConfig& cfg,
                     const FdGrids& g, int N) {
  sol.trace = Vec2c(sol.ur_inner[static_cast<size_t>(N - 1)],
                    sol.uth_inner[static_cast<size_t>(N - 1)]);
  const SideTrace si = inner_side(sol, g.inner, N);
  const SideTrace so = outer_side(sol, g.outer);
  sol.traction_inner = traction_of(si, p.k, cfg.nu, cfg.R_s);
  sol.traction_outer = traction_of(so, p.k, cfg.nu, cfg.R_s);
  if (p.k == 0) sol.pressure_jump0 = so.p - si.p;
  sol.strain_energy_inner =
      side_energy_fd(g.inner.vel_r, sol.ur_inner, sol.uth_inner, p.k, cfg.nu, true);
  sol.strain_energy_outer =
      side_energy_fd(g.outer.vel_r, sol.ur_outer, sol.uth_outer, p.k, cfg.nu, false);
  sol.div_residual = divergence_residual(sol, p, g, N);
}

}  // namespace

FdGrids make_fd_grids(const BubbleConfig& cfg) {
  const int N = cfg.N_r;
  FdGrids g;
  g.inner.dr = cfg.R_s / (N - 0.5);
  g.inner.vel_r.resize(static_cast<size_t>(N));
  g.inner.p_r.resize(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) {
    g.inner.vel_r[static_cast<size_t>(i)] = (i + 0.5) * g.inner.dr;
    g.inner.p_r[static_cast<size_t>(i)] = i * g.inner.dr;
  }
  g.outer.dr = (cfg.R_out - cfg.R_s) / N;
  g.outer.vel_r.resize(static_cast<size_t>(N + 1));
  g.outer.p_r.resize(static_cast<size_t>(N));
  for (int i = 0; i <= N; ++i)
    g.outer.vel_r[static_cast<size_t>(i)] = cfg.R_s + i * g.outer.dr;
  for (int i = 0; i < N; ++i)
    g.outer.p_r[static_cast<size_t>(i)] = cfg.R_s + (i + 0.5) * g.outer.dr;
  return g;
}

ModeFlowSolution solve_mode_fd(const ModeProblem& p, const BubbleConfig& cfg) {
  if (p.k < 0) throw std::invalid_argument("solve_mode_fd: k must be >= 0");
  cfg.validate();
  const int N = cfg.N_r;
  check_len(p.force_r_inner, static_cast<size_t>(N), "force_r_inner");
  check_len(p.force_th_inner, static_cast<size_t>(N), "force_th_inner");
  check_len(p.force_r_outer, static_cast<size_t>(N + 1), "force_r_outer");
  check_len(p.force_th_outer, static_cast<size_t>(N + 1), "force_th_outer");
  check_len(p.div_inner, static_cast<size_t>(N), "div_inner");
  check_len(p.div_outer, static_cast<size_t>(N), "div_outer");

  if (p.dirichlet) {
    FdDirichletSolver solver(p.k, cfg);
    return solver.solve(p);
  }

  const FdGrids g = make_fd_grids(cfg);
  const int k = p.k;
  const double nu = cfg.nu, R_s = cfg.R_s;
  const int n_total = 6 * N + 2;
  const SubLayout Li{0, N, 2 * N, N, N};
  const SubLayout Lo{3 * N, 4 * N + 1, 5 * N + 2, N + 1, N};

  Assembler a;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n_total);
  int rr = 0;
  // inner momentum
  for (int i = 0; i <= N - 2; ++i) {
    momentum_rows(a, Li, g.inner.vel_r, g.inner.dr, k, nu, true, i);
    rhs(rr++) = at(p.force_r_inner, i);
    rhs(rr++) = at(p.force_th_inner, i);
  }
  // inner divergence (k = 0: gauge handled on the outer side only)
  divergence_rows(a, Li, g.inner, k, true, false);
  divergence_rhs(rhs, rr, p.div_inner, N, true, k, false);
  // outer momentum
  for (int i = 1; i <= N - 1; ++i) {
    momentum_rows(a, Lo, g.outer.vel_r, g.outer.dr, k, nu, false, i);
    rhs(rr++) = at(p.force_r_outer, i);
    rhs(rr++) = at(p.force_th_outer, i);
  }
  // outer divergence, with the k = 0 pressure gauge on the last row
  divergence_rows(a, Lo, g.outer, k, false, k == 0);
  divergence_rhs(rhs, rr, p.div_outer, N, false, k, k == 0);
  // outer wall no-slip
  a.add(Lo.ur0 + N, 1.0);
  a.next();
  a.add(Lo.uth0 + N, 1.0);
  a.next();
  rr += 2;
  // interface continuity
  a.add(Li.ur0 + N - 1, 1.0);
  a.add(Lo.ur0 + 0, -1.0);
  a.next();
  a.add(Li.uth0 + N - 1, 1.0);
  a.add(Lo.uth0 + 0, -1.0);
  a.next();
  rr += 2;
  // traction jump: t+ - t- = -(g_n, g_tau)
  add_traction(a, Lo, g.outer, N, k, nu, R_s, false, 1.0);
  add_traction(a, Li, g.inner, N, k, nu, R_s, true, -1.0);
  a.next();
  rhs(rr++) = -p.jump(0);
  add_traction_tau(a, Lo, g.outer, N, k, nu, R_s, false, 1.0);
  add_traction_tau(a, Li, g.inner, N, k, nu, R_s, true, -1.0);
  a.next();
  rhs(rr++) = -p.jump(1);

  if (a.row != n_total || rr != n_total)
    throw std::logic_error("solve_mode_fd: row count mismatch");

  SpMat A(n_total, n_total);
  A.setFromTriplets(a.trips.begin(), a.trips.end());
  A.makeCompressed();
  Eigen::SparseLU<SpMat> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("solve_mode_fd: factorization failed (ill-posed mode)");
  const Eigen::VectorXcd x = lu.solve(rhs);

  ModeFlowSolution sol;
  sol.k = k;
  sol.nu_mode = k;
  sol.nu_visc = nu;
  sol.ur_inner.assign(x.data() + Li.ur0, x.data() + Li.ur0 + N);
  sol.uth_inner.assign(x.data() + Li.uth0, x.data() + Li.uth0 + N);
  sol.p_inner.assign(x.data() + Li.p0, x.data() + Li.p0 + N);
  sol.ur_outer.assign(x.data() + Lo.ur0, x.data() + Lo.ur0 + N + 1);
  sol.uth_outer.assign(x.data() + Lo.uth0, x.data() + Lo.uth0 + N + 1);
  sol.p_outer.assign(x.data() + Lo.p0, x.data() + Lo.p0 + N);
  finish_solution(sol, p, cfg, g, N);
  return sol;
}

struct FdDirichletSolver::Impl {
  int k = 0;
  BubbleConfig cfg;
  FdGrids grids;
  int N = 0;
  Eigen::SparseLU<SpMat> lu_inner, lu_outer;

  Impl(int k_, const BubbleConfig& cfg_) : k(k_), cfg(cfg_), grids(make_fd_grids(cfg_)), N(cfg_.N_r) {
    build();
  }

  void build() {
    const double nu = cfg.nu;
    // inner subdomain: 3N unknowns, Dirichlet trace at R_s
    {
      const SubLayout L{0, N, 2 * N, N, N};
      Assembler a;
      for (int i = 0; i <= N - 2; ++i)
        momentum_rows(a, L, grids.inner.vel_r, grids.inner.dr, k, nu, true, i);
      divergence_rows(a, L, grids.inner, k, true, k == 0);
      a.add(L.ur0 + N - 1, 1.0);
      a.next();
      a.add(L.uth0 + N - 1, 1.0);
      a.next();
      SpMat A(3 * N, 3 * N);
      A.setFromTriplets(a.trips.begin(), a.trips.end());
      A.makeCompressed();
      lu_inner.compute(A);
      if (lu_inner.info() != Eigen::Success)
        throw std::runtime_error("FdDirichletSolver: inner factorization failed");
    }
    // outer subdomain: 3N + 2 unknowns, Dirichlet at R_s + wall no-slip
    {
      const SubLayout L{0, N + 1, 2 * N + 2, N + 1, N};
      Assembler a;
      for (int i = 1; i <= N - 1; ++i)
        momentum_rows(a, L, grids.outer.vel_r, grids.outer.dr, k, nu, false, i);
      divergence_rows(a, L, grids.outer, k, false, k == 0);
      a.add(L.ur0 + 0, 1.0);
      a.next();
      a.add(L.uth0 + 0, 1.0);
      a.next();
      a.add(L.ur0 + N, 1.0);
      a.next();
      a.add(L.uth0 + N, 1.0);
      a.next();
      SpMat A(3 * N + 2, 3 * N + 2);
      A.setFromTriplets(a.trips.begin(), a.trips.end());
      A.makeCompressed();
      lu_outer.compute(A);
      if (lu_outer.info() != Eigen::Success)
        throw std::runtime_error("FdDirichletSolver: outer factorization failed");
    }
  }

  ModeFlowSolution solve(const ModeProblem& p) const {
    const Vec2c d = p.dirichlet.value_or(Vec2c::Zero());
    if (k == 0 && std::abs(d(0)) > 1e-13)
      throw std::runtime_error(
          "FdDirichletSolver: k=0 normal Dirichlet trace conflicts with incompressibility");
    ModeFlowSolution sol;
    sol.k = k;
    sol.nu_mode = k;
    sol.nu_visc = cfg.nu;
    // inner rhs
    {
      Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(3 * N);
      int rr = 0;
      for (int i = 0; i <= N - 2; ++i) {
        rhs(rr++) = at(p.force_r_inner, i);
        rhs(rr++) = at(p.force_th_inner, i);
      }
      divergence_rhs(rhs, rr, p.div_inner, N, true, k, k == 0);
      rhs(rr++) = d(0);
      rhs(rr++) = d(1);
      const Eigen::VectorXcd x = lu_inner.solve(rhs);
      sol.ur_inner.assign(x.data(), x.data() + N);
      sol.uth_inner.assign(x.data() + N, x.data() + 2 * N);
      sol.p_inner.assign(x.data() + 2 * N, x.data() + 3 * N);
    }
    // outer rhs
    {
      Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(3 * N + 2);
      int rr = 0;
      for (int i = 1; i <= N - 1; ++i) {
        rhs(rr++) = at(p.force_r_outer, i);
        rhs(rr++) = at(p.force_th_outer, i);
      }
      divergence_rhs(rhs, rr, p.div_outer, N, false, k, k == 0);
      rhs(rr++) = d(0);
      rhs(rr++) = d(1);
      rr += 2;  // wall rows are homogeneous
      const Eigen::VectorXcd x = lu_outer.solve(rhs);
      sol.ur_outer.assign(x.data(), x.data() + N + 1);
      sol.uth_outer.assign(x.data() + N + 1, x.data() + 2 * N + 2);
      sol.p_outer.assign(x.data() + 2 * N + 2, x.data() + 3 * N + 2);
    }
    finish_solution(sol, p, cfg, grids, N);
    sol.trace = d;
    return sol;
  }
};

FdDirichletSolver::FdDirichletSolver(int k, const BubbleConfig& cfg)
    : impl_(std::make_unique<Impl>(k, cfg)) {
  if (k < 0) throw std::invalid_argument("FdDirichletSolver: k must be >= 0");
}

FdDirichletSolver::~FdDirichletSolver() = default;
FdDirichletSolver::FdDirichletSolver(FdDirichletSolver&&) noexcept = default;
FdDirichletSolver& FdDirichletSolver::operator=(FdDirichletSolver&&) noexcept = default;

ModeFlowSolution FdDirichletSolver::solve(const ModeProblem& p) const {
  const int N = impl_->N;
  check_len(p.force_r_inner, static_cast<size_t>(N), "force_r_inner");
  check_len(p.force_th_inner, static_cast<size_t>(N), "force_th_inner");
  check_len(p.force_r_outer, static_cast<size_t>(N + 1), "force_r_outer");
  check_len(p.force_th_outer, static_cast<size_t>(N + 1), "force_th_outer");
  check_len(p.div_inner, static_cast<size_t>(N), "div_inner");
  check_len(p.div_outer, static_cast<size_t>(N), "div_outer");
  return impl_->solve(p);
}

std::pair<ModeFlowSolution, Vec2c> solve_lifting_mode(const ModeProblem& p,
                                                      const BubbleConfig& cfg) {
  ModeProblem q = p;
  q.dirichlet = Vec2c::Zero();
  q.jump = Vec2c::Zero();
  ModeFlowSolution sol = solve_mode_fd(q, cfg);
  const Vec2c jump = sol.traction_outer - sol.traction_inner;
  return {sol, jump};
}

}  // namespace bubble
