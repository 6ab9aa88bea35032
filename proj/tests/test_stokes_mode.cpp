#include <doctest.h>

#include <cmath>

#include "bubble/stokes_mode.hpp"
#include "bubble/steklov.hpp"

using namespace bubble;
using doctest::Approx;

TEST_CASE("zero jump gives the zero flow") {
  BubbleConfig cfg;
  for (int k : {0, 1, 4}) {
    ModeProblem p;
    p.k = k;
    const ModeFlowSolution s = solve_mode_analytic(p, cfg);
    CHECK(s.trace.norm() <= 1e-14);
    CHECK(s.strain_energy_inner <= 1e-14);
    CHECK(s.strain_energy_outer <= 1e-14);
  }
}

TEST_CASE("mode-0 normal jump: static Young-Laplace balance") {
  BubbleConfig cfg;
  const double c = cfg.mu / cfg.R_s;
  ModeProblem p;
  p.k = 0;
  p.jump = Vec2c(c, 0.0);
  for (auto solve : {solve_mode_analytic, solve_mode_fd}) {
    const ModeFlowSolution s = solve(p, cfg);
    CHECK(s.trace.norm() <= 1e-10);  // no flow: the jump is absorbed by pressure
    CHECK(s.pressure_jump0.real() == Approx(c).epsilon(1e-10));
    CHECK(std::abs(s.pressure_jump0.imag()) <= 1e-12);
  }
}

TEST_CASE("FD Dirichlet solve reproduces its boundary data") {
  BubbleConfig cfg;
  cfg.N_r = 64;
  for (int k : {0, 2, 5}) {
    ModeProblem p;
    p.k = k;
    p.dirichlet = Vec2c(Complex(0.3, 0.1), Complex(-0.2, 0.4));
    if (k == 0) (*p.dirichlet)(0) = 0.0;  // volume-free at the conserved mode
    const ModeFlowSolution s = solve_mode_fd(p, cfg);
    CHECK((s.trace - *p.dirichlet).norm() <= 1e-9);
    CHECK(s.div_residual <= 1e-9);
  }
}

TEST_CASE("analytic and FD tractions of the Dirichlet problem agree") {
  BubbleConfig cfg;
  cfg.N_r = 256;
  for (int k : {1, 3}) {
    ModeProblem p;
    p.k = k;
    p.dirichlet = Vec2c(Complex(0.2, -0.1), Complex(0.05, 0.3));
    const ModeFlowSolution a = solve_mode_analytic(p, cfg);
    const ModeFlowSolution f = solve_mode_fd(p, cfg);
    CHECK((a.traction_inner - f.traction_inner).norm() <=
          5e-3 * std::max(1.0, a.traction_inner.norm()));
    CHECK((a.traction_outer - f.traction_outer).norm() <=
          5e-3 * std::max(1.0, a.traction_outer.norm()));
  }
}

TEST_CASE("lifting solve with zero forcing is zero") {
  BubbleConfig cfg;
  cfg.N_r = 64;
  ModeProblem p;
  p.k = 2;
  const auto [s, jump] = solve_lifting_mode(p, cfg);
  CHECK(jump.norm() <= 1e-12);
  CHECK(s.trace.norm() <= 1e-12);
}

TEST_CASE("manufactured forcing: FD lifting vs refined grid") {
  // smooth forcing, grid-convergence of the lifted traction jump
  BubbleConfig cfg;
  auto jump_at = [&](int N) {
    BubbleConfig c = cfg;
    c.N_r = N;
    const FdGrids g = make_fd_grids(c);
    ModeProblem p;
    p.k = 2;
    auto fill = [&](const std::vector<double>& r, std::vector<Complex>& fr,
                    std::vector<Complex>& ft) {
      for (double x : r) {
        fr.push_back(Complex(std::sin(x), 0.1 * x));
        ft.push_back(Complex(x * x, -0.2));
      }
    };
    fill(g.inner.vel_r, p.force_r_inner, p.force_th_inner);
    fill(g.outer.vel_r, p.force_r_outer, p.force_th_outer);
    return solve_lifting_mode(p, c).second;
  };
  const Vec2c j1 = jump_at(64);
  const Vec2c j2 = jump_at(128);
  const Vec2c j3 = jump_at(256);
  const double e1 = (j1 - j3).norm();
  const double e2 = (j2 - j3).norm();
  CHECK(e2 < e1);  // converging
  CHECK(e1 / e2 > 2.5);  // near second order against the finest grid
}

TEST_CASE("cached Dirichlet factorization matches the one-shot solver") {
  BubbleConfig cfg;
  cfg.N_r = 64;
  const FdDirichletSolver solver(3, cfg);
  ModeProblem p;
  p.k = 3;
  p.dirichlet = Vec2c(Complex(0.1, 0.2), Complex(0.3, -0.4));
  const ModeFlowSolution a = solver.solve(p);
  const ModeFlowSolution b = solve_mode_fd(p, cfg);
  CHECK((a.trace - b.trace).norm() <= 1e-12);
  CHECK((a.traction_inner - b.traction_inner).norm() <= 1e-10);
  CHECK((a.traction_outer - b.traction_outer).norm() <= 1e-10);
}

TEST_CASE("strain energies are nonnegative and ordered as (outer, inner)") {
  BubbleConfig cfg;
  ModeProblem p;
  p.k = 2;
  p.jump = Vec2c(Complex(0.5, 0.0), Complex(0.0, 0.25));
  const ModeFlowSolution s = solve_mode_analytic(p, cfg);
  const auto [eo, ei] = strain_energy(s);
  CHECK(eo == s.strain_energy_outer);
  CHECK(ei == s.strain_energy_inner);
  CHECK(eo > 0.0);
  CHECK(ei > 0.0);
}
