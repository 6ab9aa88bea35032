#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "bubble/config.hpp"
#include "bubble/frame_field.hpp"

namespace bubble {

/// One azimuthal mode of the two-phase stationary Stokes transmission problem
/// on {r < R_s} u {R_s < r < R_out}.
struct ModeProblem {
  int k = 0;                       ///< mode index >= 0
  Vec2c jump = Vec2c::Zero();      ///< (g_n, g_tau) = -[sigma(u,p)] e_r at R_s
  std::optional<Vec2c> dirichlet;  ///< prescribed trace at R_s (replaces jump coupling)
  /// FD-backend volume forcing in (e_r, e_theta) components, sampled on the
  /// velocity grids of make_fd_grids; empty means zero.
  std::vector<Complex> force_r_inner, force_th_inner;
  std::vector<Complex> force_r_outer, force_th_outer;
  /// FD-backend divergence data at the pressure grid nodes; empty means zero.
  std::vector<Complex> div_inner, div_outer;

  bool has_forcing() const {
    return !(force_r_inner.empty() && force_th_inner.empty() && force_r_outer.empty() &&
             force_th_outer.empty() && div_inner.empty() && div_outer.empty());
  }
};

/// Closed-form basis element of the analytic stream-function backend.
struct AnalyticTerm {
  enum Kind { Power, RLogR, LogR } kind = Power;
  double m = 0.0;      ///< stream-function exponent (Power)
  double r_ref = 1.0;  ///< column scaling radius
  Complex coeff{0.0, 0.0};
};

/// Pointwise radial profile data of one mode of a Stokes field.
struct RadialPoint {
  Complex u_r{0.0}, u_th{0.0};    ///< velocity components
  Complex du_r{0.0}, du_th{0.0};  ///< radial derivatives
  Complex p{0.0};                 ///< pressure
};

struct ModeFlowSolution {
  int k = 0;
  Vec2c trace = Vec2c::Zero();           ///< (u_n, u_tau) at R_s
  Vec2c traction_inner = Vec2c::Zero();  ///< sigma(u-,p-) e_r at R_s
  Vec2c traction_outer = Vec2c::Zero();  ///< sigma(u+,p+) e_r at R_s
  Complex pressure_jump0{0.0};           ///< k=0 only: [p] = p+ - p-
  double strain_energy_inner = 0.0;      ///< 2 nu * 2 pi * int |eps(u-)|^2 r dr
  double strain_energy_outer = 0.0;
  double div_residual = 0.0;  ///< discrete incompressibility residual (FD)

  // analytic backend representation
  int nu_mode = 0;  // internal: mode used to evaluate terms
  double nu_visc = 0.0;
  std::vector<AnalyticTerm> terms_inner, terms_outer;
  Complex p_const_inner{0.0}, p_const_outer{0.0};

  // FD backend representation (grids from make_fd_grids)
  std::vector<Complex> ur_inner, uth_inner, p_inner;
  std::vector<Complex> ur_outer, uth_outer, p_outer;

  bool analytic() const { return !terms_inner.empty() || !terms_outer.empty() || ur_inner.empty(); }
  /// Evaluate the analytic representation at radius r (inner or outer side).
  RadialPoint eval_analytic(bool inner, double r) const;
};

/// Homogeneous-force transmission (or per-subdomain Dirichlet) solve with
/// closed-form biharmonic stream-function bases. Throws on forcing input.
ModeFlowSolution solve_mode_analytic(const ModeProblem& p, const BubbleConfig& cfg);

/// Radial grids of the finite-difference backend.
struct FdGrid {
  std::vector<double> vel_r;  ///< velocity nodes
  std::vector<double> p_r;    ///< pressure nodes
  double dr = 0.0;
};
struct FdGrids {
  FdGrid inner, outer;
};
FdGrids make_fd_grids(const BubbleConfig& cfg);

/// Second-order primitive-variable finite differences; supports volume
/// forcing and nonzero divergence data (the oracle backend).
ModeFlowSolution solve_mode_fd(const ModeProblem& p, const BubbleConfig& cfg);

/// (E_outer, E_inner) ordered as (E+, E-).
std::pair<double, double> strain_energy(const ModeFlowSolution& s);

/// Lifting solve: homogeneous Dirichlet on Gamma_s and the outer wall with
/// forcing; returns the solution and the traction jump [sigma(w,pi)] e_r.
std::pair<ModeFlowSolution, Vec2c> solve_lifting_mode(const ModeProblem& p,
                                                      const BubbleConfig& cfg);

/// Caches the two per-subdomain FD factorizations of the Dirichlet-mode
/// problem for one mode, for repeated solves (time stepping, Picard).
class FdDirichletSolver {
 public:
  FdDirichletSolver(int k, const BubbleConfig& cfg);
  ~FdDirichletSolver();
  FdDirichletSolver(FdDirichletSolver&&) noexcept;
  FdDirichletSolver& operator=(FdDirichletSolver&&) noexcept;

  ModeFlowSolution solve(const ModeProblem& p) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace bubble
