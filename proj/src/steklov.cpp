#include "bubble/steklov.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace bubble {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

std::string backend_name(Backend b) {
  return b == Backend::Analytic ? "analytic" : "fd";
}

Backend parse_backend(const std::string& name) {
  if (name == "analytic") return Backend::Analytic;
  if (name == "fd") return Backend::Fd;
  throw std::invalid_argument("unknown backend '" + name + "' (expected analytic|fd)");
}

SteklovOperator::SteklovOperator(std::vector<Mat2c> blocks, Backend backend,
                                 std::string fingerprint, double R_s)
    : blocks_(std::move(blocks)),
      backend_(backend),
      fingerprint_(std::move(fingerprint)),
      R_s_(R_s) {
  if (blocks_.empty()) throw std::invalid_argument("SteklovOperator: no blocks");
  if (R_s_ <= 0.0) throw std::invalid_argument("SteklovOperator: R_s must be positive");
}

Mat2c SteklovOperator::block(int k) const {
  const int a = std::abs(k);
  if (a > max_mode()) throw std::out_of_range("SteklovOperator::block: mode beyond K");
  return k >= 0 ? blocks_[static_cast<size_t>(a)] : blocks_[static_cast<size_t>(a)].conjugate();
}

FrameField SteklovOperator::apply(const FrameField& G) const {
  FrameField out(G.max_mode());
  const int K = std::min(G.max_mode(), max_mode());
  for (int k = -K; k <= K; ++k) out.mode(k) = block(k) * G.mode(k);
  return out;
}

double SteklovOperator::quadratic_form(const FrameField& G) const {
  const int K = std::min(G.max_mode(), max_mode());
  double sum = 0.0;
  for (int k = -K; k <= K; ++k) sum += G.mode(k).dot(block(k) * G.mode(k)).real();
  return kTwoPi * R_s_ * sum;
}

double SteklovOperator::hermitian_defect() const {
  double d = 0.0;
  for (const auto& B : blocks_) d = std::max(d, (B - B.adjoint()).cwiseAbs().maxCoeff());
  return d;
}

double SteklovOperator::min_eigenvalue() const {
  double m = 0.0;
  bool first = true;
  for (const auto& B : blocks_) {
    Eigen::SelfAdjointEigenSolver<Mat2c> es(0.5 * (B + B.adjoint()));
    const double v = es.eigenvalues().minCoeff();
    if (first || v < m) m = v;
    first = false;
  }
  return m;
}

double SteklovOperator::kernel_defect() const {
  return (blocks_[0] * Vec2c(1.0, 0.0)).norm();
}

SteklovOperator assemble_steklov(const BubbleConfig& cfg, Backend backend) {
  cfg.validate();
  std::vector<Mat2c> blocks(static_cast<size_t>(cfg.K + 1));
  for (int k = 0; k <= cfg.K; ++k) {
    Mat2c B;
    for (int col = 0; col < 2; ++col) {
      ModeProblem p;
      p.k = k;
      p.jump = col == 0 ? Vec2c(1.0, 0.0) : Vec2c(0.0, 1.0);
      const ModeFlowSolution s =
          backend == Backend::Analytic ? solve_mode_analytic(p, cfg) : solve_mode_fd(p, cfg);
      B.col(col) = interface_trace(s);
    }
    blocks[static_cast<size_t>(k)] = B;
  }
  return SteklovOperator(std::move(blocks), backend, cfg.fingerprint(backend_name(backend)),
                         cfg.R_s);
}

}  // namespace bubble
