#include "bubble/modal_control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "bubble/geometry.hpp"

namespace bubble {

namespace {

constexpr double kRealTol = 1e-8;

bool is_translation_dir(const Vec2c& v) {
  // translations occupy span{(1, i)} at k = 1
  const Vec2c t(Complex(1.0, 0.0) / std::sqrt(2.0), Complex(0.0, 1.0) / std::sqrt(2.0));
  return std::abs(std::abs(t.dot(v)) - v.norm()) < 1e-8;
}

}  // namespace

Mat2c generator_block(int k, const SteklovOperator& P, const BubbleConfig& cfg) {
  return cfg.mu * P.block(k) * laplace_beltrami_block(k, cfg.R_s);
}

ModalSpectrum mode_spectrum(const SteklovOperator& P, const BubbleConfig& cfg) {
  ModalSpectrum spec;
  for (int k = 0; k <= std::min(cfg.K, P.max_mode()); ++k) {
    const Mat2c A = generator_block(k, P, cfg);
    Eigen::ComplexEigenSolver<Mat2c> es(A);
    std::vector<ModeEigenpair> local;
    for (int j = 0; j < 2; ++j) {
      const Complex ev = es.eigenvalues()(j);
      spec.max_imag_part = std::max(spec.max_imag_part, std::abs(ev.imag()));
      if (std::abs(ev.imag()) > kRealTol)
        throw std::runtime_error("mode_spectrum: non-real eigenvalue at mode " +
                                 std::to_string(k) + " (structural violation)");
      ModeEigenpair pair;
      pair.k = k;
      pair.eigenvalue = ev.real();
      pair.eigenvector = es.eigenvectors().col(j).normalized();
      if (k == 0) {
        const bool normal_dir = std::abs(pair.eigenvector(0)) > std::abs(pair.eigenvector(1));
        pair.volume = normal_dir;
        pair.rigid = !normal_dir;  // rotation
      } else if (k == 1) {
        pair.rigid = is_translation_dir(pair.eigenvector);
      }
      local.push_back(pair);
    }
    std::sort(local.begin(), local.end(),
              [](const ModeEigenpair& a, const ModeEigenpair& b) {
                return a.eigenvalue > b.eigenvalue;
              });
    spec.pairs.insert(spec.pairs.end(), local.begin(), local.end());
  }
  return spec;
}

std::vector<ModeEigenpair> unstable_set(const ModalSpectrum& spec, double lambda,
                                        bool include_rotation) {
  if (lambda <= 0.0) throw std::invalid_argument("unstable_set: lambda must be positive");
  std::vector<ModeEigenpair> out;
  for (const auto& p : spec.pairs) {
    if (p.volume) continue;
    if (std::abs(p.eigenvalue + lambda) < 1e-9)
      throw std::invalid_argument("unstable_set: lambda collides with an open-loop rate at mode " +
                                  std::to_string(p.k) + "; pick a different lambda");
    if (p.eigenvalue <= -lambda) continue;
    if (p.k == 0 && p.rigid && !include_rotation) continue;
    out.push_back(p);
  }
  return out;
}

Eigen::MatrixXcd solve_are(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
  const int d = static_cast<int>(A.rows());
  Eigen::MatrixXcd H(2 * d, 2 * d);
  H.topLeftCorner(d, d) = A;
  H.topRightCorner(d, d) = -B * B.adjoint();
  H.bottomLeftCorner(d, d) = -Eigen::MatrixXcd::Identity(d, d);
  H.bottomRightCorner(d, d) = -A.adjoint();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(H);
  Eigen::MatrixXcd V(2 * d, d);
  int found = 0;
  for (int j = 0; j < 2 * d && found < d; ++j) {
    if (es.eigenvalues()(j).real() < 0.0) V.col(found++) = es.eigenvectors().col(j);
  }
  if (found != d)
    throw std::runtime_error("solve_are: Hamiltonian stable subspace has wrong dimension");
  const Eigen::MatrixXcd U1 = V.topRows(d);
  const Eigen::MatrixXcd U2 = V.bottomRows(d);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(U1);
  if (!lu.isInvertible())
    throw std::runtime_error("solve_are: singular subspace basis (not stabilizable)");
  Eigen::MatrixXcd Pi = U2 * lu.inverse();
  Pi = 0.5 * (Pi + Pi.adjoint()).eval();
  return Pi;
}

int controllability_rank(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
  const int d = static_cast<int>(A.rows());
  Eigen::MatrixXcd C(d, d * B.cols());
  Eigen::MatrixXcd Ak = Eigen::MatrixXcd::Identity(d, d);
  for (int j = 0; j < d; ++j) {
    C.middleCols(j * B.cols(), B.cols()) = Ak * B;
    Ak = (A * Ak).eval();
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(C);
  const double tol = 1e-12 * std::max(1.0, svd.singularValues()(0));
  int rank = 0;
  for (int j = 0; j < svd.singularValues().size(); ++j)
    if (svd.singularValues()(j) > tol) ++rank;
  return rank;
}

Mat2c FeedbackLaw::gain(int k) const {
  const int a = std::abs(k);
  if (a > max_mode()) return Mat2c::Zero();
  return k >= 0 ? K_blocks[static_cast<size_t>(a)] : K_blocks[static_cast<size_t>(a)].conjugate();
}

FrameField FeedbackLaw::apply(const FrameField& Z) const {
  FrameField g(Z.max_mode());
  for (int k = -Z.max_mode(); k <= Z.max_mode(); ++k) g.mode(k) = gain(k) * Z.mode(k);
  return g;
}

FeedbackLaw build_feedback(const SteklovOperator& P, const BubbleConfig& cfg, double lambda,
                           bool include_rotation) {
  const ModalSpectrum spec = mode_spectrum(P, cfg);
  FeedbackLaw law;
  law.lambda = lambda;
  law.include_rotation = include_rotation;
  law.unstable = unstable_set(spec, lambda, include_rotation);
  law.Pi_blocks.assign(static_cast<size_t>(P.max_mode() + 1), Mat2c::Zero());
  law.K_blocks.assign(static_cast<size_t>(P.max_mode() + 1), Mat2c::Zero());
  law.fingerprint = P.fingerprint();

  for (int k = 0; k <= P.max_mode(); ++k) {
    // indices of unstable directions at this mode
    std::vector<int> idx;
    for (size_t j = 0; j < law.unstable.size(); ++j)
      if (law.unstable[j].k == k) idx.push_back(static_cast<int>(j));
    if (idx.empty()) continue;
    const int d = static_cast<int>(idx.size());
    // Restriction via the spectral (oblique) projection: in eigencoordinates
    // z = V^{-1} Z the dynamics are triangularly decoupled, so feeding back
    // only the unstable components leaves the stable spectrum untouched.
    const Mat2c A = generator_block(k, P, cfg);
    Eigen::ComplexEigenSolver<Mat2c> es(A);
    Eigen::MatrixXcd V = es.eigenvectors();
    const Eigen::MatrixXcd Vinv = V.inverse();
    // match each unstable eigenvalue to an eigensolver column
    std::vector<int> cols;
    for (int j : idx) {
      const double target = law.unstable[static_cast<size_t>(j)].eigenvalue;
      int best = -1;
      double err = 1e9;
      for (int c = 0; c < 2; ++c) {
        const double e = std::abs(es.eigenvalues()(c).real() - target);
        if (e < err && std::find(cols.begin(), cols.end(), c) == cols.end()) {
          err = e;
          best = c;
        }
      }
      cols.push_back(best);
    }
    Eigen::MatrixXcd Wl(d, 2);  // selected rows of V^{-1} (left eigenvectors)
    Eigen::VectorXd evs(d);
    for (int j = 0; j < d; ++j) {
      Wl.row(j) = Vinv.row(cols[static_cast<size_t>(j)]);
      evs(j) = es.eigenvalues()(cols[static_cast<size_t>(j)]).real();
    }
    const Eigen::MatrixXcd A_l =
        (evs.array() + lambda).matrix().asDiagonal().toDenseMatrix().cast<Complex>();
    const Eigen::MatrixXcd B = Wl * P.block(k);
    if (controllability_rank(A_l, B) < d)
      throw std::runtime_error("build_feedback: mode " + std::to_string(k) +
                               " is not stabilizable (controllability rank deficient)");
    const Eigen::MatrixXcd Pi = solve_are(A_l, B);
    const double res = (Pi * A_l + A_l.adjoint() * Pi - Pi * B * B.adjoint() * Pi +
                        Eigen::MatrixXcd::Identity(d, d))
                           .cwiseAbs()
                           .maxCoeff();
    law.riccati_residual = std::max(law.riccati_residual, res);
    const Mat2c Pi_full = Wl.adjoint() * Pi * Wl;
    law.Pi_blocks[static_cast<size_t>(k)] = Pi_full;
    law.K_blocks[static_cast<size_t>(k)] = -P.block(k).adjoint() * Pi_full;
  }

  // closed-loop margin over every retained mode (the k=0 volume direction is
  // conserved by construction and excluded from the margin)
  double margin = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= P.max_mode(); ++k) {
    const Mat2c M = generator_block(k, P, cfg) + P.block(k) * law.K_blocks[static_cast<size_t>(k)];
    if (k == 0) {
      margin = std::max(margin, M(1, 1).real() + lambda);
      continue;
    }
    Eigen::ComplexEigenSolver<Mat2c> es(M);
    for (int j = 0; j < 2; ++j) margin = std::max(margin, es.eigenvalues()(j).real() + lambda);
  }
  law.closed_loop_margin = margin;
  return law;
}

}  // namespace bubble
