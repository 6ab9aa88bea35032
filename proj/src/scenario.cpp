#include "bubble/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "bubble/cache.hpp"
#include "bubble/evolve.hpp"
#include "bubble/extension.hpp"
#include "bubble/geometry.hpp"
#include "bubble/modal_control.hpp"
#include "bubble/nonlinear.hpp"

namespace bubble {

namespace {

namespace fs = std::filesystem;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string strip_spaces(const std::string& s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  return out;
}

/// "name(a,b,...)" -> args; throws on malformed syntax.
std::vector<double> call_args(const std::string& expr, const std::string& name, size_t arity) {
  const std::string body = expr.substr(name.size());
  if (body.size() < 2 || body.front() != '(' || body.back() != ')')
    throw std::invalid_argument("initial condition: expected " + name + "(...) in '" + expr + "'");
  std::vector<double> args;
  std::stringstream ss(body.substr(1, body.size() - 2));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t used = 0;
    args.push_back(std::stod(tok, &used));
    if (used != tok.size())
      throw std::invalid_argument("initial condition: bad number '" + tok + "' in '" + expr + "'");
  }
  if (args.size() != arity)
    throw std::invalid_argument("initial condition: " + name + " takes " + std::to_string(arity) +
                                " argument(s), got " + std::to_string(args.size()));
  return args;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& command, const std::string& fingerprint,
            const std::string& columns)
      : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("scenario: cannot write " + path);
    out_ << "# interface-stabilization CSV v1\n";
    out_ << "# command=" << command << "\n";
    out_ << "# fingerprint=" << fingerprint << "\n";
    out_ << columns << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

SteklovOperator obtain_steklov(const Scenario& s, const BubbleConfig& cfg, bool& cache_hit) {
  const std::string fp = cfg.fingerprint(backend_name(s.backend));
  if (!s.cache_dir.empty()) {
    fs::create_directories(s.cache_dir);
    const std::string path =
        (fs::path(s.cache_dir) / ("steklov_" + backend_name(s.backend) + ".json")).string();
    if (fs::exists(path)) {
      SteklovOperator P = load_steklov(path, fp);  // throws on any mismatch
      cache_hit = true;
      return P;
    }
    SteklovOperator P = assemble_steklov(cfg, s.backend);
    save_steklov(P, path);
    return P;
  }
  return assemble_steklov(cfg, s.backend);
}

FeedbackLaw obtain_feedback(const Scenario& s, const BubbleConfig& cfg, const SteklovOperator& P,
                            bool& cache_hit) {
  if (!s.cache_dir.empty()) {
    fs::create_directories(s.cache_dir);
    const std::string path =
        (fs::path(s.cache_dir) / ("feedback_" + backend_name(s.backend) + ".json")).string();
    if (fs::exists(path)) {
      FeedbackLaw law = load_feedback(path, P.fingerprint());
      // the operator fingerprint does not pin the synthesis parameters
      if (law.lambda != cfg.lambda || law.include_rotation != s.include_rotation)
        throw std::runtime_error(
            "cache: feedback parameter mismatch in " + path + "\n  cached:   lambda=" +
            num(law.lambda) + " include_rotation=" + (law.include_rotation ? "1" : "0") +
            "\n  expected: lambda=" + num(cfg.lambda) +
            " include_rotation=" + (s.include_rotation ? "1" : "0"));
      cache_hit = true;
      return law;
    }
    FeedbackLaw law = build_feedback(P, cfg, cfg.lambda, s.include_rotation);
    save_feedback(law, path);
    return law;
  }
  return build_feedback(P, cfg, cfg.lambda, s.include_rotation);
}

void trajectory_csv(const std::string& path, const std::string& command, const std::string& fp,
                    const SimTrajectory& traj) {
  const int Kshow = std::min(traj.states.empty() ? 0 : traj.states.front().max_mode(), 8);
  std::string cols = "t,raw_h2,quotient_h2,grad_norm_sq,dissipation";
  for (int k = 0; k <= Kshow; ++k)
    cols += ",abs_zn_" + std::to_string(k) + ",abs_zt_" + std::to_string(k);
  CsvWriter csv(path, command, fp, cols);
  for (size_t j = 0; j < traj.times.size(); ++j) {
    std::vector<std::string> cells{num(traj.times[j]), num(traj.raw_h2[j]),
                                   num(traj.quotient_h2[j]), num(traj.grad_norm_sq[j]),
                                   num(traj.dissipation[j])};
    for (int k = 0; k <= Kshow; ++k) {
      cells.push_back(num(std::abs(traj.states[j].mode(k)(0))));
      cells.push_back(num(std::abs(traj.states[j].mode(k)(1))));
    }
    csv.row(cells);
  }
}

}  // namespace

FrameField parse_initial_condition(const std::string& spec, const BubbleConfig& cfg) {
  const std::string expr = strip_spaces(spec);
  FrameField Z(cfg.K);
  if (expr.rfind("ellipse", 0) == 0) {
    // normal displacement a cos(2 theta); area-preserving to O(a^2) since the
    // mode-0 normal component (the volume direction) is zero
    const auto a = call_args(expr, "ellipse", 1);
    Z.mode(2) = Vec2c(0.5 * a[0], 0.0);
    Z.mode(-2) = Vec2c(0.5 * a[0], 0.0);
  } else if (expr.rfind("mode", 0) == 0) {
    const auto a = call_args(expr, "mode", 3);
    const int k = static_cast<int>(std::llround(a[0]));
    if (k != a[0] || k < 0 || k > cfg.K)
      throw std::invalid_argument("initial condition: mode index must be an integer in [0, K]");
    if (k == 0) {
      if (a[1] != 0.0)
        throw std::invalid_argument(
            "initial condition: mode 0 cannot carry a normal amplitude (volume direction)");
      Z.mode(0) = Vec2c(0.0, a[2]);
    } else {
      Z.mode(k) = Vec2c(0.5 * a[1], 0.5 * a[2]);
      Z.mode(-k) = Z.mode(k).conjugate();
    }
  } else if (expr.rfind("translation", 0) == 0) {
    // rigid shift c e_x: e_x = cos(theta) n_s - sin(theta) tau_s
    const auto a = call_args(expr, "translation", 1);
    Z.mode(1) = 0.5 * a[0] * Vec2c(Complex(1.0, 0.0), Complex(0.0, 1.0));
    Z.mode(-1) = Z.mode(1).conjugate();
  } else if (expr.rfind("file:", 0) == 0) {
    Z = read_frame_field(expr.substr(5), cfg.K);
  } else {
    throw std::invalid_argument(
        "initial condition: expected ellipse(a), mode(k,amp_n,amp_tau), translation(c), or "
        "file:path; got '" +
        spec + "'");
  }
  Z.enforce_reality();
  if (!Z.is_volume_free())
    throw std::invalid_argument("initial condition: field is not volume-free");
  return Z;
}

void write_frame_field(const FrameField& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("frame field: cannot write " + path);
  out << "# k re_n im_n re_tau im_tau (modes -k by conjugation)\n";
  for (int k = 0; k <= f.max_mode(); ++k) {
    const Vec2c& c = f.mode(k);
    out << k << " " << num(c(0).real()) << " " << num(c(0).imag()) << " " << num(c(1).real())
        << " " << num(c(1).imag()) << "\n";
  }
}

FrameField read_frame_field(const std::string& path, int max_mode) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("frame field: cannot open " + path);
  FrameField f(max_mode);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    int k;
    double rn, in_, rt, it;
    if (!(ss >> k)) continue;  // blank line
    if (!(ss >> rn >> in_ >> rt >> it) || k < 0)
      throw std::runtime_error("frame field: " + path + ": bad line " + std::to_string(lineno));
    if (k > max_mode) continue;  // band-limit to the configured cap
    f.mode(k) = Vec2c(Complex(rn, in_), Complex(rt, it));
    if (k > 0) f.mode(-k) = f.mode(k).conjugate();
  }
  f.enforce_reality();
  return f;
}

ScenarioResult run_scenario(const Scenario& s) {
  ScenarioResult res;
  std::ostringstream rep;
  try {
    BubbleConfig cfg;
    if (!s.config_path.empty()) cfg = load_config(s.config_path);
    cfg.validate();
    fs::create_directories(s.output_dir);
    const std::string fp = cfg.fingerprint(backend_name(s.backend));
    auto outpath = [&](const std::string& name) {
      return (fs::path(s.output_dir) / name).string();
    };
    rep << "command: " << s.command << "\n";
    rep << "fingerprint: " << fp << "\n";

    if (s.command == "steklov") {
      SteklovOperator P = obtain_steklov(s, cfg, res.cache_hit);
      const std::string path = outpath("steklov.csv");
      CsvWriter csv(path, s.command, fp,
                    "k,p_nn_re,p_nn_im,p_nt_re,p_nt_im,p_tn_re,p_tn_im,p_tt_re,p_tt_im");
      for (int k = 0; k <= P.max_mode(); ++k) {
        const Mat2c B = P.block(k);
        csv.row({std::to_string(k), num(B(0, 0).real()), num(B(0, 0).imag()), num(B(0, 1).real()),
                 num(B(0, 1).imag()), num(B(1, 0).real()), num(B(1, 0).imag()),
                 num(B(1, 1).real()), num(B(1, 1).imag())});
      }
      res.artifacts.push_back(path);
      rep << "cache: " << (res.cache_hit ? "hit" : "assembled") << "\n";
      rep << "hermitian_defect: " << num(P.hermitian_defect()) << "\n";
      rep << "min_eigenvalue: " << num(P.min_eigenvalue()) << "\n";
      rep << "kernel_defect: " << num(P.kernel_defect()) << "\n";

    } else if (s.command == "spectrum") {
      SteklovOperator P = obtain_steklov(s, cfg, res.cache_hit);
      const ModalSpectrum spec = mode_spectrum(P, cfg);
      const std::string path = outpath("spectrum.csv");
      CsvWriter csv(path, s.command, fp,
                    "k,eigenvalue,ev_n_re,ev_n_im,ev_t_re,ev_t_im,volume,rigid");
      double slowest = -1e300;
      for (const auto& pr : spec.pairs) {
        csv.row({std::to_string(pr.k), num(pr.eigenvalue), num(pr.eigenvector(0).real()),
                 num(pr.eigenvector(0).imag()), num(pr.eigenvector(1).real()),
                 num(pr.eigenvector(1).imag()), pr.volume ? "1" : "0", pr.rigid ? "1" : "0"});
        if (!pr.volume && !pr.rigid) slowest = std::max(slowest, pr.eigenvalue);
      }
      res.artifacts.push_back(path);
      rep << "cache: " << (res.cache_hit ? "hit" : "assembled") << "\n";
      rep << "modes: 0.." << P.max_mode() << "\n";
      rep << "slowest_nonrigid_rate: " << num(slowest) << "\n";
      rep << "max_imag_part: " << num(spec.max_imag_part) << "\n";

    } else if (s.command == "feedback") {
      SteklovOperator P = obtain_steklov(s, cfg, res.cache_hit);
      bool law_hit = false;
      FeedbackLaw law = obtain_feedback(s, cfg, P, law_hit);
      res.cache_hit = res.cache_hit || law_hit;
      const std::string lawpath = outpath("feedback.json");
      save_feedback(law, lawpath);
      res.artifacts.push_back(lawpath);
      const std::string path = outpath("feedback_gains.csv");
      CsvWriter csv(path, s.command, fp,
                    "k,k_nn_re,k_nn_im,k_nt_re,k_nt_im,k_tn_re,k_tn_im,k_tt_re,k_tt_im");
      for (int k = 0; k <= law.max_mode(); ++k) {
        const Mat2c B = law.gain(k);
        csv.row({std::to_string(k), num(B(0, 0).real()), num(B(0, 0).imag()), num(B(0, 1).real()),
                 num(B(0, 1).imag()), num(B(1, 0).real()), num(B(1, 0).imag()),
                 num(B(1, 1).real()), num(B(1, 1).imag())});
      }
      res.artifacts.push_back(path);
      rep << "lambda: " << num(law.lambda) << "\n";
      rep << "include_rotation: " << (law.include_rotation ? 1 : 0) << "\n";
      rep << "unstable_directions: " << law.unstable.size() << "\n";
      for (const auto& u : law.unstable)
        rep << "  k=" << u.k << " rate=" << num(u.eigenvalue) << (u.rigid ? " (rigid)" : "")
            << "\n";
      rep << "riccati_residual: " << num(law.riccati_residual) << "\n";
      rep << "closed_loop_margin: " << num(law.closed_loop_margin) << "\n";

    } else if (s.command == "simulate") {
      SteklovOperator P = obtain_steklov(s, cfg, res.cache_hit);
      const FrameField Z0 = parse_initial_condition(s.initial, cfg);
      LinearSimOptions opt;
      FeedbackLaw law;
      if (!s.open_loop) {
        bool law_hit = false;
        law = obtain_feedback(s, cfg, P, law_hit);
        res.cache_hit = res.cache_hit || law_hit;
        opt.law = &law;
        opt.shifted = true;
        opt.lambda = cfg.lambda;
      } else {
        opt.shifted = false;
      }
      SimTrajectory traj = simulate_linear(Z0, P, cfg, opt);
      SimTrajectory phys = to_physical(traj);
      const std::string path = outpath("trajectory.csv");
      trajectory_csv(path, s.command, fp, phys);
      res.artifacts.push_back(path);
      const auto audit = energy_audit(phys, P, cfg);
      double max_resid = 0.0;
      for (double r : audit) max_resid = std::max(max_resid, std::abs(r));
      bool monotone = true;
      for (size_t j = 0; j + 1 < phys.grad_norm_sq.size(); ++j)
        if (phys.grad_norm_sq[j + 1] > phys.grad_norm_sq[j] + 1e-12) monotone = false;
      rep << "loop: " << (s.open_loop ? "open" : "closed") << "\n";
      rep << "steps: " << phys.times.size() - 1 << "\n";
      rep << "initial_h2: " << num(phys.raw_h2.front()) << "\n";
      rep << "final_h2: " << num(phys.raw_h2.back()) << "\n";
      rep << "decay_rate_raw: " << num(decay_fit(phys, false)) << "\n";
      rep << "decay_rate_quotient: " << num(decay_fit(phys, true)) << "\n";
      rep << "max_energy_residual: " << num(max_resid) << "\n";
      rep << "grad_norm_monotone: " << (monotone ? 1 : 0) << "\n";

    } else if (s.command == "simulate-nonlinear") {
      if (s.open_loop)
        throw std::invalid_argument(
            "simulate-nonlinear: the fixed-point construction needs the stabilizing feedback "
            "(open-loop flag is not supported)");
      SteklovOperator P = obtain_steklov(s, cfg, res.cache_hit);
      bool law_hit = false;
      FeedbackLaw law = obtain_feedback(s, cfg, P, law_hit);
      res.cache_hit = res.cache_hit || law_hit;
      const FrameField Z0 = parse_initial_condition(s.initial, cfg);
      NonlinearOptions nopt;
      const NonlinearReport nrep = stabilize_nonlinear(Z0, law, P, cfg, nopt);
      const std::string path = outpath("trajectory.csv");
      trajectory_csv(path, s.command, fp, nrep.physical);
      res.artifacts.push_back(path);
      rep << "converged: " << (nrep.converged ? 1 : 0) << "\n";
      rep << "iterations: " << nrep.iterations << "\n";
      rep << "increments:";
      for (double d : nrep.increments) rep << " " << num(d);
      rep << "\ncontraction_ratios:";
      for (double r : nrep.ratios) rep << " " << num(r);
      rep << "\nstability_constant: " << num(nrep.C_s) << "\n";
      rep << "ball_radius: " << num(nrep.ball_radius) << "\n";
      rep << "decay_rate: " << num(nrep.decay_rate) << "\n";
      rep << "area_drift: " << num(nrep.area_drift) << "\n";
      rep << "min_jacobian_det: " << num(nrep.min_jacobian_det) << "\n";
      if (!nrep.converged) res.exit_code = 1;

    } else if (s.command == "extension-check") {
      const FrameField Z0 = parse_initial_condition(s.initial, cfg);
      if (Z0.max_abs() == 0.0)
        throw std::invalid_argument("extension-check: initial condition is identically zero");
      const ExtensionField E = harmonic_extend(Z0, cfg);
      const std::string path = outpath("extension_check.csv");
      CsvWriter csv(path, s.command, fp, "scale,min_jacobian_det");
      // bracket the folding threshold (min det crossing 0.05) in the scale
      // applied to the given shape, then bisect
      const double target = 0.05;
      auto det_at = [&](double scale) {
        FrameField Zs = Z0;
        Zs *= scale;
        return min_det(harmonic_extend(Zs, cfg));
      };
      double lo = 0.0, hi = 1.0, d_hi = det_at(1.0);
      csv.row({num(1.0), num(d_hi)});
      while (d_hi > target && hi < 1e9) {
        lo = hi;
        hi *= 2.0;
        d_hi = det_at(hi);
        csv.row({num(hi), num(d_hi)});
      }
      double threshold = hi;
      if (d_hi <= target) {
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double d = det_at(mid);
          csv.row({num(mid), num(d)});
          (d > target ? lo : hi) = mid;
        }
        threshold = 0.5 * (lo + hi);
      }
      res.artifacts.push_back(path);
      const InverseJacobianReport ij = inverse_jacobian(E);
      rep << "min_jacobian_det: " << num(ij.min_det) << "\n";
      rep << "sup_grad_minus_id: " << num(ij.sup_grad_minus_id) << "\n";
      rep << "sup_inv_minus_id: " << num(ij.sup_inv_minus_id) << "\n";
      rep << "neumann_bound_holds: " << (ij.neumann_bound_holds ? 1 : 0) << "\n";
      rep << "harmonic_residual: " << num(E.harmonic_residual()) << "\n";
      rep << "folding_scale_threshold: " << num(threshold) << "\n";
      rep << "folding_amplitude_threshold: " << num(threshold * Z0.max_abs()) << "\n";

    } else {
      throw std::invalid_argument("scenario: unknown command '" + s.command + "'");
    }

    const std::string reppath =
        (fs::path(s.output_dir) / (s.command + "_report.txt")).string();
    std::ofstream repout(reppath, std::ios::binary);
    repout << rep.str();
    res.artifacts.push_back(reppath);
    res.report = rep.str();
  } catch (const std::exception& e) {
    res.exit_code = res.exit_code ? res.exit_code : 2;
    res.report = rep.str() + "error: " + e.what() + "\n";
  }
  return res;
}

}  // namespace bubble
