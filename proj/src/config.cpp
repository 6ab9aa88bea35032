#include "bubble/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bubble {

void BubbleConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
  if (!(R_s > 0.0)) fail("R_s must be positive");
  if (!(R_out > R_s)) fail("R_out must exceed R_s");
  if (!(nu > 0.0)) fail("nu must be positive");
  if (!(mu > 0.0)) fail("mu must be positive");
  if (!(lambda > 0.0)) fail("lambda must be positive");
  if (K < 2) fail("K must be at least 2");
  if (N_r < 16) fail("N_r must be at least 16");
  if (!(dt > 0.0)) fail("dt must be positive");
  if (!(T > 0.0)) fail("T must be positive");
}

static std::string hexd(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

std::string BubbleConfig::fingerprint(std::string_view backend) const {
  std::ostringstream os;
  os << "v1;R_s=" << hexd(R_s) << ";R_out=" << hexd(R_out) << ";nu=" << hexd(nu)
     << ";mu=" << hexd(mu) << ";K=" << K << ";backend=" << backend;
  if (backend != "analytic") os << ";N_r=" << N_r;
  return os.str();
}

BubbleConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  BubbleConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string trimmed;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
    if (trimmed.empty()) continue;
    auto eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) + ": expected key=value");
    std::string key = trimmed.substr(0, eq);
    std::string val = trimmed.substr(eq + 1);
    try {
      if (key == "R_s") cfg.R_s = std::stod(val);
      else if (key == "R_out") cfg.R_out = std::stod(val);
      else if (key == "nu") cfg.nu = std::stod(val);
      else if (key == "mu") cfg.mu = std::stod(val);
      else if (key == "lambda") cfg.lambda = std::stod(val);
      else if (key == "K") cfg.K = std::stoi(val);
      else if (key == "N_r") cfg.N_r = std::stoi(val);
      else if (key == "dt") cfg.dt = std::stod(val);
      else if (key == "T") cfg.T = std::stod(val);
      else throw std::invalid_argument("config: unknown key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("config: bad value for '" + key + "': " + val);
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace bubble
