#include "bubble/cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "../vendor/json.hpp"

namespace bubble {

namespace {

using nlohmann::json;

constexpr int kCacheVersion = 1;

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

json complex_to_json(const Complex& z) {
  return json::array({hex_double(z.real()), hex_double(z.imag())});
}

Complex complex_from_json(const json& j) {
  return Complex(parse_hex_double(j.at(0).get<std::string>()),
                 parse_hex_double(j.at(1).get<std::string>()));
}

json mat_to_json(const Mat2c& M) {
  json j = json::array();
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) j.push_back(complex_to_json(M(r, c)));
  return j;
}

Mat2c mat_from_json(const json& j) {
  Mat2c M;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) M(r, c) = complex_from_json(j.at(2 * r + c));
  return M;
}

void write_container(const json& payload, const std::string& path) {
  json root;
  root["payload"] = payload;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(payload.dump())));
  root["checksum"] = buf;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cache: cannot write " + path);
  out << root.dump(1) << "\n";
}

json read_container(const std::string& path, const std::string& kind,
                    const std::string& expected_fingerprint) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cache: cannot open " + path);
  json root;
  try {
    in >> root;
  } catch (const std::exception& e) {
    throw std::runtime_error("cache: corrupted file " + path + " (" + e.what() + ")");
  }
  if (!root.contains("payload") || !root.contains("checksum"))
    throw std::runtime_error("cache: corrupted file " + path + " (missing fields)");
  const json payload = root["payload"];
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(payload.dump())));
  if (root["checksum"].get<std::string>() != buf)
    throw std::runtime_error("cache: integrity error in " + path + " (checksum mismatch)");
  if (payload.at("version").get<int>() != kCacheVersion)
    throw std::runtime_error("cache: version mismatch in " + path);
  if (payload.at("kind").get<std::string>() != kind)
    throw std::runtime_error("cache: " + path + " holds a '" +
                             payload.at("kind").get<std::string>() + "' object, expected '" +
                             kind + "'");
  const std::string fp = payload.at("fingerprint").get<std::string>();
  if (!expected_fingerprint.empty() && fp != expected_fingerprint)
    throw std::runtime_error("cache: fingerprint mismatch in " + path + "\n  cached:   " + fp +
                             "\n  expected: " + expected_fingerprint);
  return payload;
}

}  // namespace

std::string hex_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double parse_hex_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw std::runtime_error("cache: bad numeric literal '" + s + "'");
  return v;
}

void save_steklov(const SteklovOperator& P, const std::string& path) {
  json j;
  j["version"] = kCacheVersion;
  j["kind"] = "steklov";
  j["fingerprint"] = P.fingerprint();
  j["backend"] = backend_name(P.backend());
  j["R_s"] = hex_double(P.interface_radius());
  json blocks = json::array();
  for (const auto& B : P.blocks()) blocks.push_back(mat_to_json(B));
  j["blocks"] = blocks;
  write_container(j, path);
}

SteklovOperator load_steklov(const std::string& path, const std::string& expected_fingerprint) {
  const json j = read_container(path, "steklov", expected_fingerprint);
  std::vector<Mat2c> blocks;
  for (const auto& b : j.at("blocks")) blocks.push_back(mat_from_json(b));
  return SteklovOperator(std::move(blocks), parse_backend(j.at("backend").get<std::string>()),
                         j.at("fingerprint").get<std::string>(),
                         parse_hex_double(j.at("R_s").get<std::string>()));
}

void save_feedback(const FeedbackLaw& law, const std::string& path) {
  json j;
  j["version"] = kCacheVersion;
  j["kind"] = "feedback";
  j["fingerprint"] = law.fingerprint;
  j["lambda"] = hex_double(law.lambda);
  j["include_rotation"] = law.include_rotation;
  j["riccati_residual"] = hex_double(law.riccati_residual);
  j["closed_loop_margin"] = hex_double(law.closed_loop_margin);
  json un = json::array();
  for (const auto& u : law.unstable) {
    json e;
    e["k"] = u.k;
    e["eigenvalue"] = hex_double(u.eigenvalue);
    e["eigenvector"] =
        json::array({complex_to_json(u.eigenvector(0)), complex_to_json(u.eigenvector(1))});
    e["volume"] = u.volume;
    e["rigid"] = u.rigid;
    un.push_back(e);
  }
  j["unstable"] = un;
  json pi = json::array(), kb = json::array();
  for (const auto& B : law.Pi_blocks) pi.push_back(mat_to_json(B));
  for (const auto& B : law.K_blocks) kb.push_back(mat_to_json(B));
  j["Pi_blocks"] = pi;
  j["K_blocks"] = kb;
  write_container(j, path);
}

FeedbackLaw load_feedback(const std::string& path, const std::string& expected_fingerprint) {
  const json j = read_container(path, "feedback", expected_fingerprint);
  FeedbackLaw law;
  law.fingerprint = j.at("fingerprint").get<std::string>();
  law.lambda = parse_hex_double(j.at("lambda").get<std::string>());
  law.include_rotation = j.at("include_rotation").get<bool>();
  law.riccati_residual = parse_hex_double(j.at("riccati_residual").get<std::string>());
  law.closed_loop_margin = parse_hex_double(j.at("closed_loop_margin").get<std::string>());
  for (const auto& e : j.at("unstable")) {
    ModeEigenpair u;
    u.k = e.at("k").get<int>();
    u.eigenvalue = parse_hex_double(e.at("eigenvalue").get<std::string>());
    u.eigenvector =
        Vec2c(complex_from_json(e.at("eigenvector").at(0)), complex_from_json(e.at("eigenvector").at(1)));
    u.volume = e.at("volume").get<bool>();
    u.rigid = e.at("rigid").get<bool>();
    law.unstable.push_back(u);
  }
  for (const auto& b : j.at("Pi_blocks")) law.Pi_blocks.push_back(mat_from_json(b));
  for (const auto& b : j.at("K_blocks")) law.K_blocks.push_back(mat_from_json(b));
  return law;
}

}  // namespace bubble
