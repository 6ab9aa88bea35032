#pragma once

#include <string>
#include <vector>

#include "bubble/config.hpp"
#include "bubble/frame_field.hpp"
#include "bubble/steklov.hpp"

namespace bubble {

/// One pipeline invocation: which stage to run, where parameters come from,
/// where artifacts and cached operators live.
struct Scenario {
  /// steklov | spectrum | feedback | simulate | simulate-nonlinear | extension-check
  std::string command;
  std::string config_path;  ///< key=value file; empty keeps the defaults
  /// Initial interface displacement: ellipse(a) | mode(k,amp_n,amp_tau) |
  /// translation(c) | file:path
  std::string initial = "ellipse(0.005)";
  std::string output_dir = ".";
  std::string cache_dir;  ///< empty disables operator caching
  Backend backend = Backend::Analytic;
  bool open_loop = false;
  bool include_rotation = true;
};

struct ScenarioResult {
  int exit_code = 0;
  bool cache_hit = false;                ///< an operator was loaded, not assembled
  std::vector<std::string> artifacts;    ///< files written, in order
  std::string report;                    ///< the textual report (also written to disk)
};

/// Build the initial displacement field from a preset expression. All presets
/// yield real-valued, volume-free fields band-limited to cfg.K.
FrameField parse_initial_condition(const std::string& spec, const BubbleConfig& cfg);

/// Plain-text frame-field files used by the file: preset — one line per
/// non-negative mode: "k re_n im_n re_tau im_tau"; negative modes follow by
/// conjugation.
void write_frame_field(const FrameField& f, const std::string& path);
FrameField read_frame_field(const std::string& path, int max_mode);

/// Execute the scenario: validate the config, reuse or assemble the cached
/// operators, run the requested stage, and write CSV artifacts plus a report.
/// Every CSV starts with a header carrying the config fingerprint. Failures
/// (config errors, cache fingerprint mismatches, solver refusals) produce a
/// nonzero exit code with the message in `report`; nothing is thrown.
ScenarioResult run_scenario(const Scenario& s);

}  // namespace bubble
