// Command-line scenario runner for the interface-stabilization pipeline.
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "bubble/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Feedback stabilization of a surface-tension-driven fluid interface:\n"
               "operator assembly, spectral analysis, feedback synthesis, and closed-loop\n"
               "simulation on the circle-in-disk geometry."};
  app.require_subcommand(1);

  bubble::Scenario s;
  std::string backend = "analytic";

  auto add_common = [&](CLI::App* sub, bool takes_initial) {
    sub->add_option("-c,--config", s.config_path, "key=value config file (defaults otherwise)")
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--out", s.output_dir, "output directory for CSV artifacts and reports");
    sub->add_option("--cache", s.cache_dir, "operator cache directory (reused across runs)");
    sub->add_option("--backend", backend, "steklov assembly backend: analytic | fd")
        ->check(CLI::IsMember({"analytic", "fd"}));
    if (takes_initial)
      sub->add_option("-i,--initial", s.initial,
                      "initial displacement: ellipse(a) | mode(k,amp_n,amp_tau) | "
                      "translation(c) | file:path");
  };

  auto* steklov = app.add_subcommand(
      "steklov", "Assemble the interface traction-to-velocity operator blocks");
  add_common(steklov, false);
  auto* spectrum =
      app.add_subcommand("spectrum", "Natural decay rates and directions of every mode");
  add_common(spectrum, false);
  auto* feedback =
      app.add_subcommand("feedback", "Synthesize the stabilizing feedback for the configured rate");
  add_common(feedback, false);
  feedback->add_flag("--exclude-rotation",
                     "leave the neutrally stable rotation direction out of the synthesized law");
  auto* simulate =
      app.add_subcommand("simulate", "Integrate the linearized interface dynamics");
  add_common(simulate, true);
  simulate->add_flag("--open-loop", s.open_loop, "no feedback; report the natural energy decay");
  simulate->add_flag("--exclude-rotation", "leave the rotation direction out of the feedback");
  auto* nonlinear = app.add_subcommand(
      "simulate-nonlinear", "Fixed-point solve of the transformed nonlinear interface problem");
  add_common(nonlinear, true);
  nonlinear->add_flag("--exclude-rotation", "leave the rotation direction out of the feedback");
  auto* extcheck = app.add_subcommand(
      "extension-check", "Displacement-extension invertibility statistics and folding threshold");
  add_common(extcheck, true);

  CLI11_PARSE(app, argc, argv);

  CLI::App* sub = app.get_subcommands().front();
  s.command = sub->get_name();
  s.backend = bubble::parse_backend(backend);
  const CLI::Option* excl = sub->get_option_no_throw("--exclude-rotation");
  if (excl && excl->count() > 0) s.include_rotation = false;

  const bubble::ScenarioResult res = bubble::run_scenario(s);
  std::fputs(res.report.c_str(), res.exit_code ? stderr : stdout);
  if (!res.exit_code)
    for (const auto& a : res.artifacts) std::printf("wrote %s\n", a.c_str());
  return res.exit_code;
}
