#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blowup/config.hpp"
#include "blowup/error.hpp"
#include "blowup/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitStage = 3;

struct Args {
  std::string config;
  std::string out;
  int jobs = 1;
  std::vector<std::string> stages;
  bool no_cache = false;
};

void add_common(CLI::App* sub, Args& args) {
  sub->add_option("--config", args.config, "run configuration (INI)")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", args.out, "output directory (overrides [output] dir)");
  sub->add_option("--jobs", args.jobs, "worker threads for per-base-point analyses")->check(CLI::PositiveNumber);
  sub->add_option("--stage", args.stages, "run only the named stage(s) and their inputs");
  sub->add_flag("--no-cache", args.no_cache, "recompute every stage");
}

void print_manifest(const blowup::RunManifest& m) {
  for (const auto& s : m.stages) {
    std::printf("%-12s %-8s %8.2fs", s.name.c_str(), s.status.c_str(), s.seconds);
    if (!s.message.empty()) std::printf("  %s", s.message.c_str());
    std::printf("\n");
  }
  std::printf("manifest: %s/manifest.json\n", m.output_dir.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blow-up laboratory for degenerate nonlinear wave equations"};
  app.require_subcommand(1);
  Args args;
  const std::vector<std::string> commands = {"simulate", "curve",    "frames",    "energy",
                                             "profile-fit", "solitons", "normcheck", "report"};
  for (const auto& name : commands) add_common(app.add_subcommand(name, "run the " + name + " stage"), args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    blowup::RunConfig config = blowup::load_config(args.config);
    if (!args.out.empty()) config.output_dir = args.out;
    blowup::PipelineOptions opts;
    opts.jobs = args.jobs;
    opts.use_cache = !args.no_cache;
    opts.stages = args.stages.empty() ? std::vector<std::string>{command} : args.stages;
    if (command == "report" && args.stages.empty()) opts.stages.clear();

    const blowup::RunManifest manifest = blowup::run_pipeline(config, opts);
    print_manifest(manifest);
    if (!manifest.ok()) return kExitStage;

    for (const char* kind : {"curve", "energy", "profile", "solitons"}) {
      try {
        std::printf("plot data: %s\n", blowup::emit_plot_data(manifest, kind).c_str());
      } catch (const blowup::Error& e) {
        if (e.kind() != blowup::ErrorKind::MissingStage) throw;
      }
    }
    return kExitOk;
  } catch (const blowup::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == blowup::ErrorKind::Validation ? kExitValidation : kExitStage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitStage;
  }
}
