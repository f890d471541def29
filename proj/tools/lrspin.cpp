// Command-line front end for the lrspin library.
//
//   lrspin <command> [--model model1|model2|model3|lz] [--track-file path]
//          [--j 0.5] [--epsilon 1] [--t-min -6] [--t-max 6] [--steps 1201]
//          [--tol 1e-10] [--out path] ...

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "lrspin/cli/run.hpp"

namespace {

void add_options(CLI::App& sub, lrspin::cli::RunConfig& cfg) {
  sub.add_option("--model", cfg.model, "model1 | model2 | model3 | lz");
  sub.add_option("--track-file", cfg.track_file, "CSV with header t,theta,phi");
  sub.add_flag("--literal-track", cfg.literal_track,
               "model3: use the uncorrected phi(t) (negative control)");
  sub.add_option("--j", cfg.j, "spin label (half-integer)");
  sub.add_option("--epsilon", cfg.epsilon, "field scale");
  sub.add_option("--t-min", cfg.t_min, "start of the time grid");
  sub.add_option("--t-max", cfg.t_max, "end of the time grid");
  sub.add_option("--steps", cfg.steps, "grid points, or integration steps for propagate/lz");
  sub.add_option("--tol", cfg.tol, "crossing refinement tolerance on t");
  sub.add_option("--out", cfg.out, "output path (default: standard output)");
  sub.add_option("--m", cfg.m, "propagate: magnetic quantum number (default j)");
  sub.add_option("--initial", cfg.initial, "propagate: lr | basis");
  sub.add_option("--stride", cfg.stride, "propagate: emit every n-th step");
  sub.add_option("--delta", cfg.delta, "lz coupling");
  sub.add_option("--nu", cfg.nu, "lz sweep rate");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven spin-j dynamics from invariant angle tracks"};
  app.require_subcommand(1);
  lrspin::cli::RunConfig cfg;
  const std::map<std::string, std::string> help{
      {"fields", "closed-form driving field of a builtin model"},
      {"track", "invariant angles and Bloch vector"},
      {"engineer", "field reverse-engineered from a track"},
      {"verify", "residual of the invariant equation"},
      {"levels", "adiabatic and nonadiabatic levels with the overlap f"},
      {"crossings", "refined nonadiabatic level crossings"},
      {"propagate", "RK4 propagation compared with the exact solution"},
      {"lz", "Landau-Zener formula against numerics"},
  };
  for (const std::string& name : lrspin::cli::detail::known_commands()) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    add_options(*sub, cfg);
    sub->callback([&cfg, name] { cfg.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lrspin::cli::kInvalidInput;
  }
  return lrspin::cli::run(cfg, std::cout, std::cerr);
}
