#include <cstdint>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slsht/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"directional spatially localized spherical harmonic transform"};
  app.require_subcommand(1);

  // window
  double theta_c = 0.0, a = 0.0;
  int lh = 0, oversample = 4;
  std::string out_path;
  CLI::App* window = app.add_subcommand(
      "window", "build the Slepian eigenfunction window for an ellipse");
  window->add_option("--theta-c", theta_c, "focus colatitude (radians)")
      ->required();
  window->add_option("--a", a, "semi-major arc length (radians)")->required();
  window->add_option("--lh", lh, "window band limit")->required();
  window->add_option("--oversample", oversample,
                     "mask quadrature oversampling (>= 2)");
  window->add_option("--out", out_path, "output coefficient file")->required();

  // synth
  std::string kind = "random";
  int lf = 0;
  std::uint64_t seed = 1;
  CLI::App* synth = app.add_subcommand("synth", "generate a test signal");
  synth->add_option("--kind", kind, "random | example1");
  synth->add_option("--lf", lf, "signal band limit")->required();
  synth->add_option("--seed", seed, "random seed");
  synth->add_option("--out", out_path, "output coefficient file")->required();

  // forward
  std::string f_path, h_path, engine = "fast", dist_dir;
  int lmax = -1;
  CLI::App* forward =
      app.add_subcommand("forward", "compute the SLSHT distribution");
  forward->add_option("--signal", f_path, "signal coefficient file")
      ->required();
  forward->add_option("--window", h_path, "window coefficient file")
      ->required();
  forward->add_option("--engine", engine, "fast | direct | reference");
  forward->add_option("--lmax", lmax, "highest component degree (default L_g)");
  forward->add_option("--out", dist_dir, "output distribution directory")
      ->required();

  // inverse
  CLI::App* inverse =
      app.add_subcommand("inverse", "recover a signal from a distribution");
  inverse->add_option("--dist", dist_dir, "distribution directory")
      ->required();
  inverse->add_option("--window", h_path, "window coefficient file")
      ->required();
  inverse->add_option("--out", out_path, "output coefficient file")
      ->required();

  // bench
  std::vector<int> lf_list;
  int repeats = 1;
  CLI::App* bench =
      app.add_subcommand("bench", "time the fast pipeline stages");
  bench->add_option("--lf", lf_list, "signal band limits to sweep")
      ->required();
  bench->add_option("--lh", lh, "window band limit")->required();
  bench->add_option("--repeats", repeats, "passes per band limit (median)");
  bench->add_option("--out", out_path, "output csv")->required();

  // slice
  int comp_l = 0, comp_m = 0, gamma_index = 0;
  CLI::App* slice = app.add_subcommand(
      "slice", "export one component at fixed gamma as (theta,phi) csv");
  slice->add_option("--dist", dist_dir, "distribution directory")->required();
  slice->add_option("--l", comp_l, "component degree")->required();
  slice->add_option("--m", comp_m, "component order")->required();
  slice->add_option("--gamma-index", gamma_index, "gamma grid index");
  slice->add_option("--out", out_path, "output csv")->required();

  // verify
  std::string path_a, path_b;
  bool dist_mode = false;
  CLI::App* verify = app.add_subcommand(
      "verify", "print the max abs difference of two coefficient files or "
                "distribution directories");
  verify->add_option("a", path_a, "first path")->required();
  verify->add_option("b", path_b, "second path")->required();
  verify->add_flag("--dist", dist_mode, "compare distribution directories");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return slsht::cli::kExitValidation;
  }

  if (window->parsed())
    return slsht::cli::run_window(theta_c, a, lh, oversample, out_path);
  if (synth->parsed()) return slsht::cli::run_synth(kind, lf, seed, out_path);
  if (forward->parsed())
    return slsht::cli::run_forward(f_path, h_path, engine, dist_dir, lmax);
  if (inverse->parsed())
    return slsht::cli::run_inverse(dist_dir, h_path, out_path);
  if (bench->parsed())
    return slsht::cli::run_bench(lf_list, lh, repeats, out_path);
  if (slice->parsed())
    return slsht::cli::run_slice(dist_dir, comp_l, comp_m, gamma_index,
                                 out_path);
  if (verify->parsed())
    return dist_mode ? slsht::cli::run_verify_dist(path_a, path_b)
                     : slsht::cli::run_verify_coeffs(path_a, path_b);
  return slsht::cli::kExitValidation;
}
