// Command-line front end: theory densities, Monte Carlo spectra, and
// theory-vs-simulation comparison reports for VMA/VAR/VARMA sample
// covariance matrices.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "frv/errors.hpp"
#include "frv/montecarlo.hpp"
#include "frv/process.hpp"
#include "frv/report.hpp"
#include "frv/spectral.hpp"

namespace fs = std::filesystem;

namespace {

struct ProcessArgs {
  std::string kind;
  std::vector<double> a;
  std::vector<double> b;
};

frv::ProcessSpec build_spec(const ProcessArgs& p) {
  if (p.kind == "vma") return frv::ProcessSpec::vma(p.a);
  if (p.kind == "var") {
    if (p.a.size() != 1)
      throw std::invalid_argument("var takes a single --a value (a0)");
    return frv::ProcessSpec::var(p.a[0], p.b);
  }
  if (p.kind == "varma") return frv::ProcessSpec::varma(p.a, p.b);
  throw std::invalid_argument("unknown process kind: " + p.kind);
}

std::string spec_label(const ProcessArgs& p) {
  std::ostringstream s;
  s << p.kind << " a=(";
  for (size_t i = 0; i < p.a.size(); ++i) s << (i ? "," : "") << p.a[i];
  s << ")";
  if (!p.b.empty()) {
    s << " b=(";
    for (size_t i = 0; i < p.b.size(); ++i) s << (i ? "," : "") << p.b[i];
    s << ")";
  }
  return s.str();
}

void add_process_options(CLI::App* cmd, ProcessArgs& p) {
  cmd->add_option("--process", p.kind, "process family: vma | var | varma")
      ->required();
  cmd->add_option("--a", p.a, "MA coefficients a0,a1,... (a0 only for var)")
      ->required()
      ->delimiter(',');
  cmd->add_option("--b", p.b, "AR coefficients b1,b2,...")->delimiter(',');
}

void print_curve_summary(const frv::DensityCurve& curve) {
  std::cout << "support:";
  for (const auto& [lo, hi] : curve.support_intervals)
    std::cout << " [" << lo << ", " << hi << "]";
  std::cout << "\nnormalization: " << curve.normalization
            << "\nfirst moment:  " << curve.first_moment
            << "\nsecond moment: " << curve.second_moment << "\n";
  if (!curve.flagged_points.empty()) {
    std::cout << "flagged (ambiguous root) points:";
    for (double x : curve.flagged_points) std::cout << " " << x;
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral densities of VMA/VAR/VARMA sample covariance matrices"};
  app.require_subcommand(1);

  // --- density ---
  auto* cmd_density = app.add_subcommand(
      "density", "compute the limiting eigenvalue density of the Pearson estimator");
  ProcessArgs dp;
  double d_r = 0.25, d_eps = 0.0;
  int d_points = 1000;
  bool d_general = false;
  std::string d_out = ".";
  add_process_options(cmd_density, dp);
  cmd_density->add_option("--r", d_r, "rectangularity ratio N/T")->required();
  cmd_density->add_option("--points", d_points, "grid points (default 1000)");
  cmd_density->add_option("--epsilon", d_eps, "imaginary offset (default 0)");
  cmd_density->add_flag("--general", d_general,
                        "force the Newton route on the fundamental equation");
  cmd_density->add_option("--out", d_out, "output directory");

  // --- simulate ---
  auto* cmd_simulate = app.add_subcommand(
      "simulate", "Monte Carlo eigenvalue spectra of simulated panels");
  ProcessArgs sp;
  int s_n = 50, s_t = 200, s_reps = 1, s_bins = 0, s_burn = -1;
  std::uint64_t s_seed = 0;
  std::string s_out = ".";
  add_process_options(cmd_simulate, sp);
  cmd_simulate->add_option("--N", s_n, "number of variables")->required();
  cmd_simulate->add_option("--T", s_t, "number of time samples")->required();
  cmd_simulate->add_option("--reps", s_reps, "replicas");
  cmd_simulate->add_option("--seed", s_seed, "RNG seed");
  cmd_simulate->add_option("--bins", s_bins, "histogram bins (0 = auto)");
  cmd_simulate->add_option("--burn-in", s_burn, "explicit burn-in (default auto)");
  cmd_simulate->add_option("--out", s_out, "output directory");

  // --- compare ---
  auto* cmd_compare = app.add_subcommand(
      "compare", "overlay simulation and theory, emit report.json");
  ProcessArgs cp;
  int c_n = 50, c_t = 200, c_reps = 1000, c_points = 1000;
  std::uint64_t c_seed = 0;
  double c_l1max = 0.08, c_eps = 0.0, c_r = 0.0;
  bool c_crop = false, c_general = false, c_tvg = false;
  std::string c_out = ".";
  add_process_options(cmd_compare, cp);
  cmd_compare->add_option("--N", c_n, "number of variables");
  cmd_compare->add_option("--T", c_t, "number of time samples");
  cmd_compare->add_option("--reps", c_reps, "replicas");
  cmd_compare->add_option("--seed", c_seed, "RNG seed");
  cmd_compare->add_option("--points", c_points, "theory grid points");
  cmd_compare->add_option("--epsilon", c_eps, "imaginary offset for theory");
  cmd_compare->add_option("--l1-max", c_l1max, "pass threshold on l1 distance");
  cmd_compare->add_flag("--crop-support", c_crop,
                        "restrict the metric to the theory support");
  cmd_compare->add_flag("--general", c_general, "use the Newton theory route");
  cmd_compare->add_flag("--theory-vs-general", c_tvg,
                        "compare the polynomial route against the Newton route "
                        "instead of a simulation (needs --r)");
  cmd_compare->add_option("--r", c_r, "ratio for --theory-vs-general");
  std::string c_theory_csv, c_eigs_csv;
  cmd_compare->add_option("--theory-csv", c_theory_csv,
                          "precomputed density.csv instead of solving");
  cmd_compare->add_option("--eigs-csv", c_eigs_csv,
                          "precomputed eigenvalues.csv instead of simulating");
  cmd_compare->add_option("--out", c_out, "output directory");

  // --- autocov ---
  auto* cmd_autocov = app.add_subcommand(
      "autocov", "auto-covariance function and characteristic times");
  ProcessArgs ap;
  int a_maxlag = 20;
  std::string a_out = ".";
  add_process_options(cmd_autocov, ap);
  cmd_autocov->add_option("--max-lag", a_maxlag, "largest lag to emit");
  cmd_autocov->add_option("--out", a_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cmd_density) {
      frv::ProcessSpec spec = build_spec(dp);
      frv::DensityCurve curve =
          frv::solve_density_auto(spec, d_r, d_points, d_general, d_eps);
      fs::create_directories(d_out);
      frv::write_density_csv(fs::path(d_out) / "density.csv", curve);
      frv::write_density_svg(fs::path(d_out) / "density.svg", curve);
      print_curve_summary(curve);
      return 0;
    }

    if (*cmd_simulate) {
      frv::SimulationConfig config(build_spec(sp), s_n, s_t);
      config.replicas = s_reps;
      config.seed = s_seed;
      if (s_burn >= 0) config.burn_in = s_burn;
      config.validate();
      std::optional<int> bins;
      if (s_bins > 0) bins = s_bins;
      frv::SpectrumSample sample = frv::aggregate_spectrum(config, bins);
      fs::create_directories(s_out);
      frv::write_eigenvalues_csv(fs::path(s_out) / "eigenvalues.csv", sample);
      frv::write_histogram_csv(fs::path(s_out) / "histogram.csv",
                               sample.histogram);
      std::cout << "seed: " << s_seed << "\nreplicas: " << s_reps
                << "\neigenvalues: " << sample.pooled_count() << "\n";
      return 0;
    }

    if (*cmd_compare) {
      frv::ProcessSpec spec = build_spec(cp);
      fs::create_directories(c_out);

      if (c_tvg) {
        if (!(c_r > 0.0))
          throw std::invalid_argument("--theory-vs-general needs --r > 0");
        frv::DensityCurve poly =
            frv::solve_density_auto(spec, c_r, c_points, false, c_eps);
        frv::DensityCurve gen =
            frv::solve_density_general(spec, c_r, poly.lambdas);
        double l1 = 0.0;
        for (size_t i = 0; i + 1 < poly.lambdas.size(); ++i) {
          const double h = poly.lambdas[i + 1] - poly.lambdas[i];
          l1 += 0.5 * h *
                (std::abs(poly.rho[i] - gen.rho[i]) +
                 std::abs(poly.rho[i + 1] - gen.rho[i + 1]));
        }
        frv::ComparisonReport rep;
        rep.l1_distance = l1;
        rep.r = c_r;
        rep.process_label = spec_label(cp);
        rep.flagged_solver_points = poly.flagged_points;
        rep.moments.push_back({1, poly.first_moment, gen.first_moment, 0.0});
        rep.moments.push_back({2, poly.second_moment, gen.second_moment, 0.0});
        frv::write_density_csv(fs::path(c_out) / "density.csv", poly);
        frv::write_density_csv(fs::path(c_out) / "density_general.csv", gen);
        frv::write_report_json(fs::path(c_out) / "report.json", rep, c_l1max);
        std::cout << "theory-vs-general l1: " << l1 << "\n";
        return l1 < c_l1max ? 0 : 1;
      }

      frv::SimulationConfig config(spec, c_n, c_t);
      config.replicas = c_reps;
      config.seed = c_seed;
      config.validate();
      const double r = config.ratio();
      frv::DensityCurve curve =
          c_theory_csv.empty()
              ? frv::solve_density_auto(spec, r, c_points, c_general, c_eps)
              : frv::read_density_csv(c_theory_csv);
      frv::SpectrumSample sample = c_eigs_csv.empty()
                                       ? frv::aggregate_spectrum(config)
                                       : frv::read_eigenvalues_csv(c_eigs_csv);
      frv::ComparisonReport rep = frv::compare_spectrum(sample, curve, c_crop);
      rep.num_series = c_n;
      rep.num_samples = c_t;
      rep.replicas = c_reps;
      rep.seed = c_seed;
      rep.process_label = spec_label(cp);
      frv::write_report_json(fs::path(c_out) / "report.json", rep, c_l1max);
      frv::write_overlay_svg(fs::path(c_out) / "overlay.svg", sample.histogram,
                             curve);
      std::cout << "l1_distance: " << rep.l1_distance
                << "\nks_distance: " << rep.ks_distance << "\n";
      return rep.l1_distance < c_l1max ? 0 : 1;
    }

    if (*cmd_autocov) {
      frv::ProcessSpec spec = build_spec(ap);
      frv::AutoCovModel model = frv::autocovariance(spec);
      fs::create_directories(a_out);
      frv::write_autocov_csv(fs::path(a_out) / "autocov.csv", model, a_maxlag);
      std::cout << "A(0) = " << model(0) << "\n";
      const auto& times = model.characteristic_times();
      if (times.empty()) {
        std::cout << "characteristic times: none (banded auto-covariance)\n";
      } else {
        std::cout << "characteristic times:";
        for (double t : times) std::cout << " " << t;
        std::cout << "\n";
      }
      return 0;
    }
  } catch (const frv::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const frv::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
