// Command-line driver for the 1D spectral phase-field surfactant
// simulator. Subcommands map onto the experiment drivers:
//
//   simulate    one run from a config file; series + profile CSVs
//   stability   the two-loading well-posedness demonstration
//   isotherm    psi_c x psi_b sweep measuring interface loadings
//   adsorption  uniform-loading adsorption dynamics + regime fits
//   converge    traveling-wave convergence ladder over (N, eps)
//
// Exit codes: 0 success, 2 configuration error, 3 all runs failed.
// A blow-up inside a sweep is data, not failure.

#include "chsurf/chsurf.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace chsurf;

namespace {

ScenarioConfig load_or_default(const std::string& path,
                               const ScenarioConfig& fallback) {
  if (path.empty()) return fallback;
  return read_config(path);
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& fn) {
  auto os = open_output(path.string());
  fn(os);
  std::cout << "wrote " << path.string() << "\n";
}

void write_run_outputs(const fs::path& dir, const std::string& stem,
                       const SemidiscreteSystem& sys, const RunRecord& rec) {
  write_file(dir / (stem + "_series.csv"),
             [&](std::ostream& os) { write_series_csv(os, rec); });
  write_file(dir / (stem + "_profile.csv"), [&](std::ostream& os) {
    write_profile_csv(os, sys, rec.final_state);
  });
  for (size_t i = 0; i < rec.snapshots.size(); ++i) {
    write_file(dir / (stem + "_profile_" + std::to_string(i) + ".csv"),
               [&](std::ostream& os) {
                 write_profile_csv(os, sys, rec.snapshots[i].state);
               });
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D spectral-Galerkin simulator for phase-field surfactant models"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  int jobs = 1;
  app.add_option("--config", config_path, "configuration file (key = value)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--jobs", jobs, "worker threads for sweeps")
      ->check(CLI::PositiveNumber);

  auto* sim = app.add_subcommand("simulate", "run one configured simulation");

  auto* stab = app.add_subcommand(
      "stability", "unstable/stable loading pair (model 0 demonstration)");
  double psib_unstable = 0.012, psib_stable = 0.006;
  stab->add_option("--psib-unstable", psib_unstable, "unstable bulk loading");
  stab->add_option("--psib-stable", psib_stable, "stable bulk loading");

  auto* iso = app.add_subcommand("isotherm", "psi_c x psi_b isotherm sweep");
  int iso_model = 3;
  std::string psib_spec = "1e-3:1e-1:8:log";
  std::vector<double> psic_list{0.0020, 0.0056, 0.016, 0.035, 0.075};
  iso->add_option("--model", iso_model, "model variant 0..3");
  iso->add_option("--psib", psib_spec, "bulk grid lo:hi:count[:log|lin]");
  iso->add_option("--psic", psic_list, "adsorption constants")
      ->delimiter(',');

  auto* ads = app.add_subcommand("adsorption",
                                 "adsorption dynamics and regime fits");
  int ads_model = 3;
  ads->add_option("--model", ads_model, "model variant 2 or 3");

  auto* conv = app.add_subcommand("converge", "traveling-wave convergence");
  std::vector<int> orders{24, 32, 48, 64, 96};
  std::vector<double> epsilons{1e-4, 1e-6, 1e-8};
  bool coupled = false;
  int ref_order = 400;
  double ref_eps = 1e-10;
  conv->add_option("--orders", orders, "polynomial orders")->delimiter(',');
  conv->add_option("--eps", epsilons, "time tolerances")->delimiter(',');
  conv->add_flag("--coupled", coupled,
                 "compare against a high-resolution coupled reference");
  conv->add_option("--ref-order", ref_order, "reference order (coupled)");
  conv->add_option("--ref-eps", ref_eps, "reference tolerance (coupled)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    if (sim->parsed()) {
      if (config_path.empty()) {
        std::cerr << "simulate requires --config\n";
        return 2;
      }
      const ScenarioConfig cfg = read_config(config_path);
      const RunRecord rec = run_simulation(cfg);
      write_run_outputs(dir, "run", make_system(cfg), rec);
      std::cout << "termination: " << termination_name(rec.termination)
                << " at t = " << rec.final_state.time << " ("
                << rec.accepted << " accepted, " << rec.rejected
                << " rejected steps)\n";
      return rec.termination == Termination::solver_failure ? 3 : 0;
    }

    if (stab->parsed()) {
      const ScenarioConfig base =
          load_or_default(config_path, stability_demo_config());
      const StabilityDemo demo =
          run_stability_demo(base, psib_unstable, psib_stable);
      const SemidiscreteSystem sys = make_system(base);
      write_run_outputs(dir, "unstable", sys, demo.unstable);
      write_run_outputs(dir, "stable", sys, demo.stable);
      std::cout << "unstable loading: "
                << termination_name(demo.unstable.termination)
                << ", stable loading: "
                << termination_name(demo.stable.termination) << "\n";
      return 0;
    }

    if (iso->parsed()) {
      ScenarioConfig base = load_or_default(config_path, ScenarioConfig{});
      if (config_path.empty()) {
        base.cn = 1.0 / 6.0;
        base.order = 96;
        base.t_end = 50.0;
      }
      const auto psi_bs = parse_sweep_grid(psib_spec);
      const auto rows =
          run_isotherm_sweep(iso_model, psic_list, psi_bs, base, jobs);
      write_file(dir / "isotherm.csv",
                 [&](std::ostream& os) { write_isotherm_csv(os, rows); });
      const long ok = std::count_if(rows.begin(), rows.end(), [](auto& r) {
        return r.status == "ok";
      });
      std::cout << ok << "/" << rows.size() << " grid points converged\n";
      return ok == 0 ? 3 : 0;
    }

    if (ads->parsed()) {
      ScenarioConfig cfg = load_or_default(config_path, ScenarioConfig{});
      if (config_path.empty()) {
        cfg.cn = 1.0 / 20.0;
        cfg.ex = 1.0;
        cfg.pi = pi_from_adsorption_constant(0.016, 1.0);
        cfg.order = 192;
        cfg.t_end = 400.0;
        cfg.psi_init = "uniform:0.01";
      }
      cfg.variant = ads_model;
      const AdsorptionResult res = run_adsorption(cfg);
      write_run_outputs(dir, "adsorption", make_system(cfg), res.record);
      write_file(dir / "adsorption_fit.csv", [&](std::ostream& os) {
        os << "name,value\n";
        os << "psi0_eq," << res.psi0_eq << "\n";
        os << "saturated," << (res.saturated ? 1 : 0) << "\n";
        os << "ultrashort_slope," << res.fit.ultrashort_slope << "\n";
        os << "r2_ultrashort," << res.fit.r2_ultrashort << "\n";
        os << "tau1," << res.fit.tau1 << "\n";
        os << "power_exponent," << res.fit.power_exponent << "\n";
        os << "r2_mid," << res.fit.r2_mid << "\n";
        os << "tau0," << res.fit.tau0 << "\n";
        os << "r2_late," << res.fit.r2_late << "\n";
      });
      std::cout << "psi0_eq = " << res.psi0_eq
                << ", mid-window exponent = " << res.fit.power_exponent
                << ", tau1 = " << res.fit.tau1 << ", tau0 = " << res.fit.tau0
                << "\n";
      return 0;
    }

    if (conv->parsed()) {
      ScenarioConfig base = load_or_default(config_path, traveling_wave_config());
      const auto rows =
          coupled ? run_convergence_coupled(orders, epsilons, base, ref_order,
                                            ref_eps)
                  : run_convergence(orders, epsilons, base);
      write_file(dir / "convergence.csv",
                 [&](std::ostream& os) { write_convergence_csv(os, rows); });
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
