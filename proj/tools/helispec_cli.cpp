#include "helispec/cli_runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>

using namespace helispec;

namespace {

struct ConfigArgs {
  std::string file, preset, out, restart;
  int algorithm = 0;
  std::vector<std::string> sets;
};

void add_config_options(CLI::App* app, ConfigArgs& a) {
  app->add_option("-c,--config", a.file, "config file (sectioned key = value)");
  app->add_option("-p,--preset", a.preset, "named preset");
  app->add_option("-a,--algorithm", a.algorithm, "algorithm row for the inviscid32 preset (1..6)");
  app->add_option("-s,--set", a.sets, "override, e.g. --set time.cfl=0.25 (repeatable)");
  app->add_option("-o,--out", a.out, "output directory");
  app->add_option("--restart", a.restart, "resume from a snapshot");
}

RunConfig build_config(const ConfigArgs& a) {
  RunConfig c = a.file.empty() ? RunConfig{} : load_config(a.file);
  if (!a.preset.empty()) {
    const std::string out = c.output_dir;
    c = RunConfig::from_preset(a.preset, a.algorithm > 0 ? a.algorithm : c.algorithm);
    c.output_dir = out;
  } else if (a.algorithm > 0) {
    c.set("run.algorithm", std::to_string(a.algorithm));
  }
  for (const auto& s : a.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + s + "'");
    c.set(s.substr(0, eq), s.substr(eq + 1));
  }
  if (!a.out.empty()) c.output_dir = a.out;
  if (!a.restart.empty()) c.restart = a.restart;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  helispec::retain_freed_memory();
  CLI::App app{"helispec: energy- and helicity-conserving periodic incompressible solver"};
  app.require_subcommand(1);

  ConfigArgs run_args, verify_args, spectra_args;
  bool quiet = false;
  int progress_every = 100;
  auto* run_cmd = app.add_subcommand("run", "integrate a configuration");
  add_config_options(run_cmd, run_args);
  run_cmd->add_flag("-q,--quiet", quiet, "no progress output");
  run_cmd->add_option("--progress", progress_every, "progress line every N steps");

  int matrix_n = 16;
  std::string csv_path;
  auto* verify_cmd = app.add_subcommand("verify", "certify the discrete operators of a small grid");
  add_config_options(verify_cmd, verify_args);
  verify_cmd->add_option("--matrix-n", matrix_n, "grid size of the conservation matrix (0 skips it)");
  verify_cmd->add_option("--csv", csv_path, "write the machine-readable report here");

  std::string tableau_src;
  auto* tab_cmd = app.add_subcommand("tableau", "symplecticity report of a Butcher tableau");
  tab_cmd->add_option("source", tableau_src, "builtin name (rk4, gauss1, euler) or file")->required();

  std::string snap_path, spectra_out;
  auto* spectra_cmd = app.add_subcommand("spectra", "recompute spectra from a snapshot");
  spectra_cmd->add_option("snapshot", snap_path, "snapshot file")->required();
  add_config_options(spectra_cmd, spectra_args);
  spectra_cmd->add_option("--csv", spectra_out, "output file (stdout if omitted)");

  app.add_subcommand("presets", "list the named presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kValidation;
  }

  try {
    if (*run_cmd) {
      const RunConfig cfg = build_config(run_args);
      RunHooks hooks;
      if (!quiet)
        hooks.on_step = [&, n = 0L](Real t, const StepReport& r, const SpectralVelocity&) mutable {
          if (++n % progress_every == 0)
            std::cerr << "step " << n << "  t = " << t << "  e = " << r.e_after << "  h = " << r.h_after
                      << "  dt = " << r.dt << "  iters = " << r.iterations << "\n";
        };
      const RunResult res = run(cfg, hooks);
      std::cout << "config_hash " << hash_hex(cfg.hash()) << "\n"
                << "steps " << res.steps << "  t/t0 " << res.t / res.t0 << "\n"
                << "e0 " << res.e0 << "  e " << res.e << "  max|de|/e0 " << res.max_rel_de << "\n"
                << "h0 " << res.h0 << "  h " << res.h << "  max|dh|/|h0| " << res.max_rel_dh << "\n";
      if (res.budget)
        std::cout << "e/K_e " << res.budget->e_over_ke << "  h/K_h " << res.budget->h_over_kh << "  sumT_e/eps_e "
                  << res.budget->te_over_eps << "  sumT_h/eps_h " << res.budget->th_over_eps << "\n";
      if (res.exit_code != kOk) std::cerr << "run failed: " << res.message << "\n";
      return res.exit_code;
    }
    if (*verify_cmd) {
      RunConfig cfg = build_config(verify_args);
      if (verify_args.file.empty() && verify_args.preset.empty()) cfg.grid.n = 8;
      const auto reports = verify(cfg);
      bool ok = true;
      for (const auto& r : reports) {
        write_report_text(std::cout, r);
        ok = ok && r.all_pass();
      }
      if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        write_report_csv(f, reports);
      }
      if (matrix_n > 0) {
        std::cout << "conservation matrix (" << matrix_n << "^3, spatial terms; momentum energy helicity)\n";
        for (const auto& row : conservation_matrix(matrix_n, cfg.seed)) {
          std::cout << "  " << row.algorithm << " " << std::setw(4) << to_token(row.form) << " " << std::setw(6)
                    << row.tableau;
          for (int q = 0; q < 3; ++q) {
            std::cout << "   " << to_symbol(row.mark[q]) << " " << std::scientific << std::setprecision(2)
                      << row.projected[q] << (row.pass[q] ? " ok" : " FAIL") << std::defaultfloat;
            ok = ok && row.pass[q];
          }
          std::cout << "\n";
        }
      }
      return ok ? 0 : 1;
    }
    if (*tab_cmd) {
      std::cout << tableau_report(tableau_src);
      return 0;
    }
    if (*spectra_cmd) {
      const Snapshot s = read_snapshot(snap_path);
      RunConfig cfg = build_config(spectra_args);
      if (spectra_args.file.empty() && spectra_args.preset.empty()) {
        cfg.grid = s.grid;
        if (s.grid.scheme == DerivativeScheme::FD2Staggered) cfg.form = ConvectiveForm::HWStaggered;
      }
      const SpectrumSeries sp = snapshot_spectra(cfg, s);
      if (spectra_out.empty()) {
        write_spectra_csv(std::cout, sp);
      } else {
        std::ofstream f(spectra_out);
        f << "# config_hash = " << hash_hex(s.config_hash) << " t = " << s.time << "\n";
        write_spectra_csv(f, sp);
      }
      return 0;
    }
    for (const auto& n : preset_names()) std::cout << n << "\n";
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const NumericalBlowup& e) {
    std::cerr << "blow-up: " << e.what() << "\n";
    return kBlowup;
  } catch (const ConvergenceError& e) {
    std::cerr << "no convergence: " << e.what() << "\n";
    return kNoConvergence;
  }
}
