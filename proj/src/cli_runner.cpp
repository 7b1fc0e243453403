#include "helispec/cli_runner.hpp"

#ifdef __GLIBC__
#include <malloc.h>
#endif

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace helispec {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(Real x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

Real to_real(const std::string& key, const std::string& v) {
  Real x = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) throw ValidationError(key + ": not a number: '" + v + "'");
  return x;
}

long to_int(const std::string& key, const std::string& v) {
  long x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) throw ValidationError(key + ": not an integer: '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError(key + ": not a boolean: '" + v + "'");
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(static_cast<int>(to_int(key, item)));
  }
  return out;
}

void read_lines(std::istream& in, const fs::path& base, std::vector<std::pair<std::string, std::string>>& out,
                int depth) {
  if (depth > 16) throw ValidationError("config include nesting too deep");
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto c = line.find('#'); c != std::string::npos) line.erase(c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError("config line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key == "include") {
      const fs::path p = base / value;
      std::ifstream f(p);
      if (!f) throw ValidationError("cannot open included config " + p.string());
      read_lines(f, p.parent_path(), out, depth + 1);
      continue;
    }
    out.emplace_back(section.empty() ? key : section + "." + key, value);
  }
}

// -- snapshot io ------------------------------------------------------------------

constexpr char kMagic[8] = {'H', 'S', 'P', 'S', 'N', 'A', 'P', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw ValidationError("truncated snapshot");
  return v;
}

void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw ValidationError("cannot create directory " + p.string() + ": " + ec.message());
}

std::string numbered(const std::string& stem, long i, const std::string& ext) {
  std::ostringstream os;
  os << stem << std::setw(5) << std::setfill('0') << i << ext;
  return os.str();
}

Real dissipation_e(const SpectralVelocity& u, Real nu) { return nu == 0.0 ? 0.0 : -nu * inner(u, laplacian(u)); }
Real dissipation_h(const SpectralVelocity& u, Real nu) {
  if (nu == 0.0) return 0.0;
  const SpectralVector lu = laplacian(u);
  return -nu * (helicity_form(u, lu) + helicity_form(lu, u));
}

}  // namespace

// -- config -------------------------------------------------------------------------

RunConfig RunConfig::from_preset(const std::string& name, int algorithm) {
  const Scenario sc = helispec::preset(name, algorithm);
  RunConfig c;
  c.preset = name;
  c.algorithm = algorithm;
  c.grid = sc.grid;
  c.form = sc.form;
  c.tableau = sc.tableau;
  c.nu = sc.nu;
  c.cfl = sc.cfl;
  c.t_end = sc.t_end;
  for (const auto& a : sc.abc) c.abc.push_back(a.k);
  c.forcing = sc.forcing;
  c.seed = sc.seed;
  if (sc.forcing) {
    c.spectra_every = 0.1;
    c.average_from = 20.0;
  }
  return c;
}

void RunConfig::set(const std::string& key, const std::string& v) {
  auto forcing_ref = [&]() -> ForcingSpec& {
    if (!forcing) forcing = ForcingSpec{};
    return *forcing;
  };
  if (key == "run.preset") {
    const int alg = algorithm;
    const std::string keep_out = output_dir;
    *this = from_preset(v, alg);
    output_dir = keep_out;
  } else if (key == "run.algorithm") {
    algorithm = static_cast<int>(to_int(key, v));
    if (!preset.empty()) {
      const std::string keep_out = output_dir;
      *this = from_preset(preset, algorithm);
      output_dir = keep_out;
    }
  } else if (key == "run.seed") {
    seed = static_cast<unsigned>(to_int(key, v));
    if (forcing) forcing->seed = seed;
  } else if (key == "run.restart") restart = v;
  else if (key == "grid.n") grid.n = static_cast<int>(to_int(key, v));
  else if (key == "grid.box_length") grid.box_length = to_real(key, v);
  else if (key == "grid.scheme") grid.scheme = parse_scheme(v);
  else if (key == "grid.dealias") grid.dealias.kind = parse_dealias(v);
  else if (key == "grid.k_max") grid.dealias.k_max = to_real(key, v);
  else if (key == "physics.form") form = parse_form(v);
  else if (key == "physics.nu") nu = to_real(key, v);
  else if (key == "time.tableau") tableau = v;
  else if (key == "time.cfl") cfl = to_real(key, v);
  else if (key == "time.t_end") t_end = to_real(key, v);
  else if (key == "time.dt_max") dt_max = to_real(key, v);
  else if (key == "time.implicit_tol") implicit_tol = to_real(key, v);
  else if (key == "time.max_iter") max_iter = static_cast<int>(to_int(key, v));
  else if (key == "time.anderson_depth") anderson_depth = static_cast<int>(to_int(key, v));
  else if (key == "init.abc") abc = to_int_list(key, v);
  else if (key == "init.energy") {
    if (v == "none" || v.empty()) initial_energy.reset();
    else initial_energy = to_real(key, v);
  } else if (key == "forcing.enabled") {
    if (to_bool(key, v)) forcing_ref();
    else forcing.reset();
  } else if (key == "forcing.k_F") forcing_ref().k_F = to_real(key, v);
  else if (key == "forcing.h_rel") forcing_ref().h_rel = to_real(key, v);
  else if (key == "forcing.energy") forcing_ref().energy = to_real(key, v);
  else if (key == "output.dir") output_dir = v;
  else if (key == "output.spectra_every") spectra_every = to_real(key, v);
  else if (key == "output.snapshot_every") snapshot_every = to_real(key, v);
  else if (key == "output.average_from") average_from = to_real(key, v);
  else if (key == "output.threads") threads = static_cast<int>(to_int(key, v));
  else if (key == "output.measure_plans") measure_plans = to_bool(key, v);
  else throw ValidationError("unknown config key '" + key + "'");
}

void RunConfig::validate() const {
  grid.validate();
  Grid::create(grid);  // dealias parameters
  check_form(form, *Grid::create(grid));
  load_tableau(tableau);
  if (!(nu >= 0.0)) throw ValidationError("nu must be >= 0");
  if (!(cfl > 0.0)) throw ValidationError("cfl must be positive");
  if (!(t_end > 0.0)) throw ValidationError("t_end must be positive");
  if (!(dt_max > 0.0)) throw ValidationError("dt_max must be positive");
  if (!(spectra_every >= 0.0) || !(snapshot_every >= 0.0)) throw ValidationError("output cadence must be >= 0");
  if (!(implicit_tol > 0.0) || max_iter < 1 || anderson_depth < 0) throw ValidationError("bad implicit solver settings");
  if (threads < 1) throw ValidationError("threads must be >= 1");
  if (forcing) forcing->validate(grid);
  else if (abc.empty()) throw ValidationError("no initial condition: give init.abc or enable forcing");
  for (int k : abc) {
    AbcSpec a;
    a.k = k;
    a.validate(grid.n);
  }
  if (initial_energy && !(*initial_energy > 0.0)) throw ValidationError("init.energy must be positive");
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "[run]\npreset = " << preset << "\nalgorithm = " << algorithm << "\nseed = " << seed
     << "\nrestart = " << restart << "\n";
  os << "[grid]\nn = " << grid.n << "\nbox_length = " << fmt(grid.box_length) << "\nscheme = " << to_token(grid.scheme)
     << "\ndealias = " << to_token(grid.dealias.kind) << "\nk_max = " << fmt(grid.dealias.k_max) << "\n";
  os << "[physics]\nform = " << to_token(form) << "\nnu = " << fmt(nu) << "\n";
  os << "[time]\ntableau = " << tableau << "\ncfl = " << fmt(cfl) << "\nt_end = " << fmt(t_end)
     << "\ndt_max = " << fmt(dt_max) << "\nimplicit_tol = " << fmt(implicit_tol) << "\nmax_iter = " << max_iter
     << "\nanderson_depth = " << anderson_depth << "\n";
  os << "[init]\nabc = ";
  for (std::size_t i = 0; i < abc.size(); ++i) os << (i ? ", " : "") << abc[i];
  os << "\nenergy = " << (initial_energy ? fmt(*initial_energy) : "none") << "\n";
  os << "[forcing]\nenabled = " << (forcing ? "true" : "false") << "\n";
  if (forcing)
    os << "k_F = " << fmt(forcing->k_F) << "\nh_rel = " << fmt(forcing->h_rel) << "\nenergy = " << fmt(forcing->energy)
       << "\n";
  os << "[output]\ndir = " << output_dir << "\nspectra_every = " << fmt(spectra_every)
     << "\nsnapshot_every = " << fmt(snapshot_every) << "\naverage_from = " << fmt(average_from)
     << "\nthreads = " << threads << "\nmeasure_plans = " << (measure_plans ? "true" : "false") << "\n";
  return os.str();
}

std::uint64_t RunConfig::hash() const {
  // output location and restart source do not change the physics
  RunConfig c = *this;
  c.output_dir.clear();
  c.restart.clear();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : c.canonical()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

Scenario RunConfig::scenario() const {
  Scenario sc;
  sc.name = preset.empty() ? "custom" : preset;
  sc.grid = grid;
  sc.form = form;
  sc.tableau = tableau;
  sc.nu = nu;
  sc.cfl = cfl;
  sc.t_end = t_end;
  for (int k : abc) {
    AbcSpec a;
    a.k = k;
    sc.abc.push_back(a);
  }
  sc.forcing = forcing;
  if (sc.forcing) sc.forcing->seed = seed;
  sc.seed = seed;
  return sc;
}

RunConfig parse_config(std::istream& in, const fs::path& base_dir) {
  std::vector<std::pair<std::string, std::string>> kv;
  read_lines(in, base_dir, kv, 0);
  RunConfig c;
  // the preset sets defaults, so it is applied first wherever it appears
  for (const auto& [k, v] : kv)
    if (k == "run.algorithm") c.algorithm = static_cast<int>(to_int(k, v));
  for (const auto& [k, v] : kv)
    if (k == "run.preset") c = RunConfig::from_preset(v, c.algorithm);
  for (const auto& [k, v] : kv)
    if (k != "run.preset" && k != "run.algorithm") c.set(k, v);
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open config " + path.string());
  return parse_config(f, path.parent_path());
}

// -- snapshots ----------------------------------------------------------------------

void write_snapshot(const fs::path& path, const Snapshot& s) {
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw ValidationError("cannot write snapshot " + tmp.string());
    os.write(kMagic, sizeof kMagic);
    put(os, kVersion);
    put(os, std::int32_t(s.grid.n));
    put(os, std::int32_t(s.grid.scheme));
    put(os, std::int32_t(s.grid.dealias.kind));
    put(os, s.grid.dealias.k_max);
    put(os, s.grid.box_length);
    put(os, s.time);
    put(os, s.step);
    put(os, s.config_hash);
    put(os, s.t0);
    const Eigen::Index m = s.u.g().mode_count();
    put(os, std::int64_t(m));
    for (int c = 0; c < 3; ++c) os.write(reinterpret_cast<const char*>(s.u[c].data()), m * sizeof(Complex));
    if (!os) throw ValidationError("failed writing snapshot " + tmp.string());
  }
  fs::rename(tmp, path);
}

Snapshot read_snapshot(const fs::path& path, GridPtr grid) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open snapshot " + path.string());
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0) throw ValidationError("not a snapshot: " + path.string());
  if (get<std::uint32_t>(is) != kVersion) throw ValidationError("unsupported snapshot version");
  Snapshot s;
  s.grid.n = get<std::int32_t>(is);
  s.grid.scheme = static_cast<DerivativeScheme>(get<std::int32_t>(is));
  s.grid.dealias.kind = static_cast<DealiasPolicy::Kind>(get<std::int32_t>(is));
  s.grid.dealias.k_max = get<double>(is);
  s.grid.box_length = get<double>(is);
  s.time = get<double>(is);
  s.step = get<std::int64_t>(is);
  s.config_hash = get<std::uint64_t>(is);
  s.t0 = get<double>(is);
  const auto m = get<std::int64_t>(is);
  const GridSpec& gs = s.grid;
  const bool same = grid && grid->spec().n == gs.n && grid->spec().scheme == gs.scheme &&
                    grid->spec().dealias.kind == gs.dealias.kind && grid->spec().dealias.k_max == gs.dealias.k_max &&
                    grid->spec().box_length == gs.box_length;
  if (!same) grid = Grid::create(gs);
  if (m != grid->mode_count()) throw ValidationError("snapshot payload does not match its grid");
  s.u = SpectralVelocity(grid);
  for (int c = 0; c < 3; ++c) {
    is.read(reinterpret_cast<char*>(s.u[c].data()), m * sizeof(Complex));
    if (!is) throw ValidationError("truncated snapshot payload");
  }
  return s;
}

// -- run ------------------------------------------------------------------------------

void retain_freed_memory() {
#ifdef __GLIBC__
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
  mallopt(M_TOP_PAD, 64 << 20);
#endif
}

RunResult run(const RunConfig& cfg, const RunHooks& hooks) {
  cfg.validate();
  const Scenario sc = cfg.scenario();
  Grid::Options gopt;
  gopt.threads = cfg.threads;
  gopt.planner = cfg.measure_plans ? FftPlanner::Measure : FftPlanner::Estimate;
  const GridPtr grid = Grid::create(cfg.grid, gopt);
  const ButcherTableau tab = load_tableau(cfg.tableau);
  const std::uint64_t hash = cfg.hash();
  const std::string hex = hash_hex(hash);

  std::shared_ptr<EulerForcing> forcing;
  SpectralVelocity u = initial_state(sc, grid, &forcing);
  if (!forcing && cfg.initial_energy) u *= std::sqrt(*cfg.initial_energy / energy(u));
  Real t0 = characteristic_time(sc, u, forcing.get());
  Real t = 0.0;
  std::int64_t steps = 0;
  if (!cfg.restart.empty()) {
    Snapshot s = read_snapshot(cfg.restart, grid);
    if (s.config_hash != hash) throw ValidationError("restart snapshot comes from a different configuration");
    u = std::move(s.u);
    t = s.time;
    steps = s.step;
    t0 = s.t0;
  }

  Dynamics dyn{cfg.form, cfg.nu, forcing};
  StepOptions opt;
  opt.implicit_tol = cfg.implicit_tol;
  opt.max_iter = cfg.max_iter;
  opt.anderson_depth = cfg.anderson_depth;
  opt.attribution = false;

  RunResult res;
  res.t0 = t0;
  res.e0 = energy(u);
  res.h0 = helicity(u);
  if (forcing) {
    res.ke = forcing->band_energy(u);
    res.kh = forcing->band_helicity(u);
  }
  const Real t_end = cfg.t_end * t0;
  const Real dt_cap = cfg.dt_max * t0;

  const fs::path out = cfg.output_dir;
  std::ofstream ts;
  if (hooks.write_files) {
    ensure_dir(out / "spectra");
    ensure_dir(out / "snapshots");
    std::ofstream(out / "config.cfg") << "# config_hash = " << hex << "\n" << cfg.canonical();
    ts.open(out / "timeseries.csv", cfg.restart.empty() ? std::ios::trunc : std::ios::app);
    if (cfg.restart.empty()) {
      ts << "# config_hash = " << hex << "\n";
      write_timeseries_header(ts);
      write_timeseries_row(ts, t, res.e0, res.h0, dissipation_e(u, cfg.nu), dissipation_h(u, cfg.nu), 0.0, 0);
    }
  }
  auto snapshot = [&](const fs::path& p, const SpectralVelocity& v, Real tt, std::int64_t st) {
    write_snapshot(p, Snapshot{cfg.grid, tt, st, hash, t0, v});
  };

  long next_spectra = cfg.spectra_every > 0 ? static_cast<long>(std::floor(t / t0 / cfg.spectra_every + 1e-9)) : -1;
  long next_snap = cfg.snapshot_every > 0 ? static_cast<long>(std::floor(t / t0 / cfg.snapshot_every + 1e-9)) + 1 : -1;
  auto sample_spectra = [&]() {
    const SpectrumSeries s = measure_spectra(u, dyn);
    if (hooks.write_files) {
      std::ofstream f(out / "spectra" / numbered("spectra_", next_spectra, ".csv"));
      f << "# config_hash = " << hex << " t = " << fmt(t) << "\n";
      write_spectra_csv(f, s);
    }
    if (t >= cfg.average_from * t0 - 1e-12 * t0) res.average.accumulate(s);
  };
  if (next_spectra >= 0 && t <= 1e-12 * t0) {
    sample_spectra();
    ++next_spectra;
  }

  SpectralVelocity last_good = u;
  const Real blow_limit = 1e6 * std::max(res.e0, forcing ? res.ke : res.e0);
  try {
    while (t < t_end * (1.0 - 1e-12)) {
      Real dt = std::min(cfl_dt(u, cfg.cfl, dt_cap), t_end - t);
      StepResult r = step(u, tab, dt, dyn, opt);
      if (!r.u.all_finite() || !(r.report.e_after < blow_limit))
        throw NumericalBlowup("energy blew up at t = " + fmt(t + dt) + " (e = " + fmt(r.report.e_after) + ")");
      last_good = u;
      u = std::move(r.u);
      t += dt;
      ++steps;
      const StepReport& rep = r.report;
      res.max_rel_de = std::max(res.max_rel_de, std::abs(rep.e_after - res.e0) / res.e0);
      if (res.h0 != 0.0) res.max_rel_dh = std::max(res.max_rel_dh, std::abs(rep.h_after - res.h0) / std::abs(res.h0));
      res.max_spatial_e = std::max(res.max_spatial_e, std::abs(rep.nonlinear_e) / res.e0);
      if (res.h0 != 0.0) res.max_spatial_h = std::max(res.max_spatial_h, std::abs(rep.nonlinear_h) / std::abs(res.h0));
      if (hooks.write_files)
        write_timeseries_row(ts, t, rep.e_after, rep.h_after, dissipation_e(u, cfg.nu), dissipation_h(u, cfg.nu), dt,
                             rep.iterations);
      if (hooks.on_step) hooks.on_step(t, rep, u);
      if (next_spectra >= 0 && t >= next_spectra * cfg.spectra_every * t0 * (1.0 - 1e-12)) {
        sample_spectra();
        next_spectra = static_cast<long>(std::floor(t / t0 / cfg.spectra_every + 1e-9)) + 1;
      }
      if (hooks.write_files && next_snap >= 0 && t >= next_snap * cfg.snapshot_every * t0 * (1.0 - 1e-12)) {
        snapshot(out / "snapshots" / numbered("snap_", next_snap, ".bin"), u, t, steps);
        next_snap = static_cast<long>(std::floor(t / t0 / cfg.snapshot_every + 1e-9)) + 1;
      }
    }
  } catch (const NumericalBlowup& e) {
    res.exit_code = kBlowup;
    res.message = e.what();
  } catch (const ConvergenceError& e) {
    res.exit_code = kNoConvergence;
    res.message = e.what();
  }
  if (res.exit_code != kOk) {
    if (hooks.write_files) snapshot(out / "snapshots" / "last_good.bin", last_good, t, steps);
    u = last_good;
  }

  res.steps = steps;
  res.t = t;
  res.e = energy(u);
  res.h = helicity(u);
  res.final_state = u;

  if (res.exit_code == kOk && res.average.samples > 0) {
    const SpectrumSeries avg = res.average.mean();
    const int k_last = resolved_k_max(cfg.grid);
    if (forcing) {
      res.residual = stationary_residual(avg, forcing->spec().k_F, k_last);
      res.budget = budget(avg, k_last, res.ke, res.kh);
    } else if (cfg.nu == 0.0 && cfg.grid.dealias.kind == DealiasPolicy::Kind::Sphere) {
      res.equilibrium = absolute_equilibrium(res.e, res.h, static_cast<int>(cfg.grid.dealias.k_max), ModeDensity::Lattice);
    }
    if (hooks.write_files) {
      std::ofstream f(out / "spectra_avg.csv");
      f << "# config_hash = " << hex << " samples = " << res.average.samples << "\n";
      write_spectra_csv(f, avg, res.equilibrium ? &*res.equilibrium : nullptr, res.residual ? &*res.residual : nullptr);
    }
  }

  if (hooks.write_files) {
    if (res.exit_code == kOk) snapshot(out / "snapshots" / "final.bin", u, t, steps);
    std::ofstream f(out / "summary.txt");
    f << "config_hash = " << hex << "\nexit_code = " << res.exit_code << "\nmessage = " << res.message
      << "\nsteps = " << steps << "\nt = " << fmt(t) << "\nt0 = " << fmt(t0) << "\ne0 = " << fmt(res.e0)
      << "\nh0 = " << fmt(res.h0) << "\ne = " << fmt(res.e) << "\nh = " << fmt(res.h)
      << "\nmax_rel_de = " << fmt(res.max_rel_de) << "\nmax_rel_dh = " << fmt(res.max_rel_dh) << "\n";
    if (res.budget) {
      const Budget& b = *res.budget;
      f << "K_e = " << fmt(res.ke) << "\nK_h = " << fmt(res.kh) << "\ne_over_Ke = " << fmt(b.e_over_ke)
        << "\nh_over_Kh = " << fmt(b.h_over_kh) << "\nsum_Te_over_eps_e = " << fmt(b.te_over_eps)
        << "\nsum_Th_over_eps_h = " << fmt(b.th_over_eps) << "\neps_e = " << fmt(b.eps_e) << "\neps_h = " << fmt(b.eps_h)
        << "\n";
    }
    if (res.residual)
      f << "rms_residual_e_over_rms_dissipation = " << fmt(res.residual->rms_re / std::max(res.residual->rms_de, 1e-300))
        << "\n";
  }
  return res;
}

std::vector<CertificationReport> verify(const RunConfig& cfg) {
  std::vector<CertificationReport> out;
  out.push_back(certify_grid(cfg.grid, cfg.seed));
  return out;
}

std::string tableau_report(const std::string& source) {
  const ButcherTableau t = load_tableau(source);
  const Eigen::MatrixXd g = symplecticity_defect(t);
  const Real d = g.cwiseAbs().maxCoeff();
  std::ostringstream os;
  os << "tableau " << t.label << "  stages " << t.s << "  "
     << (t.kind == ButcherTableau::Kind::Explicit ? "explicit" : "implicit") << "\n";
  os << "symplecticity defect g_ij = b_i a_ij + b_j a_ji - b_i b_j:\n";
  os << std::setprecision(6);
  for (int i = 0; i < t.s; ++i) {
    os << "  ";
    for (int j = 0; j < t.s; ++j) os << std::setw(13) << g(i, j);
    os << "\n";
  }
  os << "max |g_ij| = " << d << "\n";
  os << "classification: " << (d <= 1e-14 ? "symplectic (preserves all quadratic invariants)" : "non-symplectic") << "\n";
  return os.str();
}

SpectrumSeries snapshot_spectra(const RunConfig& cfg, const Snapshot& s) {
  const Scenario sc = cfg.scenario();
  std::shared_ptr<EulerForcing> forcing;
  if (sc.forcing) forcing = std::make_shared<EulerForcing>(s.u.grid(), *sc.forcing);
  return measure_spectra(s.u, Dynamics{cfg.form, cfg.nu, forcing});
}

}  // namespace helispec
