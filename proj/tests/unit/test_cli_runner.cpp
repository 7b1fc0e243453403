#include <doctest.h>

#include "helispec/cli_runner.hpp"
#include "support.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace helispec;
using namespace helispec::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("helispec_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

RunConfig small_inviscid(int algorithm, const fs::path& out) {
  RunConfig c = RunConfig::from_preset("inviscid32", algorithm);
  c.grid.n = 16;
  c.abc = {2, 3};
  c.t_end = 1.0;
  c.output_dir = out.string();
  c.spectra_every = 0.5;
  c.snapshot_every = 0.5;
  return c;
}

bool bitwise_equal(const SpectralVector& a, const SpectralVector& b) {
  for (int c = 0; c < 3; ++c) {
    if (a[c].size() != b[c].size()) return false;
    if (std::memcmp(a[c].data(), b[c].data(), sizeof(Complex) * a[c].size()) != 0) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("config text: sections, comments, include, preset first") {
  const fs::path dir = scratch_dir("cfg");
  std::ofstream(dir / "base.cfg") << "[time]\ncfl = 0.25  # halved\n";
  std::istringstream in(
      "[grid]\nn = 16\n"
      "include = base.cfg\n"
      "[run]\npreset = inviscid32\nalgorithm = 4\n"
      "[init]\nabc = 2, 3\n");
  const RunConfig c = parse_config(in, dir);
  CHECK(c.preset == "inviscid32");
  CHECK(c.algorithm == 4);
  CHECK(c.form == ConvectiveForm::SkewSymmetric);
  CHECK(c.tableau == "rk4");
  CHECK(c.grid.n == 16);
  CHECK(c.cfl == 0.25);
  CHECK(c.abc == std::vector<int>{2, 3});

  // canonical text parses back to the same configuration
  std::istringstream again(c.canonical());
  const RunConfig d = parse_config(again);
  CHECK(d.canonical() == c.canonical());
  CHECK(d.hash() == c.hash());
}

TEST_CASE("config hash ignores output location only") {
  RunConfig a = RunConfig::from_preset("inviscid32", 2);
  RunConfig b = a;
  b.output_dir = "elsewhere";
  b.restart = "x.bin";
  CHECK(a.hash() == b.hash());
  b.cfl = 0.4;
  CHECK(a.hash() != b.hash());
  CHECK(hash_hex(a.hash()).size() == 16);
}

TEST_CASE("config errors") {
  RunConfig c;
  CHECK_THROWS_AS(c.set("grid.nope", "1"), ValidationError);
  CHECK_THROWS_AS(c.set("time.cfl", "fast"), ValidationError);
  std::istringstream bad("[grid]\nn 16\n");
  CHECK_THROWS_WITH_AS(parse_config(bad), doctest::Contains("line 2"), ValidationError);
  RunConfig none;
  CHECK_THROWS_AS(none.validate(), ValidationError);  // no initial condition
  RunConfig stag = RunConfig::from_preset("inviscid32", 1);
  stag.grid.scheme = DerivativeScheme::FD2Staggered;
  CHECK_THROWS_AS(stag.validate(), ValidationError);
}

TEST_CASE("snapshot round trip is bitwise") {
  const fs::path dir = scratch_dir("snap");
  auto g = make_grid(8, DerivativeScheme::Spectral, DealiasPolicy::two_thirds());
  Snapshot s{g->spec(), 1.25, 42, 0x1234abcdULL, 0.5, project(noise(g, 3))};
  write_snapshot(dir / "s.bin", s);
  const Snapshot r = read_snapshot(dir / "s.bin", g);
  CHECK(r.time == s.time);
  CHECK(r.step == 42);
  CHECK(r.config_hash == s.config_hash);
  CHECK(r.t0 == 0.5);
  CHECK(r.u.grid() == g);
  CHECK(bitwise_equal(r.u, s.u));
  const Snapshot fresh = read_snapshot(dir / "s.bin");
  CHECK(fresh.u.g().spec().dealias.kind == DealiasPolicy::Kind::TwoThirds);

  std::ofstream(dir / "junk.bin") << "not a snapshot";
  CHECK_THROWS_AS(read_snapshot(dir / "junk.bin"), ValidationError);
}

TEST_CASE("run writes its outputs and conserves under the rotational Gauss scheme") {
  const fs::path dir = scratch_dir("run");
  const RunConfig c = small_inviscid(1, dir);
  const RunResult r = run(c);
  CHECK(r.exit_code == kOk);
  CHECK(r.t == doctest::Approx(r.t0 * c.t_end));
  CHECK(r.max_rel_de < 1e-12);
  CHECK(r.max_rel_dh < 1e-12);
  for (const char* f : {"config.cfg", "timeseries.csv", "summary.txt", "snapshots/final.bin",
                        "snapshots/snap_00001.bin", "spectra/spectra_00000.csv", "spectra/spectra_00002.csv"})
    CHECK_MESSAGE(fs::exists(dir / f), f);

  // every timeseries row is tagged by the header comment and one row per step
  std::ifstream ts(dir / "timeseries.csv");
  std::string line;
  std::getline(ts, line);
  CHECK(line.find(hash_hex(c.hash())) != std::string::npos);
  int rows = 0;
  std::getline(ts, line);  // column header
  while (std::getline(ts, line)) ++rows;
  CHECK(rows == r.steps + 1);
}

TEST_CASE("restart reproduces the uninterrupted trajectory bitwise") {
  const fs::path full_dir = scratch_dir("full");
  const RunConfig full = small_inviscid(2, full_dir);
  const RunResult a = run(full);
  REQUIRE(a.exit_code == kOk);

  const fs::path rest_dir = scratch_dir("rest");
  RunConfig resumed = full;
  resumed.output_dir = rest_dir.string();
  resumed.restart = (full_dir / "snapshots" / "snap_00001.bin").string();
  const RunResult b = run(resumed);
  REQUIRE(b.exit_code == kOk);
  CHECK(b.steps == a.steps);
  CHECK(b.t == a.t);
  CHECK(bitwise_equal(a.final_state, b.final_state));

  RunConfig other = full;
  other.cfl = 0.3;
  other.restart = resumed.restart;
  other.output_dir = rest_dir.string();
  CHECK_THROWS_AS(run(other), ValidationError);
}

TEST_CASE("blow-up exits with code 3 and keeps the last good state") {
  const fs::path dir = scratch_dir("blowup");
  RunConfig c = RunConfig::from_preset("inviscid32", 5);
  c.t_end = 10.0;
  c.output_dir = dir.string();
  c.spectra_every = 0.0;
  const RunResult r = run(c);
  CHECK(r.exit_code == kBlowup);
  CHECK(r.message.find("blew up") != std::string::npos);
  REQUIRE(fs::exists(dir / "snapshots" / "last_good.bin"));
  const Snapshot s = read_snapshot(dir / "snapshots" / "last_good.bin");
  CHECK(s.u.all_finite());
  CHECK(s.step == r.steps);
  CHECK(bitwise_equal(s.u, r.final_state));
}

TEST_CASE("tableau report classifies symplecticity") {
  const std::string g = tableau_report("gauss1");
  CHECK(g.find("symplectic") != std::string::npos);
  CHECK(g.find("non-symplectic") == std::string::npos);
  const std::string rk = tableau_report("rk4");
  CHECK(rk.find("non-symplectic") != std::string::npos);
  CHECK_THROWS_AS(tableau_report("/nonexistent/tableau.txt"), ValidationError);
}

TEST_CASE("verify reports the configured small grid") {
  RunConfig c = RunConfig::from_preset("inviscid32", 1);
  c.grid.n = 4;
  const auto reports = verify(c);
  REQUIRE(!reports.empty());
  for (const auto& r : reports) CHECK_MESSAGE(r.all_pass(), r.label);
}
