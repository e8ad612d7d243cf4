#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tlsqle/config.hpp"
#include "tlsqle/output.hpp"
#include "tlsqle/timedomain.hpp"
#include "tlsqle/trajectory_io.hpp"

using namespace tlsqle;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "tlsqle_test_scratch";
  fs::create_directories(dir);
  return dir;
}

const char* kMinimalConfig = R"({
  "command": "steady",
  "params": {"kappa": 1.0, "kappa_n": 1.5e-4, "delta": 20.0,
             "alpha_in": {"re": 700.0, "im": 0.0}, "n_th": 1.0, "n_th_tls": 1.0,
             "branch": "minus"},
  "output_path": "out.csv"
})";

#ifdef TLSQLE_BIN
int run_cli(const std::string& args) {
  const std::string cmd = std::string(TLSQLE_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}
#endif

}  // namespace

TEST_CASE("minimal configuration parses into a run specification") {
  const auto spec = parse_config(kMinimalConfig);
  CHECK(spec.command == Command::Steady);
  CHECK(spec.params.kappa == 1.0);
  CHECK(spec.params.kappa_n == 1.5e-4);
  CHECK(spec.params.delta == 20.0);
  CHECK(spec.params.alpha_in == Complex(700.0, 0.0));
  CHECK(spec.params.branch == HpBranch::Minus);
  CHECK(spec.output_path == "out.csv");
  CHECK(spec.output_format == OutputFormat::Csv);
}

TEST_CASE("unknown keys are rejected by name") {
  const char* bad = R"({"command": "steady", "params": {"kapa": 1.0}})";
  try {
    parse_config(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("kapa") != std::string::npos);
  }
}

TEST_CASE("parameter validation runs inside parsing") {
  const char* bad = R"({"command": "steady",
                        "params": {"kappa": 1.0, "kappa_n": -1e-4}})";
  CHECK_THROWS_AS(parse_config(bad), NegativeRate);
  const char* bad2 = R"({"command": "steady", "params": {"kappa": 0.0}})";
  CHECK_THROWS_AS(parse_config(bad2), NonPositiveKappa);
}

TEST_CASE("degenerate sweeps are usage errors") {
  const char* one_point = R"({"command": "sweep",
    "params": {"kappa": 1.0},
    "sweep_axis": {"name": "alpha_in", "start": 0.0, "stop": 700.0, "count": 1}})";
  CHECK_THROWS_AS(parse_config(one_point), UsageError);
  const char* same_ends = R"({"command": "sweep",
    "params": {"kappa": 1.0},
    "sweep_axis": {"name": "alpha_in", "start": 5.0, "stop": 5.0, "count": 10}})";
  CHECK_THROWS_AS(parse_config(same_ends), UsageError);
}

TEST_CASE("run specifications round-trip through their JSON form") {
  RunSpec spec = parse_config(kMinimalConfig);
  spec.command = Command::TimeDomain;
  spec.sweep_axis = SweepAxis{"alpha_in", 0.0, 700.0, 200};
  spec.omega_grid = GridSpec{-25.0, -15.0, 400};
  spec.theta_grid = GridSpec{0.0, kPi, 64};
  IntegrationConfig cfg;
  cfg.dt = 4e-4;
  cfg.t_total = 123.5;
  cfg.n_traj = 7;
  cfg.seed = 99;
  cfg.scheme = Scheme::StratonovichMidpoint;
  cfg.sample_stride = 50;
  cfg.initial = Complex(0.25, -0.5);
  spec.integration = cfg;
  spec.output_format = OutputFormat::Json;

  const auto text = to_json_config(spec);
  const auto back = parse_config(text);
  CHECK(back == spec);
}

TEST_CASE("tables render deterministically with full precision") {
  Table t;
  t.headers = {"x", "name", "count"};
  t.add_row({0.1 + 0.2, std::string("row one"), static_cast<long long>(3)});
  t.add_row({1.0 / 3.0, std::string("row two"), static_cast<long long>(-1)});

  const std::string csv = to_csv(t);
  CHECK(csv ==
        "x,name,count\n"
        "0.30000000000000004,row one,3\n"
        "0.33333333333333331,row two,-1\n");
  CHECK(csv.find('\r') == std::string::npos);

  const std::string json = to_json(t);
  CHECK(json.find("0.30000000000000004") != std::string::npos);
  CHECK(json.find("\"name\": \"row one\"") != std::string::npos);
}

TEST_CASE("atomic writes leave no partial or temporary files") {
  const auto dir = scratch_dir();
  const auto target = dir / "table.csv";
  fs::remove(target);
  Table t;
  t.headers = {"a"};
  t.add_row({1.5});
  atomic_write(target, to_csv(t));
  CHECK(fs::exists(target));
  CHECK_FALSE(fs::exists(dir / "table.csv.tmp"));
  CHECK(slurp(target) == "a\n1.5\n");

  SECTION("failure to open the temporary leaves the target untouched") {
    const auto before = slurp(target);
    CHECK_THROWS_AS(atomic_write(dir / "no_such_subdir" / "x.csv", "data"), IoError);
    CHECK(slurp(target) == before);
  }
}

TEST_CASE("trajectory dumps round-trip") {
  TrajectoryEnsemble ens;
  ens.times = {0.0, 0.5, 1.0};
  ens.samples = {{{1.0, -2.0}, {0.25, 0.5}, {-3.0, 4.0}},
                 {{0.0, 0.0}, {1e-300, 2e16}, {7.0, -8.0}}};
  const auto dir = scratch_dir();
  const auto path = dir / "traj.bin";
  write_trajectories_binary(ens, path);
  const auto back = read_trajectories_binary(path);
  REQUIRE(back.samples.size() == 2);
  REQUIRE(back.times.size() == 3);
  CHECK(back.times[1] == 0.5);
  for (size_t k = 0; k < 2; ++k)
    for (size_t i = 0; i < 3; ++i) CHECK(back.samples[k][i] == ens.samples[k][i]);
  // header: u32 version, u32 n_traj, u64 n_steps, f64 dt, then 2 doubles/sample
  CHECK(fs::file_size(path) == 4u + 4u + 8u + 8u + 3u * 2u * 2u * 8u);
}

#ifdef TLSQLE_BIN

TEST_CASE("command line runs are deterministic byte for byte") {
  const auto dir = scratch_dir();
  const auto cfg_path = dir / "steady.json";
  const auto out1 = dir / "steady1.csv";
  const auto out2 = dir / "steady2.csv";
  {
    std::ofstream os(cfg_path);
    os << kMinimalConfig;
  }
  REQUIRE(run_cli("steady --config " + cfg_path.string() + " --out " + out1.string()) == 0);
  REQUIRE(run_cli("steady --config " + cfg_path.string() + " --out " + out2.string()) == 0);
  const auto a = slurp(out1), b = slurp(out2);
  CHECK(!a.empty());
  CHECK(a == b);
  CHECK(a.substr(0, a.find('\n')) ==
        "alpha_in,branch,root_index,re_alpha,im_alpha,abs_alpha,arg_alpha,x,stable,"
        "residual,kappa_eff,abs_alpha_linear,arg_alpha_linear");
}

TEST_CASE("command line exit codes") {
  const auto dir = scratch_dir();
  SECTION("missing config file is a usage error") {
    CHECK(run_cli("steady --config " + (dir / "absent.json").string()) == 2);
  }
  SECTION("config with an unknown key is a usage error") {
    const auto p = dir / "unknown_key.json";
    std::ofstream(p) << R"({"command": "steady", "params": {"kapa": 1.0}})";
    CHECK(run_cli("steady --config " + p.string()) == 2);
  }
  SECTION("single-point sweep is a usage error") {
    const auto p = dir / "sweep1.json";
    std::ofstream(p) << R"({"command": "sweep", "params": {"kappa": 1.0},
      "sweep_axis": {"name": "alpha_in", "start": 0.0, "stop": 7.0, "count": 1},
      "output_path": "unused.csv"})";
    CHECK(run_cli("sweep --config " + p.string()) == 2);
  }
  SECTION("mismatched subcommand is a usage error") {
    const auto p = dir / "steady_ok.json";
    std::ofstream(p) << kMinimalConfig;
    CHECK(run_cli("spectrum --config " + p.string()) == 2);
  }
  SECTION("domain failures exit with one") {
    // inverted branch past its instability: no stable state for a spectrum
    const auto p = dir / "unstable.json";
    std::ofstream(p) << R"({"command": "spectrum",
      "params": {"kappa": 1.0, "kappa_n": 1.5e-4, "delta": 20.0,
                 "alpha_in": 900.0, "branch": "plus"},
      "grids": {"omega": {"start": -25.0, "stop": -15.0, "count": 5},
                "theta": {"start": 0.0, "stop": 3.0, "count": 4}},
      "output_path": ")" << (dir / "unstable.csv").string() << R"("})";
    CHECK(run_cli("spectrum --config " + p.string()) == 1);
  }
}

#endif  // TLSQLE_BIN
