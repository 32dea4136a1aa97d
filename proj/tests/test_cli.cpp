#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

std::string cli() {
  const char* p = std::getenv("SWME_CLI");
  return p ? p : "swme_cli";
}

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = cli() + " " + args + " > " + log.string() + " 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("swme_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("simulate writes its outputs") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "run.cfg";
  std::ofstream(cfg) << "[model]\nvariant = HSWME\norder = 2\n[scenario]\nname = dam_break\nresolution = 32\n"
                        "t_end = 0.01\nt_out = 0.005, 0.01\n[output]\ndir = "
                     << (tmp.path / "out").string() << "\n";
  REQUIRE(run("simulate --config " + cfg.string(), tmp.path / "log") == 0);
  const fs::path out = tmp.path / "out";
  const std::string runtxt = slurp(out / "dam_break_HSWME_N2_run.txt");
  CHECK(runtxt.rfind("# swme simulate version=", 0) == 0);
  CHECK(runtxt.find("config_hash=") != std::string::npos);
  CHECK(fs::exists(out / "dam_break_HSWME_N2_conservation.csv"));
  int snapshots = 0;
  for (const auto& e : fs::directory_iterator(out)) snapshots += e.path().string().find("snapshot") != std::string::npos;
  CHECK(snapshots >= 2);

  // identical reruns give identical files
  REQUIRE(run("simulate --config " + cfg.string() + " --out " + (tmp.path / "again").string(), tmp.path / "log") == 0);
  CHECK(slurp(tmp.path / "again" / "dam_break_HSWME_N2_conservation.csv") ==
        slurp(out / "dam_break_HSWME_N2_conservation.csv"));

  // command-line overrides
  REQUIRE(run("simulate --config " + cfg.string() + " --variant BetaHSWME --order 3 --resolution 32", tmp.path / "log") ==
          0);
  CHECK(fs::exists(out / "dam_break_BetaHSWME_N3_run.txt"));
}

TEST_CASE("simulate rejects bad configs") {
  TempDir tmp;
  const fs::path cfg = tmp.path / "bad.cfg";
  std::ofstream(cfg) << "[model]\norder = -2\n";
  CHECK(run("simulate --config " + cfg.string(), tmp.path / "log") == 2);
  CHECK(run("simulate --config " + (tmp.path / "missing.cfg").string(), tmp.path / "log") == 2);
  CHECK(run("simulate", tmp.path / "log") == 2);
  CHECK(run("no-such-command", tmp.path / "log") == 2);
}

TEST_CASE("certify") {
  TempDir tmp;
  const fs::path rep = tmp.path / "cert.txt";
  REQUIRE(run("certify --variant HSWME GloballyHyperbolic --order 1-3 --samples 4 --angles 4 --out " + rep.string(),
              tmp.path / "log") == 0);
  const std::string txt = slurp(rep);
  CHECK(txt.find("HSWME") != std::string::npos);
  CHECK(txt.find("GloballyHyperbolic") != std::string::npos);
  CHECK(run("certify --order 3-1", tmp.path / "log") == 2);
}

TEST_CASE("build-closure") {
  TempDir tmp;
  const fs::path out = tmp.path / "closure.txt";
  REQUIRE(run("build-closure --order 3 --target lobatto --out " + out.string(), tmp.path / "log") == 0);
  const std::string txt = slurp(out);
  CHECK(txt.find("7/45") != std::string::npos);
  CHECK(txt.find("4/9") != std::string::npos);
  CHECK(run("build-closure --order 3 --target a22:0,1", tmp.path / "log") == 2);
  CHECK(run("build-closure --order 3 --target bogus", tmp.path / "log") == 2);
}

TEST_CASE("eigen-table") {
  TempDir tmp;
  const fs::path out = tmp.path / "eig.csv";
  REQUIRE(run("eigen-table --variant HSWME --order 1 --h 1 --alpha 1 --out " + out.string(), tmp.path / "log") == 0);
  const std::string txt = slurp(out);
  CHECK(txt.find("\nindex,analytic,numeric_real,numeric_imag,abs_diff\n") != std::string::npos);
  CHECK(txt.find("# max_deviation") != std::string::npos);
  CHECK(txt.find("1.4142135623730") != std::string::npos);
  CHECK(run("eigen-table --order 0", tmp.path / "log") == 2);
}
