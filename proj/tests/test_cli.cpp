#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "clic/csv.hpp"

namespace fs = std::filesystem;

namespace {

std::string binary() {
  const char* path = std::getenv("CLIC_BIN");
  REQUIRE(path != nullptr);
  return path;
}

// Runs the CLI with output captured to a log file; returns the exit code.
int run_cli(const std::string& args, const fs::path& log) {
  std::string command = "\"" + binary() + "\" " + args + " >" + log.string() + " 2>&1";
  int status = std::system(command.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

long long count_rows(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  long long rows = 0;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  return rows;
}

struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name) : dir(fs::path("cli_scratch") / name) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
};

}  // namespace

TEST_CASE("matrix CSV roundtrip and diagnostics") {
  Scratch scratch("csv");
  fs::path file = scratch.dir / "m.csv";
  std::vector<std::vector<double>> rows{{1.5, -2.25e-8}, {3.0, 0.1}};
  clic::write_matrix_csv(file.string(), rows, {"a", "b"});
  std::vector<std::vector<double>> back = clic::read_matrix_csv(file.string(), true);
  CHECK(back == rows);  // precision 17 preserves doubles exactly

  std::ofstream(scratch.dir / "ragged.csv") << "1,2\n3\n";
  try {
    clic::read_matrix_csv((scratch.dir / "ragged.csv").string(), false);
    FAIL("expected CsvError");
  } catch (const clic::CsvError& e) {
    CHECK(e.row() == 2);
    CHECK(std::string(e.what()).find("ragged") != std::string::npos);
  }

  std::ofstream(scratch.dir / "text.csv") << "1,oops\n";
  try {
    clic::read_matrix_csv((scratch.dir / "text.csv").string(), false);
    FAIL("expected CsvError");
  } catch (const clic::CsvError& e) {
    CHECK(e.row() == 1);
    CHECK(e.col() == 2);
  }

  CHECK_THROWS_AS(clic::read_matrix_csv((scratch.dir / "missing.csv").string(), false),
                  clic::CsvError);
}

TEST_CASE("label rows, manifest, and hash roundtrips") {
  Scratch scratch("meta");
  fs::path labels = scratch.dir / "labels.csv";
  std::vector<std::vector<int>> rows{{1, 1, 2}, {1, 2, 2}};
  clic::write_label_rows_csv(labels.string(), rows);
  CHECK(clic::read_label_rows_csv(labels.string()) == rows);

  fs::path manifest = scratch.dir / "manifest.txt";
  std::map<std::string, std::string> kv{{"b", "2"}, {"a", "x y"}};
  clic::write_manifest(manifest.string(), kv);
  CHECK(clic::read_manifest(manifest.string()) == kv);
  CHECK(slurp(manifest) == "a = x y\nb = 2\n");  // sorted, reproducible

  std::string h1 = clic::file_hash_hex(manifest.string());
  CHECK(h1.size() == 16);
  CHECK(h1 == clic::file_hash_hex(manifest.string()));
  CHECK(h1 != clic::file_hash_hex(labels.string()));
}

TEST_CASE("usage errors exit with code 2") {
  Scratch scratch("usage");
  CHECK(run_cli("", scratch.dir / "noargs.log") == 2);
  CHECK(run_cli("frobnicate", scratch.dir / "unknown.log") == 2);
  CHECK(run_cli("simulate --scenario two-view --case 4 --out " + (scratch.dir / "x").string(),
                scratch.dir / "case4.log") == 2);
  CHECK(run_cli("--help", scratch.dir / "help.log") == 0);
}

TEST_CASE("simulate writes a reproducible dataset") {
  Scratch scratch("simulate");
  fs::path out_a = scratch.dir / "a";
  fs::path out_b = scratch.dir / "b";
  std::string base = "simulate --scenario two-view --case 1 --eta2 0.2 --n 30 --seed 5 --out ";
  CHECK(run_cli(base + out_a.string(), scratch.dir / "a.log") == 0);
  CHECK(run_cli(base + out_b.string(), scratch.dir / "b.log") == 0);

  for (const char* name : {"view1.csv", "view2.csv", "truth.csv", "manifest.txt", "meta.txt"})
    CHECK(fs::exists(out_a / name));
  CHECK(slurp(out_a / "view1.csv") == slurp(out_b / "view1.csv"));
  CHECK(slurp(out_a / "view2.csv") == slurp(out_b / "view2.csv"));
  CHECK(slurp(out_a / "truth.csv") == slurp(out_b / "truth.csv"));
  CHECK(count_rows(out_a / "view1.csv") == 31);  // header + 30 objects

  fs::path out_c = scratch.dir / "c";
  CHECK(run_cli("simulate --scenario three-view --n 20 --seed 2 --out " + out_c.string(),
                scratch.dir / "c.log") == 0);
  CHECK(fs::exists(out_c / "view3.csv"));
}

TEST_CASE("fit runs end to end and is seed-deterministic") {
  Scratch scratch("fit");
  fs::path sim = scratch.dir / "sim";
  REQUIRE(run_cli("simulate --scenario two-view --case 1 --eta2 0.2 --n 40 --seed 9 --out " +
                      sim.string(),
                  scratch.dir / "sim.log") == 0);

  std::string data_args = " --data " + (sim / "view1.csv").string() + " --data " +
                          (sim / "view2.csv").string() + " --header";
  std::string fit_args = "fit" + data_args +
                         " --L 3,3 --iters 300 --burnin 100 --thin 2 --seed 3 --out ";
  fs::path fit_a = scratch.dir / "fa";
  fs::path fit_b = scratch.dir / "fb";
  CHECK(run_cli(fit_args + fit_a.string(), scratch.dir / "fa.log") == 0);
  CHECK(run_cli(fit_args + fit_b.string(), scratch.dir / "fb.log") == 0);

  for (const char* name : {"labels_view1.csv", "labels_view2.csv", "scalars.csv",
                           "psm_view1.csv", "point_view1.csv", "k_view1.csv", "rand_summary.csv",
                           "rand_hist.csv", "ess.csv", "joint_k_12.csv", "manifest.txt",
                           "meta.txt"})
    CHECK(fs::exists(fit_a / name));
  CHECK(count_rows(fit_a / "labels_view1.csv") == 100);  // (300 - 100) / 2 kept draws
  CHECK(slurp(fit_a / "labels_view1.csv") == slurp(fit_b / "labels_view1.csv"));
  CHECK(slurp(fit_a / "scalars.csv") == slurp(fit_b / "scalars.csv"));

  fs::path fit_c = scratch.dir / "fc";
  CHECK(run_cli("fit" + data_args + " --L 3,3 --iters 300 --burnin 100 --thin 2 --seed 4 --out " +
                    fit_c.string(),
                scratch.dir / "fc.log") == 0);
  CHECK(slurp(fit_a / "labels_view1.csv") != slurp(fit_c / "labels_view1.csv"));

  // Two chains under one seed concatenate their kept draws.
  fs::path fit_d = scratch.dir / "fd";
  CHECK(run_cli("fit" + data_args +
                    " --L 3,3 --iters 300 --burnin 100 --thin 2 --seed 3 --chains 2 --out " +
                    fit_d.string(),
                scratch.dir / "fd.log") == 0);
  CHECK(count_rows(fit_d / "labels_view1.csv") == 200);
}

TEST_CASE("fit reports data problems with exit code 1") {
  Scratch scratch("baddata");
  CHECK(run_cli("fit --data nowhere1.csv --data nowhere2.csv --L 2,2 --iters 20 --burnin 5 "
                "--out " +
                    (scratch.dir / "out").string(),
                scratch.dir / "missing.log") == 1);

  std::ofstream(scratch.dir / "v1.csv") << "0.1\n0.2\n0.3\n";
  std::ofstream(scratch.dir / "v2.csv") << "0.1\n0.2,9\n0.3\n";
  CHECK(run_cli("fit --data " + (scratch.dir / "v1.csv").string() + " --data " +
                    (scratch.dir / "v2.csv").string() + " --L 2,2 --iters 20 --burnin 5 --out " +
                    (scratch.dir / "out2").string(),
                scratch.dir / "ragged.log") == 1);
  std::string log = slurp(scratch.dir / "ragged.log");
  CHECK(log.find("error:") != std::string::npos);
  CHECK(log.find("row 2") != std::string::npos);
}

TEST_CASE("config file drives fit and flags override it") {
  Scratch scratch("config");
  fs::path sim = scratch.dir / "sim";
  REQUIRE(run_cli("simulate --scenario two-view --case 2 --eta2 0.2 --n 30 --seed 4 --out " +
                      sim.string(),
                  scratch.dir / "sim.log") == 0);

  fs::path cfg = scratch.dir / "run.cfg";
  std::ofstream out(cfg);
  out << "# small smoke run\n"
      << "iters = 200\nburnin = 100\nthin = 2\nL = 3,3\nseed = 5\n"
      << "[view1]\ndata = " << (sim / "view1.csv").string() << "\nheader = 1\n"
      << "[view2]\ndata = " << (sim / "view2.csv").string() << "\nheader = 1\n";
  out.close();

  fs::path from_cfg = scratch.dir / "from_cfg";
  CHECK(run_cli("fit --config " + cfg.string() + " --out " + from_cfg.string(),
                scratch.dir / "cfg.log") == 0);
  CHECK(count_rows(from_cfg / "labels_view1.csv") == 50);  // (200 - 100) / 2

  fs::path overridden = scratch.dir / "override";
  CHECK(run_cli("fit --config " + cfg.string() + " --iters 300 --out " + overridden.string(),
                scratch.dir / "override.log") == 0);
  CHECK(count_rows(overridden / "labels_view1.csv") == 100);  // flag beats file

  std::ofstream(scratch.dir / "bad.cfg") << "itres = 200\n";
  CHECK(run_cli("fit --config " + (scratch.dir / "bad.cfg").string() + " --out " +
                    (scratch.dir / "nope").string(),
                scratch.dir / "bad.log") == 1);
  CHECK(slurp(scratch.dir / "bad.log").find("unknown config key") != std::string::npos);
}

TEST_CASE("summarize recomputes summaries from a written trace") {
  Scratch scratch("summarize");
  fs::path sim = scratch.dir / "sim";
  REQUIRE(run_cli("simulate --scenario two-view --case 1 --eta2 0.2 --n 30 --seed 6 --out " +
                      sim.string(),
                  scratch.dir / "sim.log") == 0);
  fs::path fit = scratch.dir / "fit";
  REQUIRE(run_cli("fit --data " + (sim / "view1.csv").string() + " --data " +
                      (sim / "view2.csv").string() +
                      " --header --L 3,3 --iters 200 --burnin 100 --thin 1 --seed 3 --out " +
                      fit.string(),
                  scratch.dir / "fit.log") == 0);

  fs::path sum = scratch.dir / "sum";
  CHECK(run_cli("summarize --trace " + fit.string() + " --out " + sum.string(),
                scratch.dir / "sum.log") == 0);
  for (const char* name : {"psm_view1.csv", "point_view1.csv", "rand_summary.csv", "k_view1.csv"})
    CHECK(fs::exists(sum / name));

  // Point estimates recomputed from the same trace agree with the fit's own.
  CHECK(slurp(sum / "point_view1.csv") == slurp(fit / "point_view1.csv"));

  CHECK(run_cli("summarize --trace " + (scratch.dir / "empty").string(),
                scratch.dir / "badsum.log") == 1);
}

TEST_CASE("oracle battery: quick run passes, tampered run fails") {
  Scratch scratch("oracle");
  fs::path report = scratch.dir / "report.csv";
  CHECK(run_cli("oracle --quick --out " + report.string(), scratch.dir / "quick.log") == 0);
  CHECK(fs::exists(report));
  CHECK(slurp(scratch.dir / "quick.log").find("checks passed") != std::string::npos);

  fs::path tampered = scratch.dir / "tampered.csv";
  CHECK(run_cli("oracle --quick --tamper --out " + tampered.string(),
                scratch.dir / "tamper.log") != 0);
}
