#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coskit/csv_io.hpp"
#include "doctest.h"

// End-to-end checks through the installed binary; COSKIT_CLI_PATH is
// injected by the build so the tests always drive the freshly built tool.

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("coskit_cli_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(COSKIT_CLI_PATH) + " " + args;
  const int rc = std::system(cmd.c_str());
  return rc < 0 ? rc : (rc >> 8) & 0xff;  // WEXITSTATUS without <sys/wait.h>
}

int run_quiet(const std::string& args) {
  return run(args + " > /dev/null 2>&1");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> data_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("simulate, estimate and balance chain together") {
  TempDir tmp;
  const std::string files = " --units " + tmp.file("units.csv") +
                            " --clusters " + tmp.file("clusters.csv");
  REQUIRE(run_quiet("simulate --trial 2b --m 20 --n 800 --seed 31" + files +
                    " --truth " + tmp.file("truth.csv")) == 0);
  CHECK(fs::exists(tmp.file("units.csv")));
  CHECK(fs::exists(tmp.file("clusters.csv")));
  CHECK(fs::exists(tmp.file("truth.csv")));

  SUBCASE("estimate writes the documented csv") {
    REQUIRE(run_quiet("estimate" + files +
                      " --adjust w --bootstrap 60 --seed 5 --out " +
                      tmp.file("est.csv")) == 0);
    const auto lines = data_lines(tmp.file("est.csv"));
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] ==
          "estimate,se,ci_wald_lo,ci_wald_hi,ci_percentile_lo,"
          "ci_percentile_hi,replicates,discarded,rank_flagged");
    int commas = 0;
    for (char ch : lines[1]) commas += ch == ',';
    CHECK(commas == 8);
    // The echo block records every resolved parameter, including the
    // derived bootstrap seed.
    const std::string all = slurp(tmp.file("est.csv"));
    CHECK(all.find("# seed = 5") != std::string::npos);
    CHECK(all.find("# bootstrap_seed = ") != std::string::npos);
    CHECK(all.find("# adjust = w") != std::string::npos);
    CHECK(all.find("# bootstrap = 60") != std::string::npos);
  }

  SUBCASE("estimate defaults to 1000 bootstrap replicates") {
    REQUIRE(run_quiet("estimate" + files + " --adjust w --seed 5 --out " +
                      tmp.file("est_default.csv")) == 0);
    const std::string all = slurp(tmp.file("est_default.csv"));
    CHECK(all.find("# bootstrap = 1000") != std::string::npos);
    const auto lines = data_lines(tmp.file("est_default.csv"));
    REQUIRE(lines.size() == 2);
    CHECK(lines[1].find(",1000,") != std::string::npos);
  }

  SUBCASE("balance reports all seven covariate rows") {
    REQUIRE(run_quiet("balance" + files + " --out " + tmp.file("bal.csv")) == 0);
    const auto lines = data_lines(tmp.file("bal.csv"));
    REQUIRE(lines.size() == 8);
    CHECK(lines[0] == "covariate,level,mean_t,mean_c,std_diff");
    CHECK(lines[1].rfind("x1,unit,", 0) == 0);
    CHECK(lines[2].rfind("x2,unit,", 0) == 0);
    CHECK(lines[3].rfind("w,cluster,", 0) == 0);
    CHECK(lines[4].rfind("x1_q25,cluster,", 0) == 0);
    CHECK(lines[7].rfind("x2_mean,cluster,", 0) == 0);
  }

  SUBCASE("truth file carries the 0.16 average effect") {
    const auto truth = coskit::load_truth(tmp.file("truth.csv"));
    REQUIRE(truth.size() == 800);
    double mean = 0.0;
    for (const auto& row : truth) mean += row.ite;
    mean /= static_cast<double>(truth.size());
    CHECK(mean == doctest::Approx(0.16).epsilon(0.5));  // n=800 is noisy
    for (const auto& row : truth) {
      CHECK(std::abs(row.y1 - row.y0 - row.ite) <= 1e-12);
    }
  }
}

TEST_CASE("identical seeds give byte-identical outputs") {
  TempDir tmp;
  // The simulate header echoes the output paths, so byte comparison needs
  // both runs to write to the same filenames; the first run is copied aside.
  auto simulate_once = [&] {
    REQUIRE(run_quiet("simulate --trial 1 --m 10 --n 200 --seed 99 --units " +
                      tmp.file("u.csv") + " --clusters " + tmp.file("c.csv") +
                      " --truth " + tmp.file("t.csv")) == 0);
  };
  simulate_once();
  for (const std::string name : {"u.csv", "c.csv", "t.csv"}) {
    std::filesystem::copy_file(tmp.file(name), tmp.file("first_" + name));
  }
  simulate_once();
  CHECK(slurp(tmp.file("u.csv")) == slurp(tmp.file("first_u.csv")));
  CHECK(slurp(tmp.file("c.csv")) == slurp(tmp.file("first_c.csv")));
  CHECK(slurp(tmp.file("t.csv")) == slurp(tmp.file("first_t.csv")));

  const std::string files = " --units " + tmp.file("u.csv") + " --clusters " +
                            tmp.file("c.csv");
  REQUIRE(run_quiet("estimate" + files +
                    " --adjust whx --bootstrap 40 --seed 7 --out " +
                    tmp.file("e1.csv")) == 0);
  REQUIRE(run_quiet("estimate" + files +
                    " --adjust whx --bootstrap 40 --seed 7 --out " +
                    tmp.file("e2.csv")) == 0);
  CHECK(slurp(tmp.file("e1.csv")) == slurp(tmp.file("e2.csv")));
}

TEST_CASE("an omitted seed is drawn and echoed for reproduction") {
  TempDir tmp;
  const std::string out = tmp.file("stdout.txt");
  REQUIRE(run("simulate --trial 2a --m 5 --n 50 --units " + tmp.file("u.csv") +
              " --clusters " + tmp.file("c.csv") + " --truth " +
              tmp.file("t.csv") + " > " + out + " 2>&1") == 0);
  CHECK(slurp(out).find("seed = ") != std::string::npos);
  // The drawn seed also lands in the file header for later reruns.
  CHECK(slurp(tmp.file("u.csv")).find("# seed = ") != std::string::npos);
}

TEST_CASE("failures map to the documented exit codes") {
  TempDir tmp;
  SUBCASE("usage errors exit 2") {
    CHECK(run_quiet("estimate --units a.csv --clusters b.csv --adjust bogus") == 2);
    CHECK(run_quiet("no-such-subcommand") == 2);
    CHECK(run_quiet("simulate --trial 1 --no-such-flag") == 2);
    CHECK(run_quiet("simulate") == 2);  // --trial is required
  }
  SUBCASE("ingestion errors exit 3") {
    CHECK(run_quiet("estimate --units " + tmp.file("missing.csv") +
                    " --clusters " + tmp.file("missing2.csv") +
                    " --adjust w") == 3);
    write_file(tmp.file("u.csv"), "unit_id,cluster_id,y\nu1,c1,abc\n");
    write_file(tmp.file("c.csv"), "cluster_id,a\nc1,1\n");
    CHECK(run_quiet("estimate --units " + tmp.file("u.csv") + " --clusters " +
                    tmp.file("c.csv") + " --adjust w") == 3);
  }
  SUBCASE("estimation errors exit 4") {
    // Both clusters treated: no control arm anywhere in the bootstrap.
    write_file(tmp.file("u.csv"),
               "unit_id,cluster_id,y\nu1,c1,1\nu2,c1,2\nu3,c2,3\n");
    write_file(tmp.file("c.csv"), "cluster_id,a\nc1,1\nc2,1\n");
    CHECK(run_quiet("estimate --units " + tmp.file("u.csv") + " --clusters " +
                    tmp.file("c.csv") + " --adjust w --bootstrap 10") == 4);
  }
}

TEST_CASE("config files fill in what the command line leaves out") {
  TempDir tmp;
  REQUIRE(run_quiet("simulate --trial 2a --m 8 --n 120 --seed 3 --units " +
                    tmp.file("u.csv") + " --clusters " + tmp.file("c.csv") +
                    " --truth " + tmp.file("t.csv")) == 0);
  write_file(tmp.file("run.conf"),
             "# estimation settings\n"
             "adjust = whx\n"
             "bootstrap = 7\n"
             "seed = 11\n"
             "aggregates = { x1 = [\"q50\"], x2 = [\"mean\"] }\n");

  // --adjust on the command line beats the config; bootstrap, seed and the
  // aggregate spec come from the file.
  REQUIRE(run_quiet("estimate --units " + tmp.file("u.csv") + " --clusters " +
                    tmp.file("c.csv") + " --config " + tmp.file("run.conf") +
                    " --adjust w --out " + tmp.file("e.csv")) == 0);
  const std::string all = slurp(tmp.file("e.csv"));
  CHECK(all.find("# adjust = w") != std::string::npos);
  CHECK(all.find("# bootstrap = 7") != std::string::npos);
  CHECK(all.find("# seed = 11") != std::string::npos);
  CHECK(all.find("# aggregates = { x1 = [\"q50\"], x2 = [\"mean\"] }") !=
        std::string::npos);
  const auto lines = data_lines(tmp.file("e.csv"));
  REQUIRE(lines.size() == 2);
  CHECK(lines[1].find(",7,") != std::string::npos);  // replicates column

  SUBCASE("unknown config keys are rejected") {
    write_file(tmp.file("bad.conf"), "bootstrp = 7\n");
    CHECK(run_quiet("estimate --units " + tmp.file("u.csv") + " --clusters " +
                    tmp.file("c.csv") + " --adjust w --config " +
                    tmp.file("bad.conf")) == 2);
  }
}

TEST_CASE("estimate speaks all three output formats") {
  TempDir tmp;
  REQUIRE(run_quiet("simulate --trial 1 --m 6 --n 90 --seed 17 --units " +
                    tmp.file("u.csv") + " --clusters " + tmp.file("c.csv") +
                    " --truth " + tmp.file("t.csv")) == 0);
  const std::string base = "estimate --units " + tmp.file("u.csv") +
                           " --clusters " + tmp.file("c.csv") +
                           " --adjust wh --bootstrap 20 --seed 2";

  REQUIRE(run_quiet(base + " --format json-lines --out " + tmp.file("e.jsonl")) == 0);
  const std::string jsonl = slurp(tmp.file("e.jsonl"));
  CHECK(jsonl.front() == '{');
  CHECK(jsonl.find("\"estimate\"") != std::string::npos);
  CHECK(jsonl.find("\"ci_percentile\"") != std::string::npos);

  REQUIRE(run_quiet(base + " --format pretty-table --out " + tmp.file("e.txt")) == 0);
  const std::string pretty = slurp(tmp.file("e.txt"));
  CHECK(pretty.find("g-formula estimate") != std::string::npos);
  CHECK(pretty.find("# coskit estimate") != std::string::npos);

  CHECK(run_quiet(base + " --format not-a-format") == 2);
}
