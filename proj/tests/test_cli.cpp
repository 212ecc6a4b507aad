#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "mccm/choice_oracle.hpp"
#include "mccm/io.hpp"
#include "mccm/plan.hpp"

namespace fs = std::filesystem;
using namespace mccm;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(MCCM_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe))
    result.output.append(buf, got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "mccm_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int count_lines(const std::string& text) {
  int lines = 0;
  for (char c : text)
    if (c == '\n') ++lines;
  return lines;
}

}  // namespace

TEST_CASE("help lists every subcommand and exits cleanly") {
  RunResult r = run_cli("--help");
  CHECK(r.exit_code == 0);
  for (const char* name : {"generate", "plan", "tables", "simulate", "recover", "study"})
    CHECK(r.output.find(name) != std::string::npos);
}

TEST_CASE("usage mistakes exit with code 2") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("generate --n 5").exit_code == 2);  // missing --out
  CHECK(run_cli("generate --n 2 --out /dev/null").exit_code == 2);
  CHECK(run_cli("plan --n 5 --r 2 --bogus-flag 3").exit_code == 2);
  CHECK(run_cli("plan --n 5 --r 5").exit_code == 2);
  CHECK(run_cli("tables --model nowhere.json --r 2 --mode sideways --out x").exit_code == 2);
}

TEST_CASE("generate writes a clean deterministic model") {
  const fs::path dir = work_dir();
  const fs::path out = dir / "gen.json";
  RunResult r = run_cli("generate --n 5 --mass 0.2 --seed 1 --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("validation: clean") != std::string::npos);
  const std::string first = slurp(out);
  CHECK_FALSE(first.empty());
  CHECK(validate(load_model(out)).empty());

  run_cli("generate --n 5 --mass 0.2 --seed 1 --out " + out.string());
  CHECK(slurp(out) == first);

  run_cli("generate --n 5 --mass 0.2 --seed 2 --out " + out.string());
  CHECK(slurp(out) != first);
}

TEST_CASE("plan prints a header and one assortment per line") {
  RunResult r = run_cli("plan --n 5 --r 2");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("# plan n=5 r=2: 7 assortments of size 2, 9 of size 3, 16 total") == 0);
  CHECK(count_lines(r.output) == 17);
  CHECK(r.output.find("[1,2]\n") != std::string::npos);
  CHECK(r.output.find("[2,4,5]\n") != std::string::npos);

  const fs::path out = work_dir() / "plan.txt";
  RunResult to_file = run_cli("plan --n 5 --r 2 --out " + out.string());
  CHECK(to_file.exit_code == 0);
  CHECK(slurp(out) == r.output);
}

TEST_CASE("tables writes the planned records and checks its inputs") {
  const fs::path dir = work_dir();
  const fs::path model = dir / "tab_model.json";
  REQUIRE(run_cli("generate --n 5 --mass 0.2 --seed 3 --out " + model.string()).exit_code == 0);

  const fs::path minimal = dir / "tab_minimal.ndjson";
  RunResult r = run_cli("tables --model " + model.string() + " --r 2 --out " + minimal.string());
  CHECK(r.exit_code == 0);
  CHECK(load_choice_table(minimal, 5).size() == 16);

  const fs::path all = dir / "tab_all.ndjson";
  r = run_cli("tables --model " + model.string() + " --r 2 --mode all --out " + all.string());
  CHECK(r.exit_code == 0);
  CHECK(load_choice_table(all, 5).size() == 20);  // C(5,2) + C(5,3)

  CHECK(run_cli("tables --model " + model.string() + " --r 5 --out " + all.string()).exit_code ==
        2);
  CHECK(run_cli("tables --model " + (dir / "missing.json").string() + " --r 2 --out " +
                all.string())
            .exit_code == 1);
}

TEST_CASE("an invalid model file is a usage error with details") {
  const fs::path bad = work_dir() / "bad_model.json";
  std::ofstream(bad) << "{\"n\":3,\"lambda\":[0,1,0,0],"
                        "\"rho\":[[1,0,0,0],[0,0,1,0],[0,1,0,0],[0,1,0,0]]}";
  RunResult r = run_cli("tables --model " + bad.string() + " --r 2 --out /dev/null");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("ReducibleSubmatrix") != std::string::npos);
}

TEST_CASE("the exact pipeline recovers the generator") {
  const fs::path dir = work_dir();
  const fs::path model = dir / "pipe_model.json";
  const fs::path tables = dir / "pipe_tables.ndjson";
  const fs::path report = dir / "pipe_report.json";
  REQUIRE(run_cli("generate --n 6 --mass 0.2 --seed 4 --out " + model.string()).exit_code == 0);
  REQUIRE(
      run_cli("tables --model " + model.string() + " --r 3 --out " + tables.string()).exit_code ==
      0);
  RunResult r = run_cli("recover --tables " + tables.string() + " --n 6 --r 3 --truth " +
                        model.string() + " --out " + report.string());
  CHECK(r.exit_code == 0);
  const auto pos = r.output.find("max_param_error = ");
  REQUIRE(pos != std::string::npos);
  const double err = std::strtod(r.output.c_str() + pos + 18, nullptr);
  CHECK(err <= 1e-8);
  CHECK(slurp(report).find("\"per_system_errors\": {}") != std::string::npos);
}

TEST_CASE("simulate produces deterministic tables plus provenance metadata") {
  const fs::path dir = work_dir();
  const fs::path model = dir / "sim_model.json";
  const fs::path out = dir / "sim_tables.ndjson";
  REQUIRE(run_cli("generate --n 4 --mass 0.2 --seed 5 --out " + model.string()).exit_code == 0);

  RunResult r = run_cli("simulate --model " + model.string() + " --r 2 --m 2000 --seed 9 --out " +
                        out.string());
  CHECK(r.exit_code == 0);
  const std::string first = slurp(out);
  ChoiceTable table = load_choice_table(out, 4);
  CHECK(table.size() > 0);

  const std::string meta = slurp(fs::path(out.string() + ".meta.json"));
  CHECK(meta.find("\"seed\": 9") != std::string::npos);
  CHECK(meta.find("\"m\": 2000") != std::string::npos);
  CHECK(meta.find("\"model_hash\": \"" + model_hash_hex(load_model(model)) + "\"") !=
        std::string::npos);

  run_cli("simulate --model " + model.string() + " --r 2 --m 2000 --seed 9 --out " + out.string());
  CHECK(slurp(out) == first);

  CHECK(run_cli("simulate --model " + model.string() + " --r 2 --m 0 --seed 9 --out " +
                out.string())
            .exit_code == 2);
}

TEST_CASE("recover survives noisy tables and reports residuals") {
  const fs::path dir = work_dir();
  const fs::path model = dir / "noisy_model.json";
  const fs::path tables = dir / "noisy_tables.ndjson";
  const fs::path report = dir / "noisy_report.json";
  REQUIRE(run_cli("generate --n 4 --mass 0.2 --seed 6 --out " + model.string()).exit_code == 0);
  REQUIRE(run_cli("simulate --model " + model.string() + " --r 2 --m 100000 --seed 10 --out " +
                  tables.string())
              .exit_code == 0);
  RunResult r = run_cli("recover --tables " + tables.string() + " --n 4 --r 2 --truth " +
                        model.string() + " --out " + report.string() + " --denom-tol 1e-6");
  CHECK(r.exit_code == 0);
  const std::string body = slurp(report);
  const auto pos = body.find("\"1\": ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::strtod(body.c_str() + pos + 5, nullptr) > 1e-13);  // residuals are genuinely nonzero
}

TEST_CASE("a truncated tables file names what is missing and exits 1") {
  const fs::path dir = work_dir();
  const fs::path model = dir / "trunc_model.json";
  const fs::path tables = dir / "trunc_tables.ndjson";
  REQUIRE(run_cli("generate --n 5 --mass 0.2 --seed 7 --out " + model.string()).exit_code == 0);
  REQUIRE(
      run_cli("tables --model " + model.string() + " --r 2 --out " + tables.string()).exit_code ==
      0);

  const Assortment victim = build_plan(5, 2).required_assortments.front();
  std::string key = "\"S\":[";
  for (std::size_t i = 0; i < victim.products().size(); ++i)
    key += (i ? "," : "") + std::to_string(victim.products()[i]);
  key += ']';

  std::ifstream in(tables);
  std::ostringstream keep;
  std::string line;
  bool dropped = false;
  while (std::getline(in, line)) {
    if (!dropped && line.find(key) != std::string::npos) {
      dropped = true;
      continue;
    }
    keep << line << '\n';
  }
  in.close();
  REQUIRE(dropped);
  std::ofstream(tables, std::ios::binary) << keep.str();

  RunResult r = run_cli("recover --tables " + tables.string() + " --n 5 --r 2 --out " +
                        (dir / "trunc_report.json").string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find(victim.str()) != std::string::npos);
}

TEST_CASE("per-system failures still write a partial report but exit 3") {
  const fs::path dir = work_dir();
  const fs::path tables = dir / "poisoned.ndjson";
  const fs::path report = dir / "poisoned_report.json";

  ModelParams m;
  m.n = 3;
  m.lambda = Eigen::VectorXd::Zero(4);
  m.lambda[1] = m.lambda[2] = m.lambda[3] = 1.0 / 3.0;
  m.rho = Eigen::MatrixXd::Zero(4, 4);
  m.rho(0, 0) = 1.0;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      if (i != j) m.rho(i, j) = 0.5;
  RecoveryPlan plan = build_plan(3, 2);
  ChoiceTable exact = exact_choice_table(m, plan.required_assortments);
  ChoiceTable poisoned(3);
  for (const auto& [s, probs] : exact.entries()) {
    if (s == Assortment::full(3)) {
      Eigen::VectorXd v = probs;
      v[0] += v[2];
      v[2] = 0.0;  // product 2 never chosen from the full set
      poisoned.set(s, v);
    } else {
      poisoned.set(s, probs);
    }
  }
  save_choice_table(tables, poisoned);

  RunResult r = run_cli("recover --tables " + tables.string() + " --n 3 --r 2 --out " +
                        report.string());
  CHECK(r.exit_code == 3);
  const std::string body = slurp(report);
  CHECK(body.find("\"per_system_errors\": {}") == std::string::npos);
  CHECK(body.find("zero denominator") != std::string::npos);
}

TEST_CASE("study emits one CSV row per (m, seed) pair") {
  const fs::path dir = work_dir();
  const fs::path model = dir / "study_model.json";
  const fs::path csv = dir / "study.csv";
  REQUIRE(run_cli("generate --n 4 --mass 0.2 --seed 8 --out " + model.string()).exit_code == 0);
  RunResult r = run_cli("study --model " + model.string() +
                        " --r 2 --m-list 500,5000 --seeds 1,2,3 --out " + csv.string());
  CHECK(r.exit_code == 0);
  const std::string body = slurp(csv);
  CHECK(body.find("m,max_param_error\n") == 0);
  CHECK(count_lines(body) == 7);  // header + 2 x 3 rows

  run_cli("study --model " + model.string() + " --r 2 --m-list 500,5000 --seeds 1,2,3 --out " +
          csv.string());
  CHECK(slurp(csv) == body);

  CHECK(run_cli("study --model " + model.string() + " --r 2 --seeds 1 --out " + csv.string())
            .exit_code == 2);  // m-list is required
}
