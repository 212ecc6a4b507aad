// Command-line front end: generate / plan / tables / simulate / recover / study.
// Exit codes: 0 success, 1 I/O or missing data, 2 usage, 3 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mccm/choice_oracle.hpp"
#include "mccm/errors.hpp"
#include "mccm/io.hpp"
#include "mccm/model.hpp"
#include "mccm/plan.hpp"
#include "mccm/recovery.hpp"
#include "mccm/simulate.hpp"

namespace {

using namespace mccm;

ModelParams load_valid_model(const std::string& path, bool renormalize) {
  ModelParams model = load_model(path, renormalize);
  std::vector<Violation> found = validate(model);
  if (!found.empty()) {
    std::string msg = "model " + path + " is invalid:";
    for (const Violation& v : found)
      msg += "\n  [" + std::string(to_string(v.code)) + "] " + v.detail;
    throw DomainError(msg);
  }
  return model;
}

RecoveryPlan make_plan(int n, int r, const std::string& mode) {
  return mode == "all" ? full_plan(n, r) : build_plan(n, r);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

void cmd_generate(int n, double mass, std::uint64_t seed, const std::string& out_path) {
  ModelParams model = generate_random(n, mass, seed);
  std::vector<Violation> found = validate(model);
  save_model(out_path, model);
  std::cout << "wrote model n=" << n << " to " << out_path << " (hash "
            << model_hash_hex(model) << ")\n";
  if (found.empty()) {
    std::cout << "validation: clean\n";
  } else {
    for (const Violation& v : found)
      std::cout << "validation: [" << to_string(v.code) << "] " << v.detail << "\n";
  }
}

void print_plan(std::ostream& out, const RecoveryPlan& plan) {
  auto [count_r, count_r1] = count_required(plan);
  out << "# plan n=" << plan.n << " r=" << plan.r << ": " << count_r << " assortments of size "
      << plan.r << ", " << count_r1 << " of size " << plan.r + 1 << ", "
      << count_r + count_r1 << " total\n";
  for (const Assortment& s : plan.required_assortments) {
    const std::vector<int>& products = s.products();
    out << '[';
    for (std::size_t i = 0; i < products.size(); ++i) {
      if (i) out << ',';
      out << products[i];
    }
    out << "]\n";
  }
}

void cmd_plan(int n, int r, const std::string& out_path) {
  RecoveryPlan plan = build_plan(n, r);
  if (out_path.empty()) {
    print_plan(std::cout, plan);
  } else {
    std::ofstream out = open_out(out_path);
    print_plan(out, plan);
    if (!out) throw IoError("error while writing " + out_path);
  }
}

void cmd_tables(const std::string& model_path, int r, const std::string& mode,
                const std::string& out_path, bool renormalize) {
  ModelParams model = load_valid_model(model_path, renormalize);
  RecoveryPlan plan = make_plan(model.n, r, mode);
  ChoiceTable table = exact_choice_table(model, plan.required_assortments);
  save_choice_table(out_path, table);
  std::cout << "wrote " << table.size() << " records to " << out_path << "\n";
}

void cmd_simulate(const std::string& model_path, int r, long long m, std::uint64_t seed,
                  const std::string& mode, double laplace, const std::string& out_path,
                  bool renormalize) {
  ModelParams model = load_valid_model(model_path, renormalize);
  RecoveryPlan plan = make_plan(model.n, r, mode);
  SampleConfig config;
  config.samples_per_assortment = m;
  config.seed = seed;
  config.laplace_alpha = laplace;
  ChoiceTable table = estimate_table(model, plan.required_assortments, config);
  save_choice_table(out_path, table);

  std::ofstream meta = open_out(out_path + ".meta.json");
  meta << "{\"seed\": " << seed << ", \"m\": " << m << ", \"laplace\": "
       << format_double(laplace) << ", \"model_hash\": \"" << model_hash_hex(model)
       << "\"}\n";
  if (!meta) throw IoError("error while writing " + out_path + ".meta.json");
  std::cout << "wrote " << table.size() << " records to " << out_path << "\n";
}

int cmd_recover(const std::string& tables_path, int n, int r, const std::string& truth_path,
                const std::string& out_path, const std::string& mode, double denom_tol,
                double rank_tol, bool renormalize) {
  ChoiceTable table = load_choice_table(tables_path, n);
  RecoveryPlan plan = make_plan(n, r, mode);
  RecoverOptions options;
  options.denom_tolerance = denom_tol;
  options.rank_tolerance = rank_tol;
  options.fail_fast = false;

  RecoveryReport report;
  if (truth_path.empty()) {
    report = recover(table, plan, options);
  } else {
    ModelParams truth = load_valid_model(truth_path, renormalize);
    report = recover(table, plan, truth, options);
  }
  save_report(out_path, report);

  if (report.max_param_error)
    std::cout << "max_param_error = " << format_double(*report.max_param_error) << "\n";
  for (const auto& [key, what] : report.per_system_errors)
    std::cerr << "system " << key << " failed: " << what << "\n";
  std::cout << "wrote report to " << out_path << "\n";
  return report.per_system_errors.empty() ? 0 : 3;
}

void cmd_study(const std::string& model_path, int r, const std::vector<long long>& m_list,
               const std::vector<std::uint64_t>& seeds, const std::string& out_path,
               bool renormalize) {
  ModelParams model = load_valid_model(model_path, renormalize);
  RecoveryPlan plan = build_plan(model.n, r);
  std::ofstream out = open_out(out_path);
  out << "m,max_param_error\n";
  for (std::uint64_t seed : seeds) {
    std::vector<StudyPoint> points = error_vs_samples(model, plan, m_list, seed);
    for (const StudyPoint& p : points) {
      out << p.m << ',' << (p.max_error ? format_double(*p.max_error) : "nan") << "\n";
      if (!p.max_error)
        std::cerr << "m=" << p.m << " seed=" << seed << " failed: " << p.failure << "\n";
    }
  }
  if (!out) throw IoError("error while writing " + out_path);
  std::cout << "wrote " << m_list.size() * seeds.size() << " rows to " << out_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markov chain choice model toolkit"};
  app.require_subcommand(1);
  int exit_code = 0;

  // generate
  int gen_n = 0;
  double gen_mass = 0.0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  CLI::App* generate = app.add_subcommand("generate", "Generate a random valid model");
  generate->add_option("--n", gen_n, "number of products")->required()->check(CLI::Range(3, 1000000));
  generate->add_option("--mass", gen_mass, "no-purchase mass per transition row")
      ->check(CLI::Range(0.0, 1.0));
  generate->add_option("--seed", gen_seed, "RNG seed");
  generate->add_option("--out", gen_out, "output model path")->required();
  generate->callback([&] { cmd_generate(gen_n, gen_mass, gen_seed, gen_out); });

  // plan
  int plan_n = 0, plan_r = 0;
  std::string plan_out;
  CLI::App* plan_cmd = app.add_subcommand("plan", "Print the assortment schedule for (n, r)");
  plan_cmd->add_option("--n", plan_n, "number of products")->required();
  plan_cmd->add_option("--r", plan_r, "assortment size")->required();
  plan_cmd->add_option("--out", plan_out, "output path (stdout if omitted)");
  plan_cmd->callback([&] { cmd_plan(plan_n, plan_r, plan_out); });

  // tables
  std::string tab_model, tab_mode = "minimal", tab_out;
  int tab_r = 0;
  bool tab_renorm = false;
  CLI::App* tables = app.add_subcommand("tables", "Compute exact choice probabilities");
  tables->add_option("--model", tab_model, "model file")->required();
  tables->add_option("--r", tab_r, "assortment size")->required();
  tables->add_option("--mode", tab_mode, "assortment family")
      ->check(CLI::IsMember({"minimal", "all"}));
  tables->add_option("--out", tab_out, "output table path")->required();
  tables->add_flag("--renormalize", tab_renorm, "rescale model rows before validation");
  tables->callback([&] { cmd_tables(tab_model, tab_r, tab_mode, tab_out, tab_renorm); });

  // simulate
  std::string sim_model, sim_mode = "minimal", sim_out;
  int sim_r = 0;
  long long sim_m = 0;
  std::uint64_t sim_seed = 0;
  double sim_laplace = 0.0;
  bool sim_renorm = false;
  CLI::App* simulate = app.add_subcommand("simulate", "Estimate choice probabilities by sampling");
  simulate->add_option("--model", sim_model, "model file")->required();
  simulate->add_option("--r", sim_r, "assortment size")->required();
  simulate->add_option("--m", sim_m, "samples per assortment")
      ->required()
      ->check(CLI::Range(1LL, 1000000000000LL));
  simulate->add_option("--seed", sim_seed, "RNG seed");
  simulate->add_option("--mode", sim_mode, "assortment family")
      ->check(CLI::IsMember({"minimal", "all"}));
  simulate->add_option("--laplace", sim_laplace, "pseudo-count added to each outcome")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--out", sim_out, "output table path")->required();
  simulate->add_flag("--renormalize", sim_renorm, "rescale model rows before validation");
  simulate->callback([&] {
    cmd_simulate(sim_model, sim_r, sim_m, sim_seed, sim_mode, sim_laplace, sim_out, sim_renorm);
  });

  // recover
  std::string rec_tables, rec_truth, rec_out, rec_mode = "minimal";
  int rec_n = 0, rec_r = 0;
  double rec_denom = kExactDenomTol, rec_rank = kRankTol;
  bool rec_renorm = false;
  CLI::App* recover_cmd = app.add_subcommand("recover", "Recover model parameters from a table");
  recover_cmd->add_option("--tables", rec_tables, "choice table file")->required();
  recover_cmd->add_option("--n", rec_n, "number of products")->required();
  recover_cmd->add_option("--r", rec_r, "assortment size the table was built for")->required();
  recover_cmd->add_option("--truth", rec_truth, "ground-truth model for error reporting");
  recover_cmd->add_option("--out", rec_out, "output report path")->required();
  recover_cmd->add_option("--plan", rec_mode, "assortment family")
      ->check(CLI::IsMember({"minimal", "all"}));
  recover_cmd->add_option("--denom-tol", rec_denom, "conditional-probability denominator guard");
  recover_cmd->add_option("--rank-tol", rec_rank, "relative singular-value threshold");
  recover_cmd->add_flag("--renormalize", rec_renorm, "rescale truth model rows before validation");
  recover_cmd->callback([&] {
    exit_code = cmd_recover(rec_tables, rec_n, rec_r, rec_truth, rec_out, rec_mode, rec_denom,
                            rec_rank, rec_renorm);
  });

  // study
  std::string study_model, study_out;
  int study_r = 0;
  std::vector<long long> study_m;
  std::vector<std::uint64_t> study_seeds;
  bool study_renorm = false;
  CLI::App* study = app.add_subcommand("study", "Recovery error as a function of sample size");
  study->add_option("--model", study_model, "model file")->required();
  study->add_option("--r", study_r, "assortment size")->required();
  study->add_option("--m-list", study_m, "comma-separated sample sizes")
      ->required()
      ->delimiter(',');
  study->add_option("--seeds", study_seeds, "comma-separated RNG seeds")
      ->required()
      ->delimiter(',');
  study->add_option("--out", study_out, "output CSV path")->required();
  study->add_flag("--renormalize", study_renorm, "rescale model rows before validation");
  study->callback(
      [&] { cmd_study(study_model, study_r, study_m, study_seeds, study_out, study_renorm); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConditionalBuildError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.missing().empty() ? 3 : 1;
  } catch (const MissingAssortment& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const MissingConditional& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ZeroDenominator& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const SingularSystem& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const UnderdeterminedSystem& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const WalkLimitExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
