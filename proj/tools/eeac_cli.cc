/*
 * Copyright 2026 The EEAC Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end: synth, train-surrogate, shapley, eval, explain,
// compare, answer-merge, selftest.
//
// Exit codes: 0 ok, 1 usage, 2 schema, 3 missing oracle entries (a request
// file is written), 4 numerical failure.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eeac/errors.h"
#include "eeac/experiment.h"
#include "eeac/explanation.h"
#include "eeac/json_text.h"
#include "eeac/oracle.h"
#include "eeac/records.h"
#include "eeac/selftest.h"
#include "eeac/shapley.h"
#include "eeac/training.h"

namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kSchema = 2, kMissing = 3, kNumerical = 4 };

struct CommonFlags {
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out = "out";
  std::string format = "text";
};

void AddCommon(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--seed", f.seed, "Base seed for every random choice");
  cmd->add_option("--jobs", f.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--format", f.format, "Stdout format")
      ->check(CLI::IsMember({"text", "record"}));
}

void AddTrainFlags(CLI::App* cmd, eeac::TrainConfig& cfg) {
  cmd->add_option("--epochs", cfg.epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--lr", cfg.learning_rate, "Adam learning rate")->capture_default_str();
  cmd->add_option("--batch-size", cfg.batch_size)->capture_default_str();
  cmd->add_option("--train-samples", cfg.n_train_samples, "0 = default split");
  cmd->add_option("--holdout-samples", cfg.n_holdout_samples, "0 = default split");
  cmd->add_option("--hidden-width", cfg.hidden_width, "0 = feature_dim");
}

struct ShapleyFlags {
  std::string method = "monte_carlo";
  int samples = eeac::kDefaultSamplesPerConcept;
};

void AddShapleyFlags(CLI::App* cmd, ShapleyFlags& f) {
  cmd->add_option("--method", f.method, "exact or monte_carlo")
      ->check(CLI::IsMember({"exact", "monte_carlo", "mc"}));
  cmd->add_option("--samples", f.samples, "Monte Carlo samples per concept (K)")
      ->capture_default_str();
}

void AddSynthFlags(CLI::App* cmd, eeac::SyntheticOracleSpec& s) {
  cmd->add_option("--n-concepts", s.n_concepts)->capture_default_str();
  cmd->add_option("--n-classes", s.n_classes)->capture_default_str();
  cmd->add_option("--feature-dim", s.feature_dim)->capture_default_str();
  cmd->add_option("--generator-width", s.hidden_width, "0 = feature_dim");
  cmd->add_option("--nonlinearity", s.nonlinearity, "tanh gain; 0 = affine")
      ->capture_default_str();
  cmd->add_option("--input-scale", s.input_scale)->capture_default_str();
  cmd->add_option("--feature-scale", s.feature_scale)->capture_default_str();
  cmd->add_option("--head-scale", s.head_scale)->capture_default_str();
}

void Write(const fs::path& path, const std::string& text) {
  eeac::WriteTextFile(path, text);
}

void WriteJson(const fs::path& path, const eeac::Json& doc) {
  Write(path, eeac::DumpCanonical(doc));
}

void Emit(const CommonFlags& f, const std::string& text, const eeac::Json& record) {
  if (f.format == "record") {
    std::cout << eeac::DumpCanonical(record);
  } else {
    std::cout << text;
  }
}

std::string Percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * v);
  return buf;
}

std::string ReportText(const std::string& case_id, const eeac::ExplanationReport& r) {
  std::ostringstream s;
  s << "case " << case_id << "\nranking:";
  for (int i : r.ranking) s << " " << i;
  s << "\nselected:";
  for (int i : r.explanation.selected) s << " " << i;
  s << "\nphi_selected: " << r.explanation.phi << "\ninsertion AUC: "
    << Percent(r.insertion_auc) << "\ndeletion AUC: " << Percent(r.deletion_auc)
    << "\n";
  return s.str();
}

void WriteReport(const fs::path& dir, const std::string& case_id,
                 const eeac::ExplanationReport& r) {
  WriteJson(dir / "explanation.json", eeac::ExplanationToJson(case_id, r));
  Write(dir / "insertion.tsv", eeac::CurveTable(r.insertion_curve));
  Write(dir / "deletion.tsv", eeac::CurveTable(r.deletion_curve));
  Write(dir / "curves.svg", eeac::RenderCurvesSvg(r, case_id));
}

eeac::ShapleyEstimate Estimate(const eeac::GameView& game, const ShapleyFlags& f,
                               const CommonFlags& common) {
  if (eeac::ParseShapleyMethod(f.method) == eeac::ShapleyMethod::kExact) {
    return eeac::ExactShapley(game);
  }
  return eeac::MonteCarloShapley(game, f.samples, eeac::DeriveSeed(common.seed, 2),
                                 common.jobs);
}

std::vector<eeac::OracleCase> LoadCaseDir(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json" && entry.path().filename() != "manifest.json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<eeac::OracleCase> cases;
  for (const fs::path& p : files) cases.push_back(eeac::LoadCase(p));
  return cases;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concept-level Shapley explanations through a per-input surrogate"};
  app.require_subcommand(1);

  // synth
  CommonFlags synth_flags;
  eeac::SyntheticOracleSpec synth_spec;
  int synth_count = 1;
  auto* synth = app.add_subcommand("synth", "Write deterministic synthetic cases");
  AddCommon(synth, synth_flags);
  AddSynthFlags(synth, synth_spec);
  synth->add_option("--count", synth_count)->check(CLI::NonNegativeNumber);

  // train-surrogate
  CommonFlags train_flags;
  eeac::TrainConfig train_cfg;
  std::string train_case, train_variant = "tanh";
  auto* train = app.add_subcommand("train-surrogate", "Fit the PIE surrogate for one case");
  AddCommon(train, train_flags);
  AddTrainFlags(train, train_cfg);
  train->add_option("--case", train_case)->required();
  train->add_option("--variant", train_variant, "linear, tanh, sigmoid, relu, identity");

  // shapley
  CommonFlags shap_flags;
  ShapleyFlags shap_opts;
  std::string shap_case, shap_surrogate;
  auto* shap = app.add_subcommand("shapley", "Estimate per-concept Shapley values");
  AddCommon(shap, shap_flags);
  AddShapleyFlags(shap, shap_opts);
  shap->add_option("--case", shap_case)->required();
  shap->add_option("--surrogate", shap_surrogate, "Use a trained surrogate as the game");

  // eval
  CommonFlags eval_flags;
  std::string eval_case, eval_shapley, eval_surrogate;
  bool eval_pie_curves = false, eval_at_least_one = false;
  auto* eval = app.add_subcommand("eval", "Select, rank and score an explanation");
  AddCommon(eval, eval_flags);
  eval->add_option("--case", eval_case)->required();
  eval->add_option("--shapley", eval_shapley)->required();
  eval->add_option("--surrogate", eval_surrogate, "Needed with --pie-curves");
  eval->add_flag("--pie-curves", eval_pie_curves, "Trace curves on the surrogate");
  eval->add_flag("--at-least-one", eval_at_least_one, "Never select an empty explanation");

  // explain
  CommonFlags explain_flags;
  eeac::TrainConfig explain_cfg;
  ShapleyFlags explain_shap;
  std::string explain_case, explain_variant = "tanh";
  bool explain_pie_curves = false, explain_at_least_one = false;
  auto* explain = app.add_subcommand("explain", "Train, estimate, select and score in one go");
  AddCommon(explain, explain_flags);
  AddTrainFlags(explain, explain_cfg);
  AddShapleyFlags(explain, explain_shap);
  explain->add_option("--case", explain_case)->required();
  explain->add_option("--variant", explain_variant);
  explain->add_flag("--pie-curves", explain_pie_curves);
  explain->add_flag("--at-least-one", explain_at_least_one);

  // compare
  CommonFlags compare_flags;
  eeac::TrainConfig compare_cfg;
  ShapleyFlags compare_shap;
  eeac::SyntheticOracleSpec compare_spec;
  std::string compare_cases;
  int compare_count = 10;
  int compare_reps = 3;
  bool compare_pie_curves = false;
  std::vector<std::string> compare_variants = {"linear", "tanh", "sigmoid", "relu"};
  auto* compare = app.add_subcommand("compare", "Paired linear vs nonlinear surrogate experiment");
  AddCommon(compare, compare_flags);
  AddTrainFlags(compare, compare_cfg);
  AddShapleyFlags(compare, compare_shap);
  AddSynthFlags(compare, compare_spec);
  compare->add_option("--cases", compare_cases, "Directory of case files (else synthesize)");
  compare->add_option("--count", compare_count, "Synthetic cases when --cases is absent");
  compare->add_option("--repetitions", compare_reps)->check(CLI::PositiveNumber);
  compare->add_option("--variants", compare_variants)->delimiter(',');
  compare->add_flag("--pie-curves", compare_pie_curves);

  // answer-merge
  CommonFlags merge_flags;
  std::string merge_case;
  std::vector<std::string> merge_responses;
  auto* merge = app.add_subcommand("answer-merge", "Merge oracle responses into a pairs case");
  AddCommon(merge, merge_flags);
  merge->add_option("--case", merge_case)->required();
  merge->add_option("--response", merge_responses)->required();

  // selftest
  CommonFlags self_flags;
  std::vector<std::string> self_surrogates, self_cases;
  auto* self = app.add_subcommand("selftest", "Run the built-in invariant checks");
  AddCommon(self, self_flags);
  self->add_option("--surrogate", self_surrogates, "Also validate these surrogate files");
  self->add_option("--case", self_cases, "Also validate these case files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  fs::path request_dir;
  try {
    if (*synth) {
      const fs::path out = synth_flags.out;
      fs::create_directories(out);
      eeac::Json manifest;
      manifest["format_version"] = eeac::kFormatVersion;
      manifest["base_seed"] = synth_flags.seed;
      eeac::Json list = eeac::Json::array();
      for (const eeac::OracleCase& c : eeac::SynthesizeCases(synth_spec, synth_count, synth_flags.seed)) {
        const std::string file = c.case_id + ".json";
        eeac::SaveCase(c, out / file);
        eeac::Json item;
        item["case_id"] = c.case_id;
        item["seed"] = eeac::DeriveSeed(synth_flags.seed, list.size());
        item["file"] = file;
        list.push_back(std::move(item));
      }
      manifest["cases"] = list;
      WriteJson(out / "manifest.json", manifest);
      Emit(synth_flags, "wrote " + std::to_string(list.size()) + " cases to " + out.string() + "\n",
           manifest);
      return kOk;
    }

    if (*train) {
      request_dir = train_flags.out;
      const eeac::OracleCase c = eeac::LoadCase(train_case);
      train_cfg.seed = eeac::DeriveSeed(train_flags.seed, 1);
      const auto variant = eeac::SurrogateVariant::Parse(train_variant);
      const eeac::TrainedSurrogate t = eeac::Train(c, variant, train_cfg);
      const fs::path out = train_flags.out;
      eeac::SaveSurrogate(t.weights, train_cfg, out / "surrogate.json");
      const eeac::Json report = eeac::TrainReportToJson(c.case_id, variant, t.report);
      WriteJson(out / "train_report.json", report);
      eeac::Json timing;
      timing["format_version"] = eeac::kFormatVersion;
      timing["pie_time_seconds"] = t.report.pie_time_seconds;
      WriteJson(out / "timing.json", timing);
      std::ostringstream text;
      text << "variant " << variant.Name() << ": train CE " << t.report.final_train_ce;
      if (t.report.final_holdout_kl) text << ", holdout KL " << *t.report.final_holdout_kl;
      text << ", PIE time " << t.report.pie_time_seconds << " s\n";
      Emit(train_flags, text.str(), report);
      return kOk;
    }

    if (*shap) {
      request_dir = shap_flags.out;
      const eeac::OracleCase c = eeac::LoadCase(shap_case);
      std::optional<eeac::GameView> game;
      if (!shap_surrogate.empty()) {
        game = eeac::SurrogateGame(c, eeac::LoadSurrogate(shap_surrogate));
        if (c.n_concepts <= eeac::kMaxTableConcepts) game = eeac::Tabulate(*game);
      } else {
        game = eeac::OracleGame(c);
      }
      const eeac::ShapleyEstimate est = Estimate(*game, shap_opts, shap_flags);
      const eeac::Json record = eeac::ShapleyToJson(c.case_id, game->backing(), est);
      WriteJson(fs::path(shap_flags.out) / "shapley.json", record);
      std::ostringstream text;
      for (int i = 0; i < est.n(); ++i) {
        text << "concept " << i << ": " << est.values[static_cast<std::size_t>(i)]
             << " +/- " << est.std_errors[static_cast<std::size_t>(i)] << "\n";
      }
      Emit(shap_flags, text.str(), record);
      return kOk;
    }

    if (*eval) {
      request_dir = eval_flags.out;
      const eeac::OracleCase c = eeac::LoadCase(eval_case);
      const eeac::ShapleyEstimate est = eeac::ShapleyFromJson(eeac::ReadJsonFile(eval_shapley));
      std::optional<eeac::GameView> curves;
      if (eval_pie_curves) {
        if (eval_surrogate.empty()) throw std::invalid_argument("--pie-curves needs --surrogate");
        std::cerr << "warning: faithfulness curves traced on the surrogate, not the target\n";
        curves = eeac::SurrogateGame(c, eeac::LoadSurrogate(eval_surrogate));
      } else {
        curves = eeac::OracleGame(c);
      }
      const eeac::ExplanationReport r = eeac::Evaluate(est, *curves, eval_at_least_one);
      WriteReport(eval_flags.out, c.case_id, r);
      Emit(eval_flags, ReportText(c.case_id, r), eeac::ExplanationToJson(c.case_id, r));
      return kOk;
    }

    if (*explain) {
      request_dir = explain_flags.out;
      const eeac::OracleCase c = eeac::LoadCase(explain_case);
      eeac::ExplainOptions options;
      options.variant = eeac::SurrogateVariant::Parse(explain_variant);
      options.train = explain_cfg;
      options.method = eeac::ParseShapleyMethod(explain_shap.method);
      options.samples_per_concept = explain_shap.samples;
      options.seed = explain_flags.seed;
      options.pie_curves = explain_pie_curves;
      options.at_least_one = explain_at_least_one;
      options.jobs = explain_flags.jobs;
      if (options.pie_curves) {
        std::cerr << "warning: faithfulness curves traced on the surrogate, not the target\n";
      }
      const eeac::ExplainResult r = eeac::RunExplain(c, options);
      const fs::path out = explain_flags.out;
      eeac::SaveSurrogate(r.surrogate.weights, r.train_config, out / "surrogate.json");
      WriteJson(out / "train_report.json",
                eeac::TrainReportToJson(c.case_id, options.variant, r.surrogate.report));
      WriteJson(out / "shapley.json", eeac::ShapleyToJson(c.case_id, "surrogate", r.shapley));
      WriteReport(out, c.case_id, r.report);
      eeac::Json timing;
      timing["format_version"] = eeac::kFormatVersion;
      timing["pie_time_seconds"] = r.surrogate.report.pie_time_seconds;
      WriteJson(out / "timing.json", timing);
      Emit(explain_flags, ReportText(c.case_id, r.report),
           eeac::ExplanationToJson(c.case_id, r.report));
      return kOk;
    }

    if (*compare) {
      eeac::ExperimentConfig config;
      config.variants.clear();
      for (const std::string& v : compare_variants) {
        config.variants.push_back(eeac::SurrogateVariant::Parse(v));
      }
      config.train = compare_cfg;
      config.method = eeac::ParseShapleyMethod(compare_shap.method);
      config.samples_per_concept = compare_shap.samples;
      config.repetitions = compare_reps;
      config.base_seed = compare_flags.seed;
      config.jobs = compare_flags.jobs;
      config.pie_curves = compare_pie_curves;
      const std::vector<eeac::OracleCase> cases =
          compare_cases.empty() ? eeac::SynthesizeCases(compare_spec, compare_count, compare_flags.seed)
                                : LoadCaseDir(compare_cases);
      const eeac::CompareResult result = eeac::Compare(cases, config);
      const fs::path out = compare_flags.out;
      WriteJson(out / "runs.json", eeac::RunsJson(result.runs));
      WriteJson(out / "summary.json", eeac::SummaryJson(result.summary));
      WriteJson(out / "timing.json", eeac::TimingJson(result.runs, result.summary));
      const std::string table = eeac::SummaryText(result.summary);
      Write(out / "summary.txt", table);
      Emit(compare_flags, table, eeac::SummaryJson(result.summary));
      for (const eeac::CaseFailure& f : result.failures) {
        std::cerr << "case " << f.case_id << " failed: " << f.message << "\n";
      }
      return result.failures.empty() ? kOk : kNumerical;
    }

    if (*merge) {
      eeac::OracleCase c = eeac::LoadCase(merge_case);
      std::size_t added = 0;
      for (const std::string& path : merge_responses) {
        const eeac::OracleResponse response =
            eeac::ResponseFromJson(eeac::ReadJsonFile(path), c.n_concepts);
        if (response.case_id != c.case_id) {
          throw eeac::SchemaError("response '" + path + "' is for case '" +
                                  response.case_id + "', not '" + c.case_id + "'");
        }
        const std::size_t before = c.entries.size();
        eeac::MergeEntries(c, response.entries);
        added += c.entries.size() - before;
      }
      const fs::path out = fs::path(merge_flags.out) / (c.case_id + ".json");
      eeac::SaveCase(c, out);
      eeac::Json record;
      record["format_version"] = eeac::kFormatVersion;
      record["case_id"] = c.case_id;
      record["added_entries"] = added;
      record["file"] = out.string();
      Emit(merge_flags, "merged " + std::to_string(added) + " entries into " + out.string() + "\n",
           record);
      return kOk;
    }

    if (*self) {
      eeac::SelftestInputs inputs;
      for (const auto& p : self_surrogates) inputs.surrogate_files.emplace_back(p);
      for (const auto& p : self_cases) inputs.case_files.emplace_back(p);
      bool ok = true;
      eeac::Json record;
      record["format_version"] = eeac::kFormatVersion;
      eeac::Json checks = eeac::Json::array();
      std::ostringstream text;
      for (const eeac::CheckResult& r : eeac::RunSelftest(inputs)) {
        ok = ok && r.passed;
        text << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
        eeac::Json item;
        item["name"] = r.name;
        item["passed"] = r.passed;
        item["detail"] = r.detail;
        checks.push_back(std::move(item));
      }
      record["checks"] = std::move(checks);
      record["passed"] = ok;
      Emit(self_flags, text.str(), record);
      return ok ? kOk : kNumerical;
    }
  } catch (const eeac::MissingEntryError& e) {
    const fs::path path = request_dir / "request.json";
    eeac::WriteTextFile(path, eeac::DumpCanonical(eeac::RequestToJson(e.case_id(), e.missing())));
    std::cerr << e.what() << "; request written to " << path.string() << "\n";
    return kMissing;
  } catch (const eeac::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kSchema;
  } catch (const eeac::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
