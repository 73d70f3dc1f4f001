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

#include "eeac/experiment.h"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>

#include "eeac/errors.h"

namespace eeac {
namespace {

std::uint64_t HashId(const std::string& id) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : id) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

ExplainResult RunExplain(const OracleCase& c, const ExplainOptions& options) {
  ExplainResult result;
  result.train_config = options.train;
  result.train_config.seed = DeriveSeed(options.seed, 1);
  result.surrogate = Train(c, options.variant, result.train_config);

  GameView surrogate_game = SurrogateGame(c, result.surrogate.weights);
  if (c.n_concepts <= kMaxTableConcepts) surrogate_game = Tabulate(surrogate_game);

  if (options.method == ShapleyMethod::kExact) {
    result.shapley = ExactShapley(surrogate_game);
  } else {
    result.shapley = MonteCarloShapley(surrogate_game, options.samples_per_concept,
                                       DeriveSeed(options.seed, 2), options.jobs);
  }
  const GameView curve_game = options.pie_curves ? surrogate_game : OracleGame(c);
  result.report = Evaluate(result.shapley, curve_game, options.at_least_one);
  return result;
}

void ExperimentConfig::Validate() const {
  if (variants.empty()) throw std::invalid_argument("at least one variant required");
  if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  train.Validate();
}

std::uint64_t RunSeed(std::uint64_t base_seed, const std::string& case_id,
                      int repetition) {
  return DeriveSeed(DeriveSeed(base_seed, HashId(case_id)),
                    static_cast<std::uint64_t>(repetition));
}

std::string SynthCaseId(std::uint64_t seed, int index) {
  char id[48];
  std::snprintf(id, sizeof(id), "s%llu-%04d",
                static_cast<unsigned long long>(seed), index);
  return id;
}

std::vector<OracleCase> SynthesizeCases(const SyntheticOracleSpec& spec,
                                        int count, std::uint64_t seed) {
  if (count < 0) throw std::invalid_argument("count must be >= 0");
  std::vector<OracleCase> cases;
  cases.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    cases.push_back(SynthCase(spec, DeriveSeed(seed, static_cast<std::uint64_t>(i)),
                              SynthCaseId(seed, i)));
  }
  return cases;
}

CompareResult Compare(const std::vector<OracleCase>& cases,
                      const ExperimentConfig& config) {
  config.Validate();
  std::vector<std::vector<RunRecord>> per_case(cases.size());
  std::vector<std::optional<CaseFailure>> failed(cases.size());

  auto run_case = [&](std::size_t index) {
    const OracleCase& c = cases[index];
    std::vector<RunRecord> records;
    try {
      for (int rep = 0; rep < config.repetitions; ++rep) {
        const std::uint64_t seed = RunSeed(config.base_seed, c.case_id, rep);
        for (const SurrogateVariant& variant : config.variants) {
          ExplainOptions options;
          options.variant = variant;
          options.train = config.train;
          options.method = config.method;
          options.samples_per_concept = config.samples_per_concept;
          options.seed = seed;
          options.pie_curves = config.pie_curves;
          const ExplainResult r = RunExplain(c, options);
          RunRecord rec;
          rec.case_id = c.case_id;
          rec.variant = variant.Name();
          rec.repetition = rep;
          rec.seed = seed;
          rec.insertion_auc = r.report.insertion_auc;
          rec.deletion_auc = r.report.deletion_auc;
          rec.final_train_ce = r.surrogate.report.final_train_ce;
          rec.holdout_kl = r.surrogate.report.final_holdout_kl;
          rec.pie_time_seconds = r.surrogate.report.pie_time_seconds;
          records.push_back(std::move(rec));
        }
      }
      per_case[index] = std::move(records);
    } catch (const std::exception& e) {
      failed[index] = CaseFailure{c.case_id, e.what()};
    }
  };

  if (config.jobs <= 1) {
    for (std::size_t i = 0; i < cases.size(); ++i) run_case(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const auto count = std::min<std::size_t>(static_cast<std::size_t>(config.jobs),
                                             cases.size());
    for (std::size_t t = 0; t < count; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < cases.size(); i = next++) run_case(i);
      });
    }
    for (std::thread& t : workers) t.join();
  }

  CompareResult result;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (failed[i]) {
      result.failures.push_back(*failed[i]);
      continue;
    }
    result.runs.insert(result.runs.end(), per_case[i].begin(), per_case[i].end());
  }
  result.summary = Summarize(result.runs);
  return result;
}

std::vector<SummaryRow> Summarize(const std::vector<RunRecord>& runs) {
  std::vector<SummaryRow> rows;
  std::map<std::string, std::size_t> index;
  std::vector<int> kl_counts;
  for (const RunRecord& r : runs) {
    auto [it, inserted] = index.emplace(r.variant, rows.size());
    if (inserted) {
      SummaryRow row;
      row.variant = r.variant;
      rows.push_back(std::move(row));
      kl_counts.push_back(0);
    }
    SummaryRow& row = rows[it->second];
    ++row.runs;
    row.mean_insertion_auc += r.insertion_auc;
    row.mean_deletion_auc += r.deletion_auc;
    row.mean_pie_time_seconds += r.pie_time_seconds;
    if (r.holdout_kl) {
      row.mean_holdout_kl = row.mean_holdout_kl.value_or(0.0) + *r.holdout_kl;
      ++kl_counts[it->second];
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    SummaryRow& row = rows[i];
    row.mean_insertion_auc /= row.runs;
    row.mean_deletion_auc /= row.runs;
    row.mean_pie_time_seconds /= row.runs;
    if (row.mean_holdout_kl) *row.mean_holdout_kl /= kl_counts[i];
  }
  return rows;
}

std::string SummaryText(const std::vector<SummaryRow>& summary) {
  if (summary.empty()) return "no completed runs\n";
  auto best = [&](auto key, bool maximize) {
    std::size_t b = 0;
    for (std::size_t i = 1; i < summary.size(); ++i) {
      const double v = key(summary[i]);
      const double w = key(summary[b]);
      if (maximize ? v > w : v < w) b = i;
    }
    return b;
  };
  const std::size_t best_ins = best([](const SummaryRow& r) { return r.mean_insertion_auc; }, true);
  const std::size_t best_del = best([](const SummaryRow& r) { return r.mean_deletion_auc; }, false);
  const std::size_t best_time = best([](const SummaryRow& r) { return r.mean_pie_time_seconds; }, false);
  const std::size_t best_kl = best([](const SummaryRow& r) {
    return r.mean_holdout_kl.value_or(std::numeric_limits<double>::infinity());
  }, false);

  auto cell = [](const std::string& text, bool bold) {
    const std::string s = bold ? "**" + text + "**" : text;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%14s", s.c_str());
    return std::string(buf);
  };
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-10s %5s %14s %14s %14s %14s\n", "model",
                "runs", "insertion AUC", "deletion AUC", "holdout KL",
                "PIE time (s)");
  out += line;
  for (std::size_t i = 0; i < summary.size(); ++i) {
    const SummaryRow& r = summary[i];
    std::snprintf(line, sizeof(line), "%-10s %5d ", r.variant.c_str(), r.runs);
    out += line;
    out += cell(Fixed(100.0 * r.mean_insertion_auc, 2), i == best_ins) + " ";
    out += cell(Fixed(100.0 * r.mean_deletion_auc, 2), i == best_del) + " ";
    out += cell(r.mean_holdout_kl ? Fixed(*r.mean_holdout_kl, 5) : "-",
                i == best_kl && r.mean_holdout_kl.has_value()) + " ";
    out += cell(Fixed(r.mean_pie_time_seconds, 3), i == best_time) + "\n";
  }
  return out;
}

Json RunsJson(const std::vector<RunRecord>& runs) {
  Json doc;
  doc["format_version"] = 1;
  Json list = Json::array();
  for (const RunRecord& r : runs) {
    Json j;
    j["case_id"] = r.case_id;
    j["variant"] = r.variant;
    j["repetition"] = r.repetition;
    j["seed"] = r.seed;
    j["insertion_auc"] = r.insertion_auc;
    j["deletion_auc"] = r.deletion_auc;
    j["final_train_ce"] = r.final_train_ce;
    j["holdout_kl"] = r.holdout_kl ? Json(*r.holdout_kl) : Json(nullptr);
    list.push_back(std::move(j));
  }
  doc["runs"] = std::move(list);
  return doc;
}

Json SummaryJson(const std::vector<SummaryRow>& summary) {
  Json doc;
  doc["format_version"] = 1;
  Json list = Json::array();
  for (const SummaryRow& r : summary) {
    Json j;
    j["variant"] = r.variant;
    j["runs"] = r.runs;
    j["mean_insertion_auc"] = r.mean_insertion_auc;
    j["mean_deletion_auc"] = r.mean_deletion_auc;
    j["mean_holdout_kl"] = r.mean_holdout_kl ? Json(*r.mean_holdout_kl) : Json(nullptr);
    list.push_back(std::move(j));
  }
  doc["summary"] = std::move(list);
  return doc;
}

Json TimingJson(const std::vector<RunRecord>& runs,
                const std::vector<SummaryRow>& summary) {
  Json doc;
  doc["format_version"] = 1;
  Json per_run = Json::array();
  for (const RunRecord& r : runs) {
    Json j;
    j["case_id"] = r.case_id;
    j["variant"] = r.variant;
    j["repetition"] = r.repetition;
    j["pie_time_seconds"] = r.pie_time_seconds;
    per_run.push_back(std::move(j));
  }
  Json means = Json::array();
  for (const SummaryRow& r : summary) {
    Json j;
    j["variant"] = r.variant;
    j["mean_pie_time_seconds"] = r.mean_pie_time_seconds;
    means.push_back(std::move(j));
  }
  doc["runs"] = std::move(per_run);
  doc["summary"] = std::move(means);
  return doc;
}

}  // namespace eeac
