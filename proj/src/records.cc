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

#include "eeac/records.h"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>

#include "eeac/errors.h"

namespace eeac {
namespace {

// Field access with messages naming the full path of the offending field.
class Reader {
 public:
  Reader(const Json& doc, std::string path) : doc_(doc), path_(std::move(path)) {}

  const Json& Field(const std::string& key) const {
    if (!doc_.is_object()) throw SchemaError(path_ + ": expected an object");
    const auto it = doc_.find(key);
    if (it == doc_.end()) throw SchemaError(Name(key) + ": missing field");
    return *it;
  }
  bool Has(const std::string& key) const {
    return doc_.is_object() && doc_.contains(key) && !doc_.at(key).is_null();
  }
  Reader Child(const std::string& key) const { return {Field(key), Name(key)}; }

  std::string String(const std::string& key) const {
    const Json& v = Field(key);
    if (!v.is_string()) throw SchemaError(Name(key) + ": expected a string");
    return v.get<std::string>();
  }
  long long Int(const std::string& key) const {
    const Json& v = Field(key);
    if (!v.is_number_integer()) throw SchemaError(Name(key) + ": expected an integer");
    return v.get<long long>();
  }
  std::uint64_t Uint(const std::string& key) const {
    const Json& v = Field(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw SchemaError(Name(key) + ": expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }
  double Number(const std::string& key) const {
    const Json& v = Field(key);
    if (!v.is_number()) throw SchemaError(Name(key) + ": expected a number");
    return v.get<double>();
  }
  Eigen::VectorXd Vector(const std::string& key, Eigen::Index expected = -1) const {
    const Json& v = Field(key);
    if (!v.is_array()) throw SchemaError(Name(key) + ": expected an array");
    if (expected >= 0 && static_cast<Eigen::Index>(v.size()) != expected) {
      throw SchemaError(Name(key) + ": expected " + std::to_string(expected) +
                        " numbers, found " + std::to_string(v.size()));
    }
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        throw SchemaError(Name(key) + "[" + std::to_string(i) + "]: expected a number");
      }
      out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
    }
    return out;
  }
  Eigen::MatrixXd Matrix(const std::string& key) const {
    const Reader m = Child(key);
    const long long rows = m.Int("rows");
    const long long cols = m.Int("cols");
    if (rows < 0 || cols < 0) throw SchemaError(Name(key) + ": negative shape");
    const Eigen::VectorXd data = m.Vector("data", rows * cols);
    Eigen::MatrixXd out(rows, cols);
    for (long long r = 0; r < rows; ++r) {
      for (long long c = 0; c < cols; ++c) out(r, c) = data[r * cols + c];
    }
    return out;
  }
  void CheckVersion() const {
    if (Int("format_version") != kFormatVersion) {
      throw SchemaError(Name("format_version") + ": unsupported version " +
                        Field("format_version").dump());
    }
  }
  std::string Name(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  const Json& doc_;
  std::string path_;
};

Json VectorJson(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json MatrixJson(const Eigen::MatrixXd& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  Json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  out["data"] = std::move(data);
  return out;
}

Coalition ParseCoalition(const Json& v, int n, const std::string& where) {
  if (!v.is_string()) throw SchemaError(where + ": expected coalition text");
  try {
    return CoalitionFromText(v.get<std::string>(), n);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

Json WithChecksum(Json doc) {
  const std::string sum = Checksum(doc);
  doc["checksum"] = sum;
  return doc;
}

void VerifyChecksum(const Json& doc, const std::string& what) {
  if (!doc.is_object() || !doc.contains("checksum")) return;
  Json body = doc;
  body.erase("checksum");
  if (!doc["checksum"].is_string() ||
      doc["checksum"].get<std::string>() != Checksum(body)) {
    throw ChecksumError(what + ": checksum mismatch");
  }
}

Json EntriesJson(const std::map<Coalition, ClassDistribution>& entries) {
  Json out = Json::array();
  for (const auto& [s, dist] : entries) {
    Json e;
    e["coalition"] = s.ToText();
    e["probs"] = VectorJson(dist.probs);
    out.push_back(std::move(e));
  }
  return out;
}

std::map<Coalition, ClassDistribution> EntriesFromJson(const Reader& doc,
                                                       const std::string& key,
                                                       int n, int n_classes) {
  const Json& list = doc.Field(key);
  if (!list.is_array()) throw SchemaError(doc.Name(key) + ": expected an array");
  std::map<Coalition, ClassDistribution> entries;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Reader e(list[i], doc.Name(key) + "[" + std::to_string(i) + "]");
    const Coalition s = ParseCoalition(e.Field("coalition"), n, e.Name("coalition"));
    ClassDistribution dist{
        e.Vector("probs", n_classes < 0 ? -1 : static_cast<Eigen::Index>(n_classes))};
    dist.Validate("entry '" + s.ToText() + "'");
    if (!entries.emplace(s, std::move(dist)).second) {
      throw SchemaError("entry '" + s.ToText() + "': duplicate coalition");
    }
  }
  return entries;
}

Json TrainConfigJson(const TrainConfig& cfg) {
  Json out;
  out["seed"] = cfg.seed;
  out["epochs"] = cfg.epochs;
  out["learning_rate"] = cfg.learning_rate;
  out["beta1"] = cfg.beta1;
  out["beta2"] = cfg.beta2;
  out["epsilon"] = cfg.epsilon;
  out["batch_size"] = cfg.batch_size;
  out["n_train_samples"] = cfg.n_train_samples;
  out["n_holdout_samples"] = cfg.n_holdout_samples;
  out["hidden_width"] = cfg.hidden_width;
  return out;
}

TrainConfig TrainConfigFromJson(const Reader& r) {
  TrainConfig cfg;
  cfg.seed = r.Uint("seed");
  cfg.epochs = static_cast<int>(r.Int("epochs"));
  cfg.learning_rate = r.Number("learning_rate");
  cfg.beta1 = r.Number("beta1");
  cfg.beta2 = r.Number("beta2");
  cfg.epsilon = r.Number("epsilon");
  cfg.batch_size = static_cast<int>(r.Int("batch_size"));
  cfg.n_train_samples = static_cast<int>(r.Int("n_train_samples"));
  cfg.n_holdout_samples = static_cast<int>(r.Int("n_holdout_samples"));
  cfg.hidden_width = static_cast<int>(r.Int("hidden_width"));
  return cfg;
}

Json WeightsJson(const SurrogateWeights& w) {
  Json out;
  const bool nonlinear = w.variant.kind == SurrogateKind::kNonlinear;
  out["variant"] = nonlinear ? "nonlinear" : "linear";
  if (nonlinear) out["activation"] = std::string(ActivationName(w.variant.activation));
  out["n_concepts"] = w.n_concepts();
  out["feature_dim"] = w.feature_dim();
  out["hidden_width"] = w.hidden_width();
  out["w1"] = MatrixJson(w.w1);
  out["b1"] = VectorJson(w.b1);
  if (w.variant.kind == SurrogateKind::kNonlinear) {
    out["w2"] = MatrixJson(w.w2);
    out["b2"] = VectorJson(w.b2);
  }
  return out;
}

SurrogateWeights WeightsFromJson(const Reader& r) {
  SurrogateWeights w;
  const std::string kind = r.String("variant");
  if (kind == "nonlinear") {
    try {
      w.variant = SurrogateVariant::Nonlinear(ParseActivation(r.String("activation")));
    } catch (const std::invalid_argument& e) {
      throw SchemaError(r.Name("activation") + ": " + e.what());
    }
  } else if (kind != "linear") {
    throw SchemaError(r.Name("variant") + ": expected \"linear\" or \"nonlinear\", got \"" +
                      kind + "\"");
  }
  w.w1 = r.Matrix("w1");
  w.b1 = r.Vector("b1", w.w1.rows());
  if (w.variant.kind == SurrogateKind::kNonlinear) {
    w.w2 = r.Matrix("w2");
    w.b2 = r.Vector("b2", w.w2.rows());
  }
  if (r.Int("n_concepts") != w.n_concepts()) {
    throw SchemaError(r.Name("n_concepts") + ": does not match w1");
  }
  if (w.variant.kind == SurrogateKind::kNonlinear &&
      (r.Int("hidden_width") != w.hidden_width() ||
       w.w2.cols() != w.w1.rows())) {
    throw SchemaError(r.Name("hidden_width") + ": does not match w1/w2");
  }
  if (r.Int("feature_dim") != w.feature_dim()) {
    throw SchemaError(r.Name("feature_dim") + ": does not match the weights");
  }
  try {
    w.Validate();
  } catch (const std::exception& e) {
    throw SchemaError(r.Name("weights") + ": " + e.what());
  }
  return w;
}

Json SynthSpecJson(const SyntheticOracleSpec& s) {
  Json out;
  out["n_concepts"] = s.n_concepts;
  out["n_classes"] = s.n_classes;
  out["feature_dim"] = s.feature_dim;
  out["hidden_width"] = s.hidden_width;
  out["nonlinearity"] = s.nonlinearity;
  out["input_scale"] = s.input_scale;
  out["feature_scale"] = s.feature_scale;
  out["head_scale"] = s.head_scale;
  return out;
}

SyntheticOracleSpec SynthSpecFromJson(const Reader& r) {
  SyntheticOracleSpec s;
  s.n_concepts = static_cast<int>(r.Int("n_concepts"));
  s.n_classes = static_cast<int>(r.Int("n_classes"));
  s.feature_dim = static_cast<int>(r.Int("feature_dim"));
  s.hidden_width = static_cast<int>(r.Int("hidden_width"));
  s.nonlinearity = r.Number("nonlinearity");
  s.input_scale = r.Number("input_scale");
  s.feature_scale = r.Number("feature_scale");
  s.head_scale = r.Number("head_scale");
  return s;
}

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Json CaseToJson(const OracleCase& c) {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["case_id"] = c.case_id;
  doc["n_concepts"] = c.n_concepts;
  doc["n_classes"] = c.n_classes;
  doc["feature_dim"] = c.feature_dim;
  doc["predicted_class"] = c.predicted_class;
  doc["head"]["weight"] = MatrixJson(c.head.weight);
  doc["head"]["bias"] = VectorJson(c.head.bias);
  doc["oracle_kind"] = std::string(OracleKindName(c.kind));
  if (!c.concepts.meta.empty()) {
    Json concepts = Json::array();
    for (std::size_t i = 0; i < c.concepts.meta.size(); ++i) {
      Json m;
      m["id"] = i;
      m["mask"] = c.concepts.meta[i].mask_path;
      m["pixel_area"] = c.concepts.meta[i].pixel_area;
      concepts.push_back(std::move(m));
    }
    doc["concepts"] = std::move(concepts);
  }
  if (c.generator) {
    doc["generator"]["seed"] = c.generator->seed;
    doc["generator"]["spec"] = SynthSpecJson(c.generator->spec);
    doc["generator"]["network"] = WeightsJson(c.generator->network);
  }
  doc["entries"] = EntriesJson(c.entries);
  return WithChecksum(std::move(doc));
}

OracleCase CaseFromJson(const Json& doc) {
  const Reader r(doc, "");
  r.CheckVersion();
  VerifyChecksum(doc, "case");
  OracleCase c;
  c.case_id = r.String("case_id");
  c.n_concepts = static_cast<int>(r.Int("n_concepts"));
  c.n_classes = static_cast<int>(r.Int("n_classes"));
  c.feature_dim = static_cast<int>(r.Int("feature_dim"));
  c.predicted_class = static_cast<int>(r.Int("predicted_class"));
  if (c.n_concepts < 1 || c.n_concepts > kMaxConcepts) {
    throw SchemaError("n_concepts: must be in [1, 64]");
  }
  const Reader head = r.Child("head");
  c.head.weight = head.Matrix("weight");
  c.head.bias = head.Vector("bias");
  c.kind = ParseOracleKind(r.String("oracle_kind"));
  c.concepts.n = c.n_concepts;
  if (r.Has("concepts")) {
    const Json& list = r.Field("concepts");
    if (!list.is_array()) throw SchemaError("concepts: expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Reader m(list[i], "concepts[" + std::to_string(i) + "]");
      if (m.Int("id") != static_cast<long long>(i)) {
        throw SchemaError(m.Name("id") + ": concept ids must be 0..n-1 in order");
      }
      c.concepts.meta.push_back({m.String("mask"), m.Int("pixel_area")});
    }
  }
  if (r.Has("generator")) {
    const Reader g = r.Child("generator");
    c.generator = SyntheticGenerator{SynthSpecFromJson(g.Child("spec")),
                                     g.Uint("seed"),
                                     WeightsFromJson(g.Child("network"))};
  }
  c.entries = EntriesFromJson(r, "entries", c.n_concepts, c.n_classes);
  c.Validate();
  return c;
}

void SaveCase(const OracleCase& c, const std::filesystem::path& path) {
  c.Validate();
  WriteTextFile(path, DumpCanonical(CaseToJson(c)));
}

OracleCase LoadCase(const std::filesystem::path& path) {
  try {
    return CaseFromJson(ReadJsonFile(path));
  } catch (const SchemaError& e) {
    if (std::string(e.what()).starts_with("'" + path.string())) throw;
    throw SchemaError("'" + path.string() + "': " + e.what());
  }
}

Json SurrogateToJson(const SurrogateWeights& w, const TrainConfig& cfg) {
  Json doc;
  doc["format_version"] = kFormatVersion;
  const Json weights = WeightsJson(w);
  for (const auto& [key, value] : weights.items()) doc[key] = value;
  doc["training"] = TrainConfigJson(cfg);
  return WithChecksum(std::move(doc));
}

SurrogateWeights SurrogateFromJson(const Json& doc, TrainConfig* cfg) {
  const Reader r(doc, "");
  r.CheckVersion();
  VerifyChecksum(doc, "surrogate");
  SurrogateWeights w = WeightsFromJson(r);
  if (cfg) *cfg = TrainConfigFromJson(r.Child("training"));
  return w;
}

void SaveSurrogate(const SurrogateWeights& w, const TrainConfig& cfg,
                   const std::filesystem::path& path) {
  WriteTextFile(path, DumpCanonical(SurrogateToJson(w, cfg)));
}

SurrogateWeights LoadSurrogate(const std::filesystem::path& path,
                               TrainConfig* cfg) {
  try {
    return SurrogateFromJson(ReadJsonFile(path), cfg);
  } catch (const SchemaError& e) {
    if (std::string(e.what()).starts_with("'" + path.string())) throw;
    throw SchemaError("'" + path.string() + "': " + e.what());
  }
}

Json TrainReportToJson(const std::string& case_id,
                       const SurrogateVariant& variant,
                       const TrainReport& report) {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["case_id"] = case_id;
  doc["variant"] = variant.Name();
  doc["n_train"] = report.n_train;
  doc["n_holdout"] = report.n_holdout;
  doc["final_train_ce"] = report.final_train_ce;
  doc["final_holdout_kl"] =
      report.final_holdout_kl ? Json(*report.final_holdout_kl) : Json(nullptr);
  doc["loss_curve"] = report.loss_curve;
  return doc;
}

Json ShapleyToJson(const std::string& case_id, const std::string& backing,
                   const ShapleyEstimate& est) {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["case_id"] = case_id;
  doc["backing"] = backing;
  doc["method"] = std::string(ShapleyMethodName(est.method));
  doc["K"] = est.samples_per_concept ? Json(*est.samples_per_concept) : Json(nullptr);
  doc["seed"] = est.seed ? Json(*est.seed) : Json(nullptr);
  Json concepts = Json::array();
  for (int i = 0; i < est.n(); ++i) {
    Json c;
    c["concept"] = i;
    c["value"] = est.values[static_cast<std::size_t>(i)];
    c["std_error"] = est.std_errors[static_cast<std::size_t>(i)];
    concepts.push_back(std::move(c));
  }
  doc["concepts"] = std::move(concepts);
  return doc;
}

ShapleyEstimate ShapleyFromJson(const Json& doc) {
  const Reader r(doc, "");
  r.CheckVersion();
  ShapleyEstimate est;
  try {
    est.method = ParseShapleyMethod(r.String("method"));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("method: ") + e.what());
  }
  if (r.Has("K")) est.samples_per_concept = static_cast<int>(r.Int("K"));
  if (r.Has("seed")) est.seed = r.Uint("seed");
  const Json& list = r.Field("concepts");
  if (!list.is_array()) throw SchemaError("concepts: expected an array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const Reader c(list[i], "concepts[" + std::to_string(i) + "]");
    if (c.Int("concept") != static_cast<long long>(i)) {
      throw SchemaError(c.Name("concept") + ": concepts must be listed in order");
    }
    est.values.push_back(c.Number("value"));
    est.std_errors.push_back(c.Number("std_error"));
  }
  est.Validate();
  return est;
}

Json ExplanationToJson(const std::string& case_id, const ExplanationReport& r) {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["case_id"] = case_id;
  doc["ranking"] = r.ranking;
  doc["selected"] = r.explanation.selected;
  doc["phi_selected"] = r.explanation.phi;
  doc["curve_backing"] = r.curve_backing;
  doc["insertion_auc"] = r.insertion_auc;
  doc["deletion_auc"] = r.deletion_auc;
  return doc;
}

std::string CurveTable(const Curve& curve) {
  std::string out = "step\tfraction\tcoalition\tu\n";
  for (std::size_t j = 0; j < curve.size(); ++j) {
    out += std::to_string(j) + "\t" + Num(curve[j].fraction) + "\t" +
           curve[j].coalition.ToText() + "\t" + Num(curve[j].utility) + "\n";
  }
  return out;
}

Json RequestToJson(const std::string& case_id,
                   std::vector<Coalition> coalitions) {
  std::sort(coalitions.begin(), coalitions.end());
  coalitions.erase(std::unique(coalitions.begin(), coalitions.end()),
                   coalitions.end());
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["case_id"] = case_id;
  Json list = Json::array();
  for (const Coalition& s : coalitions) list.push_back(s.ToText());
  doc["coalitions"] = std::move(list);
  return doc;
}

OracleRequest RequestFromJson(const Json& doc) {
  const Reader r(doc, "");
  r.CheckVersion();
  OracleRequest req;
  req.case_id = r.String("case_id");
  const Json& list = r.Field("coalitions");
  if (!list.is_array()) throw SchemaError("coalitions: expected an array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "coalitions[" + std::to_string(i) + "]";
    if (!list[i].is_string()) throw SchemaError(where + ": expected coalition text");
    const auto text = list[i].get<std::string>();
    req.coalitions.push_back(
        ParseCoalition(list[i], static_cast<int>(text.size()), where));
  }
  return req;
}

Json ResponseToJson(const OracleResponse& response) {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["case_id"] = response.case_id;
  doc["entries"] = EntriesJson(response.entries);
  return doc;
}

OracleResponse ResponseFromJson(const Json& doc, int n_concepts) {
  const Reader r(doc, "");
  r.CheckVersion();
  OracleResponse response;
  response.case_id = r.String("case_id");
  response.entries = EntriesFromJson(r, "entries", n_concepts, -1);
  return response;
}

}  // namespace eeac
