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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "eeac/errors.h"
#include "eeac/json_text.h"
#include "eeac/shapley.h"
#include "eeac/training.h"

namespace eeac {
namespace {

namespace fs = std::filesystem;

class RecordsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("eeac_records_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }
  void Spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
  }

  fs::path dir_;
};

SyntheticOracleSpec Spec(int n) {
  SyntheticOracleSpec spec;
  spec.n_concepts = n;
  spec.n_classes = 4;
  spec.feature_dim = 3;
  return spec;
}

TEST(CanonicalTest, NumberFormatting) {
  Json doc;
  doc["a"] = 1.0;
  doc["b"] = 0.1;
  doc["c"] = 3;
  doc["d"] = std::vector<double>{-2.0, 1e-300, 0.5};
  doc["e"] = Json::array();
  const std::string text = DumpCanonical(doc);
  EXPECT_EQ(text,
            "{\n  \"a\": 1.0,\n  \"b\": 0.10000000000000001,\n  \"c\": 3,\n"
            "  \"d\": [-2.0, 1e-300, 0.5],\n  \"e\": []\n}\n");
  const Json back = Json::parse(text);
  EXPECT_EQ(back["b"].get<double>(), 0.1);
  EXPECT_EQ(back["d"][1].get<double>(), 1e-300);
  EXPECT_EQ(DumpCanonical(back), text);
}

TEST(CanonicalTest, ChecksumIsStableAndSensitive) {
  Json a;
  a["x"] = 1.5;
  Json b = a;
  EXPECT_EQ(Checksum(a), Checksum(b));
  EXPECT_EQ(Checksum(a).size(), 16u);
  b["x"] = std::nextafter(1.5, 2.0);
  EXPECT_NE(Checksum(a), Checksum(b));
}

TEST_F(RecordsTest, CaseRoundTripIsExact) {
  for (int n : {3, 17}) {
    const OracleCase c = SynthCase(Spec(n), 44, "rt");
    const fs::path p = dir_ / "case.json";
    SaveCase(c, p);
    const OracleCase back = LoadCase(p);
    EXPECT_TRUE(back == c) << n;
    const fs::path q = dir_ / "again.json";
    SaveCase(back, q);
    EXPECT_EQ(Slurp(p), Slurp(q));
  }
}

TEST_F(RecordsTest, PairsCaseWithConceptMetadata) {
  OracleCase c = SynthCase(Spec(3), 2, "meta");
  c.kind = OracleKind::kPairs;
  c.generator.reset();
  std::erase_if(c.entries, [](const auto& e) { return e.first.Count() == 1; });
  c.concepts.meta = {{"masks/0.png", 120}, {"masks/1.png", 4}, {"masks/2.png", 77}};
  SaveCase(c, dir_ / "c.json");
  const OracleCase back = LoadCase(dir_ / "c.json");
  EXPECT_TRUE(back == c);
  EXPECT_EQ(back.concepts.meta[1].mask_path, "masks/1.png");
}

TEST_F(RecordsTest, FieldOrderIsFixed) {
  const OracleCase c = SynthCase(Spec(2), 1, "order");
  const std::string text = DumpCanonical(CaseToJson(c));
  const char* keys[] = {"\"format_version\"", "\"case_id\"", "\"n_concepts\"",
                        "\"n_classes\"", "\"feature_dim\"", "\"predicted_class\"",
                        "\"head\"", "\"oracle_kind\"", "\"entries\"", "\"checksum\""};
  std::size_t last = 0;
  for (const char* k : keys) {
    const std::size_t at = text.find(k);
    ASSERT_NE(at, std::string::npos) << k;
    EXPECT_GT(at, last) << k;
    last = at;
  }
}

TEST_F(RecordsTest, BadProbabilitySumNamesEntry) {
  const OracleCase c = SynthCase(Spec(2), 1, "bad");
  Json doc = CaseToJson(c);
  doc.erase("checksum");
  Json& probs = doc["entries"][2]["probs"];
  const double total = 0.93;
  double sum = 0;
  for (auto& p : probs) sum += p.get<double>();
  for (auto& p : probs) p = p.get<double>() * total / sum;
  try {
    CaseFromJson(doc);
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find(doc["entries"][2]["coalition"].get<std::string>()),
              std::string::npos)
        << e.what();
  }
}

TEST_F(RecordsTest, TruncatedFileIsSchemaError) {
  const OracleCase c = SynthCase(Spec(3), 1, "trunc");
  SaveCase(c, dir_ / "full.json");
  const std::string text = Slurp(dir_ / "full.json");
  Spit(dir_ / "cut.json", text.substr(0, text.size() / 2));
  EXPECT_THROW(LoadCase(dir_ / "cut.json"), SchemaError);
  EXPECT_THROW(LoadCase(dir_ / "absent.json"), SchemaError);
}

TEST_F(RecordsTest, ChecksumMismatchAndOptionalChecksum) {
  const OracleCase c = SynthCase(Spec(2), 1, "sum");
  Json doc = CaseToJson(c);
  Json tampered = doc;
  tampered["head"]["bias"][0] = tampered["head"]["bias"][0].get<double>() + 1e-9;
  EXPECT_THROW(CaseFromJson(tampered), ChecksumError);
  tampered.erase("checksum");
  EXPECT_NO_THROW(CaseFromJson(tampered));
}

TEST_F(RecordsTest, SchemaErrorsAreFieldPrecise) {
  const OracleCase c = SynthCase(Spec(2), 1, "fields");
  Json doc = CaseToJson(c);
  doc.erase("checksum");
  auto message = [](const Json& d) -> std::string {
    try {
      CaseFromJson(d);
    } catch (const SchemaError& e) {
      return e.what();
    }
    return "";
  };
  Json v = doc;
  v["format_version"] = 2;
  EXPECT_NE(message(v).find("format_version"), std::string::npos) << message(v);
  v = doc;
  v.erase("n_classes");
  EXPECT_NE(message(v).find("n_classes"), std::string::npos) << message(v);
  v = doc;
  v["head"]["weight"]["data"].erase(0);
  EXPECT_NE(message(v).find("head.weight"), std::string::npos) << message(v);
  v = doc;
  v["entries"][1]["coalition"] = "1x";
  EXPECT_NE(message(v).find("entries[1]"), std::string::npos) << message(v);
  v = doc;
  v["oracle_kind"] = "magic";
  EXPECT_NE(message(v).find("oracle_kind"), std::string::npos) << message(v);
}

TEST_F(RecordsTest, SurrogateRoundTripIsBitExact) {
  Rng rng(3);
  TrainConfig cfg;
  cfg.seed = 1234567890123ULL;
  cfg.epochs = 7;
  cfg.learning_rate = 0.0025;
  for (SurrogateVariant v : {SurrogateVariant::Linear(),
                             SurrogateVariant::Nonlinear(Activation::kRelu)}) {
    SurrogateWeights w = SurrogateWeights::Initialize(v, 6, 4, 5, rng);
    w.w1(0, 0) = 0.1;
    w.b1(1) = -1e-310;
    SaveSurrogate(w, cfg, dir_ / "s.json");
    TrainConfig back_cfg;
    const SurrogateWeights back = LoadSurrogate(dir_ / "s.json", &back_cfg);
    EXPECT_TRUE(back == w);
    EXPECT_TRUE(back_cfg == cfg);
    EXPECT_EQ(back.b1(1), -1e-310);
  }
}

TEST_F(RecordsTest, CorruptSurrogateIsRejected) {
  Rng rng(3);
  const SurrogateWeights w = SurrogateWeights::Initialize(
      SurrogateVariant::Nonlinear(Activation::kTanh), 4, 3, 3, rng);
  Json doc = SurrogateToJson(w, TrainConfig{});
  doc["w2"]["data"][0] = 5.0;
  EXPECT_THROW(SurrogateFromJson(doc), ChecksumError);
  doc.erase("checksum");
  doc["activation"] = "swish";
  EXPECT_THROW(SurrogateFromJson(doc), SchemaError);
}

TEST(RecordJsonTest, ShapleyRoundTrip) {
  ShapleyEstimate est;
  est.values = {0.25, -1.0 / 3.0, 0.0};
  est.std_errors = {0.01, 0.02, 0.0};
  est.method = ShapleyMethod::kMonteCarlo;
  est.samples_per_concept = 10000;
  est.seed = 18446744073709551615ULL;
  const Json doc = ShapleyToJson("case", "surrogate", est);
  EXPECT_EQ(doc["backing"], "surrogate");
  EXPECT_TRUE(ShapleyFromJson(Json::parse(DumpCanonical(doc))) == est);

  ShapleyEstimate exact;
  exact.values = {1.5, 2.5};
  exact.std_errors = {0.0, 0.0};
  const Json e = ShapleyToJson("case", "oracle", exact);
  EXPECT_TRUE(e["K"].is_null());
  EXPECT_TRUE(ShapleyFromJson(e) == exact);
}

TEST(RecordJsonTest, RequestIsSortedAndDeduplicated) {
  const std::vector<Coalition> asked = {CoalitionFromText("011", 3),
                                        CoalitionFromText("100", 3),
                                        CoalitionFromText("011", 3)};
  const Json doc = RequestToJson("c", asked);
  EXPECT_EQ(DumpCanonical(doc),
            "{\n  \"format_version\": 1,\n  \"case_id\": \"c\",\n"
            "  \"coalitions\": [\"100\", \"011\"]\n}\n");
  const OracleRequest back = RequestFromJson(doc);
  EXPECT_EQ(back.case_id, "c");
  ASSERT_EQ(back.coalitions.size(), 2u);
  EXPECT_EQ(back.coalitions[1].ToText(), "011");
  const Json empty = RequestToJson("c", {});
  EXPECT_TRUE(RequestFromJson(empty).coalitions.empty());
}

TEST(RecordJsonTest, ResponseRoundTripAndValidation) {
  OracleResponse r;
  r.case_id = "c";
  r.entries.emplace(CoalitionFromText("10", 2), ClassDistribution{Eigen::Vector2d(0.25, 0.75)});
  const Json doc = ResponseToJson(r);
  const OracleResponse back = ResponseFromJson(doc, 2);
  EXPECT_EQ(back.entries.size(), 1u);
  EXPECT_TRUE(back.entries.begin()->second == r.entries.begin()->second);
  Json bad = doc;
  bad["entries"][0]["probs"][0] = 0.5;
  EXPECT_THROW(ResponseFromJson(bad, 2), SchemaError);
  EXPECT_THROW(ResponseFromJson(doc, 3), SchemaError);
}

TEST(RecordJsonTest, CurveTableRows) {
  Curve curve = {{0.0, CoalitionFromText("00", 2), 0.25},
                 {0.5, CoalitionFromText("10", 2), 0.5},
                 {1.0, CoalitionFromText("11", 2), 1.0}};
  EXPECT_EQ(CurveTable(curve),
            "step\tfraction\tcoalition\tu\n0\t0\t00\t0.25\n1\t0.5\t10\t0.5\n"
            "2\t1\t11\t1\n");
}

}  // namespace
}  // namespace eeac
