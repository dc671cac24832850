//
// Copyright 2026 The PrivGP Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "privgp/serialization.h"

#include <cstring>
#include <filesystem>
#include <limits>
#include <random>

#include "gtest/gtest.h"
#include "test_util.h"

namespace privgp {
namespace {

using ::privgp::testing::FailsWith;
using ::privgp::testing::Points1d;
using ::privgp::testing::SqExp;

bool SameBits(double a, double b) {
  return std::memcmp(&a, &b, sizeof(double)) == 0;
}

TEST(FormatDoubleTest, ShortestRoundTrip) {
  EXPECT_EQ(FormatDouble(0.1), "0.1");
  EXPECT_EQ(FormatDouble(-2.0), "-2");
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<uint64_t> bits;
  for (int i = 0; i < 10000; ++i) {
    uint64_t raw = bits(rng);
    double value;
    std::memcpy(&value, &raw, sizeof(value));
    if (!std::isfinite(value)) continue;
    const std::string text = FormatDouble(value);
    EXPECT_TRUE(SameBits(std::strtod(text.c_str(), nullptr), value)) << text;
  }
}

TEST(KernelJsonTest, ReadsDocumentedForms) {
  ASSERT_OK_AND_ASSIGN(
      KernelSpec k,
      KernelFromJson(Json::parse(R"({"family":"sqexp","c":1.0,"theta":10.0,"d":1})")));
  EXPECT_EQ(k, SqExp(1.0, 10.0));
  ASSERT_OK_AND_ASSIGN(
      KernelSpec h,
      KernelFromJson(Json::parse(
          R"({"family":"scaled","alpha":0.1,"base":{"family":"sqexp","c":2,"theta":3,"d":2}})")));
  EXPECT_EQ(h.family(), KernelFamily::kScaledCopy);
  EXPECT_EQ(h.dimension(), 2);
  EXPECT_DOUBLE_EQ(h.amplitude(), 0.2);
  EXPECT_EQ(KernelFromJson(KernelToJson(h)).value(), h);
}

TEST(KernelJsonTest, RejectsUnknownFamilyAndBadParameters) {
  EXPECT_TRUE(FailsWith(KernelFromJson(Json::parse(R"({"family":"matern"})")),
                        ErrorKind::kUnsupportedFamily));
  EXPECT_FALSE(
      KernelFromJson(Json::parse(R"({"family":"sqexp","c":-1,"theta":1,"d":1})"))
          .ok());
  EXPECT_FALSE(KernelFromJson(Json::parse(R"({"family":"sqexp","c":1})")).ok());
  EXPECT_FALSE(KernelFromJson(Json::parse("[1,2]")).ok());
}

TEST(NoiseJsonTest, AllShapesRoundTrip) {
  Eigen::VectorXd d(3);
  d << 0.1, 0.2, 0.3;
  Eigen::MatrixXd full(2, 2);
  full << 1.0, 0.25, 0.25, 2.0;
  const std::vector<IntrinsicNoise> cases = {
      IntrinsicNoise::None(), *IntrinsicNoise::Scalar(0.01),
      *IntrinsicNoise::Diagonal(d),
      *IntrinsicNoise::Full(SymMatrix::Symmetrize(full))};
  for (const IntrinsicNoise& noise : cases) {
    ASSERT_OK_AND_ASSIGN(IntrinsicNoise back, NoiseFromJson(NoiseToJson(noise)));
    EXPECT_TRUE(back == noise);
  }
  EXPECT_TRUE(NoiseFromJson(Json()).value() == IntrinsicNoise::None());
  EXPECT_FALSE(NoiseFromJson(Json::parse("-1")).ok());
  EXPECT_FALSE(NoiseFromJson(Json::parse("[[1,2],[3]]")).ok());
}

TEST(ModelJsonTest, RoundTripsBitForBit) {
  GpModel model;
  model.mean = 1.1011100000000001;
  model.kernel = SqExp(0.0026822412345, 200.0);
  model.noise = *IntrinsicNoise::Scalar(1.0 / 3.0);
  ASSERT_OK_AND_ASSIGN(GpModel back,
                       ModelFromJson(Json::parse(ModelToJson(model).dump())));
  EXPECT_TRUE(SameBits(back.mean, model.mean));
  EXPECT_EQ(back.kernel, model.kernel);
  EXPECT_TRUE(back.noise == model.noise);
}

TEST(PrivacySpecJsonTest, ReadsDocumentedExamples) {
  const char* documents[] = {
      R"({"variant":"single","s":[0.5],"xi":0.5})",
      R"({"variant":"weak","S":[[0.4],[0.6]],"xi":[0.5,0.5]})",
      R"({"variant":"diagonal","S":[[0.4],[0.6]],"xi":[0.5,0.5]})",
      R"({"variant":"strong","S":[[0.4],[0.6]],"Xi":[[0.5,0.45],[0.45,0.5]]})",
      R"({"variant":"kernel","H":{"family":"sqexp","c":0.5,"theta":8,"d":1},
          "region":{"type":"grid","lo":[1.0],"hi":[1.2],"points":33}})",
      R"({"variant":"kernel","H":{"family":"scaled","alpha":0.1},
          "region":{"type":"whole_space"}})",
      R"({"variant":"kernel","H":{"family":"sqexp","c":0.5,"theta":8,"d":1},
          "region":{"type":"points","points":[[0.4],[0.5]]}})",
  };
  for (const char* text : documents) {
    ASSERT_OK_AND_ASSIGN(PrivacySpec spec, PrivacySpecFromJson(Json::parse(text)));
    const Json once = PrivacySpecToJson(spec);
    ASSERT_OK_AND_ASSIGN(PrivacySpec again, PrivacySpecFromJson(once));
    EXPECT_EQ(PrivacySpecToJson(again), once) << text;
  }
  ASSERT_OK_AND_ASSIGN(PrivacySpec grid, PrivacySpecFromJson(Json::parse(documents[4])));
  const auto& kernel = std::get<KernelBased>(grid);
  const auto& region = std::get<GridRegion>(kernel.region);
  ASSERT_EQ(region.boxes.size(), 1u);
  EXPECT_EQ(region.resolutions.back(), 33);
  ASSERT_OK_AND_ASSIGN(PrivacySpec relative,
                       PrivacySpecFromJson(Json::parse(documents[5])));
  EXPECT_FALSE(std::get<KernelBased>(relative).h.has_value());
  EXPECT_DOUBLE_EQ(std::get<KernelBased>(relative).relative_scale, 0.1);
}

TEST(PrivacySpecJsonTest, RejectsMalformedDocuments) {
  EXPECT_FALSE(PrivacySpecFromJson(Json::parse(R"({"variant":"loose"})")).ok());
  EXPECT_FALSE(PrivacySpecFromJson(Json::parse(R"({"variant":"single","s":[0.5]})")).ok());
  EXPECT_FALSE(PrivacySpecFromJson(
                   Json::parse(R"({"variant":"kernel","H":{"family":"scaled","alpha":1.0},
                                   "region":{"type":"whole_space"}})"))
                   .ok());
  EXPECT_FALSE(PrivacySpecFromJson(
                   Json::parse(R"({"variant":"kernel","H":{"family":"scaled","alpha":0.1},
                                   "region":{"type":"moon"}})"))
                   .ok());
}

TEST(NoiseCovarianceJsonTest, RoundTrip) {
  NoiseCovariance noise;
  noise.sigma = SymMatrix::Symmetrize(
      (Eigen::MatrixXd(2, 2) << 0.1, 1.0 / 3.0, 1.0 / 3.0, 2.0).finished());
  noise.provenance = NoiseProvenance::kWeakSdp;
  noise.trace = noise.sigma.Trace();
  noise.solver_status = SdpStatus::kMaxIterations;
  noise.warnings = {"stopped early"};
  ASSERT_OK_AND_ASSIGN(NoiseCovariance back,
                       NoiseCovarianceFromJson(NoiseCovarianceToJson(noise)));
  EXPECT_EQ(back.sigma, noise.sigma);
  EXPECT_EQ(back.provenance, noise.provenance);
  EXPECT_EQ(back.solver_status, noise.solver_status);
  EXPECT_EQ(back.warnings, noise.warnings);
}

TEST(DatasetCsvTest, RoundTripsBitForBit) {
  std::mt19937_64 rng(4);
  Dataset data;
  data.x = testing::RandomPoints(rng, 25, 3, -5.0, 5.0);
  data.y = Eigen::VectorXd::Random(25);
  const std::string csv = DatasetToCsv(data);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "x_1,x_2,x_3,y");
  ASSERT_OK_AND_ASSIGN(Dataset back, DatasetFromCsv(csv));
  ASSERT_EQ(back.size(), 25);
  for (int i = 0; i < 25; ++i) {
    EXPECT_EQ(back.x[i], data.x[i]);
    EXPECT_TRUE(SameBits(back.y(i), data.y(i)));
  }
}

TEST(DatasetCsvTest, RejectsMalformedText) {
  EXPECT_FALSE(DatasetFromCsv("").ok());
  EXPECT_FALSE(DatasetFromCsv("x_1,y\n0.1\n").ok());
  EXPECT_FALSE(DatasetFromCsv("x_1,y\n0.1,abc\n").ok());
  EXPECT_FALSE(DatasetFromCsv("a,b\n0.1,0.2\n").ok());
  ASSERT_OK_AND_ASSIGN(Dataset ok, DatasetFromCsv("x_1,y\r\n0.1,0.2\r\n\r\n"));
  EXPECT_EQ(ok.size(), 1);
}

TEST(FileIoTest, ReportsMissingFiles) {
  EXPECT_TRUE(FailsWith(ReadFile("/nonexistent/dir/file.json"), ErrorKind::kIo));
  EXPECT_TRUE(FailsWith(ReadDatasetCsv("/nonexistent/data.csv"), ErrorKind::kIo));
  EXPECT_TRUE(FailsWith(WriteFile("/nonexistent/dir/out.txt", "x"), ErrorKind::kIo));
}

TEST(FileIoTest, WritesAndReadsBack) {
  const std::string path =
      (std::filesystem::temp_directory_path() / "privgp_serialization_test.csv")
          .string();
  Dataset data{Points1d({0.1, 0.2}), Eigen::Vector2d(1.5, -2.5)};
  ASSERT_OK(WriteDatasetCsv(data, path));
  ASSERT_OK_AND_ASSIGN(Dataset back, ReadDatasetCsv(path));
  EXPECT_EQ(back.y, data.y);
  std::filesystem::remove(path);
}

TEST(ParseJsonTest, MalformedInputIsAnError) {
  EXPECT_TRUE(FailsWith(ParseJson("{\"a\": "), ErrorKind::kInvalidInput));
  ASSERT_OK_AND_ASSIGN(Json j, ParseJson("{\"a\": [1, 2]}"));
  EXPECT_EQ(j["a"][1], 2);
}

TEST(MatrixToCsvTest, HeaderAndRows) {
  Eigen::MatrixXd rows(2, 2);
  rows << 1, 0.5, -1, 1e-20;
  EXPECT_EQ(MatrixToCsv({"a", "b"}, rows), "a,b\n1,0.5\n-1,1e-20\n");
}

}  // namespace
}  // namespace privgp
