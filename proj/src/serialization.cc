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

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "privgp/status.h"

namespace privgp {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

absl::Status Malformed(absl::string_view what) {
  return MakeError(ErrorKind::kInvalidInput, absl::StrCat("malformed ", what));
}

absl::StatusOr<double> NumberField(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_number()) {
    return Malformed(absl::StrCat("field '", key, "' (expected a number)"));
  }
  return j.at(key).get<double>();
}

absl::StatusOr<std::string> StringField(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_string()) {
    return Malformed(absl::StrCat("field '", key, "' (expected a string)"));
  }
  return j.at(key).get<std::string>();
}

absl::StatusOr<const Json*> Field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    return Malformed(absl::StrCat("object: missing field '", key, "'"));
  }
  return &j.at(key);
}

Json DoublesToJson(const std::vector<double>& values) {
  Json out = Json::array();
  for (double v : values) out.push_back(v);
  return out;
}

absl::StatusOr<std::vector<double>> DoublesFromJson(const Json& j) {
  PRIVGP_ASSIGN_OR_RETURN(Eigen::VectorXd v, VectorFromJson(j));
  return std::vector<double>(v.data(), v.data() + v.size());
}

Json RegionToJson(const SensitiveRegion& region) {
  return std::visit(
      Overloaded{
          [](const FinitePoints& finite) {
            return Json{{"type", "points"},
                        {"points", PointsToJson(finite.points)}};
          },
          [](const GridRegion& grid) {
            Json boxes = Json::array();
            for (const Box& box : grid.boxes) {
              boxes.push_back(
                  {{"lo", PointToJson(box.lo)}, {"hi", PointToJson(box.hi)}});
            }
            Json refinements = Json::array();
            for (int r : grid.resolutions) refinements.push_back(r);
            Json out{{"type", "grid"}, {"boxes", boxes}};
            out["points"] = grid.resolutions.empty() ? 0 : grid.resolutions.back();
            out["refinements"] = refinements;
            return out;
          },
          [](const WholeSpace&) { return Json{{"type", "whole_space"}}; },
      },
      region);
}

absl::StatusOr<SensitiveRegion> RegionFromJson(const Json& j) {
  PRIVGP_ASSIGN_OR_RETURN(std::string type, StringField(j, "type"));
  if (type == "whole_space") return WholeSpace{};
  if (type == "points") {
    PRIVGP_ASSIGN_OR_RETURN(const Json* points, Field(j, "points"));
    PRIVGP_ASSIGN_OR_RETURN(PointList list, PointsFromJson(*points));
    return FinitePoints{std::move(list)};
  }
  if (type != "grid") {
    return Malformed(absl::StrCat("region type '", type, "'"));
  }
  GridRegion grid;
  if (j.contains("boxes")) {
    if (!j.at("boxes").is_array()) return Malformed("region boxes");
    for (const Json& box : j.at("boxes")) {
      PRIVGP_ASSIGN_OR_RETURN(const Json* lo, Field(box, "lo"));
      PRIVGP_ASSIGN_OR_RETURN(const Json* hi, Field(box, "hi"));
      PRIVGP_ASSIGN_OR_RETURN(Point lo_point, PointFromJson(*lo));
      PRIVGP_ASSIGN_OR_RETURN(Point hi_point, PointFromJson(*hi));
      grid.boxes.push_back({std::move(lo_point), std::move(hi_point)});
    }
  } else {
    PRIVGP_ASSIGN_OR_RETURN(const Json* lo, Field(j, "lo"));
    PRIVGP_ASSIGN_OR_RETURN(const Json* hi, Field(j, "hi"));
    PRIVGP_ASSIGN_OR_RETURN(Point lo_point, PointFromJson(*lo));
    PRIVGP_ASSIGN_OR_RETURN(Point hi_point, PointFromJson(*hi));
    grid.boxes.push_back({std::move(lo_point), std::move(hi_point)});
  }
  if (j.contains("refinements") && !j.at("refinements").empty()) {
    if (!j.at("refinements").is_array()) return Malformed("region refinements");
    for (const Json& r : j.at("refinements")) {
      if (!r.is_number_integer()) return Malformed("region refinements");
      grid.resolutions.push_back(r.get<int>());
    }
  } else {
    if (!j.contains("points") || !j.at("points").is_number_integer()) {
      return Malformed("grid region: 'points' must be an integer");
    }
    grid.resolutions.push_back(j.at("points").get<int>());
  }
  return grid;
}

}  // namespace

Json PointToJson(const Point& p) {
  Json out = Json::array();
  for (int i = 0; i < p.size(); ++i) out.push_back(p(i));
  return out;
}

absl::StatusOr<Point> PointFromJson(const Json& j) {
  if (j.is_number()) {
    Point p(1);
    p(0) = j.get<double>();
    return p;
  }
  return VectorFromJson(j);
}

Json PointsToJson(const PointList& points) {
  Json out = Json::array();
  for (const Point& p : points) out.push_back(PointToJson(p));
  return out;
}

absl::StatusOr<PointList> PointsFromJson(const Json& j) {
  if (!j.is_array()) return Malformed("point list");
  PointList out;
  for (const Json& item : j) {
    PRIVGP_ASSIGN_OR_RETURN(Point p, PointFromJson(item));
    out.push_back(std::move(p));
  }
  return out;
}

Json VectorToJson(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

absl::StatusOr<Eigen::VectorXd> VectorFromJson(const Json& j) {
  if (!j.is_array()) return Malformed("vector");
  Eigen::VectorXd out(static_cast<int>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) return Malformed("vector entry");
    out(static_cast<int>(i)) = j[i].get<double>();
  }
  return out;
}

Json MatrixToJson(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    out.push_back(std::move(row));
  }
  return out;
}

absl::StatusOr<Eigen::MatrixXd> MatrixFromJson(const Json& j) {
  if (!j.is_array()) return Malformed("matrix");
  const int rows = static_cast<int>(j.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(j[0].size());
  Eigen::MatrixXd out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols) {
      return Malformed("matrix row");
    }
    for (int k = 0; k < cols; ++k) {
      if (!j[i][k].is_number()) return Malformed("matrix entry");
      out(i, k) = j[i][k].get<double>();
    }
  }
  return out;
}

Json KernelToJson(const KernelSpec& kernel) {
  if (kernel.family() == KernelFamily::kScaledCopy) {
    return Json{{"family", "scaled"},
                {"alpha", kernel.alpha()},
                {"base", KernelToJson(*kernel.base())}};
  }
  return Json{{"family", "sqexp"},
              {"c", kernel.amplitude()},
              {"theta", kernel.theta()},
              {"d", kernel.dimension()}};
}

absl::StatusOr<KernelSpec> KernelFromJson(const Json& j) {
  PRIVGP_ASSIGN_OR_RETURN(std::string family, StringField(j, "family"));
  if (family == "sqexp") {
    PRIVGP_ASSIGN_OR_RETURN(double c, NumberField(j, "c"));
    PRIVGP_ASSIGN_OR_RETURN(double theta, NumberField(j, "theta"));
    int d = 1;
    if (j.contains("d")) {
      if (!j.at("d").is_number_integer()) return Malformed("kernel field 'd'");
      d = j.at("d").get<int>();
    }
    return KernelSpec::SquaredExponential(c, theta, d);
  }
  if (family == "scaled") {
    PRIVGP_ASSIGN_OR_RETURN(double alpha, NumberField(j, "alpha"));
    PRIVGP_ASSIGN_OR_RETURN(const Json* base_json, Field(j, "base"));
    PRIVGP_ASSIGN_OR_RETURN(KernelSpec base, KernelFromJson(*base_json));
    return KernelSpec::ScaledCopy(alpha, base);
  }
  return MakeError(ErrorKind::kUnsupportedFamily,
                   absl::StrCat("unknown kernel family '", family, "'"));
}

Json NoiseToJson(const IntrinsicNoise& noise) {
  switch (noise.kind()) {
    case IntrinsicNoise::Kind::kScalar:
      return noise.scalar();
    case IntrinsicNoise::Kind::kDiagonal:
      return VectorToJson(noise.diagonal());
    case IntrinsicNoise::Kind::kFull:
      return MatrixToJson(noise.full().dense());
  }
  return 0.0;
}

absl::StatusOr<IntrinsicNoise> NoiseFromJson(const Json& j) {
  if (j.is_null()) return IntrinsicNoise::None();
  if (j.is_number()) return IntrinsicNoise::Scalar(j.get<double>());
  if (j.is_array() && (j.empty() || j[0].is_number())) {
    PRIVGP_ASSIGN_OR_RETURN(Eigen::VectorXd v, VectorFromJson(j));
    return IntrinsicNoise::Diagonal(v);
  }
  PRIVGP_ASSIGN_OR_RETURN(Eigen::MatrixXd m, MatrixFromJson(j));
  PRIVGP_ASSIGN_OR_RETURN(SymMatrix sym, SymMatrix::FromDense(m));
  return IntrinsicNoise::Full(sym);
}

Json ModelToJson(const GpModel& model) {
  return Json{{"mean", model.mean},
              {"kernel", KernelToJson(model.kernel)},
              {"noise", NoiseToJson(model.noise)}};
}

absl::StatusOr<GpModel> ModelFromJson(const Json& j) {
  GpModel model;
  PRIVGP_ASSIGN_OR_RETURN(model.mean, NumberField(j, "mean"));
  PRIVGP_ASSIGN_OR_RETURN(const Json* kernel, Field(j, "kernel"));
  PRIVGP_ASSIGN_OR_RETURN(model.kernel, KernelFromJson(*kernel));
  if (j.contains("noise")) {
    PRIVGP_ASSIGN_OR_RETURN(model.noise, NoiseFromJson(j.at("noise")));
  }
  return model;
}

Json PrivacySpecToJson(const PrivacySpec& spec) {
  return std::visit(
      Overloaded{
          [](const SingleSensitive& single) {
            return Json{{"variant", "single"},
                        {"s", PointToJson(single.s)},
                        {"xi", single.xi}};
          },
          [](const WeakSensitive& weak) {
            return Json{{"variant", "weak"},
                        {"S", PointsToJson(weak.s)},
                        {"xi", DoublesToJson(weak.xi)}};
          },
          [](const DiagonalSensitive& diag) {
            return Json{{"variant", "diagonal"},
                        {"S", PointsToJson(diag.s)},
                        {"xi", DoublesToJson(diag.xi)}};
          },
          [](const StrongSensitive& strong) {
            return Json{{"variant", "strong"},
                        {"S", PointsToJson(strong.s)},
                        {"Xi", MatrixToJson(strong.xi)}};
          },
          [](const KernelBased& kernel) {
            Json h = kernel.h.has_value()
                         ? KernelToJson(*kernel.h)
                         : Json{{"family", "scaled"},
                                {"alpha", kernel.relative_scale}};
            return Json{{"variant", "kernel"},
                        {"H", h},
                        {"region", RegionToJson(kernel.region)}};
          },
      },
      spec);
}

absl::StatusOr<PrivacySpec> PrivacySpecFromJson(const Json& j) {
  PRIVGP_ASSIGN_OR_RETURN(std::string variant, StringField(j, "variant"));
  if (variant == "single") {
    SingleSensitive single;
    PRIVGP_ASSIGN_OR_RETURN(const Json* s, Field(j, "s"));
    PRIVGP_ASSIGN_OR_RETURN(single.s, PointFromJson(*s));
    PRIVGP_ASSIGN_OR_RETURN(single.xi, NumberField(j, "xi"));
    return single;
  }
  if (variant == "weak" || variant == "diagonal") {
    PRIVGP_ASSIGN_OR_RETURN(const Json* s, Field(j, "S"));
    PRIVGP_ASSIGN_OR_RETURN(const Json* xi, Field(j, "xi"));
    PRIVGP_ASSIGN_OR_RETURN(PointList points, PointsFromJson(*s));
    PRIVGP_ASSIGN_OR_RETURN(std::vector<double> tolerances,
                            DoublesFromJson(*xi));
    if (variant == "weak") return WeakSensitive{points, tolerances};
    return DiagonalSensitive{points, tolerances};
  }
  if (variant == "strong") {
    StrongSensitive strong;
    PRIVGP_ASSIGN_OR_RETURN(const Json* s, Field(j, "S"));
    PRIVGP_ASSIGN_OR_RETURN(const Json* xi, Field(j, "Xi"));
    PRIVGP_ASSIGN_OR_RETURN(strong.s, PointsFromJson(*s));
    PRIVGP_ASSIGN_OR_RETURN(strong.xi, MatrixFromJson(*xi));
    return strong;
  }
  if (variant == "kernel") {
    KernelBased kernel;
    PRIVGP_ASSIGN_OR_RETURN(const Json* h, Field(j, "H"));
    if (h->is_object() && h->value("family", "") == "scaled" &&
        !h->contains("base")) {
      PRIVGP_ASSIGN_OR_RETURN(kernel.relative_scale, NumberField(*h, "alpha"));
      if (!(kernel.relative_scale >= 0.0 && kernel.relative_scale < 1.0)) {
        return MakeError(ErrorKind::kInvalidInput,
                         "scaled privacy kernel needs 0 <= alpha < 1");
      }
    } else {
      PRIVGP_ASSIGN_OR_RETURN(KernelSpec spec, KernelFromJson(*h));
      kernel.h = std::move(spec);
    }
    PRIVGP_ASSIGN_OR_RETURN(const Json* region, Field(j, "region"));
    PRIVGP_ASSIGN_OR_RETURN(kernel.region, RegionFromJson(*region));
    return kernel;
  }
  return Malformed(absl::StrCat("privacy variant '", variant, "'"));
}

Json NoiseCovarianceToJson(const NoiseCovariance& noise) {
  Json out{{"sigma", MatrixToJson(noise.sigma.dense())},
           {"provenance", std::string(ProvenanceName(noise.provenance))},
           {"trace", noise.trace},
           {"warnings", noise.warnings}};
  if (noise.solver_status.has_value()) {
    out["solver_status"] = std::string(SdpStatusName(*noise.solver_status));
  }
  return out;
}

absl::StatusOr<NoiseCovariance> NoiseCovarianceFromJson(const Json& j) {
  NoiseCovariance out;
  PRIVGP_ASSIGN_OR_RETURN(const Json* sigma, Field(j, "sigma"));
  PRIVGP_ASSIGN_OR_RETURN(Eigen::MatrixXd dense, MatrixFromJson(*sigma));
  if (dense.rows() != dense.cols() || !dense.allFinite() ||
      dense != dense.transpose()) {
    return Malformed("sigma (expected a finite symmetric matrix)");
  }
  out.sigma = SymMatrix::Symmetrize(dense);
  PRIVGP_ASSIGN_OR_RETURN(std::string provenance,
                          StringField(j, "provenance"));
  PRIVGP_ASSIGN_OR_RETURN(out.provenance, ProvenanceFromName(provenance));
  PRIVGP_ASSIGN_OR_RETURN(out.trace, NumberField(j, "trace"));
  if (j.contains("warnings") && j.at("warnings").is_array()) {
    for (const Json& w : j.at("warnings")) {
      if (w.is_string()) out.warnings.push_back(w.get<std::string>());
    }
  }
  if (j.contains("solver_status")) {
    PRIVGP_ASSIGN_OR_RETURN(std::string status, StringField(j, "solver_status"));
    for (SdpStatus s : {SdpStatus::kOptimal, SdpStatus::kMaxIterations,
                        SdpStatus::kInfeasible}) {
      if (SdpStatusName(s) == status) out.solver_status = s;
    }
  }
  return out;
}

std::string FormatDouble(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string DatasetToCsv(const Dataset& data) {
  std::string out;
  const int d = data.dimension();
  for (int a = 0; a < d; ++a) absl::StrAppend(&out, "x_", a + 1, ",");
  absl::StrAppend(&out, "y\n");
  for (int i = 0; i < data.size(); ++i) {
    for (int a = 0; a < d; ++a) {
      absl::StrAppend(&out, FormatDouble(data.x[i](a)), ",");
    }
    absl::StrAppend(&out, FormatDouble(data.y(i)), "\n");
  }
  return out;
}

absl::StatusOr<Dataset> DatasetFromCsv(const std::string& text) {
  std::vector<std::string> lines;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    line = absl::StripAsciiWhitespace(line);
    if (!line.empty()) lines.emplace_back(line);
  }
  if (lines.empty()) return Malformed("dataset CSV: empty");
  const std::vector<std::string> header = absl::StrSplit(lines[0], ',');
  const int d = static_cast<int>(header.size()) - 1;
  if (d < 1 || absl::StripAsciiWhitespace(header.back()) != "y") {
    return Malformed("dataset CSV header (expected x_1,...,x_d,y)");
  }
  Dataset data;
  data.y.resize(static_cast<int>(lines.size()) - 1);
  for (size_t row = 1; row < lines.size(); ++row) {
    const std::vector<std::string> cells = absl::StrSplit(lines[row], ',');
    if (static_cast<int>(cells.size()) != d + 1) {
      return Malformed(absl::StrCat("dataset CSV row ", row));
    }
    Point p(d);
    for (int k = 0; k <= d; ++k) {
      double value;
      if (!absl::SimpleAtod(absl::StripAsciiWhitespace(cells[k]), &value)) {
        return Malformed(absl::StrCat("dataset CSV cell '", cells[k], "'"));
      }
      if (k < d) {
        p(k) = value;
      } else {
        data.y(static_cast<int>(row) - 1) = value;
      }
    }
    data.x.push_back(std::move(p));
  }
  PRIVGP_RETURN_IF_ERROR(ValidateDataset(data));
  return data;
}

absl::StatusOr<Dataset> ReadDatasetCsv(const std::string& path) {
  PRIVGP_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  absl::StatusOr<Dataset> data = DatasetFromCsv(text);
  if (!data.ok()) return WithContext(data.status(), path);
  return data;
}

absl::Status WriteDatasetCsv(const Dataset& data, const std::string& path) {
  return WriteFile(path, DatasetToCsv(data));
}

std::string MatrixToCsv(const std::vector<std::string>& header,
                        const Eigen::MatrixXd& rows) {
  std::string out = absl::StrJoin(header, ",");
  out += "\n";
  for (int i = 0; i < rows.rows(); ++i) {
    for (int k = 0; k < rows.cols(); ++k) {
      if (k > 0) out += ",";
      out += FormatDouble(rows(i, k));
    }
    out += "\n";
  }
  return out;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return MakeError(ErrorKind::kIo, absl::StrCat("cannot open '", path, "'"));
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

absl::Status WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return MakeError(ErrorKind::kIo,
                     absl::StrCat("cannot write '", path, "'"));
  }
  out << contents;
  if (!out) {
    return MakeError(ErrorKind::kIo, absl::StrCat("write to '", path,
                                                  "' failed"));
  }
  return absl::OkStatus();
}

absl::StatusOr<Json> ParseJson(const std::string& text) {
  Json j = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return Malformed("JSON document");
  return j;
}

absl::StatusOr<Json> ReadJsonFile(const std::string& path) {
  PRIVGP_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  absl::StatusOr<Json> parsed = ParseJson(text);
  if (!parsed.ok()) return WithContext(parsed.status(), path);
  return parsed;
}

}  // namespace privgp
