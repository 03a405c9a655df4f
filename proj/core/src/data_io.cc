//
// Copyright 2026 The dplinear Authors
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

#include "dplinear/data_io.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dplinear/error.h"

namespace dplinear {
namespace {

constexpr char kFeatureMagic[4] = {'F', 'M', 'A', 'T'};
constexpr char kLabelMagic[4] = {'L', 'P', 'O', 'S'};
constexpr std::size_t kFeatureHeaderBytes = 4 + 4 + 8 + 8;
constexpr std::size_t kLabelHeaderBytes = 4 + 4 + 8 + 8 + 8;

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  }
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error(ErrorCode::kIo, "failed reading '" + path.string() + "'");
  }
  return bytes;
}

void WriteFile(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot create '" + path.string() + "'");
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::kIo, "failed writing '" + path.string() + "'");
  }
}

// Little-endian encoding independent of host byte order.
template <typename UInt>
void PutUint(std::string& out, UInt value) {
  for (std::size_t b = 0; b < sizeof(UInt); ++b) {
    out.push_back(static_cast<char>((value >> (8 * b)) & 0xff));
  }
}

template <typename UInt>
UInt GetUint(std::string_view bytes, std::size_t offset) {
  UInt value = 0;
  for (std::size_t b = 0; b < sizeof(UInt); ++b) {
    value |= static_cast<UInt>(static_cast<unsigned char>(bytes[offset + b]))
             << (8 * b);
  }
  return value;
}

class Reader {
 public:
  Reader(std::string_view bytes, std::string name)
      : bytes_(bytes), name_(std::move(name)) {}

  void ExpectMagic(const char (&magic)[4]) {
    if (bytes_.size() < 4 || std::memcmp(bytes_.data(), magic, 4) != 0) {
      throw Error(ErrorCode::kBadMagic,
                  name_ + ": bad magic, expected '" + std::string(magic, 4) +
                      "'");
    }
    pos_ = 4;
  }

  template <typename UInt>
  UInt Read() {
    if (bytes_.size() - pos_ < sizeof(UInt)) {
      throw Error(ErrorCode::kSizeMismatch, name_ + ": truncated");
    }
    UInt v = GetUint<UInt>(bytes_, pos_);
    pos_ += sizeof(UInt);
    return v;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }
  const std::string& name() const { return name_; }

 private:
  std::string_view bytes_;
  std::string name_;
  std::size_t pos_ = 0;
};

void CheckVersion(std::uint32_t version, const std::string& name) {
  if (version != kFormatVersion) {
    throw Error(ErrorCode::kBadVersion,
                name + ": unsupported version " + std::to_string(version));
  }
}

// a * b * c without overflow, or nullopt.
std::optional<std::uint64_t> CheckedProduct(std::uint64_t a, std::uint64_t b,
                                            std::uint64_t c = 1) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out) ||
      __builtin_mul_overflow(out, c, &out)) {
    return std::nullopt;
  }
  return out;
}

void ExpectPayload(const Reader& reader, std::optional<std::uint64_t> bytes) {
  if (!bytes || reader.remaining() != *bytes) {
    std::ostringstream os;
    os << reader.name() << ": declared sizes need ";
    if (bytes) {
      os << *bytes;
    } else {
      os << "more than 2^64";
    }
    os << " payload bytes, file has " << reader.remaining();
    throw Error(ErrorCode::kSizeMismatch, os.str());
  }
}

struct LabelFile {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t k = 0;
  std::vector<std::uint32_t> offsets;
  std::vector<std::uint32_t> indices;
};

LabelFile ParseLabelFile(std::string_view bytes, const std::string& name) {
  Reader reader(bytes, name);
  reader.ExpectMagic(kLabelMagic);
  CheckVersion(reader.Read<std::uint32_t>(), name);
  LabelFile file;
  file.n = reader.Read<std::uint64_t>();
  file.m = reader.Read<std::uint64_t>();
  file.k = reader.Read<std::uint64_t>();
  const auto offset_bytes = CheckedProduct(file.n + 1, 4);
  if (!offset_bytes || reader.remaining() < *offset_bytes) {
    throw Error(ErrorCode::kSizeMismatch,
                name + ": file too short for the declared offsets");
  }
  file.offsets.resize(file.n + 1);
  for (auto& o : file.offsets) o = reader.Read<std::uint32_t>();
  ExpectPayload(reader, CheckedProduct(file.offsets.back(), 4));
  file.indices.resize(file.offsets.back());
  for (auto& idx : file.indices) idx = reader.Read<std::uint32_t>();
  return file;
}

Matrix ParseFeatureFile(std::string_view bytes, const std::string& name) {
  Reader reader(bytes, name);
  reader.ExpectMagic(kFeatureMagic);
  CheckVersion(reader.Read<std::uint32_t>(), name);
  const auto n = reader.Read<std::uint64_t>();
  const auto d = reader.Read<std::uint64_t>();
  ExpectPayload(reader, CheckedProduct(n, d, 4));
  if (n > static_cast<std::uint64_t>(std::numeric_limits<Eigen::Index>::max()) ||
      d > static_cast<std::uint64_t>(std::numeric_limits<Eigen::Index>::max())) {
    throw Error(ErrorCode::kSizeMismatch, name + ": dimensions too large");
  }
  Matrix features(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  double* out = features.data();
  for (std::uint64_t i = 0; i < n * d; ++i) {
    const float value = std::bit_cast<float>(reader.Read<std::uint32_t>());
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::kNonFinite,
                  name + ": non-finite value at row " + std::to_string(i / d) +
                      ", column " + std::to_string(i % d));
    }
    out[i] = static_cast<double>(value);
  }
  return features;
}

std::string FormatDouble(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot format value");
  }
  return std::string(buf, end);
}

// Splits text into lines. A trailing newline does not start a new line.
std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

[[noreturn]] void CsvError(std::size_t line, std::size_t col,
                           const std::string& what) {
  std::ostringstream os;
  os << "csv parse error at line " << line << ", column " << col << ": "
     << what;
  throw Error(ErrorCode::kParse, os.str());
}

}  // namespace

void SaveFeatures(const std::filesystem::path& path, const Matrix& features) {
  CheckFinite(features, "SaveFeatures");
  std::string bytes(kFeatureMagic, 4);
  PutUint<std::uint32_t>(bytes, kFormatVersion);
  PutUint<std::uint64_t>(bytes, static_cast<std::uint64_t>(features.rows()));
  PutUint<std::uint64_t>(bytes, static_cast<std::uint64_t>(features.cols()));
  bytes.reserve(bytes.size() + 4 * static_cast<std::size_t>(features.size()));
  const double* data = features.data();
  for (Eigen::Index i = 0; i < features.size(); ++i) {
    const auto narrowed = static_cast<float>(data[i]);
    if (!std::isfinite(narrowed)) {
      throw Error(ErrorCode::kNonFinite,
                  "SaveFeatures: value overflows 32-bit float");
    }
    PutUint<std::uint32_t>(bytes, std::bit_cast<std::uint32_t>(narrowed));
  }
  WriteFile(path, bytes);
}

Matrix LoadFeatures(const std::filesystem::path& path) {
  return ParseFeatureFile(ReadFile(path), path.string());
}

void SaveDataset(const std::filesystem::path& feature_path,
                 const std::filesystem::path& label_path,
                 const FeatureDataset& dataset) {
  SaveFeatures(feature_path, dataset.features());
  std::string bytes(kLabelMagic, 4);
  PutUint<std::uint32_t>(bytes, kFormatVersion);
  PutUint<std::uint64_t>(bytes,
                         static_cast<std::uint64_t>(dataset.num_examples()));
  PutUint<std::uint64_t>(bytes, dataset.num_classes());
  PutUint<std::uint64_t>(bytes, dataset.max_positives());
  for (std::uint32_t o : dataset.offsets()) PutUint<std::uint32_t>(bytes, o);
  for (std::uint32_t idx : dataset.indices()) {
    PutUint<std::uint32_t>(bytes, idx);
  }
  WriteFile(label_path, bytes);
}

FeatureDataset LoadDataset(const std::filesystem::path& feature_path,
                           const std::filesystem::path& label_path) {
  Matrix features = LoadFeatures(feature_path);
  LabelFile labels = ParseLabelFile(ReadFile(label_path), label_path.string());
  if (labels.n != static_cast<std::uint64_t>(features.rows())) {
    throw Error(ErrorCode::kInvariantViolation,
                "label file has " + std::to_string(labels.n) +
                    " rows but feature file has " +
                    std::to_string(features.rows()));
  }
  return FeatureDataset::FromCsr(std::move(features), std::move(labels.offsets),
                                 std::move(labels.indices), labels.m,
                                 labels.k);
}

void SaveCsv(const std::filesystem::path& feature_csv,
             const std::filesystem::path& label_csv,
             const FeatureDataset& dataset) {
  std::string features;
  const Matrix& x = dataset.features();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (j > 0) features.push_back(',');
      features += FormatDouble(x(i, j));
    }
    features.push_back('\n');
  }
  WriteFile(feature_csv, features);

  std::string labels;
  for (Eigen::Index i = 0; i < dataset.num_examples(); ++i) {
    bool first = true;
    for (std::uint32_t j : dataset.positives(i)) {
      if (!first) labels.push_back(',');
      labels += std::to_string(j);
      first = false;
    }
    labels.push_back('\n');
  }
  WriteFile(label_csv, labels);
}

Matrix ParseFeatureCsv(std::string_view text) {
  const auto lines = SplitLines(text);
  if (lines.empty()) CsvError(1, 1, "empty feature file");
  std::vector<double> values;
  std::size_t width = 0;
  for (std::size_t r = 0; r < lines.size(); ++r) {
    const auto fields = SplitFields(lines[r]);
    if (r == 0) {
      width = fields.size();
    } else if (fields.size() != width) {
      CsvError(r + 1, std::min(fields.size(), width) + 1,
               "expected " + std::to_string(width) + " fields, found " +
                   std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const std::string_view field = Trim(fields[c]);
      double value = 0.0;
      const char* begin = field.data();
      const char* end = field.data() + field.size();
      // from_chars rejects a leading '+', which some writers emit.
      if (begin != end && *begin == '+') ++begin;
      auto [ptr, ec] = std::from_chars(begin, end, value);
      if (field.empty() || ec != std::errc() || ptr != end) {
        CsvError(r + 1, c + 1,
                 "not a number: '" + std::string(fields[c]) + "'");
      }
      if (!std::isfinite(value)) CsvError(r + 1, c + 1, "non-finite value");
      values.push_back(value);
    }
  }
  Matrix features(static_cast<Eigen::Index>(lines.size()),
                  static_cast<Eigen::Index>(width));
  std::copy(values.begin(), values.end(), features.data());
  return features;
}

std::vector<std::vector<std::uint32_t>> ParseLabelCsv(std::string_view text) {
  const auto lines = SplitLines(text);
  std::vector<std::vector<std::uint32_t>> rows;
  rows.reserve(lines.size());
  for (std::size_t r = 0; r < lines.size(); ++r) {
    std::vector<std::uint32_t> row;
    if (!Trim(lines[r]).empty()) {
      const auto fields = SplitFields(lines[r]);
      for (std::size_t c = 0; c < fields.size(); ++c) {
        const std::string_view field = Trim(fields[c]);
        std::uint32_t value = 0;
        auto [ptr, ec] =
            std::from_chars(field.data(), field.data() + field.size(), value);
        if (field.empty() || ec != std::errc() ||
            ptr != field.data() + field.size()) {
          CsvError(r + 1, c + 1,
                   "not a class id: '" + std::string(fields[c]) + "'");
        }
        row.push_back(value);
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

FeatureDataset LoadCsv(const std::filesystem::path& feature_csv,
                       const std::filesystem::path& label_csv,
                       std::optional<std::uint64_t> num_classes,
                       std::optional<std::uint64_t> max_positives) {
  Matrix features = ParseFeatureCsv(ReadFile(feature_csv));
  auto rows = ParseLabelCsv(ReadFile(label_csv));
  std::uint64_t inferred_m = 0;
  std::uint64_t inferred_k = 0;
  for (const auto& row : rows) {
    inferred_k = std::max<std::uint64_t>(inferred_k, row.size());
    for (std::uint32_t j : row) {
      inferred_m = std::max<std::uint64_t>(inferred_m, std::uint64_t{j} + 1);
    }
  }
  return FeatureDataset::Create(std::move(features), std::move(rows),
                                num_classes.value_or(inferred_m),
                                max_positives.value_or(inferred_k));
}

}  // namespace dplinear
