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

// On-disk formats. All integers and floats are little-endian.
//
// Feature file:
//   "FMAT" | u32 version = 1 | u64 n | u64 d | n*d f32, row-major
//
// Label file:
//   "LPOS" | u32 version = 1 | u64 n | u64 m | u64 k
//   | (n + 1) u32 offsets (prefix sums) | offsets[n] u32 class ids
//
// Class ids within a row are strictly increasing. k is stored, not
// recomputed, so slices of a dataset keep the bound the noise was sized for.
//
// CSV: comma separator, no header, '.' decimal point. Features: one example
// per line. Labels: one example per line, its positive class ids separated
// by commas; an empty line means no positives.

#ifndef DPLINEAR_DATA_IO_H_
#define DPLINEAR_DATA_IO_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>

#include "dplinear/dataset.h"
#include "dplinear/linalg.h"

namespace dplinear {

inline constexpr std::uint32_t kFormatVersion = 1;

// Features are narrowed to 32-bit floats on write and widened on read.
void SaveFeatures(const std::filesystem::path& path, const Matrix& features);
Matrix LoadFeatures(const std::filesystem::path& path);

void SaveDataset(const std::filesystem::path& feature_path,
                 const std::filesystem::path& label_path,
                 const FeatureDataset& dataset);

// Errors: kIo (open/read), kBadMagic, kBadVersion, kSizeMismatch (declared
// sizes disagree with the byte length), kNonFinite, kInvariantViolation.
FeatureDataset LoadDataset(const std::filesystem::path& feature_path,
                           const std::filesystem::path& label_path);

// Full double precision, shortest round-trip representation.
void SaveCsv(const std::filesystem::path& feature_csv,
             const std::filesystem::path& label_csv,
             const FeatureDataset& dataset);

// m and k default to the largest class id + 1 and the largest row size.
// Parse errors are kParse with 1-based line and column in the message.
FeatureDataset LoadCsv(const std::filesystem::path& feature_csv,
                       const std::filesystem::path& label_csv,
                       std::optional<std::uint64_t> num_classes = std::nullopt,
                       std::optional<std::uint64_t> max_positives =
                           std::nullopt);

// Parses CSV text directly; the path overloads read the file and call these.
Matrix ParseFeatureCsv(std::string_view text);
std::vector<std::vector<std::uint32_t>> ParseLabelCsv(std::string_view text);

}  // namespace dplinear

#endif  // DPLINEAR_DATA_IO_H_
