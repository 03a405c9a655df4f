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

#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <string>

#include <gtest/gtest.h>

#include "dplinear/dataset.h"
#include "dplinear/error.h"
#include "test_util.h"

namespace dplinear {
namespace {

namespace fs = std::filesystem;
using testing::Rng;

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("dplinear_") + info->test_suite_name() + "_" +
            info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path Path(const std::string& name) const { return dir_ / name; }

  static std::string Slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  }
  static void Spit(const fs::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary);
    out << bytes;
  }

  fs::path dir_;
};

FeatureDataset Float32Dataset(Rng& rng) {
  FeatureDataset ds = testing::RandomDataset(37, 5, 9, 3, rng, 2.0, false);
  Matrix x = ds.features();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x.data()[i] = static_cast<double>(static_cast<float>(x.data()[i]));
  }
  return ds.WithFeatures(std::move(x));
}

// --- FeatureDataset invariants ---

TEST(FeatureDatasetTest, CreateSortsAndStoresCsr) {
  Matrix x = Matrix::Ones(3, 2);
  const FeatureDataset ds =
      FeatureDataset::Create(x, {{2, 0}, {}, {1}}, 3, 2);
  EXPECT_EQ(ds.num_examples(), 3);
  EXPECT_EQ(ds.num_features(), 2);
  EXPECT_EQ(ds.offsets(), (std::vector<std::uint32_t>{0, 2, 2, 3}));
  EXPECT_EQ(ds.indices(), (std::vector<std::uint32_t>{0, 2, 1}));
  EXPECT_TRUE(ds.IsPositive(0, 2));
  EXPECT_FALSE(ds.IsPositive(1, 0));
  Matrix y(3, 3);
  y << 1, 0, 1, 0, 0, 0, 0, 1, 0;
  EXPECT_EQ(ds.DenseLabels(), y);
}

TEST(FeatureDatasetTest, InvariantViolations) {
  const Matrix x = Matrix::Ones(2, 2);
  EXPECT_EQ(CodeOf([&] { FeatureDataset::Create(x, {{0, 0}, {1}}, 2, 2); }),
            ErrorCode::kInvariantViolation);
  EXPECT_EQ(CodeOf([&] { FeatureDataset::Create(x, {{0}, {2}}, 2, 1); }),
            ErrorCode::kInvariantViolation);
  EXPECT_EQ(CodeOf([&] { FeatureDataset::Create(x, {{0, 1}, {1}}, 2, 1); }),
            ErrorCode::kInvariantViolation);
  EXPECT_EQ(CodeOf([&] { FeatureDataset::Create(x, {{0}}, 2, 1); }),
            ErrorCode::kInvariantViolation);
  EXPECT_EQ(CodeOf([&] { FeatureDataset::Create(x, {{0}, {1}}, 0, 1); }),
            ErrorCode::kInvariantViolation);
  EXPECT_EQ(CodeOf([] { FeatureDataset::Create(Matrix(0, 2), {}, 2, 1); }),
            ErrorCode::kInvariantViolation);
  EXPECT_EQ(CodeOf([] {
              FeatureDataset::FromCsr(Matrix::Ones(2, 1), {0, 1, 0}, {0}, 1, 1);
            }),
            ErrorCode::kInvariantViolation);
  Matrix bad = x;
  bad(1, 1) = std::nan("");
  EXPECT_EQ(CodeOf([&] { FeatureDataset::Create(bad, {{0}, {1}}, 2, 1); }),
            ErrorCode::kNonFinite);
}

TEST(FeatureDatasetTest, SliceKeepsClassCountAndBound) {
  Rng rng(1);
  const FeatureDataset ds = testing::RandomDataset(20, 3, 7, 4, rng);
  const FeatureDataset s = ds.Slice(5, 9);
  EXPECT_EQ(s.num_examples(), 4);
  EXPECT_EQ(s.num_classes(), 7u);
  EXPECT_EQ(s.max_positives(), 4u);
  for (Eigen::Index i = 0; i < 4; ++i) {
    EXPECT_EQ(s.features().row(i), ds.features().row(i + 5));
    EXPECT_TRUE(std::ranges::equal(s.positives(i), ds.positives(i + 5)));
  }
  EXPECT_THROW(ds.Slice(5, 5), Error);
  EXPECT_THROW(ds.Slice(3, 21), Error);
}

TEST(WeightMatrixTest, LogitsWithBias) {
  WeightMatrix w = WeightMatrix::Zeros(2, 3);
  w.theta << 1, 0, 0, 0, 1, 1;
  w.bias = Vector::Constant(2, -1.0);
  Matrix x(1, 3);
  x << 2, 3, 4;
  const Matrix z = w.Logits(x);
  EXPECT_EQ(z(0, 0), 1.0);
  EXPECT_EQ(z(0, 1), 6.0);
}

// --- Binary format ---

TEST_F(TempDir, BinaryRoundTripIsBitIdentical) {
  Rng rng(2);
  const FeatureDataset ds = Float32Dataset(rng);
  SaveDataset(Path("x.bin"), Path("y.bin"), ds);
  const FeatureDataset back = LoadDataset(Path("x.bin"), Path("y.bin"));
  EXPECT_TRUE(back == ds);
  EXPECT_EQ(std::memcmp(back.features().data(), ds.features().data(),
                        sizeof(double) * ds.features().size()),
            0);
}

TEST_F(TempDir, BinaryNarrowsToFloat32) {
  Matrix x(1, 2);
  x << 0.1, 1.0 / 3.0;
  SaveFeatures(Path("x.bin"), x);
  const Matrix back = LoadFeatures(Path("x.bin"));
  EXPECT_EQ(back(0, 0), static_cast<double>(0.1f));
  EXPECT_EQ(back(0, 1), static_cast<double>(1.0f / 3.0f));
}

TEST_F(TempDir, FeatureHeaderLayout) {
  Matrix x(2, 3);
  x << 1, 2, 3, 4, 5, 6;
  SaveFeatures(Path("x.bin"), x);
  const std::string bytes = Slurp(Path("x.bin"));
  ASSERT_EQ(bytes.size(), 4 + 4 + 8 + 8 + 6 * 4u);
  EXPECT_EQ(bytes.substr(0, 4), "FMAT");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[8], 2);
  EXPECT_EQ(bytes[16], 3);
  float first;
  std::memcpy(&first, bytes.data() + 24, 4);
  EXPECT_EQ(first, 1.0f);
}

TEST_F(TempDir, TruncatedFileIsSizeMismatch) {
  Rng rng(3);
  const FeatureDataset ds = Float32Dataset(rng);
  SaveDataset(Path("x.bin"), Path("y.bin"), ds);
  std::string bytes = Slurp(Path("x.bin"));
  Spit(Path("x.bin"), bytes.substr(0, bytes.size() - 3));
  EXPECT_EQ(CodeOf([&] { LoadFeatures(Path("x.bin")); }),
            ErrorCode::kSizeMismatch);
  Spit(Path("x.bin"), bytes + "xx");
  EXPECT_EQ(CodeOf([&] { LoadFeatures(Path("x.bin")); }),
            ErrorCode::kSizeMismatch);
  Spit(Path("x.bin"), bytes.substr(0, 10));
  EXPECT_EQ(CodeOf([&] { LoadFeatures(Path("x.bin")); }),
            ErrorCode::kSizeMismatch);
  std::string labels = Slurp(Path("y.bin"));
  Spit(Path("y.bin"), labels.substr(0, labels.size() - 4));
  Spit(Path("x.bin"), bytes);
  EXPECT_EQ(CodeOf([&] { LoadDataset(Path("x.bin"), Path("y.bin")); }),
            ErrorCode::kSizeMismatch);
}

TEST_F(TempDir, BadMagicAndVersion) {
  SaveFeatures(Path("x.bin"), Matrix::Ones(1, 1));
  std::string bytes = Slurp(Path("x.bin"));
  std::string wrong = bytes;
  wrong[0] = 'X';
  Spit(Path("bad.bin"), wrong);
  EXPECT_EQ(CodeOf([&] { LoadFeatures(Path("bad.bin")); }),
            ErrorCode::kBadMagic);
  wrong = bytes;
  wrong[4] = 2;
  Spit(Path("bad.bin"), wrong);
  EXPECT_EQ(CodeOf([&] { LoadFeatures(Path("bad.bin")); }),
            ErrorCode::kBadVersion);
}

TEST_F(TempDir, NonFiniteFeature) {
  SaveFeatures(Path("x.bin"), Matrix::Ones(1, 2));
  std::string bytes = Slurp(Path("x.bin"));
  const float inf = std::numeric_limits<float>::infinity();
  std::memcpy(bytes.data() + 28, &inf, 4);
  Spit(Path("x.bin"), bytes);
  EXPECT_EQ(CodeOf([&] { LoadFeatures(Path("x.bin")); }),
            ErrorCode::kNonFinite);
}

TEST_F(TempDir, DuplicateLabelIndexIsInvariantViolation) {
  const FeatureDataset ds =
      FeatureDataset::Create(Matrix::Ones(2, 1), {{0, 1}, {1}}, 2, 2);
  SaveDataset(Path("x.bin"), Path("y.bin"), ds);
  std::string bytes = Slurp(Path("y.bin"));
  // Header is 4 + 4 + 3 * 8 = 32 bytes, then 3 offsets, then indices 0, 1, 1.
  const std::uint32_t dup = 0;
  std::memcpy(bytes.data() + 32 + 12 + 4, &dup, 4);  // row 0 becomes {0, 0}
  Spit(Path("y.bin"), bytes);
  EXPECT_EQ(CodeOf([&] { LoadDataset(Path("x.bin"), Path("y.bin")); }),
            ErrorCode::kInvariantViolation);
}

TEST_F(TempDir, RowCountMismatchBetweenFiles) {
  SaveFeatures(Path("x.bin"), Matrix::Ones(3, 1));
  const FeatureDataset ds =
      FeatureDataset::Create(Matrix::Ones(2, 1), {{0}, {0}}, 1, 1);
  SaveDataset(Path("x2.bin"), Path("y.bin"), ds);
  EXPECT_EQ(CodeOf([&] { LoadDataset(Path("x.bin"), Path("y.bin")); }),
            ErrorCode::kInvariantViolation);
}

TEST_F(TempDir, MissingFileIsIoError) {
  EXPECT_EQ(CodeOf([&] { LoadFeatures(Path("nope.bin")); }), ErrorCode::kIo);
}

// --- CSV ---

TEST(CsvParseTest, SmallExample) {
  const Matrix x = ParseFeatureCsv("1,0\n0,1");
  EXPECT_EQ(x, Matrix::Identity(2, 2));
  const auto y = ParseLabelCsv("0\n1");
  EXPECT_EQ(y, (std::vector<std::vector<std::uint32_t>>{{0}, {1}}));
}

TEST_F(TempDir, CsvInfersClassCount) {
  Spit(Path("x.csv"), "1,0\n0,1\n");
  Spit(Path("y.csv"), "0\n1\n");
  const FeatureDataset ds = LoadCsv(Path("x.csv"), Path("y.csv"));
  EXPECT_EQ(ds.num_examples(), 2);
  EXPECT_EQ(ds.num_features(), 2);
  EXPECT_EQ(ds.num_classes(), 2u);
  EXPECT_EQ(ds.max_positives(), 1u);
}

TEST(CsvParseTest, EmptyLabelLineMeansNoPositives) {
  const auto y = ParseLabelCsv("0,2\n\n1\n");
  ASSERT_EQ(y.size(), 3u);
  EXPECT_TRUE(y[1].empty());
  EXPECT_EQ(y[0], (std::vector<std::uint32_t>{0, 2}));
}

TEST(CsvParseTest, NonNumericCellReportsPosition) {
  try {
    ParseFeatureCsv("1,2\n3,abc\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    const std::string what = e.what();
    EXPECT_NE(what.find("line 2"), std::string::npos) << what;
    EXPECT_NE(what.find("column 2"), std::string::npos) << what;
  }
  EXPECT_THROW(ParseFeatureCsv("1,2\n3\n"), Error);
  EXPECT_THROW(ParseLabelCsv("0\n-1\n"), Error);
  EXPECT_THROW(ParseLabelCsv("x\n"), Error);
}

TEST_F(TempDir, CsvAndBinaryAgree) {
  Rng rng(4);
  const FeatureDataset ds = Float32Dataset(rng);
  SaveDataset(Path("x.bin"), Path("y.bin"), ds);
  SaveCsv(Path("x.csv"), Path("y.csv"), ds);
  const FeatureDataset from_bin = LoadDataset(Path("x.bin"), Path("y.bin"));
  const FeatureDataset from_csv =
      LoadCsv(Path("x.csv"), Path("y.csv"), ds.num_classes(),
              ds.max_positives());
  EXPECT_TRUE(from_bin == from_csv);
}

TEST_F(TempDir, CsvRoundTripIsLosslessInDouble) {
  Rng rng(5);
  const FeatureDataset ds = testing::RandomDataset(23, 4, 6, 2, rng, 1e3);
  SaveCsv(Path("x.csv"), Path("y.csv"), ds);
  EXPECT_TRUE(LoadCsv(Path("x.csv"), Path("y.csv"), ds.num_classes(),
                      ds.max_positives()) == ds);
}

TEST_F(TempDir, RoundTripProperty) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 50);
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng() % 10);
    const std::uint64_t m = 1 + rng() % 12;
    const std::uint64_t k = 1 + rng() % 4;
    FeatureDataset ds = testing::RandomDataset(n, d, m, k, rng, 5.0, false);
    SaveCsv(Path("x.csv"), Path("y.csv"), ds);
    EXPECT_TRUE(LoadCsv(Path("x.csv"), Path("y.csv"), m, k) == ds);
    Matrix x = ds.features().cast<float>().cast<double>();
    ds = ds.WithFeatures(std::move(x));
    SaveDataset(Path("x.bin"), Path("y.bin"), ds);
    EXPECT_TRUE(LoadDataset(Path("x.bin"), Path("y.bin")) == ds);
  }
}

}  // namespace
}  // namespace dplinear
