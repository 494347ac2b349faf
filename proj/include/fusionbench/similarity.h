// Copyright 2026 The FusionBench Authors. All Rights Reserved.
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

// Match scores between protected templates. Iris templates are bit vectors
// compared with Hamming/Jaccard similarity; fingerprint templates are
// descriptor matrices compared row-by-row (Dice or cosine), filtered to
// one-to-one correspondences and reduced to a single global score.

#ifndef FUSIONBENCH_SIMILARITY_H_
#define FUSIONBENCH_SIMILARITY_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fusionbench {

// Fixed-length bit vector, packed 64 bits per word. Bit i lives in word i/64
// at position i%64; pad bits of the last word are always zero.
class BinaryTemplate {
 public:
  // Every element of `bits` must be 0 or 1 and `bits` must be non-empty.
  BinaryTemplate(std::span<const std::uint8_t> bits, std::string subject_id,
                 std::string sample_id);

  // Hex is big-endian within each byte: the first bit is the MSB of the first
  // byte. `nbits` truncates trailing pad bits.
  static BinaryTemplate FromHex(std::string_view hex, std::size_t nbits,
                                std::string subject_id, std::string sample_id);
  std::string ToHex() const;

  std::size_t size() const { return nbits_; }
  bool bit(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
  std::span<const std::uint64_t> words() const { return words_; }
  std::size_t popcount() const;

  const std::string& subject_id() const { return subject_id_; }
  const std::string& sample_id() const { return sample_id_; }

  friend bool operator==(const BinaryTemplate& a, const BinaryTemplate& b) {
    return a.nbits_ == b.nbits_ && a.words_ == b.words_;
  }

 private:
  BinaryTemplate(std::vector<std::uint64_t> words, std::size_t nbits,
                 std::string subject_id, std::string sample_id);

  std::vector<std::uint64_t> words_;
  std::size_t nbits_ = 0;
  std::string subject_id_;
  std::string sample_id_;
};

// n x D descriptor matrix, row-major. Rows must share D >= 1 and none may be
// all-zero. Negative entries are accepted.
class FeatureMatrix {
 public:
  FeatureMatrix(const std::vector<std::vector<double>>& rows,
                std::string subject_id, std::string sample_id);

  std::size_t rows() const { return rows_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  std::vector<std::vector<double>> ToRows() const;

  const std::string& subject_id() const { return subject_id_; }
  const std::string& sample_id() const { return sample_id_; }

 private:
  std::vector<double> values_;
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::string subject_id_;
  std::string sample_id_;
};

// Dense grid of similarities, each in [0,1].
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  SimilarityMatrix(std::size_t rows, std::size_t cols,
                   std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const {
    return values_[i * cols_ + j];
  }
  std::span<const double> values() const { return values_; }
  SimilarityMatrix Transposed() const;

  friend bool operator==(const SimilarityMatrix&,
                         const SimilarityMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

double hamming_similarity(const BinaryTemplate& enrolled,
                          const BinaryTemplate& query);

// N11 / (N01 + N10 + N11). Throws DegenerateTemplateError when both
// templates are all-zero.
double jaccard_similarity(const BinaryTemplate& enrolled,
                          const BinaryTemplate& query);

// Entries are clamped to [0,1]; only negative descriptors can push them out.
SimilarityMatrix dice_local_matrix(const FeatureMatrix& enrolled,
                                   const FeatureMatrix& query);
SimilarityMatrix cosine_local_matrix(const FeatureMatrix& enrolled,
                                     const FeatureMatrix& query);

// Keeps (i,j) only where it is both the maximum of row i and of column j.
// Ties go to the lowest index along the row (column) being scanned, so every
// row and column keeps at most one entry.
SimilarityMatrix filter_double_matches(const SimilarityMatrix& local);

// Sum of the filtered entries over min(n_enrolled, n_query), clamped to
// [0,1]. `clamped`, when given, reports whether the clamp engaged.
double global_similarity(const SimilarityMatrix& filtered,
                         std::size_t n_enrolled, std::size_t n_query,
                         bool* clamped = nullptr);

// Process-wide count of clamp events in global_similarity.
std::uint64_t global_similarity_clamp_count();

enum class LocalMeasure { kDice, kCosine };

// local matrix -> double-match filter -> global score.
double fingerprint_similarity(const FeatureMatrix& enrolled,
                              const FeatureMatrix& query,
                              LocalMeasure measure);

}  // namespace fusionbench

#endif  // FUSIONBENCH_SIMILARITY_H_
