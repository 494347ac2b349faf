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

#include "fusionbench/similarity.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <utility>

#include "fusionbench/error.h"

namespace fusionbench {

namespace {

std::atomic<std::uint64_t> g_clamp_events{0};

int HexDigit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

void CheckSameLength(const BinaryTemplate& a, const BinaryTemplate& b) {
  if (a.size() != b.size()) {
    throw DimensionError("template length mismatch: " +
                         std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
}

void CheckSameDim(const FeatureMatrix& a, const FeatureMatrix& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("descriptor dimension mismatch: " +
                         std::to_string(a.dim()) + " vs " +
                         std::to_string(b.dim()));
  }
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

double Clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

BinaryTemplate::BinaryTemplate(std::span<const std::uint8_t> bits,
                               std::string subject_id, std::string sample_id)
    : nbits_(bits.size()),
      subject_id_(std::move(subject_id)),
      sample_id_(std::move(sample_id)) {
  if (bits.empty()) throw EmptyTemplateError("binary template has no bits");
  words_.assign((nbits_ + 63) / 64, 0);
  for (std::size_t i = 0; i < nbits_; ++i) {
    if (bits[i] > 1) {
      throw RangeError("binary template bit " + std::to_string(i) +
                       " is not 0 or 1");
    }
    words_[i / 64] |= static_cast<std::uint64_t>(bits[i]) << (i % 64);
  }
}

BinaryTemplate::BinaryTemplate(std::vector<std::uint64_t> words,
                               std::size_t nbits, std::string subject_id,
                               std::string sample_id)
    : words_(std::move(words)),
      nbits_(nbits),
      subject_id_(std::move(subject_id)),
      sample_id_(std::move(sample_id)) {}

BinaryTemplate BinaryTemplate::FromHex(std::string_view hex, std::size_t nbits,
                                       std::string subject_id,
                                       std::string sample_id) {
  if (nbits == 0) throw EmptyTemplateError("binary template has no bits");
  if (hex.size() * 4 < nbits) {
    throw ParseError("hex string holds " + std::to_string(hex.size() * 4) +
                     " bits, nbits is " + std::to_string(nbits));
  }
  std::vector<std::uint64_t> words((nbits + 63) / 64, 0);
  for (std::size_t i = 0; i < nbits; ++i) {
    const int nibble = HexDigit(hex[i / 4]);
    if (nibble < 0) throw ParseError("invalid hex digit in template");
    const std::uint64_t b = (nibble >> (3 - i % 4)) & 1;
    words[i / 64] |= b << (i % 64);
  }
  for (char c : hex) {
    if (HexDigit(c) < 0) throw ParseError("invalid hex digit in template");
  }
  return BinaryTemplate(std::move(words), nbits, std::move(subject_id),
                        std::move(sample_id));
}

std::string BinaryTemplate::ToHex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t nbytes = (nbits_ + 7) / 8;
  std::string out;
  out.reserve(nbytes * 2);
  for (std::size_t byte = 0; byte < nbytes; ++byte) {
    unsigned value = 0;
    for (std::size_t k = 0; k < 8; ++k) {
      const std::size_t i = byte * 8 + k;
      value = (value << 1) | (i < nbits_ && bit(i) ? 1u : 0u);
    }
    out.push_back(kDigits[value >> 4]);
    out.push_back(kDigits[value & 0xf]);
  }
  return out;
}

std::size_t BinaryTemplate::popcount() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += std::popcount(w);
  return n;
}

FeatureMatrix::FeatureMatrix(const std::vector<std::vector<double>>& rows,
                             std::string subject_id, std::string sample_id)
    : subject_id_(std::move(subject_id)), sample_id_(std::move(sample_id)) {
  if (rows.empty()) throw EmptyTemplateError("feature matrix has no rows");
  rows_ = rows.size();
  dim_ = rows.front().size();
  if (dim_ == 0) throw DimensionError("feature matrix rows have dimension 0");
  values_.reserve(rows_ * dim_);
  for (std::size_t i = 0; i < rows_; ++i) {
    if (rows[i].size() != dim_) {
      throw DimensionError("feature matrix row " + std::to_string(i) +
                           " has dimension " + std::to_string(rows[i].size()) +
                           ", expected " + std::to_string(dim_));
    }
    bool nonzero = false;
    for (double v : rows[i]) {
      if (!std::isfinite(v)) throw RangeError("non-finite descriptor value");
      nonzero = nonzero || v != 0.0;
    }
    if (!nonzero) {
      throw DegenerateTemplateError("feature matrix row " + std::to_string(i) +
                                    " is all zero");
    }
    values_.insert(values_.end(), rows[i].begin(), rows[i].end());
  }
}

std::vector<std::vector<double>> FeatureMatrix::ToRows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    out[i].assign(row(i).begin(), row(i).end());
  }
  return out;
}

SimilarityMatrix::SimilarityMatrix(std::size_t rows, std::size_t cols,
                                   std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw DimensionError("similarity matrix has " +
                         std::to_string(values_.size()) + " values for " +
                         std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw RangeError("similarity matrix entry outside [0,1]");
    }
  }
}

SimilarityMatrix SimilarityMatrix::Transposed() const {
  std::vector<double> t(values_.size());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t[j * rows_ + i] = (*this)(i, j);
  }
  return SimilarityMatrix(cols_, rows_, std::move(t));
}

double hamming_similarity(const BinaryTemplate& enrolled,
                          const BinaryTemplate& query) {
  CheckSameLength(enrolled, query);
  const auto e = enrolled.words();
  const auto q = query.words();
  std::size_t differing = 0;
  for (std::size_t w = 0; w < e.size(); ++w) differing += std::popcount(e[w] ^ q[w]);
  return 1.0 - static_cast<double>(differing) /
                   static_cast<double>(enrolled.size());
}

double jaccard_similarity(const BinaryTemplate& enrolled,
                          const BinaryTemplate& query) {
  CheckSameLength(enrolled, query);
  const auto e = enrolled.words();
  const auto q = query.words();
  std::size_t both = 0;
  std::size_t either = 0;  // N01 + N10 + N11
  for (std::size_t w = 0; w < e.size(); ++w) {
    both += std::popcount(e[w] & q[w]);
    either += std::popcount(e[w] | q[w]);
  }
  if (either == 0) {
    throw DegenerateTemplateError(
        "jaccard similarity undefined for two all-zero templates");
  }
  return static_cast<double>(both) / static_cast<double>(either);
}

SimilarityMatrix dice_local_matrix(const FeatureMatrix& enrolled,
                                   const FeatureMatrix& query) {
  CheckSameDim(enrolled, query);
  const std::size_t ne = enrolled.rows();
  const std::size_t nq = query.rows();
  std::vector<double> sq_q(nq);
  for (std::size_t j = 0; j < nq; ++j) sq_q[j] = Dot(query.row(j), query.row(j));
  std::vector<double> values(ne * nq);
  for (std::size_t i = 0; i < ne; ++i) {
    const double sq_e = Dot(enrolled.row(i), enrolled.row(i));
    for (std::size_t j = 0; j < nq; ++j) {
      values[i * nq + j] =
          Clamp01(2.0 * Dot(enrolled.row(i), query.row(j)) / (sq_e + sq_q[j]));
    }
  }
  return SimilarityMatrix(ne, nq, std::move(values));
}

SimilarityMatrix cosine_local_matrix(const FeatureMatrix& enrolled,
                                     const FeatureMatrix& query) {
  CheckSameDim(enrolled, query);
  const std::size_t ne = enrolled.rows();
  const std::size_t nq = query.rows();
  std::vector<double> norm_q(nq);
  for (std::size_t j = 0; j < nq; ++j) {
    norm_q[j] = std::sqrt(Dot(query.row(j), query.row(j)));
  }
  std::vector<double> values(ne * nq);
  for (std::size_t i = 0; i < ne; ++i) {
    const double norm_e = std::sqrt(Dot(enrolled.row(i), enrolled.row(i)));
    for (std::size_t j = 0; j < nq; ++j) {
      values[i * nq + j] =
          Clamp01(Dot(enrolled.row(i), query.row(j)) / (norm_e * norm_q[j]));
    }
  }
  return SimilarityMatrix(ne, nq, std::move(values));
}

SimilarityMatrix filter_double_matches(const SimilarityMatrix& local) {
  const std::size_t rows = local.rows();
  const std::size_t cols = local.cols();
  // First maximum along each row and each column.
  std::vector<std::size_t> row_arg(rows, 0);
  std::vector<std::size_t> col_arg(cols, 0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (local(i, j) > local(i, row_arg[i])) row_arg[i] = j;
      if (local(i, j) > local(col_arg[j], j)) col_arg[j] = i;
    }
  }
  std::vector<double> kept(rows * cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t j = row_arg[i];
    if (cols > 0 && col_arg[j] == i) kept[i * cols + j] = local(i, j);
  }
  return SimilarityMatrix(rows, cols, std::move(kept));
}

double global_similarity(const SimilarityMatrix& filtered,
                         std::size_t n_enrolled, std::size_t n_query,
                         bool* clamped) {
  if (n_enrolled == 0 || n_query == 0) {
    throw EmptyTemplateError("global similarity needs at least one minutia");
  }
  double sum = 0.0;
  for (double v : filtered.values()) sum += v;
  const double raw =
      sum / static_cast<double>(std::min(n_enrolled, n_query));
  const double score = Clamp01(raw);
  const bool did_clamp = score != raw;
  if (did_clamp) g_clamp_events.fetch_add(1, std::memory_order_relaxed);
  if (clamped != nullptr) *clamped = did_clamp;
  return score;
}

std::uint64_t global_similarity_clamp_count() {
  return g_clamp_events.load(std::memory_order_relaxed);
}

double fingerprint_similarity(const FeatureMatrix& enrolled,
                              const FeatureMatrix& query,
                              LocalMeasure measure) {
  const SimilarityMatrix local = measure == LocalMeasure::kDice
                                     ? dice_local_matrix(enrolled, query)
                                     : cosine_local_matrix(enrolled, query);
  return global_similarity(filter_double_matches(local), enrolled.rows(),
                           query.rows());
}

}  // namespace fusionbench
