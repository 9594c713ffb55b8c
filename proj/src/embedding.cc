// src/embedding.cc

// Copyright 2026  GraphRefine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "graphrefine/embedding.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>

namespace graphrefine {

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', '1'};
constexpr std::uint32_t kVersion = 1;

void check_finite(const RowMatrixF& rows) {
  if (!rows.allFinite()) {
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      if (!rows.row(i).allFinite()) {
        throw Error(ErrorCode::kNonFinite,
                    "embedding row " + std::to_string(i) +
                        " contains a non-finite component");
      }
    }
  }
}

template <typename T>
void write_le(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
bool read_le(std::istream& in, T* value) {
  static_assert(std::is_trivially_copyable_v<T>);
  in.read(reinterpret_cast<char*>(value), sizeof(T));
  return in.gcount() == sizeof(T);
}

}  // namespace

namespace {
std::vector<std::int64_t> iota_ids(Eigen::Index n) {
  std::vector<std::int64_t> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), std::int64_t{0});
  return ids;
}
}  // namespace

EmbeddingSet::EmbeddingSet(RowMatrixF rows, std::vector<std::int64_t> ids)
    : rows_(std::move(rows)), ids_(std::move(ids)) {
  if (rows_.rows() < 1 || rows_.cols() < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "embedding set must have n >= 1 and d >= 1");
  }
  if (ids_.empty()) ids_ = iota_ids(rows_.rows());
  if (static_cast<Eigen::Index>(ids_.size()) != rows_.rows()) {
    throw Error(ErrorCode::kLengthMismatch,
                "id list length does not match row count");
  }
  check_finite(rows_);
}

EmbeddingSet::EmbeddingSet(RowMatrixF rows)
    : EmbeddingSet(std::move(rows), {}) {}

EmbeddingSet normalize(const EmbeddingSet& embeddings) {
  RowMatrixF rows = embeddings.rows();
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    double norm = rows.row(i).cast<double>().norm();
    if (norm == 0.0) {
      throw Error(ErrorCode::kZeroRow,
                  "cannot normalize all-zero row " + std::to_string(i));
    }
    rows.row(i) = (rows.row(i).cast<double>() / norm).cast<float>();
  }
  return EmbeddingSet(std::move(rows), embeddings.ids());
}

bool is_normalized(const EmbeddingSet& embeddings, double tolerance) {
  for (Eigen::Index i = 0; i < embeddings.rows().rows(); ++i) {
    double norm = embeddings.rows().row(i).cast<double>().norm();
    if (std::abs(norm - 1.0) > tolerance) return false;
  }
  return true;
}

void save_embeddings(const EmbeddingSet& embeddings, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kFileIo, "cannot open " + path);
  out.write(kMagic, sizeof(kMagic));
  write_le(out, kVersion);
  write_le(out, static_cast<std::uint64_t>(embeddings.size()));
  write_le(out, static_cast<std::uint32_t>(embeddings.dim()));
  const RowMatrixF& rows = embeddings.rows();
  out.write(reinterpret_cast<const char*>(rows.data()),
            static_cast<std::streamsize>(sizeof(float)) * rows.size());
  if (!out) throw Error(ErrorCode::kFileIo, "short write to " + path);
}

EmbeddingSet load_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileIo, "cannot open " + path);
  char magic[4];
  in.read(magic, sizeof(magic));
  if (in.gcount() != sizeof(magic) || std::memcmp(magic, kMagic, 4) != 0) {
    throw Error(ErrorCode::kBadMagic, path + " is not an EMB1 file");
  }
  std::uint32_t version = 0;
  if (!read_le(in, &version)) {
    throw Error(ErrorCode::kTruncated, path + " ends inside the header");
  }
  if (version != kVersion) {
    throw Error(ErrorCode::kBadVersion,
                "unsupported EMB1 version " + std::to_string(version));
  }
  std::uint64_t n = 0;
  std::uint32_t d = 0;
  if (!read_le(in, &n) || !read_le(in, &d)) {
    throw Error(ErrorCode::kTruncated, path + " ends inside the header");
  }
  if (n < 1 || d < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                path + " declares an empty embedding set");
  }
  RowMatrixF rows(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  std::streamsize payload =
      static_cast<std::streamsize>(sizeof(float)) * rows.size();
  in.read(reinterpret_cast<char*>(rows.data()), payload);
  if (in.gcount() != payload) {
    throw Error(ErrorCode::kTruncated,
                path + " declares " + std::to_string(n) + "x" +
                    std::to_string(d) + " values but the payload is short");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::kTrailingBytes,
                path + " has bytes past the declared payload");
  }
  check_finite(rows);
  return EmbeddingSet(std::move(rows), iota_ids(static_cast<Eigen::Index>(n)));
}

void SynthSpec::validate() const {
  if (num_classes < 1 || samples_per_class < 1 || dim < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "synthetic spec counts must be positive");
  }
  if (noise_sigma < 0.0 || !std::isfinite(noise_sigma)) {
    throw Error(ErrorCode::kInvalidArgument,
                "noise_sigma must be finite and >= 0");
  }
}

std::pair<EmbeddingSet, LabelAssignment> generate_synthetic(
    const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(mix_seed(spec.seed));
  std::normal_distribution<double> gauss(0.0, 1.0);

  const std::int64_t n =
      static_cast<std::int64_t>(spec.num_classes) * spec.samples_per_class;
  RowMatrixF rows(n, spec.dim);
  std::vector<std::int64_t> labels(static_cast<std::size_t>(n));

  Eigen::VectorXd center(spec.dim);
  Eigen::VectorXd sample(spec.dim);
  std::int64_t row = 0;
  for (int c = 0; c < spec.num_classes; ++c) {
    // Gaussian direction, renormalized: uniform on the unit sphere.
    do {
      for (int t = 0; t < spec.dim; ++t) center[t] = gauss(rng);
    } while (center.norm() == 0.0);
    center /= center.norm();

    for (int s = 0; s < spec.samples_per_class; ++s, ++row) {
      if (spec.noise_sigma == 0.0) {
        sample = center;
      } else {
        for (int t = 0; t < spec.dim; ++t) {
          sample[t] = center[t] + spec.noise_sigma * gauss(rng);
        }
        sample /= sample.norm();
      }
      rows.row(row) = sample.cast<float>();
      labels[static_cast<std::size_t>(row)] = c;
    }
  }
  return {EmbeddingSet(std::move(rows), iota_ids(n)),
          LabelAssignment(std::move(labels))};
}

}  // namespace graphrefine
