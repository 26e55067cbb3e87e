// Copyright 2026 The stabgeom Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small dense binary matrices for the solid searches.
//
// Mat4 packs a 4x4 matrix into 16 bits, entry (i, j) at bit 4i + j, so row i
// is the nibble (m >> 4i) & 0xF. Mat8 does the same for 8x8 in 64 bits (bit
// 8i + j). Vectors are column vectors packed low bit first.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace stabgeom {

using Mat4 = std::uint16_t;
using Mat8 = std::uint64_t;

inline constexpr Mat4 kIdentity4 = 0x8421;
inline constexpr Mat8 kIdentity8 = 0x8040201008040201ULL;

constexpr unsigned row4(Mat4 a, int i) { return (a >> (4 * i)) & 0xFu; }

constexpr Mat4 mul4(Mat4 a, Mat4 b) {
  Mat4 out = 0;
  for (int i = 0; i < 4; ++i) {
    unsigned r = 0;
    const unsigned ai = row4(a, i);
    for (int j = 0; j < 4; ++j)
      if ((ai >> j) & 1u) r ^= row4(b, j);
    out |= static_cast<Mat4>(r << (4 * i));
  }
  return out;
}

constexpr Mat4 transpose4(Mat4 a) {
  Mat4 out = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if ((a >> (4 * i + j)) & 1u) out |= static_cast<Mat4>(1u << (4 * j + i));
  return out;
}

/// A v.
constexpr unsigned apply4(Mat4 a, unsigned v) {
  unsigned out = 0;
  for (int i = 0; i < 4; ++i) out |= static_cast<unsigned>(std::popcount(row4(a, i) & v) & 1) << i;
  return out;
}

constexpr unsigned column4(Mat4 a, int j) {
  unsigned c = 0;
  for (int i = 0; i < 4; ++i) c |= ((a >> (4 * i + j)) & 1u) << i;
  return c;
}

constexpr int rank4(Mat4 a) {
  std::array<unsigned, 4> r{row4(a, 0), row4(a, 1), row4(a, 2), row4(a, 3)};
  int rk = 0;
  for (int c = 0; c < 4; ++c) {
    int p = rk;
    while (p < 4 && !((r[static_cast<std::size_t>(p)] >> c) & 1u)) ++p;
    if (p == 4) continue;
    std::swap(r[static_cast<std::size_t>(p)], r[static_cast<std::size_t>(rk)]);
    for (int i = 0; i < 4; ++i)
      if (i != rk && ((r[static_cast<std::size_t>(i)] >> c) & 1u)) r[static_cast<std::size_t>(i)] ^= r[static_cast<std::size_t>(rk)];
    ++rk;
  }
  return rk;
}

/// Inverse of an invertible 4x4 matrix (zero when singular).
constexpr Mat4 inverse4(Mat4 a) {
  std::array<unsigned, 4> aug{};
  for (int i = 0; i < 4; ++i) aug[static_cast<std::size_t>(i)] = row4(a, i) | (1u << (4 + i));
  for (int c = 0; c < 4; ++c) {
    int p = c;
    while (p < 4 && !((aug[static_cast<std::size_t>(p)] >> c) & 1u)) ++p;
    if (p == 4) return 0;
    std::swap(aug[static_cast<std::size_t>(p)], aug[static_cast<std::size_t>(c)]);
    for (int i = 0; i < 4; ++i)
      if (i != c && ((aug[static_cast<std::size_t>(i)] >> c) & 1u)) aug[static_cast<std::size_t>(i)] ^= aug[static_cast<std::size_t>(c)];
  }
  Mat4 out = 0;
  for (int i = 0; i < 4; ++i) out |= static_cast<Mat4>(((aug[static_cast<std::size_t>(i)] >> 4) & 0xFu) << (4 * i));
  return out;
}

constexpr unsigned row8(Mat8 a, int i) { return static_cast<unsigned>((a >> (8 * i)) & 0xFFu); }

constexpr Mat8 mul8(Mat8 a, Mat8 b) {
  Mat8 out = 0;
  for (int i = 0; i < 8; ++i) {
    std::uint64_t r = 0;
    const unsigned ai = row8(a, i);
    for (int j = 0; j < 8; ++j)
      if ((ai >> j) & 1u) r ^= row8(b, j);
    out |= r << (8 * i);
  }
  return out;
}

constexpr Mat8 transpose8(Mat8 a) {
  Mat8 out = 0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if ((a >> (8 * i + j)) & 1u) out |= std::uint64_t{1} << (8 * j + i);
  return out;
}

/// [[p, q], [r, s]].
constexpr Mat8 from_blocks(Mat4 p, Mat4 q, Mat4 r, Mat4 s) {
  Mat8 out = 0;
  for (int i = 0; i < 4; ++i) {
    out |= std::uint64_t{row4(p, i) | (row4(q, i) << 4)} << (8 * i);
    out |= std::uint64_t{row4(r, i) | (row4(s, i) << 4)} << (8 * (i + 4));
  }
  return out;
}

/// 4x4 block (bi, bj) of an 8x8 matrix.
constexpr Mat4 block_of(Mat8 m, int bi, int bj) {
  Mat4 out = 0;
  for (int i = 0; i < 4; ++i) out |= static_cast<Mat4>(((row8(m, 4 * bi + i) >> (4 * bj)) & 0xFu) << (4 * i));
  return out;
}

/// Inverse of an 8x8 matrix; returns false when singular.
inline bool inverse8(Mat8 m, Mat8& inv) {
  std::array<std::uint32_t, 8> aug{};
  for (int i = 0; i < 8; ++i) aug[static_cast<std::size_t>(i)] = row8(m, i) | (1u << (8 + i));
  for (int c = 0; c < 8; ++c) {
    int p = c;
    while (p < 8 && !((aug[static_cast<std::size_t>(p)] >> c) & 1u)) ++p;
    if (p == 8) return false;
    std::swap(aug[static_cast<std::size_t>(p)], aug[static_cast<std::size_t>(c)]);
    for (int i = 0; i < 8; ++i)
      if (i != c && ((aug[static_cast<std::size_t>(i)] >> c) & 1u)) aug[static_cast<std::size_t>(i)] ^= aug[static_cast<std::size_t>(c)];
  }
  inv = 0;
  for (int i = 0; i < 8; ++i) inv |= std::uint64_t{(aug[static_cast<std::size_t>(i)] >> 8) & 0xFFu} << (8 * i);
  return true;
}

/// GL(4,2) with inverse, conjugacy-class and centraliser tables. Built once.
class GL4 {
 public:
  static const GL4& instance() {
    static const GL4 g;
    return g;
  }

  const std::vector<Mat4>& elements() const { return elements_; }
  bool invertible(Mat4 a) const { return inverse_[a] != 0; }
  /// Zero for singular input.
  Mat4 inverse(Mat4 a) const { return inverse_[a]; }
  Mat4 conjugate(Mat4 x, Mat4 a) const { return mul4(mul4(x, a), inverse_[x]); }

  /// Smallest element of the conjugacy class of an invertible a.
  Mat4 class_rep(Mat4 a) const { return class_rep_[a]; }
  /// Some x with x a x^{-1} = class_rep(a).
  Mat4 conjugator(Mat4 a) const { return conjugator_[a]; }

  /// Centraliser of a class representative.
  const std::vector<Mat4>& centralizer(Mat4 rep) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = centralizers_.find(rep);
    if (it == centralizers_.end()) {
      std::vector<Mat4> c;
      for (Mat4 x : elements_)
        if (mul4(x, rep) == mul4(rep, x)) c.push_back(x);
      it = centralizers_.emplace(rep, std::move(c)).first;
    }
    return it->second;
  }

  std::vector<Mat4> class_reps() const {
    std::vector<Mat4> reps;
    for (Mat4 a : elements_)
      if (class_rep_[a] == a) reps.push_back(a);
    return reps;
  }

 private:
  GL4() : inverse_(65536, 0), class_rep_(65536, 0), conjugator_(65536, 0) {
    for (unsigned a = 0; a < 65536; ++a)
      if (rank4(static_cast<Mat4>(a)) == 4) elements_.push_back(static_cast<Mat4>(a));
    for (Mat4 a : elements_) inverse_[a] = inverse4(a);
    for (Mat4 a : elements_) {
      if (class_rep_[a] != 0) continue;
      for (Mat4 x : elements_) {
        const Mat4 b = conjugate(x, a);
        if (class_rep_[b] == 0) {
          class_rep_[b] = a;
          conjugator_[b] = inverse_[x];
        }
      }
    }
  }

  std::vector<Mat4> elements_;
  std::vector<Mat4> inverse_;
  std::vector<Mat4> class_rep_;
  std::vector<Mat4> conjugator_;
  mutable std::mutex mu_;
  mutable std::map<Mat4, std::vector<Mat4>> centralizers_;
};

}  // namespace stabgeom
