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

// Extension search for seven solids in PG(11,2), every three spanning.
//
// Projecting such a geometry from one solid gives six solids in PG(7,2) with
// polarities, i.e. one of the [[6,2,3]]_4 labelings. After row operations and
// symplectic column operations inside each block the generator matrix is
//
//   X0 O  O  Y A0 B0 C0
//   O  X1 O  Y A1 B1 C1
//   O  O  X2 Y A2 B2 C2
//
// with the first two block rows fixed by the labeling. Writing J for the
// paired form, commutation of block rows (0,2) and (1,2) is linear in
// (A2, B2, C2):
//
//   A0 J A2^T + B0 J B2^T + C0 J C2^T = Y J Y^T
//   A1 J A2^T + B1 J B2^T + C1 J C2^T = Y J Y^T
//
// and block row 2 with itself needs X2 J X2^T = Q with
// Q = Y J Y^T + A2 J A2^T + B2 J B2^T + C2 J C2^T. An invertible X2 exists
// exactly when Q is nondegenerate.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stabgeom/f2linalg.hpp"
#include "stabgeom/mat4.hpp"
#include "stabgeom/polarity.hpp"

namespace stabgeom {

struct RefutationBranch {
  std::size_t index = 0;
  std::size_t kernel_dim = 0;       ///< dimension of the affine solution space
  bool consistent = true;           ///< linear system solvable at all
  std::uint64_t candidates = 0;     ///< solutions (A2, B2, C2) examined
  std::uint64_t invertible = 0;     ///< A2, B2, C2 all invertible
  std::uint64_t spanning = 0;       ///< every three of the six solids span
  std::array<std::uint64_t, 3> q_rank{};  ///< survivors with rank Q = 0, 2, 4

  bool has_extension() const { return q_rank[2] != 0; }
};

struct ExtensionWitness {
  std::size_t index = 0;
  Mat4 a2 = 0, b2 = 0, c2 = 0;
};

namespace detail {

inline Mat4 sym_product(Mat4 a, Mat4 b) { return mul4(mul4(a, kPairedForm4), transpose4(b)); }

/// 12-bit column j of the block [top; mid; bot].
inline std::uint16_t column12(Mat4 top, Mat4 mid, Mat4 bot, int j) {
  return static_cast<std::uint16_t>(column4(top, j) | (column4(mid, j) << 4) | (column4(bot, j) << 8));
}

}  // namespace detail

/// Runs the extension search for one [[6,2,3]]_4 labeling.
inline RefutationBranch refute_branch(const PolarityLabeling& sol, std::size_t index = 0,
                                      std::optional<ExtensionWitness>* witness = nullptr) {
  if (sol.config.n() != 6) throw std::invalid_argument("extension search needs six solids");
  const auto& gl = GL4::instance();
  const auto forms = sol.forms();
  std::array<Mat4, 6> s{};
  for (std::size_t i = 0; i < 6; ++i) s[i] = symplectic_basis(forms[i]);
  const Mat4 a = sol.config.params[0], b = sol.config.params[1], c = sol.config.params[2];
  const Mat4 y = s[2];
  const std::array<Mat4, 3> top{s[3], s[4], s[5]};
  const std::array<Mat4, 3> mid{mul4(a, s[3]), mul4(b, s[4]), mul4(c, s[5])};
  const Mat4 yjy = detail::sym_product(y, y);

  // Unknown bit 16 t + k is entry k of the t-th of A2, B2, C2.
  BinMatrix lin(32, 48);
  for (std::size_t t = 0; t < 3; ++t)
    for (int k = 0; k < 16; ++k) {
      const auto e = static_cast<Mat4>(1u << k);
      const Mat4 r0 = detail::sym_product(top[t], e);
      const Mat4 r1 = detail::sym_product(mid[t], e);
      for (int q = 0; q < 16; ++q) {
        if ((r0 >> q) & 1u) lin.set(static_cast<std::size_t>(q), 16 * t + static_cast<std::size_t>(k));
        if ((r1 >> q) & 1u) lin.set(16 + static_cast<std::size_t>(q), 16 * t + static_cast<std::size_t>(k));
      }
    }
  const BinVector rhs = BinVector::from_u64(32, std::uint64_t{yjy} | (std::uint64_t{yjy} << 16));
  RefutationBranch br;
  br.index = index;
  const auto part = solve(lin, rhs);
  if (!part) {
    br.consistent = false;
    return br;
  }
  const Subspace ker = kernel(lin);
  br.kernel_dim = ker.dim();
  std::vector<std::uint64_t> basis;
  for (const auto& v : ker.basis().row_vectors()) basis.push_back(v.to_u64());

  // Fixed columns of the four solids not depending on the unknowns.
  const std::array<Mat4, 3> fixed_top{s[0], 0, y};
  const std::array<Mat4, 3> fixed_mid{0, s[1], y};
  const std::array<Mat4, 3> fixed_bot{0, 0, y};

  std::uint64_t cur = part->to_u64();
  const std::uint64_t total = std::uint64_t{1} << basis.size();
  for (std::uint64_t i = 0; i < total; ++i) {
    if (i > 0) cur ^= basis[static_cast<std::size_t>(std::countr_zero(i))];
    ++br.candidates;
    const std::array<Mat4, 3> bot{static_cast<Mat4>(cur & 0xFFFF), static_cast<Mat4>((cur >> 16) & 0xFFFF),
                                  static_cast<Mat4>((cur >> 32) & 0xFFFF)};
    if (!gl.invertible(bot[0]) || !gl.invertible(bot[1]) || !gl.invertible(bot[2])) continue;
    ++br.invertible;
    // Six solids: X0, X1, Y, then the three with unknown bottoms.
    std::array<std::array<std::uint16_t, 4>, 6> cols{};
    for (int j = 0; j < 4; ++j) {
      for (std::size_t t = 0; t < 3; ++t) {
        cols[t][static_cast<std::size_t>(j)] = detail::column12(fixed_top[t], fixed_mid[t], fixed_bot[t], j);
        cols[3 + t][static_cast<std::size_t>(j)] = detail::column12(top[t], mid[t], bot[t], j);
      }
    }
    bool spans = true;
    for (std::size_t p = 0; spans && p < 6; ++p)
      for (std::size_t q = p + 1; spans && q < 6; ++q)
        for (std::size_t r = q + 1; spans && r < 6; ++r) {
          std::vector<std::uint64_t> v;
          for (std::size_t idx : {p, q, r})
            for (auto col : cols[idx]) v.push_back(col);
          spans = packed_rank(std::move(v)) == 12;
        }
    if (!spans) continue;
    ++br.spanning;
    const Mat4 qm = yjy ^ detail::sym_product(bot[0], bot[0]) ^ detail::sym_product(bot[1], bot[1]) ^
                    detail::sym_product(bot[2], bot[2]);
    const int rk = rank4(qm);
    ++br.q_rank[static_cast<std::size_t>(rk / 2)];
    if (rk == 4 && witness && !*witness) *witness = ExtensionWitness{index, bot[0], bot[1], bot[2]};
  }
  return br;
}

struct RefutationReport {
  std::vector<RefutationBranch> branches;
  std::optional<ExtensionWitness> witness;

  bool exists() const { return witness.has_value(); }
  std::string verdict_714() const { return exists() ? "EXISTS" : "NONEXISTENT"; }
  /// An [[8,0,5]]_4 code would project to a [[7,1,4]]_4 code.
  std::string verdict_805() const { return exists() ? "UNDECIDED" : "NONEXISTENT"; }

  RefutationBranch totals() const {
    RefutationBranch t;
    for (const auto& b : branches) {
      t.candidates += b.candidates;
      t.invertible += b.invertible;
      t.spanning += b.spanning;
      for (std::size_t i = 0; i < 3; ++i) t.q_rank[i] += b.q_rank[i];
      t.consistent = t.consistent && b.consistent;
    }
    return t;
  }
};

/// Extension search over every labeling; `done` lists branch results already
/// computed (resumption) and `on_branch` sees each new one.
inline RefutationReport refute_7_1_4(const std::vector<PolarityLabeling>& solutions,
                                     std::vector<RefutationBranch> done = {},
                                     const std::function<void(const RefutationBranch&)>& on_branch = {}) {
  RefutationReport rep;
  rep.branches = std::move(done);
  for (std::size_t i = rep.branches.size(); i < solutions.size(); ++i) {
    std::optional<ExtensionWitness> w;
    rep.branches.push_back(refute_branch(solutions[i], i, &w));
    if (w && !rep.witness) rep.witness = w;
    if (on_branch) on_branch(rep.branches.back());
  }
  for (const auto& b : rep.branches)
    if (b.has_extension() && !rep.witness) rep.witness = ExtensionWitness{b.index, 0, 0, 0};
  return rep;
}

}  // namespace stabgeom
