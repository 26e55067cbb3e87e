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

// Configurations of n solids in PG(7,2) any two of which span the space.
//
// Up to a projective transformation such a configuration is spanned by the
// column blocks of
//
//   I O I I   I  ...
//   O I I A_4 A_5 ...
//
// and the tuple (A_4, ..., A_n) is then determined up to simultaneous
// conjugation. A configuration is stored by the lexicographically smallest
// such tuple over all orderings of its solids.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "stabgeom/mat4.hpp"

namespace stabgeom {

/// A solid given by the 8x4 matrix [x; y] whose columns span it.
struct SolidBasis {
  Mat4 x = 0;
  Mat4 y = 0;

  /// Column j as a point of F_2^8 (bit i = row i).
  std::uint8_t column(int j) const { return static_cast<std::uint8_t>(column4(x, j) | (column4(y, j) << 4)); }

  friend bool operator==(const SolidBasis&, const SolidBasis&) = default;
};

/// Applies an 8x8 matrix to a solid basis.
inline SolidBasis transform(Mat8 g, const SolidBasis& s) {
  const Mat8 img = mul8(g, from_blocks(s.x, 0, s.y, 0));
  return {block_of(img, 0, 0), block_of(img, 1, 0)};
}

/// True when the two solids together span F_2^8.
inline bool complementary(const SolidBasis& a, const SolidBasis& b) {
  Mat8 inv = 0;
  return inverse8(from_blocks(a.x, b.x, a.y, b.y), inv);
}

struct SolidConfig {
  std::vector<Mat4> params;  ///< A_4, ..., A_n

  std::size_t n() const { return params.size() + 3; }

  std::vector<SolidBasis> solids() const {
    std::vector<SolidBasis> s{{kIdentity4, 0}, {0, kIdentity4}, {kIdentity4, kIdentity4}};
    for (Mat4 a : params) s.push_back({kIdentity4, a});
    return s;
  }

  friend bool operator==(const SolidConfig&, const SolidConfig&) = default;
  friend auto operator<=>(const SolidConfig& a, const SolidConfig& b) { return a.params <=> b.params; }
};

/// Every pair of solids complementary, stated on the parameters.
inline bool is_valid_config(const SolidConfig& c) {
  const auto& gl = GL4::instance();
  for (std::size_t i = 0; i < c.params.size(); ++i) {
    const Mat4 a = c.params[i];
    if (!gl.invertible(a) || !gl.invertible(a ^ kIdentity4)) return false;
    for (std::size_t j = 0; j < i; ++j)
      if (!gl.invertible(a ^ c.params[j])) return false;
  }
  return true;
}

/// Normalising frame for solids a, b, c taken as the first three.
struct Frame {
  Mat8 g = 0;                     ///< maps a, b, c to [I;O], [O;I], [I;I]
  std::vector<int> others;        ///< remaining solid indices, increasing
  std::vector<Mat4> params;       ///< A_t for each remaining solid
};

/// Throws std::invalid_argument when two of the solids are not complementary.
inline Frame frame_for(const std::vector<SolidBasis>& solids, int a, int b, int c) {
  const auto& gl = GL4::instance();
  const auto& sa = solids[static_cast<std::size_t>(a)];
  const auto& sb = solids[static_cast<std::size_t>(b)];
  Mat8 pinv = 0;
  if (!inverse8(from_blocks(sa.x, sb.x, sa.y, sb.y), pinv))
    throw std::invalid_argument("solids " + std::to_string(a + 1) + " and " + std::to_string(b + 1) + " meet");
  const SolidBasis sc = transform(pinv, solids[static_cast<std::size_t>(c)]);
  const Mat4 xci = gl.inverse(sc.x);
  const Mat4 yci = gl.inverse(sc.y);
  if (xci == 0 || yci == 0) throw std::invalid_argument("solid " + std::to_string(c + 1) + " meets another");
  Frame f;
  f.g = mul8(from_blocks(xci, 0, 0, yci), pinv);
  for (int t = 0; t < static_cast<int>(solids.size()); ++t) {
    if (t == a || t == b || t == c) continue;
    const SolidBasis st = transform(pinv, solids[static_cast<std::size_t>(t)]);
    const Mat4 xti = gl.inverse(st.x);
    if (xti == 0 || !gl.invertible(st.y)) throw std::invalid_argument("solid " + std::to_string(t + 1) + " meets another");
    f.others.push_back(t);
    f.params.push_back(mul4(mul4(mul4(yci, st.y), xti), sc.x));
  }
  return f;
}

namespace detail {

/// Lex-min over x of (x t_0 x^-1, sorted{x t_i x^-1 : i > 0}) given that the
/// first entry must become class_rep(t_0).
inline void refine_first(const std::vector<Mat4>& t, std::size_t first, std::vector<Mat4>& best) {
  const auto& gl = GL4::instance();
  const Mat4 r1 = gl.class_rep(t[first]);
  const Mat4 x0 = gl.conjugator(t[first]);
  std::vector<Mat4> cand(t.size());
  for (Mat4 z : gl.centralizer(r1)) {
    const Mat4 x = mul4(z, x0);
    const Mat4 xi = gl.inverse(x);
    cand[0] = r1;
    std::size_t k = 1;
    for (std::size_t i = 0; i < t.size(); ++i)
      if (i != first) cand[k++] = mul4(mul4(x, t[i]), xi);
    std::sort(cand.begin() + 1, cand.end());
    if (best.empty() || cand < best) best = cand;
  }
}

}  // namespace detail

/// Canonical parameters of any n >= 3 pairwise complementary solids.
inline SolidConfig canonical_config(const std::vector<SolidBasis>& solids) {
  const int n = static_cast<int>(solids.size());
  if (n < 3) throw std::invalid_argument("need at least three solids");
  if (n == 3) return {};
  const auto& gl = GL4::instance();
  std::vector<Mat4> best;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (a == b || a == c || b == c) continue;
        const Frame f = frame_for(solids, a, b, c);
        for (std::size_t i = 0; i < f.params.size(); ++i) {
          const Mat4 r1 = gl.class_rep(f.params[i]);
          if (!best.empty() && r1 > best[0]) continue;
          if (!best.empty() && r1 < best[0]) best.clear();
          detail::refine_first(f.params, i, best);
        }
      }
  return {best};
}

inline SolidConfig canonical_config(const SolidConfig& c) { return canonical_config(c.solids()); }

/// Number of conjugacy classes of admissible A for four solids in fixed
/// order, i.e. configurations up to conjugation only.
inline std::size_t four_solid_conjugacy_classes() {
  const auto& gl = GL4::instance();
  std::set<Mat4> reps;
  for (Mat4 a : gl.elements())
    if (gl.invertible(a ^ kIdentity4)) reps.insert(gl.class_rep(a));
  return reps.size();
}

/// All admissible extensions of `base` by one more solid [I; C], canonicalised.
inline std::set<SolidConfig> extend_configs(const SolidConfig& base) {
  const auto& gl = GL4::instance();
  std::set<SolidConfig> out;
  for (Mat4 c : gl.elements()) {
    if (!gl.invertible(c ^ kIdentity4)) continue;
    bool ok = true;
    for (Mat4 p : base.params) ok = ok && gl.invertible(c ^ p);
    if (!ok) continue;
    SolidConfig ext = base;
    ext.params.push_back(c);
    out.insert(canonical_config(ext));
  }
  return out;
}

/// Orbit representatives of n pairwise complementary solids, generated one
/// solid at a time from the representatives for n - 1. `on_stage` is called
/// with (stage n, representative count) after each stage.
inline std::vector<SolidConfig> enumerate_solid_configs(
    std::size_t n, const std::function<void(std::size_t, std::size_t)>& on_stage = {}) {
  if (n < 3 || n > 9) throw std::invalid_argument("solid count must be in 3..9");
  std::vector<SolidConfig> reps{SolidConfig{}};
  for (std::size_t stage = 4; stage <= n; ++stage) {
    std::set<SolidConfig> next;
    for (const auto& r : reps) next.merge(extend_configs(r));
    reps.assign(next.begin(), next.end());
    if (on_stage) on_stage(stage, reps.size());
  }
  return reps;
}

/// Elements of GL(8,2) permuting the solids of a normal-form configuration,
/// paired with the induced permutation (perm[i] = image of solid i).
struct SolidSymmetry {
  Mat8 g = 0;
  std::vector<int> perm;
};

inline std::vector<SolidSymmetry> configuration_stabilizer(const SolidConfig& cfg) {
  const auto& gl = GL4::instance();
  const auto solids = cfg.solids();
  const int n = static_cast<int>(solids.size());
  std::vector<SolidSymmetry> out;
  std::vector<Mat4> target = cfg.params;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (a == b || a == c || b == c) continue;
        const Frame f = frame_for(solids, a, b, c);
        for (Mat4 y : gl.elements()) {
          const Mat4 yi = gl.inverse(y);
          std::vector<int> perm(static_cast<std::size_t>(n), -1);
          perm[static_cast<std::size_t>(a)] = 0;
          perm[static_cast<std::size_t>(b)] = 1;
          perm[static_cast<std::size_t>(c)] = 2;
          bool ok = true;
          for (std::size_t i = 0; ok && i < f.params.size(); ++i) {
            const Mat4 img = mul4(mul4(y, f.params[i]), yi);
            const auto it = std::find(target.begin(), target.end(), img);
            if (it == target.end()) ok = false;
            else perm[static_cast<std::size_t>(f.others[i])] = 3 + static_cast<int>(it - target.begin());
          }
          if (ok) out.push_back({mul8(from_blocks(y, 0, 0, y), f.g), perm});
        }
      }
  return out;
}

/// Hex serialisation of a configuration: parameters as 4-digit hex words.
inline std::string to_string(const SolidConfig& c) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (Mat4 p : c.params) {
    if (!s.empty()) s += ' ';
    for (int sh = 12; sh >= 0; sh -= 4) s += digits[(p >> sh) & 0xF];
  }
  return s;
}

}  // namespace stabgeom
