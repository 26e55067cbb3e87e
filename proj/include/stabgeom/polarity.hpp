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

// Symplectic polarities on configurations of solids in PG(7,2).
//
// A labeling assigns x_l in {0, 1} to each of the 35 lines of each solid,
// 1 meaning hyperbolic. Lines of a solid are numbered 0..34 in local
// coordinates (the solid's basis columns), ordered by their point sets.
//
// Two routes produce the polarities. The parity route solves, for every
// codimension-two subspace pi, sum of x_l over solids meeting pi in a line l
// = 0, and then filters the kernel. The Gram route uses that a tuple of
// forms with Gram matrices G_s works exactly when
//
//   sum_s M_s G_s^{-1} M_s^T = 0,
//
// M_s the 8x4 basis of solid s, which is linear in H_s = G_s^{-1}.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "stabgeom/errors.hpp"
#include "stabgeom/f2linalg.hpp"
#include "stabgeom/mat4.hpp"
#include "stabgeom/solids.hpp"
#include "stabgeom/symcode.hpp"

namespace stabgeom {

inline constexpr int kLinesPerSolid = 35;

/// The 35 lines of PG(3,2) as 16-bit masks of their three nonzero points.
class SolidLines {
 public:
  static const SolidLines& instance() {
    static const SolidLines s;
    return s;
  }

  std::uint16_t mask(int line) const { return masks_[static_cast<std::size_t>(line)]; }
  /// Two points spanning the line.
  std::pair<unsigned, unsigned> points(int line) const { return pts_[static_cast<std::size_t>(line)]; }
  int index_of_mask(std::uint16_t m) const { return by_mask_.at(m); }
  int index_of(unsigned u, unsigned v) const { return by_mask_.at(static_cast<std::uint16_t>((1u << u) | (1u << v) | (1u << (u ^ v)))); }

  /// Line cut out by independent local functionals g1, g2, or -1.
  int line_of_functionals(unsigned g1, unsigned g2) const { return kernel_line_[g1][g2]; }

 private:
  SolidLines() {
    for (unsigned u = 1; u < 16; ++u)
      for (unsigned v = u + 1; v < 16; ++v) {
        const unsigned w = u ^ v;
        if (w < v) continue;
        const auto m = static_cast<std::uint16_t>((1u << u) | (1u << v) | (1u << w));
        by_mask_[m] = static_cast<int>(masks_.size());
        masks_.push_back(m);
        pts_.emplace_back(u, v);
      }
    for (unsigned g1 = 0; g1 < 16; ++g1)
      for (unsigned g2 = 0; g2 < 16; ++g2) {
        kernel_line_[g1][g2] = -1;
        if (g1 == 0 || g2 == 0 || g1 == g2) continue;
        std::uint16_t m = 0;
        for (unsigned p = 1; p < 16; ++p)
          if (parity64(g1 & p) == 0 && parity64(g2 & p) == 0) m |= static_cast<std::uint16_t>(1u << p);
        kernel_line_[g1][g2] = by_mask_.at(m);
      }
  }

  std::vector<std::uint16_t> masks_;
  std::vector<std::pair<unsigned, unsigned>> pts_;
  std::map<std::uint16_t, int> by_mask_;
  std::array<std::array<int, 16>, 16> kernel_line_{};
};

/// Alternating 4x4 matrices as Mat4.
inline bool is_alternating4(Mat4 g) { return g == transpose4(g) && (g & kIdentity4) == 0; }

/// The 28 nondegenerate alternating forms on F_2^4.
inline std::vector<Mat4> nondegenerate_forms4() {
  std::vector<Mat4> out;
  for (unsigned g = 0; g < 65536; ++g)
    if (is_alternating4(static_cast<Mat4>(g)) && rank4(static_cast<Mat4>(g)) == 4) out.push_back(static_cast<Mat4>(g));
  return out;
}

/// u^T G v.
inline int form4(Mat4 g, unsigned u, unsigned v) { return parity64(u & apply4(g, v)); }

/// Hyperbolic lines of the form g as a 35-bit labeling.
inline std::uint64_t labeling_of_form(Mat4 g) {
  const auto& lines = SolidLines::instance();
  std::uint64_t x = 0;
  for (int l = 0; l < kLinesPerSolid; ++l) {
    const auto [u, v] = lines.points(l);
    if (form4(g, u, v)) x |= std::uint64_t{1} << l;
  }
  return x;
}

/// The form whose hyperbolic lines are exactly the marked ones, if any.
inline std::optional<Mat4> form_of_labeling(std::uint64_t x) {
  const auto& lines = SolidLines::instance();
  Mat4 g = 0;
  for (unsigned i = 0; i < 4; ++i)
    for (unsigned j = i + 1; j < 4; ++j)
      if ((x >> lines.index_of(1u << i, 1u << j)) & 1u) g |= static_cast<Mat4>((1u << (4 * i + j)) | (1u << (4 * j + i)));
  if (rank4(g) != 4 || labeling_of_form(g) != x) return std::nullopt;
  return g;
}

struct PolarityLabeling {
  SolidConfig config;
  std::vector<std::uint64_t> x;  ///< 35 bits per solid

  /// Gram matrices in each solid's basis.
  std::vector<Mat4> forms() const {
    std::vector<Mat4> g;
    for (auto xs : x) {
      const auto f = form_of_labeling(xs);
      if (!f) throw ValidationError("labeling is not the hyperbolic-line set of a polarity");
      g.push_back(*f);
    }
    return g;
  }

  friend bool operator==(const PolarityLabeling&, const PolarityLabeling&) = default;
  friend auto operator<=>(const PolarityLabeling& a, const PolarityLabeling& b) {
    if (auto c = a.config <=> b.config; c != 0) return c;
    return a.x <=> b.x;
  }
};

/// Local pull-back of a functional on F_2^8 to a solid.
inline unsigned pull_back(const SolidBasis& s, unsigned f) {
  unsigned g = 0;
  for (int j = 0; j < 4; ++j) g |= static_cast<unsigned>(parity64(f & s.column(j))) << j;
  return g;
}

/// One row per codimension-two subspace of F_2^8 (10795 rows), one column per
/// line of each solid (variable 35 s + l).
inline BinMatrix build_parity_system(const SolidConfig& cfg) {
  const auto solids = cfg.solids();
  const auto& lines = SolidLines::instance();
  const std::size_t vars = kLinesPerSolid * solids.size();
  BinMatrix m(0, vars);
  for_each_codim2(8, [&](const FunctionalPair& p) {
    BinVector row(vars);
    for (std::size_t s = 0; s < solids.size(); ++s) {
      const int l = lines.line_of_functionals(pull_back(solids[s], static_cast<unsigned>(p.hi)),
                                              pull_back(solids[s], static_cast<unsigned>(p.lo)));
      if (l >= 0) row.flip(kLinesPerSolid * s + static_cast<std::size_t>(l));
    }
    m.append_row(std::move(row));
  });
  return m;
}

/// The structural filter: with l1 the first marked line, some other marked
/// l2 is met by every remaining marked line in exactly one of l1, l2.
inline bool has_perpendicular_pair(std::uint64_t x) {
  const auto& lines = SolidLines::instance();
  if (x == 0) return false;
  const int l1 = std::countr_zero(x);
  const std::uint16_t m1 = lines.mask(l1);
  for (int l2 = 0; l2 < kLinesPerSolid; ++l2) {
    if (l2 == l1 || !((x >> l2) & 1u)) continue;
    const std::uint16_t m2 = lines.mask(l2);
    if (m1 & m2) continue;
    bool ok = true;
    for (int l = 0; ok && l < kLinesPerSolid; ++l) {
      if (l == l1 || l == l2 || !((x >> l) & 1u)) continue;
      const bool a = (lines.mask(l) & m1) != 0;
      const bool b = (lines.mask(l) & m2) != 0;
      ok = a != b;
    }
    if (ok) return true;
  }
  return false;
}

struct PolaritySearchStats {
  std::size_t kernel_dim = 0;
  std::uint64_t kernel_vectors = 0;
  std::uint64_t passed_count = 0;
  std::uint64_t passed_structure = 0;
  std::uint64_t verified = 0;
};

namespace detail {

/// Kernel basis as rows of 35-bit words per solid.
inline std::vector<std::vector<std::uint64_t>> kernel_words(const BinMatrix& sys, std::size_t solids) {
  const Subspace ker = kernel(sys);
  std::vector<std::vector<std::uint64_t>> out;
  for (const auto& v : ker.basis().row_vectors()) {
    std::vector<std::uint64_t> w(solids, 0);
    for (std::size_t s = 0; s < solids; ++s)
      for (int l = 0; l < kLinesPerSolid; ++l)
        if (v.get(kLinesPerSolid * s + static_cast<std::size_t>(l))) w[s] |= std::uint64_t{1} << l;
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace detail

/// Full check of a labeling: a polarity on every solid and the parity
/// condition on every codimension-two subspace.
inline bool verify_labeling(const PolarityLabeling& lab) {
  const auto solids = lab.config.solids();
  if (lab.x.size() != solids.size()) return false;
  for (auto xs : lab.x)
    if (!form_of_labeling(xs)) return false;
  const auto& lines = SolidLines::instance();
  bool ok = true;
  for_each_codim2(8, [&](const FunctionalPair& p) {
    int par = 0;
    for (std::size_t s = 0; s < solids.size(); ++s) {
      const int l = lines.line_of_functionals(pull_back(solids[s], static_cast<unsigned>(p.hi)),
                                              pull_back(solids[s], static_cast<unsigned>(p.lo)));
      if (l >= 0) par ^= static_cast<int>((lab.x[s] >> l) & 1u);
    }
    if (par) ok = false;
  });
  return ok;
}

/// Parity route: Gray-code walk over the kernel of the parity system with the
/// 20-per-solid count, the perpendicular-pair filter, then full verification.
inline std::vector<PolarityLabeling> polarity_solutions(const SolidConfig& cfg, PolaritySearchStats* stats = nullptr,
                                                        unsigned max_kernel_dim = 40) {
  const std::size_t ns = cfg.n();
  const auto basis = detail::kernel_words(build_parity_system(cfg), ns);
  PolaritySearchStats st;
  st.kernel_dim = basis.size();
  if (basis.size() > max_kernel_dim)
    throw BudgetExceeded("parity kernel has dimension " + std::to_string(basis.size()));
  std::vector<PolarityLabeling> out;
  std::vector<std::uint64_t> cur(ns, 0);
  const std::uint64_t total = std::uint64_t{1} << basis.size();
  for (std::uint64_t i = 1; i < total; ++i) {
    const auto& flip = basis[static_cast<std::size_t>(std::countr_zero(i))];
    for (std::size_t s = 0; s < ns; ++s) cur[s] ^= flip[s];
    ++st.kernel_vectors;
    bool ok = true;
    for (std::size_t s = 0; ok && s < ns; ++s) ok = std::popcount(cur[s]) == 20;
    if (!ok) continue;
    ++st.passed_count;
    for (std::size_t s = 0; ok && s < ns; ++s) ok = has_perpendicular_pair(cur[s]);
    if (!ok) continue;
    ++st.passed_structure;
    PolarityLabeling lab{cfg, cur};
    if (!verify_labeling(lab)) continue;
    ++st.verified;
    out.push_back(std::move(lab));
  }
  std::sort(out.begin(), out.end());
  if (stats) *stats = st;
  return out;
}

/// M G M^T for an 8x4 basis M and a 4x4 matrix G.
inline Mat8 embed_form(const SolidBasis& s, Mat4 g) {
  const Mat8 m = from_blocks(s.x, 0, s.y, 0);
  return mul8(mul8(m, from_blocks(g, 0, 0, 0)), transpose8(m));
}

/// Gram route: solve the 28 linear conditions on (H_1, ..., H_n) and keep
/// tuples of nondegenerate H_s.
inline std::vector<PolarityLabeling> polarity_solutions_by_forms(const SolidConfig& cfg) {
  const auto solids = cfg.solids();
  const std::size_t ns = solids.size();
  // Basis of alternating 4x4 matrices: E_ij + E_ji for i < j.
  std::vector<Mat4> alt;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) alt.push_back(static_cast<Mat4>((1u << (4 * i + j)) | (1u << (4 * j + i))));
  // Column (6 s + k) of the linear map holds the upper triangle of M_s E_k M_s^T.
  const std::size_t vars = 6 * ns;
  BinMatrix map(28, vars);
  for (std::size_t s = 0; s < ns; ++s)
    for (std::size_t k = 0; k < 6; ++k) {
      const Mat8 img = embed_form(solids[s], alt[k]);
      std::size_t row = 0;
      for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j, ++row)
          if ((img >> (8 * i + j)) & 1u) map.set(row, 6 * s + k);
    }
  const Subspace ker = kernel(map);
  std::vector<PolarityLabeling> out;
  for (const auto& v : ker.elements()) {
    PolarityLabeling lab{cfg, {}};
    bool ok = true;
    for (std::size_t s = 0; ok && s < ns; ++s) {
      Mat4 h = 0;
      for (std::size_t k = 0; k < 6; ++k)
        if (v.get(6 * s + k)) h ^= alt[k];
      const Mat4 g = inverse4(h);
      ok = g != 0;
      if (ok) lab.x.push_back(labeling_of_form(g));
    }
    if (ok) out.push_back(std::move(lab));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Basis-free description of a labeled configuration: for each solid the
/// 8x8 matrix M G^{-1} M^T, whose column space is the solid.
inline std::vector<Mat8> polarity_invariants(const PolarityLabeling& lab) {
  const auto solids = lab.config.solids();
  const auto g = lab.forms();
  std::vector<Mat8> k;
  for (std::size_t s = 0; s < solids.size(); ++s) k.push_back(embed_form(solids[s], inverse4(g[s])));
  std::sort(k.begin(), k.end());
  return k;
}

/// True when some projective transformation permuting the solids carries one
/// labeling onto the other. Labelings on different configurations are never
/// equivalent.
inline bool solutions_equivalent(const PolarityLabeling& a, const PolarityLabeling& b,
                                 const std::vector<SolidSymmetry>* stabilizer = nullptr) {
  if (!(a.config == b.config)) return false;
  const auto ka = polarity_invariants(a);
  const auto kb = polarity_invariants(b);
  std::vector<SolidSymmetry> local;
  if (!stabilizer) {
    local = configuration_stabilizer(a.config);
    stabilizer = &local;
  }
  std::vector<Mat8> img(ka.size());
  for (const auto& sym : *stabilizer) {
    const Mat8 gt = transpose8(sym.g);
    for (std::size_t i = 0; i < ka.size(); ++i) img[i] = mul8(mul8(sym.g, ka[i]), gt);
    std::sort(img.begin(), img.end());
    if (img == kb) return true;
  }
  return false;
}

/// Classes of a list of labelings under solutions_equivalent.
inline std::size_t count_equivalence_classes(const std::vector<PolarityLabeling>& labs) {
  std::vector<std::size_t> reps;
  std::map<SolidConfig, std::vector<SolidSymmetry>> stabs;
  for (std::size_t i = 0; i < labs.size(); ++i) {
    auto it = stabs.find(labs[i].config);
    if (it == stabs.end()) it = stabs.emplace(labs[i].config, configuration_stabilizer(labs[i].config)).first;
    bool found = false;
    for (std::size_t r : reps)
      if (solutions_equivalent(labs[r], labs[i], &it->second)) {
        found = true;
        break;
      }
    if (!found) reps.push_back(i);
  }
  return reps.size();
}

/// Gram matrix of v1 w2 + v2 w1 + v3 w4 + v4 w3.
inline constexpr Mat4 kPairedForm4 = 0x4812;

/// Some S with S^T G S = kPairedForm4, i.e. columns forming a symplectic
/// basis (c0, c1), (c2, c3) for G.
inline Mat4 symplectic_basis(Mat4 g) {
  static const std::map<Mat4, Mat4> table = [] {
    std::map<Mat4, Mat4> t;
    for (Mat4 s : GL4::instance().elements()) {
      const Mat4 si = inverse4(s);
      t.emplace(mul4(mul4(transpose4(si), kPairedForm4), si), s);
    }
    return t;
  }();
  const auto it = table.find(g);
  if (it == table.end()) throw std::invalid_argument("form is degenerate");
  return it->second;
}

/// Binary stabiliser matrix (8 rows, 2n binary qubits in n pairs) whose
/// blocks are the solids with their polarities: solid s contributes the
/// symplectic basis columns c0, c2 to the left half and c1, c3 to the right.
inline StabiliserMatrix stabiliser_matrix_of(const PolarityLabeling& lab) {
  const auto solids = lab.config.solids();
  const auto g = lab.forms();
  const std::size_t nb = 2 * solids.size();
  StabiliserMatrix m(FieldSpec(1), nb, 8);
  for (std::size_t s = 0; s < solids.size(); ++s) {
    const Mat4 sb = symplectic_basis(g[s]);
    const SolidBasis basis{mul4(solids[s].x, sb), mul4(solids[s].y, sb)};
    for (int j = 0; j < 4; ++j) {
      const std::size_t col = (j % 2 == 0 ? 0 : nb) + 2 * s + static_cast<std::size_t>(j / 2);
      const unsigned c = basis.column(j);
      for (std::size_t row = 0; row < 8; ++row)
        if ((c >> row) & 1u) m.set(row, col, FieldElement(1));
    }
  }
  return m;
}

}  // namespace stabgeom
