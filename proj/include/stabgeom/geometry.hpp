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

// Quantum sets of symplectic polar spaces.
//
// The binary expansion G' of an r x 2n stabiliser matrix over GF(2^h) is read
// column-wise: column j is a point of F_2^r. Quqit i contributes the 2h
// columns a_{i,1..h}, b_{i,1..h}; their span is the block pi_i and the pairs
// {a_{i,j}, b_{i,j}} span its h distinguished lines. Each block carries the
// symplectic form for which those lines are mutually perpendicular and
// hyperbolic. In block coordinates (a_1..a_h, b_1..b_h) that form is
//
//   f(v, w) = sum_j v_j w_{h+j} + v_{h+j} w_j.
//
// Ambient points are packed into uint64 (bit i = row i), so r <= 64; block
// coordinates are packed into uint32 (2h <= 16).

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "stabgeom/errors.hpp"
#include "stabgeom/f2linalg.hpp"
#include "stabgeom/symcode.hpp"

namespace stabgeom {

using AmbientVector = std::uint64_t;
using LocalVector = std::uint32_t;

/// Alternating bilinear form on F_2^dim given by a symmetric Gram matrix with
/// zero diagonal.
class SymplecticForm {
 public:
  SymplecticForm() = default;

  static SymplecticForm standard(int h) {
    std::vector<LocalVector> g(static_cast<std::size_t>(2 * h), 0);
    for (int j = 0; j < h; ++j) {
      g[static_cast<std::size_t>(j)] |= LocalVector{1} << (h + j);
      g[static_cast<std::size_t>(h + j)] |= LocalVector{1} << j;
    }
    return SymplecticForm(std::move(g));
  }

  /// Row i of `gram` holds entries G(i, *) as bits.
  explicit SymplecticForm(std::vector<LocalVector> gram) : gram_(std::move(gram)) {
    const auto d = gram_.size();
    if (d > 32) throw std::invalid_argument("form dimension above 32");
    for (std::size_t i = 0; i < d; ++i) {
      if ((gram_[i] >> i) & 1u) throw std::invalid_argument("Gram matrix has a nonzero diagonal entry");
      if (d < 32 && (gram_[i] >> d) != 0) throw std::invalid_argument("Gram row too wide");
      for (std::size_t j = 0; j < d; ++j)
        if (((gram_[i] >> j) & 1u) != ((gram_[j] >> i) & 1u))
          throw std::invalid_argument("Gram matrix is not symmetric");
    }
    compute_inverse();
  }

  int dim() const { return static_cast<int>(gram_.size()); }
  const std::vector<LocalVector>& gram() const { return gram_; }
  bool is_nondegenerate() const { return !inverse_.empty() || gram_.empty(); }

  /// u^T G v.
  int eval(LocalVector u, LocalVector v) const { return parity64(u & apply(v)); }

  /// G v.
  LocalVector apply(LocalVector v) const {
    LocalVector out = 0;
    for (std::size_t i = 0; i < gram_.size(); ++i) out |= static_cast<LocalVector>(parity64(gram_[i] & v)) << i;
    return out;
  }

  /// g1^T G^{-1} g2 for functionals g1, g2; requires a nondegenerate form.
  int dual_eval(LocalVector g1, LocalVector g2) const {
    LocalVector w = 0;
    for (std::size_t i = 0; i < inverse_.size(); ++i) w |= static_cast<LocalVector>(parity64(inverse_[i] & g2)) << i;
    return parity64(g1 & w);
  }

  friend bool operator==(const SymplecticForm& a, const SymplecticForm& b) { return a.gram_ == b.gram_; }

 private:
  void compute_inverse() {
    const std::size_t d = gram_.size();
    std::vector<std::uint64_t> aug(d);
    for (std::size_t i = 0; i < d; ++i) aug[i] = std::uint64_t{gram_[i]} | (std::uint64_t{1} << (32 + i));
    for (std::size_t c = 0; c < d; ++c) {
      std::size_t p = c;
      while (p < d && !((aug[p] >> c) & 1u)) ++p;
      if (p == d) {
        inverse_.clear();
        return;
      }
      std::swap(aug[p], aug[c]);
      for (std::size_t i = 0; i < d; ++i)
        if (i != c && ((aug[i] >> c) & 1u)) aug[i] ^= aug[c];
    }
    inverse_.resize(d);
    for (std::size_t i = 0; i < d; ++i) inverse_[i] = static_cast<LocalVector>(aug[i] >> 32);
  }

  std::vector<LocalVector> gram_;
  std::vector<LocalVector> inverse_;
};

enum class LineType { isotropic, hyperbolic };

inline const char* to_string(LineType t) { return t == LineType::isotropic ? "isotropic" : "hyperbolic"; }

/// Type of the line spanned by independent u, v (block coordinates).
inline LineType classify_line(LocalVector u, LocalVector v, const SymplecticForm& f) {
  if (u == 0 || v == 0 || u == v) throw std::invalid_argument("classify_line needs two independent vectors");
  return f.eval(u, v) ? LineType::hyperbolic : LineType::isotropic;
}

inline BinVector to_binvector(std::size_t len, LocalVector v) { return BinVector::from_u64(len, v); }

/// S^perp with respect to f; S lives in F_2^{f.dim()}.
inline Subspace perp(const Subspace& s, const SymplecticForm& f) {
  const auto d = static_cast<std::size_t>(f.dim());
  if (s.ambient_dim() != d) throw std::invalid_argument("subspace and form dimensions differ");
  BinMatrix eqs(0, d);
  for (const auto& row : s.basis().row_vectors())
    eqs.append_row(to_binvector(d, f.apply(static_cast<LocalVector>(row.to_u64()))));
  return kernel(eqs);
}

inline bool is_totally_isotropic(const Subspace& s, const SymplecticForm& f) {
  const auto& rows = s.basis().row_vectors();
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = i + 1; j < rows.size(); ++j)
      if (f.eval(static_cast<LocalVector>(rows[i].to_u64()), static_cast<LocalVector>(rows[j].to_u64()))) return false;
  return true;
}

/// Same classification through the criterion "hyperbolic iff l meets l^perp
/// only in zero".
inline LineType classify_line_by_perp(const Subspace& line, const SymplecticForm& f) {
  if (line.dim() != 2) throw std::invalid_argument("not a line");
  return intersect(line, perp(line, f)).dim() == 0 ? LineType::hyperbolic : LineType::isotropic;
}

struct LineCensus {
  std::size_t isotropic = 0;
  std::size_t hyperbolic = 0;
};

/// Counts of the two line types over every line of PG(dim-1, 2).
inline LineCensus line_census(const SymplecticForm& f) {
  LineCensus c;
  const LocalVector top = LocalVector{1} << f.dim();
  for (LocalVector u = 1; u < top; ++u)
    for (LocalVector v = u + 1; v < top; ++v) {
      if ((u ^ v) < v) continue;  // count each line once via its ordered points u < v < u^v
      if (classify_line(u, v, f) == LineType::hyperbolic) ++c.hyperbolic;
      else ++c.isotropic;
    }
  return c;
}

/// One block pi_i: 2h ambient points forming a basis, and its form.
struct Block {
  std::vector<AmbientVector> basis;
  SymplecticForm form;

  int h() const { return static_cast<int>(basis.size() / 2); }

  AmbientVector point(LocalVector coords) const {
    AmbientVector p = 0;
    for (std::size_t j = 0; j < basis.size(); ++j)
      if ((coords >> j) & 1u) p ^= basis[j];
    return p;
  }

  /// Functional f restricted to the block, in block coordinates.
  LocalVector pull_back(AmbientVector functional) const {
    LocalVector g = 0;
    for (std::size_t j = 0; j < basis.size(); ++j)
      g |= static_cast<LocalVector>(parity64(functional & basis[j])) << j;
    return g;
  }

  /// Distinguished line j, as a pair of block-coordinate vectors.
  std::pair<LocalVector, LocalVector> line(int j) const {
    return {LocalVector{1} << j, LocalVector{1} << (h() + j)};
  }

  std::size_t rank() const { return packed_rank(basis); }
};

/// n blocks in F_2^r.
struct PolarSpaceSet {
  unsigned ambient_dim = 0;
  int h = 1;
  std::vector<Block> blocks;

  std::size_t n() const { return blocks.size(); }
  /// hk = hn - r.
  long long hk() const { return static_cast<long long>(h) * static_cast<long long>(n()) - ambient_dim; }
};

/// Blocks of a binary stabiliser matrix grouped h binary qubits at a time.
inline PolarSpaceSet blocks_from_matrix(const StabiliserMatrix& binary, int h) {
  if (binary.h() != 1) throw std::invalid_argument("blocks_from_matrix needs a binary matrix");
  if (h < 1 || binary.n() % static_cast<std::size_t>(h) != 0)
    throw std::invalid_argument("h must divide the number of binary qubits");
  if (binary.num_rows() > 64) throw std::invalid_argument("ambient dimension above 64");
  const std::size_t nb = binary.n();
  auto column = [&](std::size_t c) {
    AmbientVector p = 0;
    for (std::size_t i = 0; i < binary.num_rows(); ++i)
      if (!binary.at(i, c).is_zero()) p |= AmbientVector{1} << i;
    return p;
  };
  PolarSpaceSet x;
  x.ambient_dim = static_cast<unsigned>(binary.num_rows());
  x.h = h;
  const auto uh = static_cast<std::size_t>(h);
  for (std::size_t i = 0; i < nb / uh; ++i) {
    Block b;
    for (std::size_t j = 0; j < uh; ++j) b.basis.push_back(column(uh * i + j));
    for (std::size_t j = 0; j < uh; ++j) b.basis.push_back(column(nb + uh * i + j));
    b.form = SymplecticForm::standard(h);
    if (b.rank() != 2 * uh)
      throw ValidationError("block " + std::to_string(i + 1) + " has rank " + std::to_string(b.rank()) + " < " +
                            std::to_string(2 * uh));
    x.blocks.push_back(std::move(b));
  }
  return x;
}

/// Inverse of blocks_from_matrix for blocks carrying the standard form.
inline StabiliserMatrix matrix_from_blocks(const PolarSpaceSet& x) {
  const auto uh = static_cast<std::size_t>(x.h);
  const std::size_t nb = x.n() * uh;
  StabiliserMatrix out(FieldSpec(1), nb, x.ambient_dim);
  for (std::size_t i = 0; i < x.n(); ++i) {
    if (!(x.blocks[i].form == SymplecticForm::standard(x.h)))
      throw std::invalid_argument("matrix_from_blocks needs standard forms");
    for (std::size_t j = 0; j < 2 * uh; ++j) {
      const std::size_t col = j < uh ? uh * i + j : nb + uh * i + (j - uh);
      for (unsigned row = 0; row < x.ambient_dim; ++row)
        if ((x.blocks[i].basis[j] >> row) & 1u) out.set(row, col, FieldElement(1));
    }
  }
  return out;
}

struct QuantumSetReport {
  bool blocks_full_rank = true;
  bool forms_nondegenerate = true;
  bool spans = true;
  bool even_condition = true;
  std::size_t subspaces_checked = 0;
  std::optional<FunctionalPair> violation;  ///< first failing codim-2 space

  bool ok() const { return blocks_full_rank && forms_nondegenerate && spans && even_condition; }
};

/// Checks the blocks span F_2^r and that every codimension-two subspace pi
/// meets an even number of blocks in a subspace whose perp is not totally
/// isotropic. Intersections of codimension 0 or 1 inside a block have a
/// totally isotropic perp and never contribute.
///
/// For pi = ker(f1) n ker(f2) the pull-backs g1, g2 cut out pi n block, whose
/// perp is spanned by G^{-1} g1 and G^{-1} g2; it is totally isotropic iff
/// g1^T G^{-1} g2 = 0.
inline QuantumSetReport verify_quantum_set(const PolarSpaceSet& x) {
  QuantumSetReport rep;
  std::vector<AmbientVector> all;
  for (const auto& b : x.blocks) {
    if (b.rank() != b.basis.size()) rep.blocks_full_rank = false;
    if (!b.form.is_nondegenerate() || b.form.dim() != static_cast<int>(b.basis.size())) rep.forms_nondegenerate = false;
    all.insert(all.end(), b.basis.begin(), b.basis.end());
  }
  rep.spans = packed_rank(all) == x.ambient_dim;
  if (!rep.ok() || x.ambient_dim < 2) return rep;
  for_each_codim2(x.ambient_dim, [&](const FunctionalPair& p) {
    ++rep.subspaces_checked;
    int parity = 0;
    for (const auto& b : x.blocks) parity ^= b.form.dual_eval(b.pull_back(p.hi), b.pull_back(p.lo));
    if (parity != 0 && !rep.violation) {
      rep.even_condition = false;
      rep.violation = p;
    }
  });
  return rep;
}

struct GeometricDistanceOptions {
  /// Maximum number of point tuples to examine.
  std::uint64_t budget = std::uint64_t{1} << 32;
};

namespace detail {

struct BlockPoints {
  std::vector<AmbientVector> points;      // nonzero points; points[c - 1] has coordinates c
  std::vector<AmbientVector> annihilator;  // v in block iff all parities vanish
};

inline BlockPoints block_points(const Block& b, unsigned r) {
  BlockPoints bp;
  const LocalVector top = LocalVector{1} << b.basis.size();
  for (LocalVector c = 1; c < top; ++c) bp.points.push_back(b.point(c));
  BinMatrix gens(0, r);
  for (auto v : b.basis) gens.append_row(BinVector::from_u64(r, v));
  const BinMatrix ann = Subspace::span_of(gens).annihilator();
  for (const auto& f : ann.row_vectors()) bp.annihilator.push_back(f.to_u64());
  return bp;
}

inline bool in_block(const BlockPoints& bp, AmbientVector v) {
  for (auto f : bp.annihilator)
    if (parity64(f & v)) return false;
  return true;
}


/// Block coordinates of a point known to lie in block i.
inline LocalVector coords_in_block(const BlockPoints& bp, AmbientVector v) {
  for (std::size_t c = 0; c < bp.points.size(); ++c)
    if (bp.points[c] == v) return static_cast<LocalVector>(c + 1);
  return 0;
}

}  // namespace detail

/// Smallest t such that some t points, one in each of t distinct blocks, sum
/// to zero; when hk > 0 the dependency additionally must not come from a
/// stabiliser element. Returns 0 if no such tuple exists.
///
/// A dependency with points p_i (block coordinates c_i) comes from a
/// stabiliser element exactly when some functional y on the ambient space
/// satisfies y(e_ij) = w_i(c_i, j) on every block basis vector e_ij, with
/// c_i = 0 on blocks outside the tuple.
inline int geometric_min_distance(const PolarSpaceSet& x, const GeometricDistanceOptions& opts = {}) {
  const unsigned r = x.ambient_dim;
  const std::size_t n = x.n();
  const bool logical_only = x.hk() > 0;
  std::vector<detail::BlockPoints> bps;
  for (const auto& b : x.blocks) bps.push_back(detail::block_points(b, r));

  std::uint64_t visited = 0;
  std::vector<std::size_t> chosen;
  std::vector<AmbientVector> picked;

  auto is_logical = [&](const std::vector<std::size_t>& blocks, const std::vector<AmbientVector>& pts) {
    BinMatrix eqs(0, r);
    std::vector<bool> bits;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& b = x.blocks[i];
      LocalVector c = 0;
      const auto it = std::find(blocks.begin(), blocks.end(), i);
      if (it != blocks.end()) c = detail::coords_in_block(bps[i], pts[static_cast<std::size_t>(it - blocks.begin())]);
      for (std::size_t j = 0; j < b.basis.size(); ++j) {
        eqs.append_row(BinVector::from_u64(r, b.basis[j]));
        bits.push_back(b.form.eval(c, LocalVector{1} << j) != 0);
      }
    }
    BinVector target(bits.size());
    for (std::size_t k = 0; k < bits.size(); ++k) target.set(k, bits[k]);
    return !solve(eqs, target).has_value();
  };

  // Depth-first over block subsets of size t and points in all but the last.
  std::function<bool(std::size_t, std::size_t, AmbientVector)> rec = [&](std::size_t t, std::size_t start,
                                                                         AmbientVector sum) -> bool {
    if (chosen.size() + 1 == t) {
      if (sum == 0) return false;
      for (std::size_t last = start; last < n; ++last) {
        if (++visited > opts.budget) throw BudgetExceeded("geometric distance search exceeded its budget");
        if (!detail::in_block(bps[last], sum)) continue;
        if (!logical_only) return true;
        chosen.push_back(last);
        picked.push_back(sum);
        const bool ok = is_logical(chosen, picked);
        chosen.pop_back();
        picked.pop_back();
        if (ok) return true;
      }
      return false;
    }
    for (std::size_t i = start; i + (t - chosen.size()) <= n; ++i) {
      chosen.push_back(i);
      for (auto p : bps[i].points) {
        if (++visited > opts.budget) throw BudgetExceeded("geometric distance search exceeded its budget");
        picked.push_back(p);
        const bool found = rec(t, i + 1, sum ^ p);
        picked.pop_back();
        if (found) {
          chosen.pop_back();
          return true;
        }
      }
      chosen.pop_back();
    }
    return false;
  };

  for (std::size_t t = 1; t <= n; ++t) {
    if (t == 1) {
      // A single nonzero point is never dependent once blocks have full rank.
      continue;
    }
    chosen.clear();
    picked.clear();
    if (rec(t, 0, 0)) return static_cast<int>(t);
  }
  return 0;
}

/// Quotient by block i: the remaining blocks in F_2^{r-2h}, forms unchanged.
inline PolarSpaceSet project_from_block(const PolarSpaceSet& x, std::size_t i) {
  if (x.n() < 2) throw std::invalid_argument("projection needs at least two blocks");
  if (i >= x.n()) throw std::invalid_argument("block index out of range");
  const unsigned r = x.ambient_dim;
  BinMatrix gens(0, r);
  for (auto v : x.blocks[i].basis) gens.append_row(BinVector::from_u64(r, v));
  const QuotientMap q(Subspace::span_of(gens));
  PolarSpaceSet out;
  out.ambient_dim = static_cast<unsigned>(q.target_dim());
  out.h = x.h;
  for (std::size_t j = 0; j < x.n(); ++j) {
    if (j == i) continue;
    Block b;
    b.form = x.blocks[j].form;
    for (auto v : x.blocks[j].basis) b.basis.push_back(q.apply(BinVector::from_u64(r, v)).to_u64());
    if (b.rank() != b.basis.size())
      throw ValidationError("projected block " + std::to_string(j + 1) + " is rank-deficient");
    out.blocks.push_back(std::move(b));
  }
  return out;
}

struct EvenSkewReport {
  bool holds = true;
  std::size_t subspaces_checked = 0;
  std::size_t totally_isotropic_perps = 0;
};

/// Exhaustive check, inside one block with the standard form of rank h, that
/// a subspace of codimension <= 2 is skew to an even number of the lines
/// <e_j, e_{h+j}> exactly when its perp is totally isotropic. Skewness and
/// perps are computed with generic subspace operations, not the Gram shortcut
/// used by verify_quantum_set.
inline EvenSkewReport check_even_skew_theorem(int h) {
  const auto d = static_cast<std::size_t>(2 * h);
  const SymplecticForm f = SymplecticForm::standard(h);
  std::vector<Subspace> lines;
  for (int j = 0; j < h; ++j) {
    const auto [u, v] = std::pair{LocalVector{1} << j, LocalVector{1} << (h + j)};
    lines.push_back(Subspace::span_of(d, {to_binvector(d, u), to_binvector(d, v)}));
  }
  EvenSkewReport rep;
  auto check = [&](const Subspace& pi) {
    ++rep.subspaces_checked;
    std::size_t skew = 0;
    for (const auto& l : lines)
      if (intersect(pi, l).dim() == 0) ++skew;
    const bool ti = is_totally_isotropic(perp(pi, f), f);
    if (ti) ++rep.totally_isotropic_perps;
    if ((skew % 2 == 0) != ti) rep.holds = false;
  };
  check(Subspace::full(d));
  for (LocalVector g = 1; g < (LocalVector{1} << d); ++g) {
    BinMatrix eq(1, d);
    eq.row(0) = to_binvector(d, g);
    check(kernel(eq));
  }
  if (d >= 2) for_each_codim2(static_cast<unsigned>(d), [&](const FunctionalPair& p) { check(codim2_subspace(static_cast<unsigned>(d), p)); });
  return rep;
}

/// Columns of a 2h x 2h matrix S (bit i of cols[j] = S(i, j)).
using LocalMatrix = std::vector<LocalVector>;

/// True when S^T G S = G, i.e. f(S u, S v) = f(u, v).
inline bool preserves_form(const LocalMatrix& cols, const SymplecticForm& f) {
  for (std::size_t i = 0; i < cols.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      if (f.eval(cols[i], cols[j]) != f.eval(LocalVector{1} << i, LocalVector{1} << j)) return false;
  return true;
}

/// Product of random symplectic transvections x -> x + f(x, v) v; these
/// generate the full symplectic group.
template <class Rng>
LocalMatrix random_symplectic_matrix(const SymplecticForm& f, Rng& rng) {
  const auto d = static_cast<std::size_t>(f.dim());
  LocalMatrix cols(d);
  for (std::size_t j = 0; j < d; ++j) cols[j] = LocalVector{1} << j;
  std::uniform_int_distribution<LocalVector> pick(1, (LocalVector{1} << d) - 1);
  const std::size_t steps = 4 * d * d;
  for (std::size_t s = 0; s < steps; ++s) {
    const LocalVector v = pick(rng);
    for (auto& c : cols)
      if (f.eval(c, v)) c ^= v;
  }
  return cols;
}

/// Block whose j-th basis vector is sum_i S(i, j) basis_i; the form is kept,
/// so the polarity is unchanged exactly when S preserves the form.
inline Block change_basis(const Block& b, const LocalMatrix& cols) {
  Block out;
  out.form = b.form;
  for (auto c : cols) out.basis.push_back(b.point(c));
  return out;
}

}  // namespace stabgeom
