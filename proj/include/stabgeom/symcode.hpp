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

// Stabiliser matrices over GF(2^h) and their binary shadows.
//
// A stabiliser matrix is an r x 2n matrix (A | B) over GF(2^h); row j is the
// image (a_1..a_n | b_1..b_n) of the j-th generator X(a_1)Z(b_1) x ... . Rows
// of a stabiliser commute, which is self-orthogonality under the
// trace-symplectic product
//
//   <(a|b), (a'|b')>_s = sum_i tr(a_i b'_i + a'_i b_i).
//
// expand() replaces every column by its h coordinates in a trace-orthogonal
// basis. Field column i of the A half becomes binary columns h*i .. h*i+h-1 of
// the A half, and likewise for B, so binary qubit h*i + j belongs to quqit i.

#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "stabgeom/errors.hpp"
#include "stabgeom/f2linalg.hpp"
#include "stabgeom/gf2h.hpp"

namespace stabgeom {

using FieldVector = std::vector<FieldElement>;

class StabiliserMatrix {
 public:
  StabiliserMatrix() = default;

  /// r x 2n zero matrix.
  StabiliserMatrix(FieldSpec field, std::size_t n, std::size_t r)
      : field_(std::move(field)), n_(n), r_(r), entries_(r * 2 * n) {}

  StabiliserMatrix(FieldSpec field, std::size_t n, const std::vector<FieldVector>& rows)
      : StabiliserMatrix(std::move(field), n, rows.size()) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != 2 * n) throw std::invalid_argument("row " + std::to_string(i + 1) + " has wrong length");
      for (std::size_t j = 0; j < 2 * n; ++j) set(i, j, rows[i][j]);
    }
  }

  /// Rows of integers 0..q-1 in the serialisation convention of gf2h.hpp.
  static StabiliserMatrix from_ints(const FieldSpec& field, std::size_t n,
                                    const std::vector<std::vector<unsigned>>& rows) {
    std::vector<FieldVector> conv;
    for (const auto& r : rows) {
      FieldVector v;
      for (auto x : r) v.emplace_back(x);
      conv.push_back(std::move(v));
    }
    return StabiliserMatrix(field, n, conv);
  }

  /// Binary matrix with 2n columns read as an (A | B) stabiliser matrix.
  static StabiliserMatrix from_binary(const BinMatrix& m) {
    if (m.cols() % 2 != 0) throw std::invalid_argument("binary stabiliser matrix needs an even column count");
    StabiliserMatrix out(FieldSpec(1), m.cols() / 2, m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (m.get(i, j)) out.set(i, j, FieldElement(1));
    return out;
  }

  const FieldSpec& field() const { return field_; }
  int h() const { return field_.degree(); }
  std::size_t n() const { return n_; }
  std::size_t num_rows() const { return r_; }

  FieldElement at(std::size_t i, std::size_t j) const { return entries_[i * 2 * n_ + j]; }
  void set(std::size_t i, std::size_t j, FieldElement x) {
    if (!field_.contains(x)) throw std::invalid_argument("entry outside the field");
    entries_[i * 2 * n_ + j] = x;
  }
  std::span<const FieldElement> row(std::size_t i) const {
    return {entries_.data() + i * 2 * n_, 2 * n_};
  }

  /// Only for q = 2.
  BinMatrix to_binary() const {
    if (h() != 1) throw std::invalid_argument("to_binary needs a matrix over GF(2)");
    BinMatrix m(r_, 2 * n_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < 2 * n_; ++j)
        if (!at(i, j).is_zero()) m.set(i, j);
    return m;
  }

  friend bool operator==(const StabiliserMatrix&, const StabiliserMatrix&) = default;

 private:
  FieldSpec field_;
  std::size_t n_ = 0;
  std::size_t r_ = 0;
  std::vector<FieldElement> entries_;
};

inline int trace_symplectic_product(const FieldSpec& field, std::span<const FieldElement> u,
                                    std::span<const FieldElement> v) {
  if (u.size() != v.size() || u.size() % 2 != 0)
    throw std::invalid_argument("trace-symplectic product needs equal even lengths");
  const std::size_t n = u.size() / 2;
  FieldElement acc{};
  for (std::size_t i = 0; i < n; ++i) {
    if (!field.contains(u[i]) || !field.contains(v[i]) || !field.contains(u[n + i]) || !field.contains(v[n + i]))
      throw std::invalid_argument("vector entry outside the field");
    acc += field.mul(u[i], v[n + i]) + field.mul(v[i], u[n + i]);
  }
  return field.trace(acc);
}

/// Number of positions i with (a_i, b_i) != (0, 0).
inline std::size_t symplectic_weight(std::span<const FieldElement> v) {
  if (v.size() % 2 != 0) throw std::invalid_argument("symplectic weight needs an even length");
  const std::size_t n = v.size() / 2;
  std::size_t w = 0;
  for (std::size_t i = 0; i < n; ++i) w += (!v[i].is_zero() || !v[n + i].is_zero()) ? 1 : 0;
  return w;
}

/// First (i, j), i <= j, whose rows do not commute.
inline std::optional<std::pair<std::size_t, std::size_t>> first_non_commuting_pair(const StabiliserMatrix& m) {
  for (std::size_t i = 0; i < m.num_rows(); ++i)
    for (std::size_t j = i + 1; j < m.num_rows(); ++j)
      if (trace_symplectic_product(m.field(), m.row(i), m.row(j)) != 0) return std::pair{i, j};
  return std::nullopt;
}

inline bool is_self_orthogonal(const StabiliserMatrix& m) { return !first_non_commuting_pair(m); }

/// GF(2)-rank of the rows (the generated additive group has size 2^rank).
inline std::size_t gf2_rank(const StabiliserMatrix& m) {
  const auto h = static_cast<std::size_t>(m.h());
  BinMatrix bits(m.num_rows(), 2 * m.n() * h);
  for (std::size_t i = 0; i < m.num_rows(); ++i)
    for (std::size_t j = 0; j < 2 * m.n(); ++j)
      for (std::size_t b = 0; b < h; ++b)
        if ((m.at(i, j).value >> b) & 1u) bits.set(i, j * h + b);
  return rank(bits);
}

/// Throws ValidationError unless m is a stabiliser matrix: commuting,
/// GF(2)-independent rows with r <= hn. Row numbers in messages are 1-based.
inline void validate_stabiliser(const StabiliserMatrix& m) {
  if (auto p = first_non_commuting_pair(m))
    throw ValidationError("rows " + std::to_string(p->first + 1) + " and " + std::to_string(p->second + 1) +
                          " are not trace-symplectic orthogonal");
  if (gf2_rank(m) != m.num_rows()) throw ValidationError("rows are not linearly independent over GF(2)");
  if (m.num_rows() > static_cast<std::size_t>(m.h()) * m.n())
    throw ValidationError("more than hn generators");
}

/// Image of the matrix under the coordinate map of `basis`.
inline StabiliserMatrix expand(const StabiliserMatrix& m, const TraceBasis& basis) {
  if (!(basis.field() == m.field())) throw std::invalid_argument("basis belongs to a different field");
  const auto h = static_cast<std::size_t>(m.h());
  const std::size_t n = m.n();
  StabiliserMatrix out(FieldSpec(1), h * n, m.num_rows());
  for (std::size_t i = 0; i < m.num_rows(); ++i) {
    for (std::size_t col = 0; col < n; ++col) {
      const auto a = basis.coordinates(m.at(i, col));
      const auto b = basis.coordinates(m.at(i, n + col));
      for (std::size_t j = 0; j < h; ++j) {
        out.set(i, h * col + j, FieldElement((a >> j) & 1u));
        out.set(i, h * n + h * col + j, FieldElement((b >> j) & 1u));
      }
    }
  }
  return out;
}

/// groups[g] lists the binary qubits merged into quqit g, in basis order.
using Partition = std::vector<std::vector<std::size_t>>;

/// Consecutive groups {0..h-1}, {h..2h-1}, ...
inline Partition aligned_partition(std::size_t binary_qubits, std::size_t h) {
  if (h == 0 || binary_qubits % h != 0) throw std::invalid_argument("h must divide the number of qubits");
  Partition p(binary_qubits / h);
  for (std::size_t i = 0; i < binary_qubits; ++i) p[i / h].push_back(i);
  return p;
}

struct MergeOptions {
  /// Reject groups whose 2h binary columns are dependent; such a group
  /// carries a weight-one element of the symplectic dual.
  bool require_full_rank_blocks = true;
};

/// Inverse of expand(): binary qubits in partition group g become quqit g.
inline StabiliserMatrix merge(const StabiliserMatrix& binary, const TraceBasis& basis, const Partition& partition,
                              MergeOptions opts = {}) {
  if (binary.h() != 1) throw std::invalid_argument("merge needs a binary matrix");
  const auto h = static_cast<std::size_t>(basis.size());
  const std::size_t nb = binary.n();
  if (partition.size() * h != nb) throw ValidationError("partition does not cover all binary qubits");
  std::vector<bool> seen(nb, false);
  for (const auto& g : partition) {
    if (g.size() != h) throw ValidationError("partition group does not have h members");
    for (auto q : g) {
      if (q >= nb || seen[q]) throw ValidationError("partition is not a set partition of the qubits");
      seen[q] = true;
    }
  }
  const BinMatrix bits = binary.to_binary();
  if (opts.require_full_rank_blocks) {
    for (std::size_t g = 0; g < partition.size(); ++g) {
      std::vector<std::size_t> cols;
      for (auto q : partition[g]) cols.push_back(q);
      for (auto q : partition[g]) cols.push_back(nb + q);
      const auto rk = rank(bits.select_columns(cols));
      if (rk != 2 * h)
        throw ValidationError("invalid partition: block " + std::to_string(g + 1) + " has rank " +
                              std::to_string(rk) + " < " + std::to_string(2 * h) +
                              " (weight-one dual element)");
    }
  }
  const std::size_t n = partition.size();
  StabiliserMatrix out(basis.field(), n, binary.num_rows());
  for (std::size_t i = 0; i < binary.num_rows(); ++i) {
    for (std::size_t g = 0; g < n; ++g) {
      std::uint32_t a = 0, b = 0;
      for (std::size_t j = 0; j < h; ++j) {
        a |= static_cast<std::uint32_t>(bits.get(i, partition[g][j])) << j;
        b |= static_cast<std::uint32_t>(bits.get(i, nb + partition[g][j])) << j;
      }
      out.set(i, g, basis.compose(a));
      out.set(i, n + g, basis.compose(b));
    }
  }
  return out;
}

/// expand -> permute binary qubits -> merge consecutive groups of h'.
/// Binary qubit j of the permuted code is qubit perm[j] of the expansion.
inline StabiliserMatrix convert(const StabiliserMatrix& m, const TraceBasis& source_basis,
                                const std::vector<std::size_t>& perm, const TraceBasis& target_basis,
                                MergeOptions opts = {}) {
  const StabiliserMatrix bin = expand(m, source_basis);
  const std::size_t nb = bin.n();
  if (perm.size() != nb) throw ValidationError("permutation must act on all hn binary qubits");
  std::vector<std::size_t> check = perm;
  std::sort(check.begin(), check.end());
  for (std::size_t i = 0; i < nb; ++i)
    if (check[i] != i) throw ValidationError("not a permutation of the binary qubits");
  const auto h2 = static_cast<std::size_t>(target_basis.size());
  if (nb % h2 != 0) throw ValidationError("h' must divide hn");
  StabiliserMatrix permuted(FieldSpec(1), nb, bin.num_rows());
  for (std::size_t i = 0; i < bin.num_rows(); ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      permuted.set(i, j, bin.at(i, perm[j]));
      permuted.set(i, nb + j, bin.at(i, nb + perm[j]));
    }
  return merge(permuted, target_basis, aligned_partition(nb, h2), opts);
}

/// An additive (GF(2)-linear) code given by generator rows; unlike a
/// stabiliser, self-orthogonality is not assumed.
struct AdditiveCode {
  StabiliserMatrix generator;

  std::size_t dimension() const { return gf2_rank(generator); }

  /// All 2^r sums of generator rows (zero first); intended for small codes.
  std::vector<FieldVector> elements() const {
    const std::size_t r = generator.num_rows();
    if (r > 24) throw BudgetExceeded("code too large to list");
    std::vector<FieldVector> out;
    FieldVector cur(2 * generator.n());
    out.push_back(cur);
    for (std::size_t idx = 1; idx < (std::size_t{1} << r); ++idx) {
      const auto row = generator.row(static_cast<std::size_t>(std::countr_zero(idx)));
      for (std::size_t j = 0; j < cur.size(); ++j) cur[j] += row[j];
      out.push_back(cur);
    }
    return out;
  }
};

namespace detail {

/// A vector of F_2^{2N}, N <= 64: x is the A half, z the B half.
struct SymVec {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  SymVec& operator^=(const SymVec& o) {
    x ^= o.x;
    z ^= o.z;
    return *this;
  }
  bool is_zero() const { return x == 0 && z == 0; }
};

inline std::vector<SymVec> binary_rows(const StabiliserMatrix& bin) {
  const std::size_t nb = bin.n();
  if (nb > 64) throw BudgetExceeded("more than 64 binary qubits");
  std::vector<SymVec> rows;
  for (std::size_t i = 0; i < bin.num_rows(); ++i) {
    SymVec v;
    for (std::size_t j = 0; j < nb; ++j) {
      if (!bin.at(i, j).is_zero()) v.x |= std::uint64_t{1} << j;
      if (!bin.at(i, nb + j).is_zero()) v.z |= std::uint64_t{1} << j;
    }
    rows.push_back(v);
  }
  return rows;
}

/// Incremental basis over F_2^{2N} keyed on the highest set bit of (z, x).
class Echelon {
 public:
  bool insert(SymVec v) {
    for (const auto& b : basis_)
      if (test(v, b.second)) v ^= b.first;
    if (v.is_zero()) return false;
    basis_.emplace_back(v, top(v));
    return true;
  }

 private:
  static int top(const SymVec& v) {
    return v.z != 0 ? 64 + (63 - std::countl_zero(v.z)) : 63 - std::countl_zero(v.x);
  }
  static bool test(const SymVec& v, int bit) { return bit >= 64 ? (v.z >> (bit - 64)) & 1u : (v.x >> bit) & 1u; }

  std::vector<std::pair<SymVec, int>> basis_;
};

/// Generators of the binary symplectic dual: kernel of v -> (row . swap(v)).
inline std::vector<SymVec> binary_dual_basis(const std::vector<SymVec>& rows, std::size_t nb) {
  BinMatrix sys(rows.size(), 2 * nb);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      if ((rows[i].z >> j) & 1u) sys.set(i, j);
      if ((rows[i].x >> j) & 1u) sys.set(i, nb + j);
    }
  std::vector<SymVec> out;
  const Subspace ker = kernel(sys);
  for (const auto& k : ker.basis().row_vectors()) {
    SymVec v;
    for (std::size_t j = 0; j < nb; ++j) {
      if (k.get(j)) v.x |= std::uint64_t{1} << j;
      if (k.get(nb + j)) v.z |= std::uint64_t{1} << j;
    }
    out.push_back(v);
  }
  return out;
}

/// Number of quqits touched, where quqit i owns binary bits h*i .. h*i+h-1.
inline int grouped_weight(std::uint64_t occupied, unsigned h, std::uint64_t group_mask) {
  std::uint64_t y = occupied;
  for (unsigned j = 1; j < h; ++j) y |= occupied >> j;
  return std::popcount(y & group_mask);
}

inline std::uint64_t group_low_bits(std::size_t n, unsigned h) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < n; ++i) m |= std::uint64_t{1} << (i * h);
  return m;
}

}  // namespace detail

/// Generator of C^{perp_s}; computed in the binary expansion and merged back.
inline AdditiveCode symplectic_dual(const AdditiveCode& c) {
  const auto& g = c.generator;
  const TraceBasis basis = find_trace_orthogonal_basis(g.field());
  const StabiliserMatrix bin = expand(g, basis);
  const std::size_t nb = bin.n();
  const BinMatrix bits = bin.to_binary();
  BinMatrix sys(bits.rows(), 2 * nb);
  for (std::size_t i = 0; i < bits.rows(); ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      if (bits.get(i, nb + j)) sys.set(i, j);
      if (bits.get(i, j)) sys.set(i, nb + j);
    }
  const Subspace ker = kernel(sys);
  const StabiliserMatrix dual_bin = StabiliserMatrix::from_binary(ker.basis());
  MergeOptions opts;
  opts.require_full_rank_blocks = false;
  if (ker.dim() == 0) return AdditiveCode{StabiliserMatrix(g.field(), g.n(), std::size_t{0})};
  return AdditiveCode{merge(dual_bin, basis, aligned_partition(nb, static_cast<std::size_t>(g.h())), opts)};
}

struct DistanceOptions {
  /// Maximum number of dual elements to visit.
  std::uint64_t budget = std::uint64_t{1} << 28;
  unsigned threads = 1;
};

/// Exact minimum distance: min swt over C^{perp_s} \ C when k > 0 and over
/// C^{perp_s} \ {0} when k = 0. Returns 0 when there is nothing to minimise
/// over (only possible for k > 0 with an empty complement, which cannot
/// happen for valid input).
inline int minimum_distance(const StabiliserMatrix& m, const DistanceOptions& opts = {}) {
  validate_stabiliser(m);
  const auto h = static_cast<unsigned>(m.h());
  const StabiliserMatrix bin = expand(m, find_trace_orthogonal_basis(m.field()));
  const std::size_t nb = bin.n();
  const auto rows = detail::binary_rows(bin);
  const std::size_t r = rows.size();
  const std::size_t dual_dim = 2 * nb - r;
  if (dual_dim >= 63 || (std::uint64_t{1} << dual_dim) > opts.budget)
    throw BudgetExceeded("symplectic dual has 2^" + std::to_string(dual_dim) +
                         " elements, above the enumeration budget");

  // Basis of the dual whose first r vectors span C.
  std::vector<detail::SymVec> basis;
  detail::Echelon ech;
  for (const auto& v : rows) {
    ech.insert(v);
    basis.push_back(v);
  }
  for (const auto& v : detail::binary_dual_basis(rows, nb))
    if (ech.insert(v)) basis.push_back(v);
  if (basis.size() != dual_dim) throw InconsistencyError("dual basis has unexpected size");

  const std::uint64_t mask = detail::group_low_bits(m.n(), h);
  const bool logical_only = dual_dim > r;  // k > 0
  const std::uint64_t begin = logical_only ? (std::uint64_t{1} << r) : 1;
  const std::uint64_t end = std::uint64_t{1} << dual_dim;

  auto scan = [&](std::uint64_t lo, std::uint64_t hi) {
    int best = static_cast<int>(m.n()) + 1;
    detail::SymVec cur;
    const std::uint64_t gray = lo ^ (lo >> 1);
    for (std::size_t b = 0; b < dual_dim; ++b)
      if ((gray >> b) & 1u) cur ^= basis[b];
    for (std::uint64_t idx = lo;;) {
      best = std::min(best, detail::grouped_weight(cur.x | cur.z, h, mask));
      if (++idx >= hi) break;
      cur ^= basis[static_cast<std::size_t>(std::countr_zero(idx))];
    }
    return best;
  };

  const unsigned threads = std::max(1u, opts.threads);
  const std::uint64_t total = end - begin;
  int best = static_cast<int>(m.n()) + 1;
  if (threads == 1 || total < 4096) {
    best = scan(begin, end);
  } else {
    std::vector<int> partial(threads, best);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      const std::uint64_t lo = begin + total * t / threads;
      const std::uint64_t hi = begin + total * (t + 1) / threads;
      if (lo == hi) continue;
      pool.emplace_back([&, t, lo, hi] { partial[t] = scan(lo, hi); });
    }
    for (auto& th : pool) th.join();
    best = *std::min_element(partial.begin(), partial.end());
  }
  return best > static_cast<int>(m.n()) ? 0 : best;
}

/// Minimum nonzero symplectic weight of the code generated by the rows.
inline int min_stabiliser_weight(const StabiliserMatrix& m) {
  const StabiliserMatrix bin = expand(m, find_trace_orthogonal_basis(m.field()));
  const auto rows = detail::binary_rows(bin);
  if (rows.size() >= 40) throw BudgetExceeded("stabiliser too large to enumerate");
  const std::uint64_t mask = detail::group_low_bits(m.n(), static_cast<unsigned>(m.h()));
  int best = static_cast<int>(m.n()) + 1;
  detail::SymVec cur;
  for (std::uint64_t idx = 1; idx < (std::uint64_t{1} << rows.size()); ++idx) {
    cur ^= rows[static_cast<std::size_t>(std::countr_zero(idx))];
    if (!cur.is_zero()) best = std::min(best, detail::grouped_weight(cur.x | cur.z, static_cast<unsigned>(m.h()), mask));
  }
  return best;
}

/// A code is pure when no nonzero stabiliser element is lighter than d.
inline bool is_pure(const StabiliserMatrix& m, int d) {
  if (m.num_rows() == 0) return true;
  return min_stabiliser_weight(m) >= d;
}

/// Exact rational with positive denominator.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d = 1) : num(n), den(d) {
    if (den == 0) throw std::domain_error("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  bool is_integer() const { return den == 1; }
  std::string to_string() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }
  friend Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
  friend Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
  friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
  friend auto operator<=>(Rational a, Rational b) { return a.num * b.den <=> b.num * a.den; }
};

/// [[n, k, d]]_q; k = (hn - r) / h is kept exact.
struct CodeParameters {
  std::size_t n = 0;
  Rational k;
  int d = 0;
  unsigned q = 2;

  std::string to_string() const {
    return "[[" + std::to_string(n) + "," + k.to_string() + "," + std::to_string(d) + "]]_" + std::to_string(q);
  }
};

inline CodeParameters code_parameters(const StabiliserMatrix& m, int d) {
  const auto h = static_cast<long long>(m.h());
  const auto n = static_cast<long long>(m.n());
  return {m.n(), Rational(h * n - static_cast<long long>(m.num_rows()), h), d, m.field().order()};
}

/// n - 2d + 2 - k; nonnegative for every existing code, zero for MDS codes.
inline Rational singleton_margin(const CodeParameters& p) {
  return Rational(static_cast<long long>(p.n) - 2LL * p.d + 2) - p.k;
}

inline bool is_mds(const CodeParameters& p) { return singleton_margin(p) == Rational(0); }

}  // namespace stabgeom
