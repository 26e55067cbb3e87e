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

// Bit-packed linear algebra over GF(2) and subspace enumeration in PG(r-1,2).

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stabgeom {

inline int parity64(std::uint64_t x) { return std::popcount(x) & 1; }

/// Fixed-length vector over GF(2). Bits beyond size() are always zero.
/// Rank of a set of packed vectors.
inline std::size_t packed_rank(std::vector<std::uint64_t> v) {
  std::size_t rk = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    ++rk;
    const std::uint64_t top = std::uint64_t{1} << (63 - std::countl_zero(v[i]));
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (v[j] & top) v[j] ^= v[i];
  }
  return rk;
}

class BinVector {
 public:
  BinVector() = default;
  explicit BinVector(std::size_t len) : len_(len), words_((len + 63) / 64, 0) {}

  /// Low `len` bits of `bits`; bit i is coordinate i.
  static BinVector from_u64(std::size_t len, std::uint64_t bits) {
    if (len > 64) throw std::invalid_argument("from_u64 needs len <= 64");
    BinVector v(len);
    if (len > 0) v.words_[0] = len == 64 ? bits : bits & ((std::uint64_t{1} << len) - 1);
    return v;
  }

  /// "0110..." with coordinate 0 first; spaces are ignored.
  static BinVector from_string(std::string_view s) {
    std::vector<bool> bits;
    for (char c : s) {
      if (c == '0' || c == '1') bits.push_back(c == '1');
      else if (c != ' ') throw std::invalid_argument("bad character in bit string");
    }
    BinVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) v.set(i, bits[i]);
    return v;
  }

  std::size_t size() const { return len_; }
  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool b = true) {
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (b) words_[i >> 6] |= m;
    else words_[i >> 6] &= ~m;
  }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  bool is_zero() const {
    return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
  }
  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  /// Index of the lowest set bit, or size() when zero.
  std::size_t lowest_set() const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
    return len_;
  }

  std::uint64_t to_u64() const {
    if (len_ > 64) throw std::invalid_argument("to_u64 needs len <= 64");
    return words_.empty() ? 0 : words_[0];
  }

  BinVector& operator^=(const BinVector& o) {
    check_same(o);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    return *this;
  }
  friend BinVector operator^(BinVector a, const BinVector& b) { return a ^= b; }

  /// Standard dot product.
  int dot(const BinVector& o) const {
    check_same(o);
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & o.words_[w];
    return parity64(acc);
  }

  /// Sub-vector [from, from + count).
  BinVector slice(std::size_t from, std::size_t count) const {
    BinVector out(count);
    for (std::size_t i = 0; i < count; ++i)
      if (get(from + i)) out.set(i);
    return out;
  }

  BinVector concat(const BinVector& o) const {
    BinVector out(len_ + o.len_);
    for (std::size_t i = 0; i < len_; ++i)
      if (get(i)) out.set(i);
    for (std::size_t i = 0; i < o.len_; ++i)
      if (o.get(i)) out.set(len_ + i);
    return out;
  }

  std::string to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const BinVector&, const BinVector&) = default;
  friend bool operator<(const BinVector& a, const BinVector& b) {
    if (a.len_ != b.len_) return a.len_ < b.len_;
    return a.to_string() < b.to_string();
  }

 private:
  void check_same(const BinVector& o) const {
    if (o.len_ != len_) throw std::invalid_argument("BinVector length mismatch");
  }

  std::size_t len_ = 0;
  std::vector<std::uint64_t> words_;
};

class BinMatrix {
 public:
  BinMatrix() = default;
  BinMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BinVector(cols)) {}

  static BinMatrix identity(std::size_t n) {
    BinMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
  }

  static BinMatrix from_rows(std::size_t cols, std::vector<BinVector> rows) {
    for (const auto& r : rows)
      if (r.size() != cols) throw std::invalid_argument("inconsistent row length");
    BinMatrix m;
    m.cols_ = cols;
    m.rows_ = std::move(rows);
    return m;
  }

  /// Rows given as bit strings, e.g. {"1100", "0011"}.
  static BinMatrix from_strings(const std::vector<std::string>& rows) {
    std::vector<BinVector> v;
    for (const auto& s : rows) v.push_back(BinVector::from_string(s));
    const std::size_t cols = v.empty() ? 0 : v.front().size();
    return from_rows(cols, std::move(v));
  }

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  bool get(std::size_t i, std::size_t j) const { return rows_[i].get(j); }
  void set(std::size_t i, std::size_t j, bool b = true) { rows_[i].set(j, b); }
  const BinVector& row(std::size_t i) const { return rows_[i]; }
  BinVector& row(std::size_t i) { return rows_[i]; }
  const std::vector<BinVector>& row_vectors() const { return rows_; }

  void append_row(BinVector v) {
    if (rows_.empty() && cols_ == 0) cols_ = v.size();
    if (v.size() != cols_) throw std::invalid_argument("appended row has wrong length");
    rows_.push_back(std::move(v));
  }

  BinVector column(std::size_t j) const {
    BinVector c(rows());
    for (std::size_t i = 0; i < rows(); ++i)
      if (get(i, j)) c.set(i);
    return c;
  }

  BinMatrix transpose() const {
    BinMatrix t(cols_, rows());
    for (std::size_t i = 0; i < rows(); ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (get(i, j)) t.set(j, i);
    return t;
  }

  /// M v.
  BinVector apply(const BinVector& v) const {
    BinVector out(rows());
    for (std::size_t i = 0; i < rows(); ++i)
      if (rows_[i].dot(v)) out.set(i);
    return out;
  }

  friend BinMatrix operator*(const BinMatrix& a, const BinMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product dimension mismatch");
    BinMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t k = 0; k < a.cols(); ++k)
        if (a.get(i, k)) out.rows_[i] ^= b.rows_[k];
    return out;
  }

  /// Columns [from, from + count).
  BinMatrix column_slice(std::size_t from, std::size_t count) const {
    BinMatrix out;
    out.cols_ = count;
    for (const auto& r : rows_) out.rows_.push_back(r.slice(from, count));
    return out;
  }

  BinMatrix select_columns(const std::vector<std::size_t>& cols) const {
    BinMatrix out(rows(), cols.size());
    for (std::size_t i = 0; i < rows(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j)
        if (get(i, cols[j])) out.set(i, j);
    return out;
  }

  friend bool operator==(const BinMatrix&, const BinMatrix&) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<BinVector> rows_;
};

struct RrefResult {
  BinMatrix reduced;  ///< zero rows removed
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
};

/// Reduced row-echelon form: pivot of row i is its lowest set column, pivots
/// strictly increase, and each pivot column has a single one.
inline RrefResult rref(const BinMatrix& m) {
  std::vector<BinVector> rows = m.row_vectors();
  RrefResult res;
  std::size_t next = 0;
  for (std::size_t col = 0; col < m.cols() && next < rows.size(); ++col) {
    std::size_t p = next;
    while (p < rows.size() && !rows[p].get(col)) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[next]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != next && rows[i].get(col)) rows[i] ^= rows[next];
    res.pivots.push_back(col);
    ++next;
  }
  rows.resize(next);
  res.rank = next;
  res.reduced = BinMatrix::from_rows(m.cols(), std::move(rows));
  return res;
}

inline std::size_t rank(const BinMatrix& m) { return rref(m).rank; }

/// Subspace of F_2^n stored by its RREF basis, so equality is bitwise.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient_dim) : basis_(0, ambient_dim) {}

  /// Span of the rows of `generators`.
  static Subspace span_of(const BinMatrix& generators) {
    Subspace s;
    s.basis_ = rref(generators).reduced;
    return s;
  }
  static Subspace span_of(std::size_t ambient_dim, const std::vector<BinVector>& gens) {
    return span_of(BinMatrix::from_rows(ambient_dim, gens));
  }
  static Subspace full(std::size_t ambient_dim) { return span_of(BinMatrix::identity(ambient_dim)); }

  std::size_t ambient_dim() const { return basis_.cols(); }
  std::size_t dim() const { return basis_.rows(); }
  const BinMatrix& basis() const { return basis_; }

  bool contains(const BinVector& v) const {
    if (v.size() != ambient_dim()) throw std::invalid_argument("ambient dimension mismatch");
    BinVector r = v;
    const auto piv = pivots();
    for (std::size_t i = 0; i < dim(); ++i)
      if (r.get(piv[i])) r ^= basis_.row(i);
    return r.is_zero();
  }

  bool contains(const Subspace& o) const {
    for (const auto& v : o.basis_.row_vectors())
      if (!contains(v)) return false;
    return true;
  }

  /// Linear functionals vanishing on the subspace, as rows.
  BinMatrix annihilator() const;

  /// All 2^dim vectors, zero first.
  std::vector<BinVector> elements() const {
    std::vector<BinVector> out;
    const std::size_t count = std::size_t{1} << dim();
    out.reserve(count);
    BinVector cur(ambient_dim());
    out.push_back(cur);
    for (std::size_t i = 1; i < count; ++i) {
      cur ^= basis_.row(static_cast<std::size_t>(std::countr_zero(i)));
      out.push_back(cur);
    }
    return out;
  }

  friend bool operator==(const Subspace&, const Subspace&) = default;

 private:
  std::vector<std::size_t> pivots() const {
    std::vector<std::size_t> p;
    for (const auto& r : basis_.row_vectors()) p.push_back(r.lowest_set());
    return p;
  }

  BinMatrix basis_;
};

/// Null space {v : M v = 0}.
inline Subspace kernel(const BinMatrix& m) {
  const auto red = rref(m);
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto p : red.pivots) is_pivot[p] = true;
  std::vector<BinVector> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    BinVector v(n);
    v.set(free);
    for (std::size_t i = 0; i < red.rank; ++i)
      if (red.reduced.get(i, free)) v.set(red.pivots[i]);
    basis.push_back(std::move(v));
  }
  return Subspace::span_of(n, basis);
}

inline BinMatrix Subspace::annihilator() const { return kernel(basis_).basis(); }

/// Some v with M v = b, or nullopt when b is outside the column space.
inline std::optional<BinVector> solve(const BinMatrix& m, const BinVector& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("solve: right-hand side has wrong length");
  // Row-reduce the augmented matrix [M | b].
  BinMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    aug.row(i) = m.row(i).concat(BinVector::from_u64(1, b.get(i) ? 1 : 0));
  }
  const auto red = rref(aug);
  if (!red.pivots.empty() && red.pivots.back() == m.cols()) return std::nullopt;
  BinVector x(m.cols());
  for (std::size_t i = 0; i < red.rank; ++i)
    if (red.reduced.get(i, m.cols())) x.set(red.pivots[i]);
  return x;
}

/// Inverse of a square matrix, or nullopt when singular.
inline std::optional<BinMatrix> inverse(const BinMatrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw std::invalid_argument("inverse of non-square matrix");
  BinMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    BinVector e(n);
    e.set(i);
    aug.row(i) = m.row(i).concat(e);
  }
  const auto red = rref(aug);
  if (red.rank < n || red.pivots[n - 1] != n - 1) return std::nullopt;
  return red.reduced.column_slice(n, n);
}

inline Subspace span(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("ambient dimension mismatch");
  auto gens = a.basis().row_vectors();
  for (const auto& r : b.basis().row_vectors()) gens.push_back(r);
  return Subspace::span_of(a.ambient_dim(), gens);
}

inline Subspace intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("ambient dimension mismatch");
  auto eqs = a.annihilator().row_vectors();
  const BinMatrix bann = b.annihilator();
  for (const auto& r : bann.row_vectors()) eqs.push_back(r);
  return kernel(BinMatrix::from_rows(a.ambient_dim(), eqs));
}

/// Quotient map F_2^r -> F_2^r / K, realised by a basis of K's annihilator.
class QuotientMap {
 public:
  explicit QuotientMap(const Subspace& k) : functionals_(k.annihilator()), source_dim_(k.ambient_dim()) {}

  std::size_t source_dim() const { return source_dim_; }
  std::size_t target_dim() const { return functionals_.rows(); }
  BinVector apply(const BinVector& v) const { return functionals_.apply(v); }
  Subspace image(const Subspace& s) const {
    std::vector<BinVector> gens;
    for (const auto& r : s.basis().row_vectors()) gens.push_back(apply(r));
    return Subspace::span_of(target_dim(), gens);
  }
  const BinMatrix& functionals() const { return functionals_; }

 private:
  BinMatrix functionals_;
  std::size_t source_dim_;
};

/// Projection from K: images of `subspaces` in F_2^r / K.
inline std::vector<Subspace> project_quotient(const Subspace& k, const std::vector<Subspace>& subspaces) {
  const QuotientMap q(k);
  std::vector<Subspace> out;
  for (const auto& s : subspaces) {
    if (s.ambient_dim() != k.ambient_dim()) throw std::invalid_argument("ambient dimension mismatch");
    out.push_back(q.image(s));
  }
  return out;
}

/// Gaussian binomial [n choose k]_2.
inline std::uint64_t gaussian_binomial2(unsigned n, unsigned k) {
  if (k > n) return 0;
  std::uint64_t num = 1, den = 1;
  for (unsigned i = 0; i < k; ++i) {
    num *= (std::uint64_t{1} << (n - i)) - 1;
    den *= (std::uint64_t{1} << (i + 1)) - 1;
  }
  return num / den;
}

/// A codimension-two subspace of F_2^r, given as the common kernel of two
/// independent functionals in RREF with respect to highest set bits:
/// hi has top bit above lo's top bit and is zero at lo's top bit.
struct FunctionalPair {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
  friend bool operator==(const FunctionalPair&, const FunctionalPair&) = default;
};

/// Calls fn(FunctionalPair) once for every codimension-two subspace of
/// F_2^r (2 <= r <= 63), ordered by (top bit of hi, top bit of lo, free bits).
template <class Fn>
void for_each_codim2(unsigned r, Fn&& fn) {
  if (r < 2 || r > 63) throw std::invalid_argument("codim-2 enumeration needs 2 <= r <= 63");
  for (unsigned p1 = 1; p1 < r; ++p1) {
    for (unsigned p2 = 0; p2 < p1; ++p2) {
      const std::uint64_t lo_free = (std::uint64_t{1} << p2) - 1;
      const std::uint64_t hi_free = ((std::uint64_t{1} << p1) - 1) & ~(std::uint64_t{1} << p2);
      // Enumerate subsets of each free mask.
      std::uint64_t a = 0;
      do {
        std::uint64_t b = 0;
        do {
          fn(FunctionalPair{(std::uint64_t{1} << p1) | a, (std::uint64_t{1} << p2) | b});
          b = (b - lo_free) & lo_free;
        } while (b != 0);
        a = (a - hi_free) & hi_free;
      } while (a != 0);
    }
  }
}

/// Canonical pair spanning the same 2-dim space of functionals as (f, g).
inline FunctionalPair canonical_pair(std::uint64_t f, std::uint64_t g) {
  if (f == 0 || g == 0 || f == g) throw std::invalid_argument("functionals are dependent");
  if (std::bit_width(f) < std::bit_width(g)) std::swap(f, g);
  if (std::bit_width(f) == std::bit_width(g)) f ^= g;
  if (std::bit_width(f) < std::bit_width(g)) std::swap(f, g);
  const std::uint64_t lo_top = std::uint64_t{1} << (std::bit_width(g) - 1);
  if (f & lo_top) f ^= g;
  return {f, g};
}

/// The subspace {v : hi.v = lo.v = 0} of F_2^r.
inline Subspace codim2_subspace(unsigned r, const FunctionalPair& p) {
  BinMatrix eqs(2, r);
  eqs.row(0) = BinVector::from_u64(r, p.hi);
  eqs.row(1) = BinVector::from_u64(r, p.lo);
  return kernel(eqs);
}

/// Every codimension-two subspace of F_2^r, each exactly once.
inline std::vector<Subspace> enumerate_codim2_subspaces(unsigned r) {
  std::vector<Subspace> out;
  out.reserve(static_cast<std::size_t>(gaussian_binomial2(r, 2)));
  for_each_codim2(r, [&](const FunctionalPair& p) { out.push_back(codim2_subspace(r, p)); });
  return out;
}

}  // namespace stabgeom
