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

// Arithmetic in GF(2^h), 1 <= h <= 8.
//
// An element is stored as its polynomial coefficient vector read as a
// binary integer: bit i is the coefficient of x^i, so the constant term is
// the least significant bit. The same convention is used for the modulus,
// e.g. x^2 + x + 1 is 0b111 = 7.

#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "stabgeom/errors.hpp"

namespace stabgeom {

struct FieldElement {
  std::uint8_t value = 0;

  constexpr FieldElement() = default;
  constexpr explicit FieldElement(unsigned v) : value(static_cast<std::uint8_t>(v)) {}

  constexpr bool is_zero() const { return value == 0; }

  friend constexpr FieldElement operator+(FieldElement a, FieldElement b) {
    return FieldElement(a.value ^ b.value);
  }
  constexpr FieldElement& operator+=(FieldElement o) {
    value ^= o.value;
    return *this;
  }
  friend constexpr bool operator==(FieldElement, FieldElement) = default;
  friend constexpr auto operator<=>(FieldElement, FieldElement) = default;
};

namespace detail {

// Carry-less product of two polynomials of degree < 16.
constexpr std::uint32_t clmul(std::uint32_t a, std::uint32_t b) {
  std::uint32_t r = 0;
  while (b != 0) {
    if (b & 1u) r ^= a;
    a <<= 1;
    b >>= 1;
  }
  return r;
}

constexpr int poly_degree(std::uint32_t p) { return p == 0 ? -1 : 31 - std::countl_zero(p); }

constexpr std::uint32_t poly_mod(std::uint32_t a, std::uint32_t m) {
  const int dm = poly_degree(m);
  for (int d = poly_degree(a); d >= dm; d = poly_degree(a)) a ^= m << (d - dm);
  return a;
}

}  // namespace detail

/// GF(2^h) with a fixed irreducible modulus. Immutable; copies share the
/// precomputed log/antilog tables.
class FieldSpec {
 public:
  static constexpr int kMaxDegree = 8;

  /// Default moduli. h = 3 uses x^3 + x^2 + 1 so that the root b satisfies
  /// b^3 = b^2 + 1.
  static std::uint32_t default_modulus(int h) {
    static constexpr std::array<std::uint32_t, 9> table = {
        0, 0b11, 0b111, 0b1101, 0b10011, 0b100101, 0b1000011, 0b10000011, 0x11D};
    if (h < 1 || h > kMaxDegree) throw std::invalid_argument("field degree must be in 1..8");
    return table[static_cast<std::size_t>(h)];
  }

  /// Trial division by every polynomial of degree 1..deg/2.
  static bool is_irreducible(std::uint32_t poly) {
    const int deg = detail::poly_degree(poly);
    if (deg < 1) return false;
    for (std::uint32_t d = 2; detail::poly_degree(d) <= deg / 2; ++d) {
      if (detail::poly_mod(poly, d) == 0) return false;
    }
    return true;
  }

  FieldSpec() : FieldSpec(1) {}
  explicit FieldSpec(int h) : FieldSpec(h, default_modulus(h)) {}

  FieldSpec(int h, std::uint32_t modulus) : h_(h), modulus_(modulus) {
    if (h < 1 || h > kMaxDegree) throw std::invalid_argument("field degree must be in 1..8");
    if (detail::poly_degree(modulus) != h)
      throw std::invalid_argument("modulus " + std::to_string(modulus) + " does not have degree " +
                                  std::to_string(h));
    if (!is_irreducible(modulus))
      throw std::invalid_argument("modulus " + std::to_string(modulus) + " is reducible");
    tables_ = build_tables();
  }

  int degree() const { return h_; }
  std::uint32_t modulus() const { return modulus_; }
  unsigned order() const { return 1u << h_; }
  bool contains(FieldElement x) const { return x.value < order(); }

  FieldElement add(FieldElement a, FieldElement b) const { return a + b; }

  FieldElement mul(FieldElement a, FieldElement b) const {
    if (a.is_zero() || b.is_zero()) return FieldElement{};
    const auto& t = *tables_;
    return FieldElement(t.exp[t.log[a.value] + t.log[b.value]]);
  }

  FieldElement square(FieldElement a) const { return mul(a, a); }

  FieldElement inv(FieldElement a) const {
    if (a.is_zero()) throw std::domain_error("inversion of zero in GF(2^h)");
    const auto& t = *tables_;
    return FieldElement(t.exp[(group_order() - t.log[a.value]) % group_order()]);
  }

  /// a^e for e >= 0, with 0^0 = 1.
  FieldElement pow(FieldElement a, unsigned long long e) const {
    if (e == 0) return one();
    if (a.is_zero()) return FieldElement{};
    const auto& t = *tables_;
    return FieldElement(t.exp[(t.log[a.value] * (e % group_order())) % group_order()]);
  }

  /// Absolute trace x + x^2 + ... + x^(2^(h-1)), always 0 or 1.
  int trace(FieldElement x) const { return tables_->trace[x.value]; }

  FieldElement zero() const { return FieldElement{}; }
  FieldElement one() const { return FieldElement(1); }

  /// Primitive element used for the log tables (x itself when the modulus is
  /// primitive).
  FieldElement generator() const { return FieldElement(tables_->exp[h_ == 1 ? 0 : 1]); }

  /// Discrete log base generator(); undefined for zero.
  unsigned log(FieldElement x) const {
    if (x.is_zero()) throw std::domain_error("log of zero");
    return tables_->log[x.value];
  }

  std::vector<FieldElement> elements() const {
    std::vector<FieldElement> out;
    out.reserve(order());
    for (unsigned v = 0; v < order(); ++v) out.emplace_back(v);
    return out;
  }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
    return a.h_ == b.h_ && a.modulus_ == b.modulus_;
  }

 private:
  struct Tables {
    std::array<std::uint8_t, 256> log{};
    std::array<std::uint8_t, 512> exp{};
    std::array<std::uint8_t, 256> trace{};
  };

  unsigned group_order() const { return order() - 1; }

  std::uint32_t mulmod(std::uint32_t a, std::uint32_t b) const {
    return detail::poly_mod(detail::clmul(a, b), modulus_);
  }

  std::shared_ptr<const Tables> build_tables() const {
    auto t = std::make_shared<Tables>();
    const unsigned q = order();
    const unsigned m = q - 1;
    // Smallest element of multiplicative order q - 1.
    std::uint32_t g = 1;
    for (std::uint32_t cand = (q == 2 ? 1u : 2u); cand < q; ++cand) {
      unsigned ord = 1;
      for (std::uint32_t x = cand; x != 1; x = mulmod(x, cand)) ++ord;
      if (ord == m) {
        g = cand;
        break;
      }
    }
    std::uint32_t x = 1;
    for (unsigned i = 0; i < m; ++i) {
      t->exp[i] = static_cast<std::uint8_t>(x);
      t->exp[i + m] = static_cast<std::uint8_t>(x);
      t->log[x] = static_cast<std::uint8_t>(i);
      x = mulmod(x, g);
    }
    for (unsigned v = 0; v < q; ++v) {
      std::uint32_t sum = 0;
      std::uint32_t pw = v;
      for (int i = 0; i < h_; ++i) {
        sum ^= pw;
        pw = mulmod(pw, pw);
      }
      if (sum > 1) throw InconsistencyError("trace left the prime field");
      t->trace[v] = static_cast<std::uint8_t>(sum);
    }
    return t;
  }

  int h_ = 1;
  std::uint32_t modulus_ = 0b11;
  std::shared_ptr<const Tables> tables_;
};

/// A basis e_1..e_h of GF(2^h) over GF(2) with tr(e_i e_j) = delta_ij.
/// Coordinates of x in such a basis are x_j = tr(x e_j).
class TraceBasis {
 public:
  TraceBasis(FieldSpec field, std::vector<FieldElement> elements)
      : field_(std::move(field)), elements_(std::move(elements)) {
    const auto h = static_cast<std::size_t>(field_.degree());
    if (elements_.size() != h)
      throw std::invalid_argument("trace basis needs exactly h elements");
    for (std::size_t i = 0; i < h; ++i) {
      if (!field_.contains(elements_[i])) throw std::invalid_argument("basis element outside field");
      for (std::size_t j = 0; j < h; ++j) {
        if (field_.trace(field_.mul(elements_[i], elements_[j])) != (i == j ? 1 : 0))
          throw std::invalid_argument("basis is not trace-orthogonal");
      }
    }
  }

  const FieldSpec& field() const { return field_; }
  const std::vector<FieldElement>& elements() const { return elements_; }
  int size() const { return static_cast<int>(elements_.size()); }

  /// Bit j is the coefficient of e_{j+1}.
  std::uint32_t coordinates(FieldElement x) const {
    std::uint32_t bits = 0;
    for (std::size_t j = 0; j < elements_.size(); ++j)
      bits |= static_cast<std::uint32_t>(field_.trace(field_.mul(x, elements_[j]))) << j;
    return bits;
  }

  FieldElement compose(std::uint32_t bits) const {
    FieldElement x{};
    for (std::size_t j = 0; j < elements_.size(); ++j)
      if ((bits >> j) & 1u) x += elements_[j];
    return x;
  }

  friend bool operator==(const TraceBasis& a, const TraceBasis& b) {
    return a.field_ == b.field_ && a.elements_ == b.elements_;
  }

 private:
  FieldSpec field_;
  std::vector<FieldElement> elements_;
};

namespace detail {

inline bool extend_trace_basis(const FieldSpec& f, std::vector<FieldElement>& chosen) {
  if (static_cast<int>(chosen.size()) == f.degree()) return true;
  const unsigned start = chosen.empty() ? 1u : chosen.back().value + 1u;
  for (unsigned v = start; v < f.order(); ++v) {
    const FieldElement e(v);
    if (f.trace(f.square(e)) != 1) continue;
    bool ok = true;
    for (auto c : chosen) ok = ok && f.trace(f.mul(c, e)) == 0;
    if (!ok) continue;
    chosen.push_back(e);
    if (extend_trace_basis(f, chosen)) return true;
    chosen.pop_back();
  }
  return false;
}

}  // namespace detail

/// First trace-orthogonal basis in lexicographic order of strictly
/// increasing integer tuples (e_1 < e_2 < ... < e_h). For the default moduli
/// this gives {1} for GF(2), {a, a^2} for GF(4) and {b, b^2, b^4} for GF(8).
inline TraceBasis find_trace_orthogonal_basis(const FieldSpec& field) {
  std::vector<FieldElement> chosen;
  if (!detail::extend_trace_basis(field, chosen))
    throw InconsistencyError("no trace-orthogonal basis found");
  return TraceBasis(field, std::move(chosen));
}

}  // namespace stabgeom
