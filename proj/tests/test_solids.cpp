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

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "stabgeom/geometry.hpp"
#include "stabgeom/mat4.hpp"
#include "stabgeom/polarity.hpp"
#include "stabgeom/solids.hpp"
#include "test_support.hpp"

namespace sg = stabgeom;
namespace tst = sg::testing;
using sg::Mat4;
using sg::Mat8;
using sg::SolidConfig;

namespace {

// Reference matrices A1, A2, A3, row i as nibble i (bit j = column j).
constexpr Mat4 kA1 = 0x1843;
constexpr Mat4 kA2 = 0x2816;
constexpr Mat4 kA3 = 0x4C13;

Mat8 random_gl8(std::mt19937_64& rng) {
  Mat8 inv = 0;
  for (;;) {
    const Mat8 g = rng();
    if (sg::inverse8(g, inv)) return g;
  }
}

std::uint8_t apply8(Mat8 g, std::uint8_t p) {
  std::uint8_t out = 0;
  for (int i = 0; i < 8; ++i) {
    const auto row = static_cast<std::uint8_t>((g >> (8 * i)) & 0xFF);
    out |= static_cast<std::uint8_t>((std::popcount(static_cast<unsigned>(row & p)) & 1) << i);
  }
  return out;
}

// Local coordinates of an ambient point inside a solid, by search.
unsigned local_coords(const sg::SolidBasis& s, std::uint8_t p) {
  for (unsigned c = 1; c < 16; ++c) {
    std::uint8_t q = 0;
    for (int j = 0; j < 4; ++j)
      if ((c >> j) & 1u) q ^= s.column(j);
    if (q == p) return c;
  }
  return 0;
}

SolidConfig random_config(std::mt19937_64& rng, std::size_t n) {
  const auto& gl = sg::GL4::instance();
  SolidConfig c;
  while (c.n() < n) {
    const Mat4 a = gl.elements()[rng() % gl.elements().size()];
    c.params.push_back(a);
    if (!sg::is_valid_config(c)) c.params.pop_back();
  }
  return c;
}

}  // namespace

TEST(Mat4, GL42ClassesAndInverses) {
  const auto& gl = sg::GL4::instance();
  ASSERT_EQ(gl.elements().size(), 20160u);
  for (Mat4 a : gl.elements()) {
    ASSERT_EQ(sg::mul4(a, gl.inverse(a)), sg::kIdentity4);
    ASSERT_EQ(gl.conjugate(gl.conjugator(a), a), gl.class_rep(a));
  }
  const auto reps = gl.class_reps();
  EXPECT_EQ(reps.size(), 14u);  // GL(4,2) is isomorphic to A_8
  std::size_t total = 0;
  for (Mat4 r : reps) total += 20160 / gl.centralizer(r).size();
  EXPECT_EQ(total, 20160u);
  EXPECT_FALSE(gl.invertible(0));
}

TEST(Mat4, Inverse8MatchesGenericInverse) {
  std::mt19937_64 rng(tst::seed());
  for (int t = 0; t < 500; ++t) {
    const Mat8 g = rng();
    Mat8 inv = 0;
    sg::BinMatrix m(8, 8);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) m.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j), (g >> (8 * i + j)) & 1u);
    const bool ok = sg::inverse8(g, inv);
    ASSERT_EQ(ok, sg::rank(m) == 8);
    if (ok) {
      ASSERT_EQ(sg::mul8(g, inv), sg::kIdentity8);
    }
  }
}

TEST(Solids, FourSolidOrbitsMatchReferenceMatrices) {
  const auto reps = sg::enumerate_solid_configs(4);
  ASSERT_EQ(reps.size(), 3u);
  EXPECT_EQ(sg::four_solid_conjugacy_classes(), 5u);
  std::set<SolidConfig> reference;
  for (Mat4 a : {kA1, kA2, kA3}) {
    const SolidConfig c{{a}};
    ASSERT_TRUE(sg::is_valid_config(c));
    reference.insert(sg::canonical_config(c));
  }
  EXPECT_EQ(reference, std::set<SolidConfig>(reps.begin(), reps.end()));
}

TEST(Solids, CanonicalFormIsInvariantUnderProjectivityAndReordering) {
  std::mt19937_64 rng(tst::seed() + 1);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 4 + rng() % 3;
    const auto cfg = random_config(rng, n);
    const auto canon = sg::canonical_config(cfg);
    ASSERT_TRUE(sg::is_valid_config(canon));
    ASSERT_EQ(sg::canonical_config(canon), canon);
    auto solids = cfg.solids();
    const Mat8 g = random_gl8(rng);
    for (auto& s : solids) s = sg::transform(g, s);
    std::shuffle(solids.begin(), solids.end(), rng);
    ASSERT_EQ(sg::canonical_config(solids), canon);
  }
}

TEST(Solids, EnumerationIsCompleteOnRandomConfigurations) {
  for (std::size_t n : {4u, 5u}) {
    const auto reps = sg::enumerate_solid_configs(n);
    const std::set<SolidConfig> rs(reps.begin(), reps.end());
    ASSERT_EQ(rs.size(), reps.size());
    std::mt19937_64 rng(tst::seed() + n);
    for (int t = 0; t < 60; ++t) ASSERT_TRUE(rs.count(sg::canonical_config(random_config(rng, n))));
  }
}

TEST(Solids, StabilizerElementsPermuteTheSolids) {
  for (const auto& cfg : sg::enumerate_solid_configs(4)) {
    const auto solids = cfg.solids();
    const auto stab = sg::configuration_stabilizer(cfg);
    ASSERT_FALSE(stab.empty());
    for (const auto& s : stab) {
      for (std::size_t i = 0; i < solids.size(); ++i) {
        const auto img = sg::transform(s.g, solids[i]);
        const auto& target = solids[static_cast<std::size_t>(s.perm[i])];
        for (int j = 0; j < 4; ++j) ASSERT_NE(local_coords(target, img.column(j)), 0u);
      }
    }
  }
}

TEST(Polarity, FormsAndLabelings) {
  const auto forms = sg::nondegenerate_forms4();
  ASSERT_EQ(forms.size(), 28u);  // |GL(4,2)| / |Sp(4,2)| = 20160 / 720
  for (Mat4 g : forms) {
    const auto x = sg::labeling_of_form(g);
    EXPECT_EQ(std::popcount(x), 20);
    EXPECT_EQ(sg::form_of_labeling(x), g);
    EXPECT_TRUE(sg::has_perpendicular_pair(x));
    const Mat4 s = sg::symplectic_basis(g);
    EXPECT_EQ(sg::mul4(sg::mul4(sg::transpose4(s), g), s), sg::kPairedForm4);
    // Cross-check the line types against the geometry module.
    std::vector<sg::LocalVector> gram(4);
    for (int i = 0; i < 4; ++i) gram[static_cast<std::size_t>(i)] = sg::row4(g, i);
    const sg::SymplecticForm f(gram);
    const auto& lines = sg::SolidLines::instance();
    for (int l = 0; l < sg::kLinesPerSolid; ++l) {
      const auto [u, v] = lines.points(l);
      EXPECT_EQ(((x >> l) & 1u) != 0, sg::classify_line(u, v, f) == sg::LineType::hyperbolic);
    }
  }
  std::mt19937_64 rng(tst::seed() + 2);
  int rejected = 0;
  for (int t = 0; t < 200; ++t) {
    std::uint64_t x = 0;
    while (std::popcount(x) < 20) x |= std::uint64_t{1} << (rng() % 35);
    rejected += !sg::form_of_labeling(x).has_value();
  }
  EXPECT_GT(rejected, 190);
}

TEST(Polarity, FourSolidLabelingCountsAndUniqueness) {
  std::map<SolidConfig, std::size_t> count;
  std::vector<sg::PolarityLabeling> all;
  for (const auto& cfg : sg::enumerate_solid_configs(4)) {
    const auto sols = sg::polarity_solutions(cfg);
    EXPECT_EQ(sols, sg::polarity_solutions_by_forms(cfg));
    for (const auto& s : sols) EXPECT_TRUE(sg::verify_labeling(s));
    count[cfg] = sols.size();
    all.insert(all.end(), sols.begin(), sols.end());
  }
  EXPECT_EQ(count[sg::canonical_config(SolidConfig{{kA1}})], 0u);
  EXPECT_EQ(count[sg::canonical_config(SolidConfig{{kA2}})], 0u);
  EXPECT_EQ(count[sg::canonical_config(SolidConfig{{kA3}})], 3u);
  ASSERT_EQ(all.size(), 3u);
  EXPECT_EQ(sg::count_equivalence_classes(all), 1u);
  for (const auto& a : all)
    for (const auto& b : all) EXPECT_TRUE(sg::solutions_equivalent(a, b));
}

TEST(Polarity, LabelingsGiveCodesOfDistanceThree) {
  const auto b4 = sg::find_trace_orthogonal_basis(sg::FieldSpec(2));
  for (const auto& cfg : sg::enumerate_solid_configs(4))
    for (const auto& lab : sg::polarity_solutions(cfg)) {
      const auto bin = sg::stabiliser_matrix_of(lab);
      const auto code = sg::merge(bin, b4, sg::aligned_partition(bin.n(), 2));
      EXPECT_TRUE(sg::is_self_orthogonal(code));
      EXPECT_EQ(sg::minimum_distance(code), 3);
      const auto x = sg::blocks_from_matrix(bin, 2);
      EXPECT_TRUE(sg::verify_quantum_set(x).ok());
      EXPECT_EQ(sg::geometric_min_distance(x), 3);
    }
}

TEST(Polarity, SolutionSetIsClosedUnderConfigurationSymmetries) {
  const auto& lines = sg::SolidLines::instance();
  for (const auto& cfg : sg::enumerate_solid_configs(4)) {
    const auto sols = sg::polarity_solutions(cfg);
    const std::set<sg::PolarityLabeling> set(sols.begin(), sols.end());
    const auto solids = cfg.solids();
    const auto sys = sg::build_parity_system(cfg);
    for (const auto& lab : sols)
      for (const auto& sym : sg::configuration_stabilizer(cfg)) {
        sg::PolarityLabeling img{cfg, std::vector<std::uint64_t>(solids.size(), 0)};
        for (std::size_t s = 0; s < solids.size(); ++s) {
          const auto t = static_cast<std::size_t>(sym.perm[s]);
          for (int l = 0; l < sg::kLinesPerSolid; ++l) {
            if (!((lab.x[s] >> l) & 1u)) continue;
            const auto [u, v] = lines.points(l);
            auto amb = [&](unsigned c) {
              std::uint8_t p = 0;
              for (int j = 0; j < 4; ++j)
                if ((c >> j) & 1u) p ^= solids[s].column(j);
              return apply8(sym.g, p);
            };
            const unsigned u2 = local_coords(solids[t], amb(u));
            const unsigned v2 = local_coords(solids[t], amb(v));
            img.x[t] |= std::uint64_t{1} << lines.index_of(u2, v2);
          }
        }
        // The image lies in the parity kernel and is again a solution.
        sg::BinVector w(sys.cols());
        for (std::size_t s = 0; s < solids.size(); ++s)
          for (int l = 0; l < sg::kLinesPerSolid; ++l)
            if ((img.x[s] >> l) & 1u) w.set(35 * s + static_cast<std::size_t>(l));
        ASSERT_TRUE(sys.apply(w).is_zero());
        ASSERT_TRUE(set.count(img));
      }
  }
}

TEST(Polarity, ParityAndGramRoutesAgreeOnRandomSixSolidConfigurations) {
  std::mt19937_64 rng(tst::seed() + 3);
  std::size_t found = 0;
  for (int t = 0; t < 12; ++t) {
    const auto cfg = random_config(rng, 6);
    const auto a = sg::polarity_solutions(cfg);
    ASSERT_EQ(a, sg::polarity_solutions_by_forms(cfg));
    found += a.size();
  }
  SUCCEED() << found << " labelings";
}
