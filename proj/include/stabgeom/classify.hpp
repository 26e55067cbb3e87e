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

// Staged classification driver: solid configurations, polarity labelings and
// the seven-solid extension search, each stage persisted in a census
// directory so that an interrupted run can resume.

#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "stabgeom/census.hpp"
#include "stabgeom/errors.hpp"
#include "stabgeom/polarity.hpp"
#include "stabgeom/refute.hpp"
#include "stabgeom/solids.hpp"

namespace stabgeom {

/// fn applied to every item on `jobs` threads; results keep input order.
template <class T, class Fn>
auto parallel_map(const std::vector<T>& items, unsigned jobs, Fn fn) -> std::vector<decltype(fn(items.front()))> {
  using R = decltype(fn(items.front()));
  std::vector<R> out(items.size());
  if (jobs <= 1 || items.size() <= 1) {
    for (std::size_t i = 0; i < items.size(); ++i) out[i] = fn(items[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      try {
        out[i] = fn(items[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs && j < items.size(); ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  return out;
}

struct ClassifyOptions {
  std::filesystem::path census_dir = "census";
  bool resume = false;
  unsigned jobs = 1;
  std::function<void(const std::string&)> log;
};

struct ConfigStageResult {
  std::vector<SolidConfig> configs;
  bool loaded = false;
};

struct LabelingStageResult {
  std::vector<PolarityLabeling> labelings;
  bool loaded = false;

  std::size_t count_for(const SolidConfig& c) const {
    std::size_t k = 0;
    for (const auto& l : labelings) k += l.config == c;
    return k;
  }
};

namespace detail {

inline void say(const ClassifyOptions& o, const std::string& s) {
  if (o.log) o.log(s);
}

inline ConfigStageResult config_stage(CensusStore& store, const std::string& stage, std::size_t n,
                                      const ClassifyOptions& o) {
  ConfigStageResult r;
  if (o.resume) {
    if (const auto recs = store.read(stage)) {
      for (const auto& s : *recs) r.configs.push_back(parse_config(s));
      r.loaded = true;
      say(o, stage + ": loaded " + std::to_string(r.configs.size()) + " configurations");
      return r;
    }
  }
  std::vector<SolidConfig> reps{SolidConfig{}};
  for (std::size_t k = 4; k <= n; ++k) {
    const auto ext = parallel_map(reps, o.jobs, [](const SolidConfig& c) { return extend_configs(c); });
    std::set<SolidConfig> merged;
    for (const auto& e : ext) merged.insert(e.begin(), e.end());
    reps.assign(merged.begin(), merged.end());
    say(o, stage + ": " + std::to_string(k) + " solids, " + std::to_string(reps.size()) + " configurations");
  }
  for (const auto& c : reps)
    if (!is_valid_config(c) || !(canonical_config(c) == c))
      throw InconsistencyError("emitted configuration is not a canonical valid representative");
  std::vector<std::string> recs;
  for (const auto& c : reps) recs.push_back(format_config(c));
  store.write(stage, recs);
  r.configs = std::move(reps);
  return r;
}

inline LabelingStageResult labeling_stage(CensusStore& store, const std::string& stage,
                                          const std::vector<SolidConfig>& configs, const ClassifyOptions& o) {
  LabelingStageResult r;
  if (o.resume) {
    if (const auto recs = store.read(stage)) {
      for (const auto& s : *recs) r.labelings.push_back(parse_labeling(s));
      r.loaded = true;
      say(o, stage + ": loaded " + std::to_string(r.labelings.size()) + " labelings");
      return r;
    }
  }
  const auto per = parallel_map(configs, o.jobs, [](const SolidConfig& c) {
    auto sols = polarity_solutions(c);
    if (sols != polarity_solutions_by_forms(c))
      throw InconsistencyError("parity and Gram routes disagree on configuration " + to_string(c));
    return sols;
  });
  for (const auto& p : per) r.labelings.insert(r.labelings.end(), p.begin(), p.end());
  std::vector<std::string> recs;
  for (const auto& l : r.labelings) recs.push_back(format_labeling(l));
  store.write(stage, recs);
  say(o, stage + ": " + std::to_string(r.labelings.size()) + " labelings");
  return r;
}

}  // namespace detail

struct FourSolidReport {
  std::vector<SolidConfig> configs;
  std::size_t conjugacy_classes = 0;
  std::vector<std::size_t> labelings_per_config;
  std::vector<PolarityLabeling> labelings;
  std::size_t labeling_classes = 0;
};

inline FourSolidReport run_four_solids(const ClassifyOptions& o) {
  CensusStore store(o.census_dir);
  FourSolidReport rep;
  rep.configs = detail::config_stage(store, "four-configs", 4, o).configs;
  rep.conjugacy_classes = four_solid_conjugacy_classes();
  const auto labs = detail::labeling_stage(store, "four-labelings", rep.configs, o);
  rep.labelings = labs.labelings;
  for (const auto& c : rep.configs) rep.labelings_per_config.push_back(labs.count_for(c));
  rep.labeling_classes = count_equivalence_classes(rep.labelings);
  return rep;
}

struct SixSolidReport {
  std::vector<SolidConfig> configs;
  std::vector<PolarityLabeling> labelings;
};

inline SixSolidReport run_six_solids(const ClassifyOptions& o) {
  CensusStore store(o.census_dir);
  SixSolidReport rep;
  rep.configs = detail::config_stage(store, "six-configs", 6, o).configs;
  rep.labelings = detail::labeling_stage(store, "six-labelings", rep.configs, o).labelings;
  return rep;
}

/// Extension search over the six-solid labelings. Each branch is appended to
/// a partial log as soon as it finishes; with resume set, logged branches are
/// reused.
inline RefutationReport run_refute_714(const ClassifyOptions& o) {
  ClassifyOptions six = o;
  six.resume = true;
  const auto base = run_six_solids(six);
  CensusStore store(o.census_dir);
  const std::string stage = "refute-714";
  std::vector<RefutationBranch> done;
  if (o.resume) {
    if (const auto recs = store.read(stage)) {
      for (const auto& s : *recs) done.push_back(parse_branch(s));
    } else {
      for (const auto& s : store.read_partial(stage)) done.push_back(parse_branch(s));
    }
    for (std::size_t i = 0; i < done.size(); ++i)
      if (done[i].index != i) throw CensusError("extension log is out of order at record " + std::to_string(i + 1));
    if (done.size() > base.labelings.size()) throw CensusError("extension log has more branches than labelings");
    if (!done.empty()) detail::say(o, stage + ": resuming after " + std::to_string(done.size()) + " branches");
  } else {
    std::filesystem::remove(store.partial_path(stage));
  }
  if (store.has(stage) && o.resume && done.size() == base.labelings.size()) {
    RefutationReport rep;
    rep.branches = done;
    for (const auto& b : done)
      if (b.has_extension() && !rep.witness) rep.witness = ExtensionWitness{b.index, 0, 0, 0};
    return rep;
  }
  store.start_partial(stage);
  RefutationReport rep;
  rep.branches = done;
  const std::size_t chunk = std::max<std::size_t>(1, 4 * o.jobs);
  for (std::size_t start = done.size(); start < base.labelings.size(); start += chunk) {
    std::vector<std::size_t> idx;
    for (std::size_t i = start; i < std::min(base.labelings.size(), start + chunk); ++i) idx.push_back(i);
    const auto res = parallel_map(idx, o.jobs, [&](std::size_t i) {
      std::optional<ExtensionWitness> w;
      auto b = refute_branch(base.labelings[i], i, &w);
      return std::pair{b, w};
    });
    for (const auto& [b, w] : res) {
      store.append_partial(stage, format_branch(b));
      rep.branches.push_back(b);
      if (w && !rep.witness) rep.witness = w;
    }
    if ((start / chunk) % 64 == 0)
      detail::say(o, stage + ": " + std::to_string(rep.branches.size()) + "/" + std::to_string(base.labelings.size()));
  }
  for (const auto& b : rep.branches)
    if (b.has_extension() && !rep.witness) rep.witness = ExtensionWitness{b.index, 0, 0, 0};
  store.finish_partial(stage);
  return rep;
}

}  // namespace stabgeom
