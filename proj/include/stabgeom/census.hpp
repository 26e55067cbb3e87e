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

// Census files for the staged classification.
//
// A census directory holds one text file per stage and MANIFEST. Every
// census file starts with the tag line "stabgeom-census 1 <stage>" followed
// by one record per line. MANIFEST starts with "stabgeom-manifest 1" and has
// one line per finished stage:
//
//   <stage> <file> <records> <sha256 of the file>
//
// Record formats:
//   configs     A_4 ... A_n as 4-digit hex (bit 4i+j = entry (i,j))
//   labelings   config record, ';', then 35-bit hex line masks per solid
//   branches    key=value fields of one extension-search branch

#pragma once

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "stabgeom/errors.hpp"
#include "stabgeom/polarity.hpp"
#include "stabgeom/refute.hpp"
#include "stabgeom/solids.hpp"

namespace stabgeom {

inline constexpr const char* kCensusTag = "stabgeom-census 1";
inline constexpr const char* kManifestTag = "stabgeom-manifest 1";

inline std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  std::string out;
  char buf[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    out += buf;
  }
  return out;
}

inline std::string format_config(const SolidConfig& c) { return to_string(c); }

inline SolidConfig parse_config(const std::string& s) {
  SolidConfig c;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &used, 16);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || tok.size() != 4) throw ParseError("bad configuration word '" + tok + "'");
    c.params.push_back(static_cast<Mat4>(v));
  }
  return c;
}

inline std::string format_labeling(const PolarityLabeling& lab) {
  std::string s = format_config(lab.config) + " ;";
  char buf[16];
  for (auto x : lab.x) {
    std::snprintf(buf, sizeof buf, " %09llx", static_cast<unsigned long long>(x));
    s += buf;
  }
  return s;
}

inline PolarityLabeling parse_labeling(const std::string& s) {
  const auto semi = s.find(';');
  if (semi == std::string::npos) throw ParseError("labeling record without ';'");
  PolarityLabeling lab{parse_config(s.substr(0, semi)), {}};
  std::istringstream in(s.substr(semi + 1));
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &used, 16);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size() || v >> kLinesPerSolid) throw ParseError("bad line mask '" + tok + "'");
    lab.x.push_back(v);
  }
  if (lab.x.size() != lab.config.n()) throw ParseError("labeling has the wrong number of solids");
  return lab;
}

inline std::string format_branch(const RefutationBranch& b) {
  std::ostringstream o;
  o << "branch=" << b.index << " consistent=" << (b.consistent ? 1 : 0) << " kernel=" << b.kernel_dim
    << " candidates=" << b.candidates << " invertible=" << b.invertible << " spanning=" << b.spanning
    << " q0=" << b.q_rank[0] << " q2=" << b.q_rank[1] << " q4=" << b.q_rank[2];
  return o.str();
}

inline RefutationBranch parse_branch(const std::string& s) {
  std::map<std::string, unsigned long long> kv;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw ParseError("bad branch field '" + tok + "'");
    try {
      kv[tok.substr(0, eq)] = std::stoull(tok.substr(eq + 1));
    } catch (const std::exception&) {
      throw ParseError("bad branch field '" + tok + "'");
    }
  }
  for (const char* k : {"branch", "consistent", "kernel", "candidates", "invertible", "spanning", "q0", "q2", "q4"})
    if (!kv.count(k)) throw ParseError(std::string("branch record lacks '") + k + "'");
  RefutationBranch b;
  b.index = kv["branch"];
  b.consistent = kv["consistent"] != 0;
  b.kernel_dim = kv["kernel"];
  b.candidates = kv["candidates"];
  b.invertible = kv["invertible"];
  b.spanning = kv["spanning"];
  b.q_rank = {kv["q0"], kv["q2"], kv["q4"]};
  return b;
}

/// A census directory with its manifest.
class CensusStore {
 public:
  struct Entry {
    std::string file;
    std::size_t records = 0;
    std::string sha256;
  };

  explicit CensusStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
    load_manifest();
  }

  const std::filesystem::path& dir() const { return dir_; }
  bool has(const std::string& stage) const { return entries_.count(stage) != 0; }

  /// Records of a finished stage after checking its hash; nullopt when the
  /// stage is not in the manifest.
  std::optional<std::vector<std::string>> read(const std::string& stage) const {
    const auto it = entries_.find(stage);
    if (it == entries_.end()) return std::nullopt;
    const std::string text = slurp(dir_ / it->second.file);
    if (sha256_hex(text) != it->second.sha256) throw CensusError("census file " + it->second.file + " does not match its manifest hash");
    auto lines = records_of(text, stage);
    if (lines.size() != it->second.records) throw CensusError("census file " + it->second.file + " has the wrong record count");
    return lines;
  }

  void write(const std::string& stage, const std::vector<std::string>& records) {
    std::string text = std::string(kCensusTag) + " " + stage + "\n";
    for (const auto& r : records) text += r + "\n";
    const std::string file = stage + ".txt";
    spit(dir_ / file, text);
    entries_[stage] = {file, records.size(), sha256_hex(text)};
    save_manifest();
  }

  /// Append-only log of a stage in progress (not in the manifest yet).
  std::filesystem::path partial_path(const std::string& stage) const { return dir_ / (stage + ".partial"); }

  std::vector<std::string> read_partial(const std::string& stage) const {
    const auto p = partial_path(stage);
    if (!std::filesystem::exists(p)) return {};
    return records_of(slurp(p), stage);
  }

  void start_partial(const std::string& stage) const {
    const auto p = partial_path(stage);
    if (!std::filesystem::exists(p)) spit(p, std::string(kCensusTag) + " " + stage + "\n");
  }

  void append_partial(const std::string& stage, const std::string& record) const {
    std::ofstream out(partial_path(stage), std::ios::app);
    out << record << '\n';
    out.flush();
    if (!out) throw Error("cannot append to " + partial_path(stage).string());
  }

  void finish_partial(const std::string& stage) {
    const auto recs = read_partial(stage);
    write(stage, recs);
    std::filesystem::remove(partial_path(stage));
  }

 private:
  static std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw CensusError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static void spit(const std::filesystem::path& p, const std::string& text) {
    const auto tmp = p.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << text;
      if (!out) throw Error("cannot write " + tmp);
    }
    std::filesystem::rename(tmp, p);
  }

  static std::vector<std::string> records_of(const std::string& text, const std::string& stage) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != std::string(kCensusTag) + " " + stage)
      throw CensusError("census file for " + stage + " has a bad tag line");
    std::vector<std::string> out;
    while (std::getline(in, line))
      if (!line.empty()) out.push_back(line);
    return out;
  }

  void load_manifest() {
    const auto p = dir_ / "MANIFEST";
    if (!std::filesystem::exists(p)) return;
    std::istringstream in(slurp(p));
    std::string line;
    if (!std::getline(in, line) || line != kManifestTag) throw CensusError("MANIFEST has a bad tag line");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::string stage;
      Entry e;
      if (!(ls >> stage >> e.file >> e.records >> e.sha256) || e.sha256.size() != 64)
        throw CensusError("MANIFEST line malformed: " + line);
      entries_[stage] = e;
    }
  }

  void save_manifest() const {
    std::string text = std::string(kManifestTag) + "\n";
    for (const auto& [stage, e] : entries_)
      text += stage + " " + e.file + " " + std::to_string(e.records) + " " + e.sha256 + "\n";
    spit(dir_ / "MANIFEST", text);
  }

  std::filesystem::path dir_;
  std::map<std::string, Entry> entries_;
};

}  // namespace stabgeom
