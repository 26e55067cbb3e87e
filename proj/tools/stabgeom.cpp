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

// Command-line front end.
//
// Reports are key=value lines in a fixed order followed by a short table whose
// lines start with '#'. Exit codes: 0 success, 1 usage, 2 parse error,
// 3 validation error, 4 budget exceeded, 5 internal inconsistency,
// 6 census error, 7 any other failure.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "stabgeom/classify.hpp"
#include "stabgeom/errors.hpp"
#include "stabgeom/geometry.hpp"
#include "stabgeom/gf2h.hpp"
#include "stabgeom/matrix_io.hpp"
#include "stabgeom/symcode.hpp"

namespace sg = stabgeom;

namespace {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kValidation = 3,
  kBudget = 4,
  kInconsistency = 5,
  kCensus = 6,
  kOther = 7,
};

/// Ordered key=value report.
class Report {
 public:
  template <class T>
  void add(const std::string& key, const T& value) {
    std::ostringstream s;
    s << value;
    fields_.emplace_back(key, s.str());
  }
  void add(const std::string& key, bool value) { fields_.emplace_back(key, value ? "yes" : "no"); }

  void print(std::ostream& out, const std::string& prefix = "") const {
    std::size_t w = 0;
    for (const auto& [k, v] : fields_) w = std::max(w, k.size());
    for (const auto& [k, v] : fields_) out << prefix << k << '=' << v << '\n';
    if (!prefix.empty()) return;  // already a comment block
    out << "#\n";
    for (const auto& [k, v] : fields_) out << "# " << k << std::string(w - k.size() + 2, ' ') << v << '\n';
  }

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

std::vector<unsigned long> parse_list(const std::string& s, const std::string& what) {
  std::vector<unsigned long> out;
  std::string tok;
  std::istringstream in(s);
  while (std::getline(in, tok, ',')) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (tok.empty() || used != tok.size() || tok[0] == '-') throw sg::ParseError("bad " + what + " entry '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

/// 1-based binary qubit indices, possibly split into groups by ';'.
std::vector<std::vector<std::size_t>> parse_groups(const std::string& s, const std::string& what) {
  std::vector<std::vector<std::size_t>> groups;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, ';')) {
    std::vector<std::size_t> g;
    for (auto v : parse_list(part, what)) {
      if (v == 0) throw sg::ParseError(what + " indices start at 1");
      g.push_back(v - 1);
    }
    groups.push_back(std::move(g));
  }
  return groups;
}

sg::TraceBasis basis_from(const sg::FieldSpec& f, const std::string& spec) {
  if (spec.empty()) return sg::find_trace_orthogonal_basis(f);
  std::vector<sg::FieldElement> el;
  for (auto v : parse_list(spec, "basis")) el.emplace_back(static_cast<unsigned>(v));
  try {
    return sg::TraceBasis(f, el);
  } catch (const std::invalid_argument& e) {
    throw sg::ValidationError(std::string("basis: ") + e.what());
  }
}

std::string bound_text(int d, int d_bin, int h) {
  return std::to_string(d) + "<=" + std::to_string(d_bin) + "<=" + std::to_string(h * d);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  out << text;
  if (!out) throw sg::Error("cannot write " + path);
}

struct DistanceArgs {
  std::string file;
  std::uint64_t budget = sg::DistanceOptions{}.budget;
  unsigned threads = 1;
};

int cmd_distance(const DistanceArgs& a) {
  const auto m = sg::read_matrix_file(a.file);
  sg::validate_stabiliser(m);
  const int d = sg::minimum_distance(m, {a.budget, a.threads});
  const auto p = sg::code_parameters(m, d);
  Report r;
  r.add("q", m.field().order());
  r.add("n", p.n);
  r.add("r", m.num_rows());
  r.add("k", p.k.to_string());
  r.add("d", d);
  r.add("parameters", p.to_string());
  r.add("pure", sg::is_pure(m, d));
  r.add("singleton_margin", sg::singleton_margin(p).to_string());
  r.add("mds", sg::is_mds(p));
  r.print(std::cout);
  return kOk;
}

struct ConvertArgs {
  std::string file;
  int to_h = 0;
  std::uint32_t modulus = 0;
  std::string source_basis;
  std::string basis;
  std::string partition;
  std::string permute;
  std::string output;
  std::string symbol = "a";
  bool pretty = false;
  bool no_distance = false;
  bool allow_rank_deficient = false;
  std::uint64_t budget = sg::DistanceOptions{}.budget;
};

int cmd_convert(const ConvertArgs& a) {
  const auto m = sg::read_matrix_file(a.file);
  sg::validate_stabiliser(m);
  sg::FieldSpec target_field(a.to_h);
  if (a.modulus) {
    try {
      target_field = sg::FieldSpec(a.to_h, a.modulus);
    } catch (const std::invalid_argument& e) {
      throw sg::ValidationError(std::string("modulus: ") + e.what());
    }
  }
  const auto src_basis = basis_from(m.field(), a.source_basis);
  const auto dst_basis = basis_from(target_field, a.basis);
  const std::size_t nb = m.n() * static_cast<std::size_t>(m.h());
  if (!a.partition.empty() && !a.permute.empty()) throw sg::ParseError("--partition and --permute exclude each other");

  std::vector<std::size_t> perm;
  if (!a.partition.empty()) {
    for (const auto& g : parse_groups(a.partition, "partition")) {
      if (g.size() != static_cast<std::size_t>(a.to_h))
        throw sg::ValidationError("partition group does not have " + std::to_string(a.to_h) + " members");
      perm.insert(perm.end(), g.begin(), g.end());
    }
  } else if (!a.permute.empty()) {
    const auto g = parse_groups(a.permute, "permutation");
    if (g.size() != 1) throw sg::ParseError("--permute takes one comma-separated list");
    perm = g.front();
  } else {
    for (std::size_t i = 0; i < nb; ++i) perm.push_back(i);
  }
  sg::MergeOptions opts;
  opts.require_full_rank_blocks = !a.allow_rank_deficient;
  const auto out = sg::convert(m, src_basis, perm, dst_basis, opts);

  std::string text = sg::format_matrix(out, a.pretty, a.symbol);
  if (!a.no_distance) {
    const sg::DistanceOptions dopt{a.budget, 1};
    const int d_in = sg::minimum_distance(m, dopt);
    const int d_bin = sg::minimum_distance(sg::expand(m, src_basis), dopt);
    const int d_out = sg::minimum_distance(out, dopt);
    const bool in_ok = d_in <= d_bin && d_bin <= m.h() * d_in;
    const bool out_ok = d_out <= d_bin && d_bin <= out.h() * d_out;
    if (!in_ok || !out_ok) throw sg::InconsistencyError("distance bound d <= d' <= hd violated");
    Report r;
    r.add("input", sg::code_parameters(m, d_in).to_string());
    r.add("binary", sg::code_parameters(sg::expand(m, src_basis), d_bin).to_string());
    r.add("output", sg::code_parameters(out, d_out).to_string());
    r.add("d_input", d_in);
    r.add("d_binary", d_bin);
    r.add("d_output", d_out);
    r.add("bound_input", bound_text(d_in, d_bin, m.h()));
    r.add("bound_output", bound_text(d_out, d_bin, out.h()));
    r.add("bound_holds", true);
    std::ostringstream s;
    r.print(s, "# ");
    text += s.str();
  }
  write_text(a.output, text);
  return kOk;
}

/// Blocks and the algebraic counterpart of a matrix file for --h.
struct Geometry {
  sg::StabiliserMatrix code;  // over GF(2^h)
  sg::PolarSpaceSet blocks;
};

Geometry geometry_of(const sg::StabiliserMatrix& m, int h) {
  Geometry g;
  if (m.h() == 1 && h > 1) {
    const sg::FieldSpec f(h);
    g.blocks = sg::blocks_from_matrix(m, h);
    g.code = sg::merge(m, sg::find_trace_orthogonal_basis(f), sg::aligned_partition(m.n(), static_cast<std::size_t>(h)));
  } else {
    if (h != 0 && h != m.h()) throw sg::ValidationError("--h must be 1 or match the field of a non-binary file");
    g.blocks = sg::blocks_from_matrix(sg::expand(m, sg::find_trace_orthogonal_basis(m.field())), m.h());
    g.code = m;
  }
  return g;
}

struct VerifyArgs {
  std::string file;
  int h = 0;
  std::uint64_t budget = sg::DistanceOptions{}.budget;
};

int cmd_verify(const VerifyArgs& a) {
  const auto m = sg::read_matrix_file(a.file);
  sg::validate_stabiliser(m);
  const auto g = geometry_of(m, a.h);
  const auto qs = sg::verify_quantum_set(g.blocks);
  Report r;
  r.add("blocks", g.blocks.n());
  r.add("h", g.blocks.h);
  r.add("ambient_dim", g.blocks.ambient_dim);
  r.add("block_ranks", qs.blocks_full_rank);
  r.add("forms_nondegenerate", qs.forms_nondegenerate);
  r.add("spans", qs.spans);
  r.add("subspaces_checked", qs.subspaces_checked);
  r.add("quantum_set", qs.ok());
  if (!qs.ok()) {
    r.print(std::cout);
    throw sg::InconsistencyError("a valid stabiliser failed the quantum-set check");
  }
  const int d_geo = sg::geometric_min_distance(g.blocks);
  const int d_alg = sg::minimum_distance(g.code, {a.budget, 1});
  r.add("d_geometric", d_geo);
  r.add("d_algebraic", d_alg);
  r.add("consistent", d_geo == d_alg);
  r.print(std::cout);
  if (d_geo != d_alg) throw sg::InconsistencyError("geometric and algebraic distance disagree");
  return kOk;
}

struct ProjectArgs {
  std::string file;
  int h = 0;
  std::size_t block = 1;
  std::string output;
  bool pretty = false;
};

int cmd_project(const ProjectArgs& a) {
  const auto m = sg::read_matrix_file(a.file);
  sg::validate_stabiliser(m);
  const auto g = geometry_of(m, a.h);
  if (a.block == 0 || a.block > g.blocks.n()) throw sg::ValidationError("block index out of range");
  const auto px = sg::project_from_block(g.blocks, a.block - 1);
  auto bin = sg::matrix_from_blocks(px);
  const int h = g.blocks.h;
  const auto out = m.h() == 1 ? bin
                              : sg::merge(bin, sg::find_trace_orthogonal_basis(m.field()),
                                          sg::aligned_partition(bin.n(), static_cast<std::size_t>(h)));
  std::string text = sg::format_matrix(out, a.pretty);
  const auto qs = sg::verify_quantum_set(px);
  Report r;
  r.add("projected_from", a.block);
  r.add("quantum_set", qs.ok());
  if (qs.ok() && px.n() > 0) {
    const auto code = m.h() == 1 && h > 1 ? sg::merge(bin, sg::find_trace_orthogonal_basis(sg::FieldSpec(h)),
                                                       sg::aligned_partition(bin.n(), static_cast<std::size_t>(h)))
                                          : out;
    const int d = sg::minimum_distance(code);
    r.add("parameters", sg::code_parameters(code, d).to_string());
  }
  std::ostringstream s;
  r.print(s, "# ");
  write_text(a.output, text + s.str());
  return kOk;
}

struct ClassifyArgs {
  std::string task;
  std::string census_dir = "census";
  bool resume = false;
  unsigned jobs = 1;
  bool long_run = false;
  bool quiet = false;
};

std::string tuple_text(const std::vector<std::size_t>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

int cmd_classify(const ClassifyArgs& a) {
  sg::ClassifyOptions o;
  o.census_dir = a.census_dir;
  o.resume = a.resume;
  o.jobs = a.jobs;
  if (!a.quiet) o.log = [](const std::string& s) { std::cerr << s << std::endl; };
  const auto t0 = std::chrono::steady_clock::now();
  Report r;
  r.add("task", a.task);
  if (a.task == "four-solids") {
    const auto rep = sg::run_four_solids(o);
    r.add("configurations", rep.configs.size());
    r.add("conjugacy_classes", rep.conjugacy_classes);
    r.add("labelings_per_config", tuple_text(rep.labelings_per_config));
    r.add("labelings", rep.labelings.size());
    r.add("labeling_classes", rep.labeling_classes);
    r.add("unique_4_0_3", rep.labeling_classes == 1);
  } else if (a.task == "six-solids") {
    const auto rep = sg::run_six_solids(o);
    r.add("configurations", rep.configs.size());
    r.add("labelings", rep.labelings.size());
  } else if (a.task == "refute-714") {
    if (!a.long_run) {
      std::cerr << "refute-714 is a long run; pass --long-run to start it\n";
      return kUsage;
    }
    const auto rep = sg::run_refute_714(o);
    const auto t = rep.totals();
    r.add("branches", rep.branches.size());
    r.add("all_consistent", t.consistent);
    r.add("candidates", t.candidates);
    r.add("invertible", t.invertible);
    r.add("spanning", t.spanning);
    r.add("q_rank_0", t.q_rank[0]);
    r.add("q_rank_2", t.q_rank[1]);
    r.add("q_rank_4", t.q_rank[2]);
    r.add("code_7_1_4", rep.verdict_714());
    r.add("code_8_0_5", rep.verdict_805());
  } else {
    std::cerr << "unknown task '" << a.task << "'\n";
    return kUsage;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.add("census_dir", a.census_dir);
  r.add("seconds", secs);
  r.print(std::cout);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stabiliser codes over fields of even order"};
  app.require_subcommand(1);

  DistanceArgs da;
  auto* dist = app.add_subcommand("distance", "Parameters, purity and Singleton margin of a code");
  dist->add_option("file", da.file, "Matrix file")->required();
  dist->add_option("--budget", da.budget, "Maximum number of dual elements to enumerate");
  dist->add_option("--threads", da.threads, "Worker threads for the enumeration");

  ConvertArgs ca;
  auto* conv = app.add_subcommand("convert", "Expand to binary, permute and merge to GF(2^h')");
  conv->add_option("file", ca.file, "Matrix file")->required();
  conv->add_option("--to-h", ca.to_h, "Target field degree h'")->required()->check(CLI::Range(1, 8));
  conv->add_option("--modulus", ca.modulus, "Target field modulus as an integer");
  conv->add_option("--source-basis", ca.source_basis, "Trace-orthogonal basis of the source field, e.g. 2,3");
  conv->add_option("--basis", ca.basis, "Trace-orthogonal basis of the target field, e.g. 2,4,7");
  conv->add_option("--partition", ca.partition, "Groups of binary qubits (1-based), e.g. '1,4;5,8;2,7;3,6'");
  conv->add_option("--permute", ca.permute, "Binary qubit order (1-based), e.g. 1,4,5,8,2,7,3,6");
  conv->add_option("-o,--output", ca.output, "Output file (default stdout)");
  conv->add_flag("--pretty", ca.pretty, "Print entries as powers of the field generator");
  conv->add_option("--symbol", ca.symbol, "Generator symbol for --pretty");
  conv->add_flag("--no-distance", ca.no_distance, "Skip the distance report");
  conv->add_flag("--allow-rank-deficient", ca.allow_rank_deficient, "Accept groups with dependent columns");
  conv->add_option("--budget", ca.budget, "Maximum number of dual elements to enumerate");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "Geometric checks of the quantum set of polar spaces");
  ver->set_help_flag("--help", "Print this help message and exit");
  ver->add_option("file", va.file, "Matrix file")->required();
  ver->add_option("--h", va.h, "Block size for a binary file")->check(CLI::Range(1, 8));
  ver->add_option("--budget", va.budget, "Maximum number of dual elements to enumerate");

  ProjectArgs pa;
  auto* proj = app.add_subcommand("project", "Quotient of the blocks by one block");
  proj->set_help_flag("--help", "Print this help message and exit");
  proj->add_option("file", pa.file, "Matrix file")->required();
  proj->add_option("--h", pa.h, "Block size for a binary file")->check(CLI::Range(1, 8));
  proj->add_option("--block", pa.block, "Block to project from (1-based)");
  proj->add_option("-o,--output", pa.output, "Output file (default stdout)");
  proj->add_flag("--pretty", pa.pretty, "Print entries as powers of the field generator");

  ClassifyArgs cla;
  auto* cls = app.add_subcommand("classify", "Staged solid classification with a resumable census");
  cls->add_option("--task", cla.task, "four-solids, six-solids or refute-714")
      ->required()
      ->check(CLI::IsMember({"four-solids", "six-solids", "refute-714"}));
  cls->add_option("--census-dir", cla.census_dir, "Census directory");
  cls->add_flag("--resume", cla.resume, "Reuse finished stages and logged branches");
  cls->add_option("--jobs", cla.jobs, "Worker threads")->check(CLI::Range(1, 1024));
  cls->add_flag("--long-run", cla.long_run, "Required for refute-714");
  cls->add_flag("-q,--quiet", cla.quiet, "No progress messages");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (dist->parsed()) return cmd_distance(da);
    if (conv->parsed()) return cmd_convert(ca);
    if (ver->parsed()) return cmd_verify(va);
    if (proj->parsed()) return cmd_project(pa);
    if (cls->parsed()) return cmd_classify(cla);
  } catch (const sg::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const sg::ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kValidation;
  } catch (const sg::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const sg::InconsistencyError& e) {
    std::cerr << "internal inconsistency: " << e.what() << '\n';
    return kInconsistency;
  } catch (const sg::CensusError& e) {
    std::cerr << "census error: " << e.what() << '\n';
    return kCensus;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kUsage;
}
