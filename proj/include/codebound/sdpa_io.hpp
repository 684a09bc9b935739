#pragma once

// Interchange formats: SDPA sparse (.dat-s) export/import, JSON dumps of
// problems and blocks, CSV result tables and a key=value config reader.
//
// Export writes the standard minimization form; the internal maximization
// objective is negated on export and re-negated on import, as noted in the
// file header comments.  Values are printed with 17 significant digits so
// doubles round-trip bit-exactly.

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "codebound/model.hpp"
#include "codebound/solver.hpp"

namespace codebound {

inline std::string format_sig17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string export_sdpa_sparse_string(const SdpProblem& p) {
  std::string out;
  out += "\"SDPA sparse format; minimization form.\n";
  out += "\"Internal problem maximizes obj^T x";
  if (p.objective_offset != 0.0) out += " + " + format_sig17(p.objective_offset);
  out += "; exported c = -obj, F0 = -constant.\n";
  out += "\"Re-negate the optimal value on import to recover the bound.\n";
  int m = p.num_vars();
  out += std::to_string(m) + " = mDIM\n";
  int nblock = (int)p.blocks.size() + (p.nonneg_all && m > 0 ? 1 : 0);
  out += std::to_string(nblock) + " = nBLOCK\n";
  {
    std::string sizes;
    for (const auto& b : p.blocks) {
      if (!sizes.empty()) sizes += ' ';
      sizes += std::to_string(b.dim);
    }
    if (p.nonneg_all && m > 0) {
      if (!sizes.empty()) sizes += ' ';
      sizes += std::to_string(-m);
    }
    out += sizes + " = bLOCKsTRUCT\n";
  }
  for (int j = 0; j < m; ++j) {
    if (j) out += ' ';
    out += format_sig17(-p.objective[j]);
  }
  out += "\n";
  auto emit = [&](int matno, int blkno, const SparseSym& mat, double scale) {
    for (const auto& t : mat.entries) {
      double v = t.v.hi * scale;
      if (v == 0.0) continue;
      if (t.r > t.c) throw std::logic_error("export_sdpa_sparse: non-symmetric coefficient storage");
      out += std::to_string(matno) + ' ' + std::to_string(blkno) + ' ' + std::to_string(t.r + 1) +
             ' ' + std::to_string(t.c + 1) + ' ' + format_sig17(v) + '\n';
    }
  };
  for (std::size_t b = 0; b < p.blocks.size(); ++b) {
    // F0 = -C
    emit(0, (int)b + 1, p.blocks[b].constant, -1.0);
    for (const auto& [var, mat] : p.blocks[b].coeff) emit(var + 1, (int)b + 1, mat, 1.0);
  }
  if (p.nonneg_all && m > 0) {
    int blkno = (int)p.blocks.size() + 1;
    for (int j = 0; j < m; ++j)
      out += std::to_string(j + 1) + ' ' + std::to_string(blkno) + ' ' + std::to_string(j + 1) +
             ' ' + std::to_string(j + 1) + " 1\n";
  }
  return out;
}

inline void export_sdpa_sparse(const SdpProblem& p, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("export_sdpa_sparse: cannot open " + path);
  f << export_sdpa_sparse_string(p);
  if (!f) throw std::runtime_error("export_sdpa_sparse: write failed for " + path);
}

namespace detail {

struct SdpaTokenizer {
  std::istream& in;
  int lineno = 0;
  std::vector<std::string> toks;
  std::size_t pos = 0;

  explicit SdpaTokenizer(std::istream& s) : in(s) {}

  bool next_line() {
    std::string line;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && (line[0] == '"' || line[0] == '*')) continue;
      // strip anything after '=' (header annotations) and split on separators
      std::string body = line.substr(0, line.find('='));
      for (char& ch : body)
        if (ch == ',' || ch == '(' || ch == ')' || ch == '{' || ch == '}' || ch == '\t' || ch == '\r')
          ch = ' ';
      toks.clear();
      std::istringstream ss(body);
      std::string t;
      while (ss >> t) toks.push_back(t);
      pos = 0;
      if (!toks.empty()) return true;
    }
    return false;
  }

  std::string take() {
    while (pos >= toks.size()) {
      if (!next_line()) throw std::runtime_error("sdpa import: unexpected end of file at line " +
                                                 std::to_string(lineno));
    }
    return toks[pos++];
  }

  long long take_int(const char* what) {
    std::string t = take();
    try {
      std::size_t used = 0;
      long long v = std::stoll(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (...) {
      throw std::runtime_error(std::string("sdpa import: expected ") + what + " at line " +
                               std::to_string(lineno) + ", got '" + t + "'");
    }
  }

  double take_real(const char* what) {
    std::string t = take();
    try {
      std::size_t used = 0;
      double v = std::stod(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (...) {
      throw std::runtime_error(std::string("sdpa import: expected ") + what + " at line " +
                               std::to_string(lineno) + ", got '" + t + "'");
    }
  }

  bool eof() {
    if (pos < toks.size()) return false;
    return !next_line();
  }
};

}  // namespace detail

// Structural inverse of export: anonymous variables, Generic blocks.  A
// trailing negative (diagonal) block whose entries are exactly the
// identity on the variables is folded back into nonneg_all.
inline SdpProblem import_sdpa_sparse(std::istream& in) {
  detail::SdpaTokenizer tz(in);
  int m = (int)tz.take_int("mDIM");
  if (m < 0) throw std::runtime_error("sdpa import: negative mDIM at line " + std::to_string(tz.lineno));
  int nblock = (int)tz.take_int("nBLOCK");
  if (nblock <= 0) throw std::runtime_error("sdpa import: bad nBLOCK at line " + std::to_string(tz.lineno));
  std::vector<int> bsizes(nblock);
  for (int b = 0; b < nblock; ++b) {
    int s = (int)tz.take_int("block size");
    bsizes[b] = s;
    if (s == 0) throw std::runtime_error("sdpa import: zero block size at line " + std::to_string(tz.lineno));
  }
  SdpProblem p;
  p.kind = BoundKind::A4;
  p.even_mode = false;
  p.nonneg_all = false;
  p.objective.assign(m, 0.0);
  for (int j = 0; j < m; ++j) p.objective[j] = -tz.take_real("objective coefficient");
  for (int j = 0; j < m; ++j) p.var_names.push_back("x" + std::to_string(j + 1));
  p.blocks.resize(nblock);
  std::vector<std::map<int, std::map<std::pair<int, int>, double>>> acc(nblock);
  for (int b = 0; b < nblock; ++b) {
    p.blocks[b].kind = BlockKind::Generic;
    p.blocks[b].dim = std::abs(bsizes[b]);
    for (int i = 0; i < p.blocks[b].dim; ++i) p.blocks[b].index_set.push_back({i, 0});
  }
  while (!tz.eof()) {
    int matno = (int)tz.take_int("matno");
    int blkno = (int)tz.take_int("blkno");
    int i = (int)tz.take_int("row index");
    int j = (int)tz.take_int("column index");
    double v = tz.take_real("value");
    if (matno < 0 || matno > m)
      throw std::runtime_error("sdpa import: matno out of range at line " + std::to_string(tz.lineno));
    if (blkno < 1 || blkno > nblock)
      throw std::runtime_error("sdpa import: blkno out of range at line " + std::to_string(tz.lineno));
    int dim = p.blocks[blkno - 1].dim;
    if (i < 1 || j < 1 || i > dim || j > dim)
      throw std::runtime_error("sdpa import: entry index out of range at line " + std::to_string(tz.lineno));
    if (i > j) std::swap(i, j);
    if (bsizes[blkno - 1] < 0 && i != j)
      throw std::runtime_error("sdpa import: off-diagonal entry in diagonal block at line " +
                               std::to_string(tz.lineno));
    acc[blkno - 1][matno][{i - 1, j - 1}] += v;
  }
  for (int b = 0; b < nblock; ++b) {
    for (auto& [matno, entries] : acc[b]) {
      SparseSym mat;
      for (auto& [rc, v] : entries) {
        if (v == 0.0) continue;
        mat.entries.push_back({rc.first, rc.second, dd(matno == 0 ? -v : v)});
      }
      if (mat.entries.empty()) continue;
      if (matno == 0)
        p.blocks[b].constant = std::move(mat);  // C = -F0
      else
        p.blocks[b].coeff.push_back({matno - 1, std::move(mat)});
    }
  }
  // recognize a trailing nonnegativity block
  if (!p.blocks.empty() && bsizes.back() < 0 && p.blocks.back().dim == m &&
      p.blocks.back().constant.empty() && (int)p.blocks.back().coeff.size() == m) {
    bool ident = true;
    for (int j = 0; j < m && ident; ++j) {
      const auto& [var, mat] = p.blocks.back().coeff[j];
      ident = var == j && mat.entries.size() == 1 && mat.entries[0].r == j && mat.entries[0].c == j &&
              mat.entries[0].v.hi == 1.0 && mat.entries[0].v.lo == 0.0;
    }
    if (ident) {
      p.blocks.pop_back();
      p.nonneg_all = true;
    }
  }
  return p;
}

inline SdpProblem import_sdpa_sparse(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("import_sdpa_sparse: cannot open " + path);
  return import_sdpa_sparse(f);
}

// ---- JSON dumps -----------------------------------------------------------

inline nlohmann::json block_to_json(const BlockSpec& b) {
  nlohmann::json jb;
  jb["id"] = b.id_string();
  jb["dim"] = b.dim;
  nlohmann::json idx = nlohmann::json::array();
  for (auto [i, ip] : b.index_set) idx.push_back({i, ip});
  jb["index_set"] = idx;
  auto mat_json = [](const SparseSym& m) {
    nlohmann::json t = nlohmann::json::array();
    for (const auto& e : m.entries) t.push_back({e.r, e.c, e.v.hi});
    return t;
  };
  jb["constant"] = mat_json(b.constant);
  nlohmann::json cj = nlohmann::json::object();
  for (const auto& [var, mat] : b.coeff) cj[std::to_string(var)] = mat_json(mat);
  jb["coeff"] = cj;
  return jb;
}

inline nlohmann::json problem_to_json(const SdpProblem& p) {
  nlohmann::json j;
  j["n"] = p.n;
  j["d"] = p.d;
  j["kind"] = p.kind == BoundKind::A2 ? "A2" : "A4";
  j["even_mode"] = p.even_mode;
  j["constraint_set"] = p.constraint_set == ConstraintSet::Full ? "full" : "empty-quad";
  j["variables"] = p.var_names;
  j["objective"] = p.objective;
  j["objective_offset"] = p.objective_offset;
  nlohmann::json bl = nlohmann::json::array();
  for (const auto& b : p.blocks) bl.push_back(block_to_json(b));
  j["blocks"] = bl;
  return j;
}

inline nlohmann::json result_to_json(const SolveResult& r) {
  nlohmann::json j;
  j["primal_value"] = r.primal_value;
  j["dual_value"] = r.dual_value;
  j["status"] = to_string(r.status);
  j["iterations"] = r.iterations;
  j["max_block_infeasibility"] = r.max_block_infeasibility;
  if (r.certified_upper_bound)
    j["certified_upper_bound"] = *r.certified_upper_bound;
  else
    j["certified_upper_bound"] = nullptr;
  j["precision"] = r.precision;
  j["wall_seconds"] = r.wall_seconds;
  return j;
}

// ---- result table ---------------------------------------------------------

struct ResultRow {
  int n = 0, d = 0;
  std::string bound_kind;  // "A2" or "A4"
  double value = 0.0;
  std::optional<double> certified_value;
  std::string status;
  double wall_time_seconds = 0.0;
  std::string solver_precision;
};

inline std::string csv_header() {
  return "n,d,bound_kind,value,certified_value,status,wall_time_seconds,solver_precision";
}

inline std::string to_csv(const ResultRow& r) {
  std::string s = std::to_string(r.n) + "," + std::to_string(r.d) + "," + r.bound_kind + "," +
                  format_sig17(r.value) + ",";
  s += r.certified_value ? format_sig17(*r.certified_value) : std::string("");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", r.wall_time_seconds);
  s += "," + r.status + "," + buf + "," + r.solver_precision;
  return s;
}

// ---- config (key=value) ---------------------------------------------------

inline std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_config: cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    std::string s = line;
    auto hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    if (s.empty()) continue;
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("read_config: missing '=' at line " + std::to_string(lineno));
    std::string key = s.substr(0, eq), val = s.substr(eq + 1);
    key.erase(std::find_if(key.rbegin(), key.rend(), notspace).base(), key.end());
    val.erase(val.begin(), std::find_if(val.begin(), val.end(), notspace));
    kv[key] = val;
  }
  return kv;
}

inline void apply_config(SolverOptions& opt, const std::map<std::string, std::string>& kv) {
  for (const auto& [k, v] : kv) {
    if (k == "tol")
      opt.tol = std::stod(v);
    else if (k == "max_iter")
      opt.max_iter = std::stoi(v);
    else if (k == "precision")
      opt.precision = (v == "dd") ? Precision::DD : Precision::F64;
    else if (k == "frac_boundary")
      opt.frac_boundary = std::stod(v);
    else if (k == "init_scale")
      opt.init_scale = std::stod(v);
    else if (k == "verbosity")
      opt.verbosity = std::stoi(v);
    else if (k == "certify")
      opt.certify = (v == "1" || v == "true");
    // unknown keys are ignored so one config can serve several tools
  }
}

}  // namespace codebound
