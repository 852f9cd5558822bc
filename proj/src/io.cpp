#include "spkm/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "spkm/errors.hpp"

namespace spkm {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

// Parses the `# dim: N` header form; nullopt for any other comment.
std::optional<std::size_t> dim_header(std::string_view line) {
  line.remove_prefix(1);
  line = trim(line);
  constexpr std::string_view kKey = "dim:";
  if (line.substr(0, kKey.size()) != kKey) return std::nullopt;
  std::size_t d = 0;
  if (!parse_number(trim(line.substr(kKey.size())), d)) return std::nullopt;
  return d;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

CorpusMeta describe(const Corpus& corpus, std::string source) {
  CorpusMeta m;
  m.n_rows = corpus.rows.size();
  m.n_cols = corpus.dim;
  std::size_t nnz = 0;
  for (const auto& r : corpus.rows) nnz += r.nnz();
  if (m.n_rows > 0 && m.n_cols > 0) {
    m.density = static_cast<double>(nnz) /
                (static_cast<double>(m.n_rows) * static_cast<double>(m.n_cols));
  }
  m.source = std::move(source);
  return m;
}

Corpus parse_svmlight(std::istream& in) {
  Corpus corpus;
  std::optional<std::size_t> declared;
  std::size_t max_dim = 0;
  std::string raw;
  std::size_t line_no = 0;
  bool seen_data = false;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (!seen_data && !declared) declared = dim_header(line);
      continue;
    }
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = trim(line.substr(0, hash));
    }
    seen_data = true;

    std::vector<Index> idx;
    std::vector<double> val;
    bool first = true;
    std::size_t pos = 0;
    while (pos < line.size()) {
      const auto end = line.find_first_of(" \t", pos);
      const auto tok = line.substr(pos, end == std::string_view::npos ? line.size() - pos : end - pos);
      pos = end == std::string_view::npos ? line.size() : line.find_first_not_of(" \t", end);
      if (pos == std::string_view::npos) pos = line.size();
      if (tok.empty()) continue;

      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        if (!first) throw ParseError(line_no, "malformed pair '" + std::string(tok) + "'");
        first = false;  // label, discarded
        continue;
      }
      first = false;
      const auto key = tok.substr(0, colon);
      if (key == "qid") continue;
      Index index = 0;
      if (!parse_number(key, index)) {
        throw ParseError(line_no, "malformed index in '" + std::string(tok) + "'");
      }
      double value = 0.0;
      if (!parse_number(tok.substr(colon + 1), value) || !std::isfinite(value)) {
        throw ParseError(line_no, "non-numeric value in '" + std::string(tok) + "'");
      }
      if (!idx.empty() && index <= idx.back()) {
        throw ParseError(line_no, "indices not strictly increasing at '" + std::string(tok) + "'");
      }
      idx.push_back(index);
      val.push_back(value);
    }
    SparseVector row(std::move(idx), std::move(val));
    max_dim = std::max(max_dim, row.min_dim());
    corpus.rows.push_back(std::move(row));
  }

  if (declared) {
    if (*declared < max_dim) {
      throw ParseError(1, "declared dim " + std::to_string(*declared) +
                              " is smaller than max index + 1 = " + std::to_string(max_dim));
    }
    corpus.dim = *declared;
  } else {
    corpus.dim = max_dim;
  }
  return corpus;
}

Corpus parse_svmlight(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_svmlight(in);
}

void write_svmlight(std::ostream& out, const Corpus& corpus) {
  out << "# dim: " << corpus.dim << '\n';
  for (const auto& row : corpus.rows) {
    out << '0';
    const auto idx = row.indices();
    const auto val = row.values();
    for (std::size_t t = 0; t < idx.size(); ++t) {
      out << ' ' << idx[t] << ':' << format_double(val[t]);
    }
    out << '\n';
  }
}

void write_svmlight(const std::filesystem::path& path, const Corpus& corpus) {
  auto out = open_out(path);
  write_svmlight(out, corpus);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

TfidfResult apply_tfidf(const Corpus& counts, bool smooth) {
  const std::size_t n = counts.rows.size();
  std::vector<std::size_t> df(counts.dim, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto val = counts.rows[i].values();
    for (double v : val) {
      if (v < 0.0) throw Error("tf-idf: negative term count in row " + std::to_string(i));
    }
    for (auto t : counts.rows[i].indices()) ++df[t];
  }
  const double dn = static_cast<double>(n);
  std::vector<double> idf(counts.dim, 0.0);
  for (std::size_t t = 0; t < counts.dim; ++t) {
    if (df[t] == 0) continue;
    const double d = static_cast<double>(df[t]);
    idf[t] = smooth ? std::log((1.0 + dn) / (1.0 + d)) + 1.0 : std::log(dn / d);
  }

  TfidfResult result;
  result.corpus.dim = counts.dim;
  for (std::size_t i = 0; i < n; ++i) {
    const auto idx = counts.rows[i].indices();
    const auto val = counts.rows[i].values();
    std::vector<Index> out_idx(idx.begin(), idx.end());
    std::vector<double> out_val(val.size());
    for (std::size_t t = 0; t < idx.size(); ++t) out_val[t] = val[t] * idf[idx[t]];
    SparseVector row(std::move(out_idx), std::move(out_val));
    if (row.empty()) {
      result.dropped_rows.push_back(i);
    } else {
      result.corpus.rows.push_back(std::move(row));
    }
  }
  return result;
}

void write_assignments(std::ostream& out, std::span<const Assignment> assignments) {
  for (std::size_t i = 0; i < assignments.size(); ++i) out << i << ',' << assignments[i] << '\n';
}

void write_assignments(const std::filesystem::path& path, const ClusteringResult& result) {
  auto out = open_out(path);
  write_assignments(out, result.assignments);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<Assignment> read_assignments(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<Assignment> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto s = trim(line);
    if (s.empty()) continue;
    const auto comma = s.find(',');
    std::size_t row = 0;
    Assignment cluster = 0;
    if (comma == std::string_view::npos || !parse_number(s.substr(0, comma), row) ||
        !parse_number(s.substr(comma + 1), cluster) || row != out.size()) {
      throw ParseError(line_no, "expected '" + std::to_string(out.size()) + ",<cluster>'");
    }
    out.push_back(cluster);
  }
  return out;
}

void write_stats_csv(std::ostream& out, std::span<const IterationStats> stats) {
  out << kStatsHeader << '\n';
  for (const auto& s : stats) {
    out << s.iteration << ',' << s.sim_count << ',' << s.cc_sim_count << ',' << s.reassignments
        << ',' << format_double(s.objective) << ',' << s.elapsed_ns << '\n';
  }
}

void write_stats_csv(const std::filesystem::path& path, const ClusteringResult& result) {
  auto out = open_out(path);
  write_stats_csv(out, result.iterations);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<IterationStats> read_stats_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || trim(line) != kStatsHeader) {
    throw ParseError(line_no, std::string("expected header '") + kStatsHeader + "'");
  }
  std::vector<IterationStats> out;
  while (std::getline(in, line)) {
    ++line_no;
    const auto s = trim(line);
    if (s.empty()) continue;
    std::vector<std::string_view> f;
    std::size_t pos = 0;
    while (true) {
      const auto c = s.find(',', pos);
      f.push_back(s.substr(pos, c == std::string_view::npos ? s.size() - pos : c - pos));
      if (c == std::string_view::npos) break;
      pos = c + 1;
    }
    IterationStats st;
    if (f.size() != 6 || !parse_number(f[0], st.iteration) || !parse_number(f[1], st.sim_count) ||
        !parse_number(f[2], st.cc_sim_count) || !parse_number(f[3], st.reassignments) ||
        !parse_number(f[4], st.objective) || !parse_number(f[5], st.elapsed_ns)) {
      throw ParseError(line_no, "malformed stats row");
    }
    out.push_back(st);
  }
  return out;
}

}  // namespace spkm
