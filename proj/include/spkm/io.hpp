#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spkm/engine.hpp"
#include "spkm/sparse.hpp"

namespace spkm {

// Rows as read from disk, before weighting and normalization.
struct Corpus {
  std::vector<SparseVector> rows;
  std::size_t dim = 0;
};

struct CorpusMeta {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  double density = 0.0;  // fraction of non-zero cells
  std::string source;
};

CorpusMeta describe(const Corpus& corpus, std::string source = {});

// SVMlight / libsvm text. Each line is an optional label followed by
// `index:value` pairs with strictly increasing indices; indices are stored
// verbatim. Blank lines and `#` comments are skipped, except a leading
// `# dim: N` header, which declares the dimensionality. Without a header the
// dimensionality is max index + 1. Throws ParseError with the line number.
Corpus parse_svmlight(std::istream& in);
Corpus parse_svmlight(const std::filesystem::path& path);

// Writes the `# dim: N` header and one `0 idx:val ...` line per row, values
// in shortest round-trip form.
void write_svmlight(std::ostream& out, const Corpus& corpus);
void write_svmlight(const std::filesystem::path& path, const Corpus& corpus);

struct TfidfResult {
  Corpus corpus;
  std::vector<std::size_t> dropped_rows;  // rows left with no non-zero weight
};

// value <- tf * idf with raw counts as tf. idf = ln(n / df) by default, or
// ln((1 + n) / (1 + df)) + 1 with `smooth`. Terms whose weight is zero are
// stripped; rows that end up empty are removed and listed in dropped_rows.
// Throws Error on negative counts.
TfidfResult apply_tfidf(const Corpus& counts, bool smooth = false);

// `row_index,cluster` per line.
void write_assignments(std::ostream& out, std::span<const Assignment> assignments);
void write_assignments(const std::filesystem::path& path, const ClusteringResult& result);
std::vector<Assignment> read_assignments(const std::filesystem::path& path);

inline constexpr const char* kStatsHeader =
    "iteration,sim_count,cc_sim_count,reassignments,objective,elapsed_ns";

void write_stats_csv(std::ostream& out, std::span<const IterationStats> stats);
void write_stats_csv(const std::filesystem::path& path, const ClusteringResult& result);
std::vector<IterationStats> read_stats_csv(const std::filesystem::path& path);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace spkm
