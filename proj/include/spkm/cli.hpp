#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "spkm/engine.hpp"
#include "spkm/init.hpp"
#include "spkm/sparse.hpp"

namespace spkm::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kDataError = 2, kAuditFailed = 3 };

struct RunConfig {
  std::filesystem::path input;
  std::vector<std::size_t> ks;      // exactly one outside bench mode
  std::vector<Variant> variants;    // exactly one outside bench mode
  SeedConfig seeding;
  std::size_t repeats = 1;
  std::size_t max_iter = 100;
  bool tfidf = false;
  bool tfidf_smooth = false;
  std::filesystem::path out_assignments;
  std::filesystem::path out_stats;
  bool audit = false;
  bool bench = false;
};

// `seed,variant,k,iterations,total_sims,total_cc_sims,objective,wall_ns`
struct RunSummary {
  std::uint64_t seed = 0;
  Variant variant = Variant::kStandard;
  std::size_t k = 0;
  std::size_t iterations = 0;
  std::uint64_t total_sims = 0;
  std::uint64_t total_cc_sims = 0;
  double objective = 0.0;
  std::uint64_t wall_ns = 0;
};
std::string format_summary(const RunSummary& s);

struct BenchRow {
  Variant variant = Variant::kStandard;
  std::size_t k = 0;
  std::size_t repeats = 0;
  double mean_wall_ns = 0.0, stddev_wall_ns = 0.0;
  double mean_iterations = 0.0, stddev_iterations = 0.0;
  double mean_total_sims = 0.0, stddev_total_sims = 0.0;
  double mean_objective = 0.0;
};

inline constexpr const char* kBenchHeader =
    "variant,k,repeats,mean_wall_ns,stddev_wall_ns,mean_iterations,stddev_iterations,"
    "mean_total_sims,stddev_total_sims,mean_objective";

// One row per (variant, k), each over seeds seed .. seed + repeats - 1.
std::vector<BenchRow> bench_compare(const Dataset& data, std::span<const Variant> variants,
                                    std::span<const std::size_t> ks, const SeedConfig& seeding,
                                    std::size_t repeats, std::size_t max_iter);
void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows);

// Loads the input (optionally TF-IDF weighted) as a normalized Dataset.
// Rows emptied by weighting raise ZeroNormRowsError.
Dataset load_dataset(const RunConfig& config);

// Per-run output path: `path` itself for a single repeat, otherwise
// `<stem>.seed<seed><ext>`.
std::filesystem::path per_seed_path(const std::filesystem::path& path, std::uint64_t seed,
                                    std::size_t repeats);

// Entry point shared by the spkmeans binary and the tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spkm::cli
