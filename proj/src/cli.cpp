#include "spkm/cli.hpp"

#include <chrono>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "spkm/errors.hpp"
#include "spkm/io.hpp"
#include "spkm/validation.hpp"

namespace spkm::cli {

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::size_t> parse_ks(const std::string& s) {
  std::vector<std::size_t> ks;
  for (const auto& item : split_list(s)) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size() || v < 1) {
      throw ConfigError("--k: expected a positive integer, got '" + item + "'");
    }
    ks.push_back(static_cast<std::size_t>(v));
  }
  if (ks.empty()) throw ConfigError("--k: missing value");
  return ks;
}

std::vector<Variant> parse_variants(const std::string& s) {
  if (s == "all") return {std::begin(kAllVariants), std::end(kAllVariants)};
  std::vector<Variant> vs;
  for (const auto& item : split_list(s)) vs.push_back(parse_variant(item));
  if (vs.empty()) throw ConfigError("--variant: missing value");
  return vs;
}

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

struct TimedRun {
  ClusteringResult result;
  std::uint64_t wall_ns = 0;
  validation::AuditReport audit;
};

TimedRun run_once(const Dataset& data, std::size_t k, Variant variant, SeedConfig seeding,
                  std::size_t max_iter, bool audit) {
  const auto t0 = std::chrono::steady_clock::now();
  Seeding seeded = seed_centers(data, k, seeding);
  EngineOptions options;
  options.max_iter = max_iter;
  validation::BoundAuditor auditor(data);
  if (audit) options.observer = &auditor;
  TimedRun r;
  r.result = SphericalKMeans(data, std::move(seeded.centroids), variant, options).run();
  r.wall_ns = static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(
                                             std::chrono::steady_clock::now() - t0)
                                             .count());
  if (audit) r.audit = auditor.report();
  return r;
}

}  // namespace

std::string format_summary(const RunSummary& s) {
  std::ostringstream os;
  os << s.seed << ',' << to_string(s.variant) << ',' << s.k << ',' << s.iterations << ','
     << s.total_sims << ',' << s.total_cc_sims << ',' << format_double(s.objective) << ','
     << s.wall_ns;
  return os.str();
}

std::vector<BenchRow> bench_compare(const Dataset& data, std::span<const Variant> variants,
                                    std::span<const std::size_t> ks, const SeedConfig& seeding,
                                    std::size_t repeats, std::size_t max_iter) {
  std::vector<BenchRow> rows;
  for (const std::size_t k : ks) {
    for (const Variant v : variants) {
      std::vector<double> wall, iters, sims, objective;
      for (std::size_t r = 0; r < repeats; ++r) {
        SeedConfig sc = seeding;
        sc.seed = seeding.seed + r;
        const TimedRun run = run_once(data, k, v, sc, max_iter, false);
        wall.push_back(static_cast<double>(run.wall_ns));
        iters.push_back(static_cast<double>(run.result.iterations.size()));
        sims.push_back(static_cast<double>(run.result.total_sims()));
        objective.push_back(run.result.objective);
      }
      BenchRow row;
      row.variant = v;
      row.k = k;
      row.repeats = repeats;
      const auto w = moments(wall);
      const auto it = moments(iters);
      const auto sm = moments(sims);
      row.mean_wall_ns = w.mean;
      row.stddev_wall_ns = w.stddev;
      row.mean_iterations = it.mean;
      row.stddev_iterations = it.stddev;
      row.mean_total_sims = sm.mean;
      row.stddev_total_sims = sm.stddev;
      row.mean_objective = moments(objective).mean;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows) {
  out << kBenchHeader << '\n';
  for (const auto& r : rows) {
    out << to_string(r.variant) << ',' << r.k << ',' << r.repeats << ','
        << format_double(r.mean_wall_ns) << ',' << format_double(r.stddev_wall_ns) << ','
        << format_double(r.mean_iterations) << ',' << format_double(r.stddev_iterations) << ','
        << format_double(r.mean_total_sims) << ',' << format_double(r.stddev_total_sims) << ','
        << format_double(r.mean_objective) << '\n';
  }
}

Dataset load_dataset(const RunConfig& config) {
  Corpus corpus = parse_svmlight(config.input);
  if (config.tfidf || config.tfidf_smooth) {
    TfidfResult weighted = apply_tfidf(corpus, config.tfidf_smooth);
    if (!weighted.dropped_rows.empty()) throw ZeroNormRowsError(weighted.dropped_rows);
    corpus = std::move(weighted.corpus);
  }
  return Dataset(std::move(corpus.rows), corpus.dim);
}

std::filesystem::path per_seed_path(const std::filesystem::path& path, std::uint64_t seed,
                                    std::size_t repeats) {
  if (repeats <= 1) return path;
  std::filesystem::path p = path;
  p.replace_filename(path.stem().string() + ".seed" + std::to_string(seed) +
                     path.extension().string());
  return p;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spherical k-means with Cosine triangle-inequality pruning"};
  app.set_help_all_flag("--help-all");

  RunConfig config;
  std::string k_text;
  std::string variant_text = "standard";
  std::string init_text = "uniform";

  auto add_common = [&](CLI::App& a) {
    a.add_option("--input", config.input, "SVMlight/libsvm input file");
    a.add_option("--k", k_text, "number of clusters (bench: comma list)");
    a.add_option("--variant", variant_text,
                 "standard|elkan|simp_elkan|hamerly|simp_hamerly (bench: comma list or all)");
    a.add_option("--init", init_text, "uniform|kmpp|afkmc2");
    a.add_option("--alpha", config.seeding.alpha, "seeding dissimilarity offset, in [1, 2]");
    a.add_option("--chain-length", config.seeding.chain_length, "AFK-MC2 chain length");
    a.add_option("--seed", config.seeding.seed, "first seed; repeats use seed, seed+1, ...");
    a.add_option("--repeats", config.repeats, "number of seeded runs");
    a.add_option("--max-iter", config.max_iter, "iteration cap");
    a.add_flag("--tfidf", config.tfidf, "apply TF-IDF weighting, idf = ln(n/df)");
    a.add_flag("--tfidf-smooth", config.tfidf_smooth,
               "apply TF-IDF weighting, idf = ln((1+n)/(1+df)) + 1");
  };
  add_common(app);
  app.add_option("--out-assignments", config.out_assignments, "row_index,cluster output");
  app.add_option("--out-stats", config.out_stats, "per-iteration stats CSV");
  app.add_flag("--audit", config.audit, "recompute exact similarities at every bound check");

  CLI::App* bench = app.add_subcommand("bench", "compare variants over a grid of k");
  add_common(*bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    config.bench = bench->parsed();
    if (config.input.empty()) throw ConfigError("--input: required");
    if (k_text.empty()) throw ConfigError("--k: required");
    config.ks = parse_ks(k_text);
    config.variants = parse_variants(variant_text);
    config.seeding.method = parse_init_method(init_text);
    config.seeding.validate();
    if (config.repeats < 1) throw ConfigError("--repeats: must be >= 1");
    if (config.max_iter < 1) throw ConfigError("--max-iter: must be >= 1");
    if (!config.bench && (config.ks.size() != 1 || config.variants.size() != 1)) {
      throw ConfigError("--k/--variant: lists are only accepted by the bench subcommand");
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  std::optional<Dataset> loaded;
  try {
    loaded.emplace(load_dataset(config));
  } catch (const Error& e) {
    err << "error: " << config.input.string() << ": " << e.what() << '\n';
    return kDataError;
  }
  const Dataset& data = *loaded;

  try {
    for (const std::size_t k : config.ks) {
      if (k > data.size()) {
        throw InfeasibleError("--k: " + std::to_string(k) + " exceeds the " +
                              std::to_string(data.size()) + " rows of the input");
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (config.bench) {
      const auto rows = bench_compare(data, config.variants, config.ks, config.seeding,
                                      config.repeats, config.max_iter);
      write_bench_csv(out, rows);
      out.flush();
      return kOk;
    }

    bool audit_ok = true;
    for (std::size_t r = 0; r < config.repeats; ++r) {
      SeedConfig sc = config.seeding;
      sc.seed = config.seeding.seed + r;
      const TimedRun run =
          run_once(data, config.ks.front(), config.variants.front(), sc, config.max_iter, config.audit);
      if (!config.out_assignments.empty()) {
        write_assignments(per_seed_path(config.out_assignments, sc.seed, config.repeats), run.result);
      }
      if (!config.out_stats.empty()) {
        write_stats_csv(per_seed_path(config.out_stats, sc.seed, config.repeats), run.result);
      }
      RunSummary s;
      s.seed = sc.seed;
      s.variant = config.variants.front();
      s.k = config.ks.front();
      s.iterations = run.result.iterations.size();
      s.total_sims = run.result.total_sims();
      s.total_cc_sims = run.result.total_cc_sims();
      s.objective = run.result.objective;
      s.wall_ns = run.wall_ns;
      out << format_summary(s) << std::endl;
      if (config.audit) {
        err << "audit seed=" << sc.seed << " decisions=" << run.audit.decisions
            << " max_lower_violation=" << format_double(run.audit.max_lower_violation)
            << " max_upper_violation=" << format_double(run.audit.max_upper_violation) << ' '
            << (run.audit.pass ? "PASS" : "FAIL") << '\n';
        audit_ok = audit_ok && run.audit.pass;
      }
    }
    return audit_ok ? kOk : kAuditFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace spkm::cli
