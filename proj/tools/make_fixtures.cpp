// Regenerates the committed test fixtures under tests/fixtures/.
//
//   make_fixtures <fixture-dir>
//
// Every file is a deterministic function of the portable Rng, so rerunning
// the tool reproduces the committed bytes.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "spkm/io.hpp"
#include "spkm/validation.hpp"

namespace fs = std::filesystem;
using namespace spkm;

namespace {

constexpr std::size_t kPitfallK = 4;
constexpr std::uint64_t kPitfallInitSeed = 1;

bool naive_hamerly_fails(const Dataset& data) {
  for (Variant v : {Variant::kHamerly, Variant::kSimplifiedHamerly}) {
    const auto safe = validation::audit_bounds(data, v, kPitfallK, kPitfallInitSeed);
    const auto naive = validation::audit_bounds(data, v, kPitfallK, kPitfallInitSeed,
                                                HamerlyUpperRule::kNaiveMinDrift);
    if (!safe.pass || naive.pass) return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <fixture-dir>\n";
    return 1;
  }
  const fs::path dir = argv[1];
  fs::create_directories(dir / "grid");

  validation::TopicCorpusSpec big;
  big.rows = 2000;
  big.dim = 5000;
  big.seed = 20211;
  write_svmlight(dir / "topics_2000x5000.svm", validation::make_topic_corpus(big));

  for (std::size_t f = 0; f < 25; ++f) {
    const auto g = validation::grid_fixture(f);
    validation::TopicCorpusSpec spec;
    spec.rows = g.rows;
    spec.dim = g.dim;
    spec.seed = g.seed;
    char name[32];
    std::snprintf(name, sizeof(name), "grid_%02zu.svm", f);
    write_svmlight(dir / "grid" / name, validation::make_topic_corpus(spec));
  }

  // Smallest data seed whose uniform seeding drives the naive single-drift
  // Hamerly update into a bound violation while the safe update stays sound.
  for (std::uint64_t seed = 0; seed < 100000; ++seed) {
    Corpus c = validation::make_gaussian_corpus(24, 3, seed);
    Dataset data(c.rows, c.dim);
    if (!naive_hamerly_fails(data)) continue;
    write_svmlight(dir / "hamerly_pitfall.svm", c);
    std::cout << "hamerly_pitfall.svm: data seed " << seed << ", k = " << kPitfallK
              << ", init seed " << kPitfallInitSeed << '\n';
    return 0;
  }
  std::cerr << "no pitfall instance found\n";
  return 2;
}
