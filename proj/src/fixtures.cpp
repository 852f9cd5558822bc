#include <algorithm>
#include <cmath>
#include <utility>

#include "spkm/validation.hpp"

namespace spkm::validation {

Corpus make_topic_corpus(const TopicCorpusSpec& spec) {
  Rng rng(spec.seed);
  const std::size_t topics = std::clamp<std::size_t>(spec.topics, 1, std::max<std::size_t>(1, spec.dim / 2));
  const std::size_t block = spec.dim / topics;
  const auto target = static_cast<std::size_t>(
      std::max(2.0, std::round(spec.density * static_cast<double>(spec.dim))));

  Corpus c;
  c.dim = spec.dim;
  c.rows.reserve(spec.rows);
  for (std::size_t i = 0; i < spec.rows; ++i) {
    const std::size_t topic = rng.uniform_index(topics);
    const std::size_t terms = 1 + rng.uniform_index(2 * target - 1);
    std::vector<std::pair<Index, double>> entries;
    entries.reserve(terms);
    for (std::size_t t = 0; t < terms; ++t) {
      std::size_t term = 0;
      if (rng.uniform01() < spec.topic_affinity) {
        term = topic * block + rng.uniform_index(block);
      } else {
        term = rng.uniform_index(spec.dim);
      }
      const double count = static_cast<double>(1 + rng.uniform_index(3));
      entries.emplace_back(static_cast<Index>(term), count);
    }
    c.rows.push_back(SparseVector::from_unsorted(std::move(entries)));
  }
  return c;
}

Corpus make_gaussian_corpus(std::size_t rows, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  Corpus c;
  c.dim = dim;
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<Index> idx(dim);
    std::vector<double> val(dim);
    for (std::size_t t = 0; t < dim; ++t) {
      idx[t] = static_cast<Index>(t);
      val[t] = rng.normal();
    }
    c.rows.emplace_back(std::move(idx), std::move(val));
  }
  return c;
}

GridFixture grid_fixture(std::size_t f) {
  static constexpr std::size_t kRows[] = {200, 2000};
  static constexpr std::size_t kDims[] = {256, 5000};
  static constexpr std::size_t kKs[] = {2, 10, 20, 50};
  return GridFixture{kRows[f % 2], kDims[(f / 2) % 2], kKs[(f / 4) % 4], 1000 + f};
}

}  // namespace spkm::validation
