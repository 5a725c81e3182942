#ifndef RELX_TESTS_SYNTHETIC_HPP
#define RELX_TESTS_SYNTHETIC_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "relx/classifier.hpp"
#include "relx/corpus.hpp"
#include "relx/postprocess.hpp"

namespace relx::testing {

// Corpus where every label has its own trigger phrase, so hashed n-gram
// features separate the classes linearly. `per_class` instances per label,
// ids prefixed with `id_prefix`.
std::vector<Instance> separable_corpus(const RelationSchema& schema, int per_class,
                                       std::uint64_t seed, const std::string& id_prefix = "s");

// Random valid instance: mixed-script text that may contain literal marker
// words, spans chosen to be disjoint, adjacent, or nested (including shared
// start/end and identical spans), and a plausible gold label.
Instance random_instance(const RelationSchema& schema, std::mt19937_64& rng, const std::string& id);

// Random distribution over the schema; with `ties` the raw weights are
// small integers so equal probabilities are common.
ProbDist random_distribution(std::size_t size, std::mt19937_64& rng, bool ties);

// Decoder oracle: sort all (prob desc, index asc) and return the first
// label that is no_relation or whose name prefix matches the pair, plus
// its position in the sorted list.
std::pair<LabelId, std::size_t> sort_and_scan(const ProbDist& dist, EntityPair pair,
                                              const RelationSchema& schema);

// Fraction of positions where predicted == gold.
double brute_force_accuracy(const std::vector<LabelId>& predicted,
                            const std::vector<LabelId>& golds);

// The bundled fixture: 30 train and 10 test instances per label, drawn with
// different seeds and id prefixes.
struct Fixture {
  std::vector<Instance> train;
  std::vector<Instance> test;
};
Fixture fixture_corpora(const RelationSchema& schema);
// Contents of the bundled pipeline.conf.
std::string fixture_config();

}  // namespace relx::testing

#endif  // RELX_TESTS_SYNTHETIC_HPP
