#ifndef RELX_PREPROCESS_HPP
#define RELX_PREPROCESS_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relx/corpus.hpp"

namespace relx {

enum class MarkerStrategy {
  kPreEntity,   // "PERS John Doe is the CEO of ORG Company A."
  kWrapEntity,  // "PERS John Doe PERS is the CEO of ORG Company A ORG."
  kPairPrefix,  // "<PERS-ORG> John Doe is the CEO of Company A."
};

inline constexpr MarkerStrategy kAllStrategies[] = {
    MarkerStrategy::kPreEntity, MarkerStrategy::kWrapEntity, MarkerStrategy::kPairPrefix};

std::string_view strategy_name(MarkerStrategy strategy);
// Accepts "pre_entity", "wrap_entity", "pair_prefix". Throws kValidation.
MarkerStrategy parse_strategy(std::string_view name);

// One inserted marker string; `position` is a byte offset into the marked
// text where the marker begins.
struct Insertion {
  std::size_t position = 0;
  std::string marker;

  bool operator==(const Insertion&) const = default;
};

struct MarkedText {
  std::string text;
  MarkerStrategy strategy = MarkerStrategy::kPreEntity;
  std::string source_id;
  std::vector<Insertion> inserted;  // ascending positions

  bool operator==(const MarkedText&) const = default;
};

// Inserts typed entity markers. `inst` must already pass validate_instance.
// Markers at the same original offset nest properly: closing markers come
// before opening ones, an outer span opens before and closes after an inner
// one, and e1 counts as outer when the spans are identical.
MarkedText insert_markers(const Instance& inst, MarkerStrategy strategy);

// Removes the recorded insertions right to left. Throws
// Error(kCorruptProvenance) if any recorded marker is not found in place.
std::string strip_markers(const MarkedText& marked);

std::vector<MarkedText> preprocess_corpus(std::span<const Instance> corpus,
                                          MarkerStrategy strategy, std::size_t jobs = 1);

// Marked-text file: "id<TAB>strategy<TAB>marked_text" per line. Provenance
// is not stored; texts read back carry an empty insertion list.
void write_marked(std::ostream& out, std::span<const MarkedText> marked);
void save_marked(const std::filesystem::path& path, std::span<const MarkedText> marked);
std::vector<MarkedText> read_marked(std::istream& in);
std::vector<MarkedText> load_marked(const std::filesystem::path& path);

}  // namespace relx

#endif  // RELX_PREPROCESS_HPP
