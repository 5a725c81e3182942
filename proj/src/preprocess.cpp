#include "relx/preprocess.hpp"

#include <algorithm>
#include <fstream>

#include "relx/parallel.hpp"

namespace relx {

std::string_view strategy_name(MarkerStrategy strategy) {
  switch (strategy) {
    case MarkerStrategy::kPreEntity: return "pre_entity";
    case MarkerStrategy::kWrapEntity: return "wrap_entity";
    case MarkerStrategy::kPairPrefix: return "pair_prefix";
  }
  return "unknown";
}

MarkerStrategy parse_strategy(std::string_view name) {
  for (MarkerStrategy s : kAllStrategies) {
    if (strategy_name(s) == name) return s;
  }
  throw Error(ErrorCode::kValidation, "unknown marker strategy '" + std::string(name) + "'");
}

namespace {

struct Event {
  std::size_t position;  // byte offset in the original text
  bool closing;
  std::size_t order_key;  // see ordering below
  int role;               // 0 = e1, 1 = e2
  std::string marker;
};

// At equal positions: closing markers first, innermost span first; then
// opening markers, outermost span first.
bool event_before(const Event& a, const Event& b) {
  if (a.position != b.position) return a.position < b.position;
  if (a.closing != b.closing) return a.closing;
  if (a.order_key != b.order_key) return a.order_key > b.order_key;
  return a.closing ? a.role > b.role : a.role < b.role;
}

}  // namespace

MarkedText insert_markers(const Instance& inst, MarkerStrategy strategy) {
  MarkedText out;
  out.strategy = strategy;
  out.source_id = inst.id;

  if (strategy == MarkerStrategy::kPairPrefix) {
    std::string prefix = "<";
    prefix += marker_form(inst.e1.etype);
    prefix += '-';
    prefix += marker_form(inst.e2.etype);
    prefix += "> ";
    out.text = prefix + inst.text;
    out.inserted.push_back({0, std::move(prefix)});
    return out;
  }

  std::vector<Event> events;
  const EntitySpan* spans[2] = {&inst.e1, &inst.e2};
  for (int role = 0; role < 2; ++role) {
    const auto [begin, end] = byte_range(inst.text, *spans[role]);
    const std::string marker(marker_form(spans[role]->etype));
    // Openers order by span end (later end = outer), closers by span start
    // (later start = inner).
    events.push_back({begin, false, end, role, marker + " "});
    if (strategy == MarkerStrategy::kWrapEntity) {
      events.push_back({end, true, begin, role, " " + marker});
    }
  }
  std::sort(events.begin(), events.end(), event_before);

  out.text.reserve(inst.text.size() + 32);
  std::size_t cursor = 0;
  for (auto& event : events) {
    out.text.append(inst.text, cursor, event.position - cursor);
    cursor = event.position;
    out.inserted.push_back({out.text.size(), event.marker});
    out.text += event.marker;
  }
  out.text.append(inst.text, cursor, std::string::npos);
  return out;
}

std::string strip_markers(const MarkedText& marked) {
  std::string text = marked.text;
  std::size_t limit = text.size();
  for (auto it = marked.inserted.rbegin(); it != marked.inserted.rend(); ++it) {
    const std::size_t pos = it->position;
    const std::size_t len = it->marker.size();
    if (pos > limit || len > limit - pos || text.compare(pos, len, it->marker) != 0) {
      throw Error(ErrorCode::kCorruptProvenance,
                  "marker '" + it->marker + "' not found at offset " + std::to_string(pos) +
                      " of '" + marked.source_id + "'");
    }
    text.erase(pos, len);
    limit = pos;
  }
  return text;
}

std::vector<MarkedText> preprocess_corpus(std::span<const Instance> corpus,
                                          MarkerStrategy strategy, std::size_t jobs) {
  std::vector<MarkedText> out(corpus.size());
  parallel_for(corpus.size(), jobs,
               [&](std::size_t i) { out[i] = insert_markers(corpus[i], strategy); });
  return out;
}

void write_marked(std::ostream& out, std::span<const MarkedText> marked) {
  for (const auto& m : marked) {
    out << m.source_id << '\t' << strategy_name(m.strategy) << '\t' << m.text << '\n';
  }
}

void save_marked(const std::filesystem::path& path, std::span<const MarkedText> marked) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  write_marked(out, marked);
  if (!out) throw Error(ErrorCode::kIo, "write failure on '" + path.string() + "'");
}

std::vector<MarkedText> read_marked(std::istream& in) {
  std::vector<MarkedText> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos || line.find('\t', tab2 + 1) != std::string::npos) {
      throw Error(ErrorCode::kParse, "expected id<TAB>strategy<TAB>text", line_no);
    }
    MarkedText m;
    m.source_id = line.substr(0, tab1);
    try {
      m.strategy = parse_strategy(line.substr(tab1 + 1, tab2 - tab1 - 1));
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, e.message(), line_no);
    }
    m.text = line.substr(tab2 + 1);
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<MarkedText> load_marked(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  return read_marked(in);
}

}  // namespace relx
