#include "relx/postprocess.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "relx/parallel.hpp"

namespace relx {

Prediction constrain(const ProbDist& dist, EntityType e1, EntityType e2,
                     const RelationSchema& schema) {
  if (dist.size() != schema.size()) {
    throw Error(ErrorCode::kLengthMismatch, "distribution has " + std::to_string(dist.size()) +
                                                " entries, schema has " +
                                                std::to_string(schema.size()));
  }
  const auto& plausible = schema.plausible_labels({e1, e2});

  // Masked argmax; `plausible` is ascending, so strict '>' keeps the lower
  // index on ties.
  LabelId best = plausible.front();
  for (LabelId id : plausible) {
    if (dist[static_cast<std::size_t>(id)] > dist[static_cast<std::size_t>(best)]) best = id;
  }

  Prediction pred;
  pred.raw_argmax = dist.argmax();
  pred.final_label = best;
  pred.final_prob = dist[static_cast<std::size_t>(best)];
  const double p = pred.final_prob;
  for (std::size_t j = 0; j < dist.size(); ++j) {
    if (dist[j] > p || (dist[j] == p && static_cast<LabelId>(j) < best)) ++pred.fallback_rank;
  }
  return pred;
}

ConstrainedBatch constrain_batch(std::span<const ProbDist> dists,
                                 std::span<const Instance> instances,
                                 const RelationSchema& schema, std::size_t jobs) {
  if (dists.size() != instances.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(dists.size()) + " distributions for " +
                                                std::to_string(instances.size()) + " instances");
  }
  ConstrainedBatch batch;
  batch.predictions.resize(dists.size());
  parallel_for(dists.size(), jobs, [&](std::size_t i) {
    try {
      batch.predictions[i] =
          constrain(dists[i], instances[i].e1.etype, instances[i].e2.etype, schema);
    } catch (const Error& e) {
      throw e.with_context("at index " + std::to_string(i) + " ('" + instances[i].id + "'): ");
    }
    batch.predictions[i].source_id = instances[i].id;
  });
  for (const auto& pred : batch.predictions) {
    if (pred.fallback_rank > 0) ++batch.corrections;
  }
  return batch;
}

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

template <typename Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  fn(out);
  if (!out) throw Error(ErrorCode::kIo, "write failure on '" + path.string() + "'");
}

std::ifstream open_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  return in;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

}  // namespace

void write_distributions(std::ostream& out, std::span<const std::string> ids,
                         std::span<const ProbDist> dists) {
  if (ids.size() != dists.size()) {
    throw Error(ErrorCode::kLengthMismatch, "ids and distributions differ in length");
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << ids[i] << '\t';
    for (std::size_t k = 0; k < dists[i].size(); ++k) {
      if (k > 0) out << ' ';
      out << format_double(dists[i][k]);
    }
    out << '\n';
  }
}

void save_distributions(const std::filesystem::path& path, std::span<const std::string> ids,
                        std::span<const ProbDist> dists) {
  write_file(path, [&](std::ostream& out) { write_distributions(out, ids, dists); });
}

std::vector<std::pair<std::string, ProbDist>> read_distributions(std::istream& in,
                                                                 const RelationSchema& schema) {
  std::vector<std::pair<std::string, ProbDist>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 2 || fields[0].empty()) {
      throw Error(ErrorCode::kParse, "expected id<TAB>probabilities", line_no);
    }
    std::vector<double> probs;
    const std::string& text = fields[1];
    const char* p = text.data();
    const char* end = text.data() + text.size();
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      double v = 0.0;
      const auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc{} || (next != end && *next != ' ')) {
        throw Error(ErrorCode::kParse, "invalid probability value", line_no);
      }
      probs.push_back(v);
      p = next;
    }
    if (probs.size() != schema.size()) {
      throw Error(ErrorCode::kParse, "expected " + std::to_string(schema.size()) +
                                         " probabilities, got " + std::to_string(probs.size()),
                  line_no);
    }
    try {
      out.emplace_back(fields[0], ProbDist::normalized(std::move(probs)));
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, e.message(), line_no);
    }
  }
  return out;
}

std::vector<std::pair<std::string, ProbDist>> load_distributions(
    const std::filesystem::path& path, const RelationSchema& schema) {
  auto in = open_file(path);
  return read_distributions(in, schema);
}

void write_predictions(std::ostream& out, std::span<const Prediction> preds,
                       const RelationSchema& schema) {
  for (const auto& p : preds) {
    out << p.source_id << '\t' << schema.name(p.raw_argmax) << '\t' << schema.name(p.final_label)
        << '\t' << p.fallback_rank << '\n';
  }
}

void save_predictions(const std::filesystem::path& path, std::span<const Prediction> preds,
                      const RelationSchema& schema) {
  write_file(path, [&](std::ostream& out) { write_predictions(out, preds, schema); });
}

std::vector<Prediction> read_predictions(std::istream& in, const RelationSchema& schema) {
  std::vector<Prediction> out;
  std::string line;
  std::size_t line_no = 0;
  const auto label = [&](const std::string& name) {
    const auto id = schema.find(name);
    if (!id) throw Error(ErrorCode::kParse, "unknown label '" + name + "'", line_no);
    return *id;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 4 || fields[0].empty()) {
      throw Error(ErrorCode::kParse, "expected id<TAB>raw<TAB>final<TAB>rank", line_no);
    }
    Prediction p;
    p.source_id = fields[0];
    p.raw_argmax = label(fields[1]);
    p.final_label = label(fields[2]);
    const auto& rank = fields[3];
    const auto [ptr, ec] = std::from_chars(rank.data(), rank.data() + rank.size(), p.fallback_rank);
    if (ec != std::errc{} || ptr != rank.data() + rank.size()) {
      throw Error(ErrorCode::kParse, "invalid fallback rank", line_no);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Prediction> load_predictions(const std::filesystem::path& path,
                                         const RelationSchema& schema) {
  auto in = open_file(path);
  return read_predictions(in, schema);
}

}  // namespace relx
