// Regenerates data/fixture: make_fixture <dir>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "relx/corpus.hpp"
#include "synthetic.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixture <dir>\n";
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);
  const auto& schema = relx::default_schema();
  const auto fixture = relx::testing::fixture_corpora(schema);
  relx::save_corpus(dir / "train.jsonl", fixture.train, schema);
  relx::save_corpus(dir / "test.jsonl", fixture.test, schema);
  std::ofstream(dir / "pipeline.conf") << relx::testing::fixture_config();
  std::cout << fixture.train.size() << " train, " << fixture.test.size() << " test\n";
  return 0;
}
