#pragma once

#include <string>
#include <vector>

#include "lawfuzz/parser.hpp"

namespace lawfuzz {

// One bundled law: the parsed spec, its scenario template, and the frozen
// violation-set size used as a regression anchor.
struct CorpusEntry {
  std::string id;           // e.g. "law38"
  std::string article;      // human citation
  std::string spec_path;
  std::string template_path;
  std::string campaign_path;
  std::size_t expected_theta = 0;
  SpecFile spec;
};

// Loads corpus/index.json under `corpus_dir`, parses every spec, and checks
// each frozen violation-set size. Any mismatch throws.
std::vector<CorpusEntry> load_corpus(const std::string& corpus_dir);

}  // namespace lawfuzz
