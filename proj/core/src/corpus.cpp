#include "lawfuzz/corpus.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lawfuzz/violation.hpp"

namespace lawfuzz {

namespace fs = std::filesystem;

std::vector<CorpusEntry> load_corpus(const std::string& corpus_dir) {
  fs::path index_path = fs::path(corpus_dir) / "index.json";
  std::ifstream is(index_path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read corpus index '" + index_path.string() + "'");
  nlohmann::json index;
  is >> index;

  std::vector<CorpusEntry> out;
  for (const auto& ej : index.at("entries")) {
    CorpusEntry entry;
    entry.id = ej.at("id").get<std::string>();
    entry.article = ej.value("article", std::string());
    entry.spec_path = (fs::path(corpus_dir) / ej.at("spec").get<std::string>()).string();
    entry.template_path =
        (fs::path(corpus_dir) / ej.at("template").get<std::string>()).string();
    entry.campaign_path =
        (fs::path(corpus_dir) / ej.value("campaign", std::string())).string();
    entry.expected_theta = ej.at("expected_theta").get<std::size_t>();

    std::ifstream spec_is(entry.spec_path, std::ios::binary);
    if (!spec_is) {
      throw std::runtime_error("corpus: cannot read spec '" + entry.spec_path + "'");
    }
    std::stringstream ss;
    ss << spec_is.rdbuf();
    entry.spec = parse_spec(ss.str());

    std::size_t actual = theta(normalize(entry.spec.law())).size();
    if (actual != entry.expected_theta) {
      throw std::runtime_error("corpus regression: " + entry.id + " has |Theta| = " +
                               std::to_string(actual) + ", expected " +
                               std::to_string(entry.expected_theta));
    }
    out.push_back(std::move(entry));
  }
  if (out.empty()) throw std::runtime_error("corpus index has no entries");
  return out;
}

}  // namespace lawfuzz
