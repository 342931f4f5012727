#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "opilex/ingest.hpp"

namespace opilex {

struct NormalizedPost {
  std::string post_id;
  std::string author_id;
  std::string subreddit;
  int64_t created_utc = 0;
  std::vector<std::vector<std::string>> sentences;  // lemma lists, in order
};

struct Vocabulary {
  int year = 0;
  std::map<std::string, uint64_t> entries;  // lemma -> yearly count, all >= min_count
  uint64_t min_count = 100;

  bool contains(std::string_view lemma) const {
    return entries.find(std::string(lemma)) != entries.end();
  }
};

// Stopword list + inflection->lemma table, both loaded from the shipped
// data files. Immutable after construction; safe to share across threads.
class Normalizer {
 public:
  // Loads data/stopwords.txt and data/lemmas.tsv from `data_dir`.
  explicit Normalizer(const std::string& data_dir);
  // Built-in minimal tables (tests that don't care about the shipped lists).
  Normalizer();

  std::vector<std::string> normalize_tokens(std::string_view sentence) const;
  std::string lemma(std::string_view token) const;
  bool is_stopword(std::string_view token) const;

  NormalizedPost normalize_post(const RawPost& post,
                                const Vocabulary* vocab = nullptr) const;

 private:
  std::unordered_set<std::string> stopwords_;
  std::unordered_map<std::string, std::string> lemmas_;
};

// Splits on '.', '!' or '?' followed by whitespace/end, and on blank lines.
// No empty sentences; terminator-free text is a single sentence.
std::vector<std::string> segment_sentences(std::string_view text);

// Lemma counts over the whole corpus; entries below min_count are pruned.
Vocabulary build_vocabulary(const CorpusSlice& corpus, const Normalizer& norm,
                            uint64_t min_count = 100, unsigned threads = 1);

std::vector<NormalizedPost> normalize_corpus(const CorpusSlice& corpus,
                                             const Normalizer& norm,
                                             const Vocabulary* vocab = nullptr,
                                             unsigned threads = 1);

// Normalized-corpus cache: ndjson, one post per line, versioned header.
void save_normalized(const std::vector<NormalizedPost>& posts,
                     std::ostream& out);
std::vector<NormalizedPost> load_normalized(std::istream& in);

}  // namespace opilex
