#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace opilex {

enum class PostKind { submission, comment };

struct RawPost {
  std::string post_id;
  std::string author_id;   // anonymized hash (16 hex chars) or "__deleted__"
  std::string subreddit;   // lowercase
  int64_t created_utc = 0;
  PostKind kind = PostKind::comment;
  std::string text;

  bool operator==(const RawPost&) const = default;
};

struct CorpusSlice {
  int year = 0;
  std::vector<RawPost> posts;
  std::map<std::string, uint64_t> subreddit_index;
  uint64_t malformed_lines = 0;

  // Shard merge; associative and order-insensitive on all counts.
  void merge(CorpusSlice&& other);
};

struct DatasetStats {
  int year = 0;
  uint64_t n_comments = 0;  // all posts in the slice
  uint64_t n_authors = 0;   // distinct, excluding the deleted sentinel
  uint64_t n_subreddits = 0;
  std::optional<double> author_prevalence;
};

// One ndjson dump record -> RawPost. Comment records carry "body";
// submission records carry "title" plus optional "selftext" which are
// joined as "title\nselftext". The author name is replaced by a keyed
// hash before the RawPost exists. Throws MalformedRecord.
RawPost parse_dump_line(std::string_view line, std::string_view salt);

// Streams dump lines, keeps only posts whose created_utc falls in `year`
// (UTC), counts malformed lines. Throws EmptyCorpus if nothing survives.
// `threads` > 1 splits the input at line boundaries across workers.
CorpusSlice load_corpus(std::istream& stream, int year, std::string_view salt,
                        unsigned threads = 1);

// Drops subreddits with fewer than min_comments posts in the slice.
CorpusSlice filter_subreddits(const CorpusSlice& corpus,
                              uint64_t min_comments = 100);

// Keeps only posts from `allowed` (case-insensitive names).
CorpusSlice restrict_to_subreddits(const CorpusSlice& corpus,
                                   const std::set<std::string>& allowed);

DatasetStats dataset_stats(const CorpusSlice& corpus,
                           std::optional<uint64_t> background_authors = {});

// Corpus cache: ndjson with a versioned header line, exact round-trip.
void save_corpus(const CorpusSlice& corpus, std::ostream& out);
CorpusSlice load_corpus_cache(std::istream& in);

std::string to_json_line(const RawPost& post);

}  // namespace opilex
