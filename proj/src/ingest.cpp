#include "opilex/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <istream>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "opilex/errors.hpp"
#include "opilex/hashing.hpp"

namespace opilex {

namespace {

using nlohmann::json;

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

int64_t year_start_epoch(int year) {
  using namespace std::chrono;
  return duration_cast<seconds>(
             sys_days{std::chrono::year{year} / January / 1}.time_since_epoch())
      .count();
}

int64_t epoch_from(const json& v) {
  if (v.is_number_integer()) return v.get<int64_t>();
  if (v.is_number_float()) return static_cast<int64_t>(v.get<double>());
  if (v.is_string()) {
    try {
      return std::stoll(v.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw MalformedRecord("created_utc is not an epoch timestamp");
}

void index_posts(CorpusSlice& slice) {
  slice.subreddit_index.clear();
  for (const RawPost& p : slice.posts) ++slice.subreddit_index[p.subreddit];
}

}  // namespace

void CorpusSlice::merge(CorpusSlice&& other) {
  posts.insert(posts.end(), std::make_move_iterator(other.posts.begin()),
               std::make_move_iterator(other.posts.end()));
  for (const auto& [sub, n] : other.subreddit_index) subreddit_index[sub] += n;
  malformed_lines += other.malformed_lines;
}

RawPost parse_dump_line(std::string_view line, std::string_view salt) {
  json rec = json::parse(line, nullptr, false);
  if (rec.is_discarded() || !rec.is_object())
    throw MalformedRecord("unparseable json record");
  if (!rec.contains("id") || !rec["id"].is_string())
    throw MalformedRecord("missing id");
  if (!rec.contains("subreddit") || !rec["subreddit"].is_string())
    throw MalformedRecord("missing subreddit");
  if (!rec.contains("created_utc"))
    throw MalformedRecord("missing created_utc");

  RawPost post;
  post.post_id = rec["id"].get<std::string>();
  post.subreddit = to_lower(rec["subreddit"].get<std::string>());
  post.created_utc = epoch_from(rec["created_utc"]);
  if (post.created_utc <= 0) throw MalformedRecord("created_utc must be > 0");

  std::string author;
  if (rec.contains("author") && rec["author"].is_string())
    author = rec["author"].get<std::string>();
  post.author_id = anonymize_author(author, salt);

  // Kind comes from the record shape: comments have a body, submissions
  // have a title (plus optional selftext).
  if (rec.contains("body") && rec["body"].is_string()) {
    post.kind = PostKind::comment;
    post.text = rec["body"].get<std::string>();
  } else if (rec.contains("title") && rec["title"].is_string()) {
    post.kind = PostKind::submission;
    post.text = rec["title"].get<std::string>();
    if (rec.contains("selftext") && rec["selftext"].is_string()) {
      post.text += '\n';
      post.text += rec["selftext"].get<std::string>();
    }
  } else {
    throw MalformedRecord("record has neither body nor title");
  }
  return post;
}

namespace {

CorpusSlice parse_batch(const std::vector<std::string>& lines, size_t begin,
                        size_t end, int year, std::string_view salt,
                        int64_t lo, int64_t hi) {
  CorpusSlice slice;
  slice.year = year;
  for (size_t i = begin; i < end; ++i) {
    try {
      RawPost post = parse_dump_line(lines[i], salt);
      if (post.created_utc >= lo && post.created_utc < hi)
        slice.posts.push_back(std::move(post));
    } catch (const MalformedRecord&) {
      ++slice.malformed_lines;  // skip-and-count, never abort
    }
  }
  return slice;
}

}  // namespace

CorpusSlice load_corpus(std::istream& stream, int year, std::string_view salt,
                        unsigned threads) {
  const int64_t lo = year_start_epoch(year);
  const int64_t hi = year_start_epoch(year + 1);
  CorpusSlice out;
  out.year = year;

  constexpr size_t kBatchLines = 65536;
  std::vector<std::string> lines;
  lines.reserve(kBatchLines);
  std::string line;
  bool eof = false;
  while (!eof) {
    lines.clear();
    while (lines.size() < kBatchLines) {
      if (!std::getline(stream, line)) {
        eof = true;
        break;
      }
      if (!line.empty()) lines.push_back(std::move(line));
    }
    if (lines.empty()) break;
    if (threads <= 1) {
      out.merge(parse_batch(lines, 0, lines.size(), year, salt, lo, hi));
    } else {
      size_t n = std::min<size_t>(threads, lines.size());
      std::vector<CorpusSlice> parts(n);
      std::vector<std::thread> workers;
      size_t chunk = (lines.size() + n - 1) / n;
      for (size_t w = 0; w < n; ++w) {
        size_t b = w * chunk, e = std::min(lines.size(), b + chunk);
        workers.emplace_back([&, w, b, e] {
          parts[w] = parse_batch(lines, b, e, year, salt, lo, hi);
        });
      }
      for (auto& t : workers) t.join();
      for (auto& part : parts) out.merge(std::move(part));
    }
  }
  if (out.posts.empty())
    throw EmptyCorpus("no valid posts for year " + std::to_string(year));
  index_posts(out);
  return out;
}

CorpusSlice filter_subreddits(const CorpusSlice& corpus,
                              uint64_t min_comments) {
  CorpusSlice out;
  out.year = corpus.year;
  out.malformed_lines = corpus.malformed_lines;
  for (const RawPost& p : corpus.posts) {
    auto it = corpus.subreddit_index.find(p.subreddit);
    if (it != corpus.subreddit_index.end() && it->second >= min_comments)
      out.posts.push_back(p);
  }
  if (out.posts.empty())
    throw EmptyCorpus("no subreddit reaches " + std::to_string(min_comments) +
                      " comments");
  index_posts(out);
  return out;
}

CorpusSlice restrict_to_subreddits(const CorpusSlice& corpus,
                                   const std::set<std::string>& allowed) {
  std::set<std::string> lowered;
  for (const std::string& name : allowed) lowered.insert(to_lower(name));
  CorpusSlice out;
  out.year = corpus.year;
  out.malformed_lines = corpus.malformed_lines;
  for (const RawPost& p : corpus.posts)
    if (lowered.count(p.subreddit)) out.posts.push_back(p);
  if (out.posts.empty())
    throw EmptyCorpus("no posts in the allowed subreddits");
  index_posts(out);
  return out;
}

DatasetStats dataset_stats(const CorpusSlice& corpus,
                           std::optional<uint64_t> background_authors) {
  if (corpus.posts.empty()) throw EmptyCorpus("dataset_stats on empty corpus");
  DatasetStats stats;
  stats.year = corpus.year;
  stats.n_comments = corpus.posts.size();
  stats.n_subreddits = corpus.subreddit_index.size();
  std::set<std::string> authors;
  for (const RawPost& p : corpus.posts)
    if (p.author_id != kDeletedAuthor) authors.insert(p.author_id);
  stats.n_authors = authors.size();
  if (background_authors && *background_authors > 0)
    stats.author_prevalence = static_cast<double>(stats.n_authors) /
                              static_cast<double>(*background_authors);
  return stats;
}

std::string to_json_line(const RawPost& post) {
  json rec;
  rec["id"] = post.post_id;
  rec["author_id"] = post.author_id;
  rec["subreddit"] = post.subreddit;
  rec["created_utc"] = post.created_utc;
  rec["kind"] = post.kind == PostKind::comment ? "comment" : "submission";
  rec["text"] = post.text;
  return rec.dump();
}

void save_corpus(const CorpusSlice& corpus, std::ostream& out) {
  json header;
  header["format"] = "opilex-corpus";
  header["version"] = 1;
  header["year"] = corpus.year;
  header["malformed_lines"] = corpus.malformed_lines;
  out << header.dump() << '\n';
  for (const RawPost& p : corpus.posts) out << to_json_line(p) << '\n';
}

CorpusSlice load_corpus_cache(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw CorruptModel("empty corpus cache");
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() || header.value("format", "") != "opilex-corpus")
    throw CorruptModel("not an opilex corpus cache");
  if (header.value("version", 0) != 1)
    throw VersionMismatch("unsupported corpus cache version");
  CorpusSlice slice;
  slice.year = header.value("year", 0);
  slice.malformed_lines = header.value("malformed_lines", 0);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded()) throw CorruptModel("corrupt corpus cache line");
    RawPost post;
    post.post_id = rec.at("id").get<std::string>();
    post.author_id = rec.at("author_id").get<std::string>();
    post.subreddit = rec.at("subreddit").get<std::string>();
    post.created_utc = rec.at("created_utc").get<int64_t>();
    post.kind = rec.at("kind").get<std::string>() == "comment"
                    ? PostKind::comment
                    : PostKind::submission;
    post.text = rec.at("text").get<std::string>();
    slice.posts.push_back(std::move(post));
  }
  index_posts(slice);
  return slice;
}

}  // namespace opilex
