#include "opilex/textnorm.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "opilex/errors.hpp"

namespace opilex {

namespace {

using nlohmann::json;

bool is_term_char(char c) { return c == '.' || c == '!' || c == '?'; }

bool has_alnum(std::string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isalnum(c); });
}

bool has_digit(std::string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

void push_sentence(std::vector<std::string>& out, std::string_view text,
                   size_t begin, size_t end) {
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin])))
    ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1])))
    --end;
  if (end > begin && has_alnum(text.substr(begin, end - begin)))
    out.emplace_back(text.substr(begin, end - begin));
}

// One rewrite step: table lookup first, then the plural / -ed / -ing
// suffix rules, identity otherwise. Digit-bearing tokens never reach here.
std::string lemma_step(const std::string& t,
                       const std::unordered_map<std::string, std::string>& table) {
  if (auto it = table.find(t); it != table.end()) return it->second;
  auto ends = [&](std::string_view suf) {
    return t.size() >= suf.size() &&
           std::string_view(t).substr(t.size() - suf.size()) == suf;
  };
  if (t.size() >= 5 && ends("ies")) return t.substr(0, t.size() - 3) + "y";
  if (t.size() >= 5 && ends("es")) {
    std::string_view stem = std::string_view(t).substr(0, t.size() - 2);
    if (stem.ends_with("ss") || stem.ends_with("x") || stem.ends_with("z") ||
        stem.ends_with("ch") || stem.ends_with("sh"))
      return std::string(stem);
  }
  if (t.size() >= 4 && ends("s") && !ends("ss") && !ends("us") && !ends("is"))
    return t.substr(0, t.size() - 1);
  auto strip_double = [](std::string stem) {
    size_t n = stem.size();
    if (n >= 3 && stem[n - 1] == stem[n - 2] &&
        !std::strchr("aeiouls", stem[n - 1]))
      stem.pop_back();
    return stem;
  };
  if (t.size() >= 5 && ends("ed")) return strip_double(t.substr(0, t.size() - 2));
  if (t.size() >= 6 && ends("ing")) return strip_double(t.substr(0, t.size() - 3));
  return t;
}

}  // namespace

std::vector<std::string> segment_sentences(std::string_view text) {
  std::vector<std::string> out;
  size_t begin = 0;
  size_t i = 0;
  while (i < text.size()) {
    if (is_term_char(text[i])) {
      size_t j = i + 1;
      while (j < text.size() && is_term_char(text[j])) ++j;
      if (j >= text.size() ||
          std::isspace(static_cast<unsigned char>(text[j]))) {
        push_sentence(out, text, begin, j);
        begin = j;
        i = j;
        continue;
      }
      i = j;
      continue;
    }
    // Blank line: newline followed by only whitespace up to the next newline.
    if (text[i] == '\n') {
      size_t j = i + 1;
      while (j < text.size() && (text[j] == ' ' || text[j] == '\t' ||
                                 text[j] == '\r'))
        ++j;
      if (j < text.size() && text[j] == '\n') {
        push_sentence(out, text, begin, i);
        begin = j + 1;
        i = j + 1;
        continue;
      }
    }
    ++i;
  }
  push_sentence(out, text, begin, text.size());
  return out;
}

Normalizer::Normalizer() = default;

Normalizer::Normalizer(const std::string& data_dir) {
  auto load_lines = [](const std::string& path, auto&& take) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open data file: " + path);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      take(line);
    }
  };
  load_lines(data_dir + "/stopwords.txt",
             [&](const std::string& w) { stopwords_.insert(w); });
  load_lines(data_dir + "/lemmas.tsv", [&](const std::string& row) {
    size_t tab = row.find('\t');
    if (tab == std::string::npos)
      throw Error("bad lemma table row: " + row);
    lemmas_[row.substr(0, tab)] = row.substr(tab + 1);
  });
}

bool Normalizer::is_stopword(std::string_view token) const {
  return stopwords_.find(std::string(token)) != stopwords_.end();
}

std::string Normalizer::lemma(std::string_view token) const {
  std::string cur(token);
  if (has_digit(cur)) return cur;  // dosage tokens like "30s" stay verbatim
  for (int i = 0; i < 5; ++i) {    // iterate to a fixpoint -> idempotent
    std::string next = lemma_step(cur, lemmas_);
    if (next == cur) break;
    cur = std::move(next);
  }
  return cur;
}

std::vector<std::string> Normalizer::normalize_tokens(
    std::string_view sentence) const {
  std::vector<std::string> out;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    std::string raw;
    raw.swap(token);
    if (!has_alnum(raw)) return;
    if (is_stopword(raw)) return;
    std::string lem = lemma(raw);
    // A lemma can land on a stopword ("cans" -> "can"); drop those too so
    // the pipeline stays idempotent on its own output.
    if (lem.empty() || is_stopword(lem)) return;
    out.push_back(std::move(lem));
  };
  for (char c : sentence) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      token.push_back(static_cast<char>(std::tolower(u)));
    } else if (c == '\'') {
      // apostrophes deleted pre-split: "don't" -> "dont"
    } else {
      flush();
    }
  }
  flush();
  return out;
}

NormalizedPost Normalizer::normalize_post(const RawPost& post,
                                          const Vocabulary* vocab) const {
  NormalizedPost out;
  out.post_id = post.post_id;
  out.author_id = post.author_id;
  out.subreddit = post.subreddit;
  out.created_utc = post.created_utc;
  for (const std::string& sent : segment_sentences(post.text)) {
    std::vector<std::string> lemmas = normalize_tokens(sent);
    if (vocab) {
      std::erase_if(lemmas, [&](const std::string& l) {
        return !vocab->contains(l);
      });
    }
    out.sentences.push_back(std::move(lemmas));
  }
  return out;
}

namespace {

template <typename Fn>
void parallel_over_posts(size_t n_posts, unsigned threads, Fn&& body) {
  if (threads <= 1 || n_posts < 2048) {
    body(0, n_posts, 0);
    return;
  }
  size_t n = std::min<size_t>(threads, n_posts);
  size_t chunk = (n_posts + n - 1) / n;
  std::vector<std::thread> workers;
  for (size_t w = 0; w < n; ++w) {
    size_t b = w * chunk, e = std::min(n_posts, b + chunk);
    workers.emplace_back([&body, b, e, w] { body(b, e, w); });
  }
  for (auto& t : workers) t.join();
}

}  // namespace

Vocabulary build_vocabulary(const CorpusSlice& corpus, const Normalizer& norm,
                            uint64_t min_count, unsigned threads) {
  size_t n_shards = std::max(1u, threads);
  std::vector<std::map<std::string, uint64_t>> shards(n_shards);
  parallel_over_posts(corpus.posts.size(), threads,
                      [&](size_t b, size_t e, size_t w) {
                        auto& counts = shards[w];
                        for (size_t i = b; i < e; ++i) {
                          NormalizedPost np =
                              norm.normalize_post(corpus.posts[i]);
                          for (const auto& sent : np.sentences)
                            for (const std::string& lemma : sent)
                              ++counts[lemma];
                        }
                      });
  std::map<std::string, uint64_t> total;
  for (auto& shard : shards)
    for (const auto& [lemma, n] : shard) total[lemma] += n;
  Vocabulary vocab;
  vocab.year = corpus.year;
  vocab.min_count = min_count;
  for (const auto& [lemma, n] : total)
    if (n >= min_count) vocab.entries.emplace(lemma, n);
  return vocab;
}

std::vector<NormalizedPost> normalize_corpus(const CorpusSlice& corpus,
                                             const Normalizer& norm,
                                             const Vocabulary* vocab,
                                             unsigned threads) {
  std::vector<NormalizedPost> out(corpus.posts.size());
  parallel_over_posts(corpus.posts.size(), threads,
                      [&](size_t b, size_t e, size_t) {
                        for (size_t i = b; i < e; ++i)
                          out[i] = norm.normalize_post(corpus.posts[i], vocab);
                      });
  return out;
}

void save_normalized(const std::vector<NormalizedPost>& posts,
                     std::ostream& out) {
  json header;
  header["format"] = "opilex-normalized";
  header["version"] = 1;
  out << header.dump() << '\n';
  for (const NormalizedPost& p : posts) {
    json rec;
    rec["id"] = p.post_id;
    rec["author_id"] = p.author_id;
    rec["subreddit"] = p.subreddit;
    rec["created_utc"] = p.created_utc;
    rec["sentences"] = p.sentences;
    out << rec.dump() << '\n';
  }
}

std::vector<NormalizedPost> load_normalized(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw CorruptModel("empty normalized cache");
  json header = json::parse(line, nullptr, false);
  if (header.is_discarded() ||
      header.value("format", "") != "opilex-normalized")
    throw CorruptModel("not an opilex normalized cache");
  if (header.value("version", 0) != 1)
    throw VersionMismatch("unsupported normalized cache version");
  std::vector<NormalizedPost> posts;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded()) throw CorruptModel("corrupt normalized cache line");
    NormalizedPost p;
    p.post_id = rec.at("id").get<std::string>();
    p.author_id = rec.at("author_id").get<std::string>();
    p.subreddit = rec.at("subreddit").get<std::string>();
    p.created_utc = rec.at("created_utc").get<int64_t>();
    p.sentences = rec.at("sentences")
                      .get<std::vector<std::vector<std::string>>>();
    posts.push_back(std::move(p));
  }
  return posts;
}

}  // namespace opilex
