#include <doctest.h>

#include <numeric>
#include <sstream>

#include "helpers.hpp"
#include "opilex/errors.hpp"
#include "opilex/textnorm.hpp"

using namespace opilex;

namespace {

const Normalizer& shipped() {
  static Normalizer n(data_dir());
  return n;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string s;
  for (const auto& t : tokens) {
    if (!s.empty()) s += ' ';
    s += t;
  }
  return s;
}

}  // namespace

TEST_CASE("segment_sentences: terminators and blank lines") {
  auto s = segment_sentences("Hello there. How are you? Fine!");
  REQUIRE(s.size() == 3);
  CHECK(s[0] == "Hello there.");
  CHECK(s[1] == "How are you?");
  CHECK(s[2] == "Fine!");

  auto grouped = segment_sentences("What?!? No way...");
  REQUIRE(grouped.size() == 2);
  CHECK(grouped[0] == "What?!?");

  auto paragraphs = segment_sentences("first paragraph\n\nsecond one");
  REQUIRE(paragraphs.size() == 2);
  CHECK(paragraphs[0] == "first paragraph");
  CHECK(paragraphs[1] == "second one");

  // terminator-free text is one sentence; pure punctuation yields none
  CHECK(segment_sentences("no terminator here").size() == 1);
  CHECK(segment_sentences("...  !!!").empty());
  CHECK(segment_sentences("").empty());
  // a decimal point does not split (digit follows, no whitespace)
  CHECK(segment_sentences("took 2.5 mg today").size() == 1);
}

TEST_CASE("normalize_tokens: case, stopwords, apostrophes, digits") {
  const Normalizer& n = shipped();
  auto t = n.normalize_tokens("Don't SMOKE the stuff");
  // "dont" is a stopword once the apostrophe is dropped; "the" is too
  CHECK(t == std::vector<std::string>{"smoke", "stuff"});

  // digit-bearing tokens stay verbatim (dosages like "30s")
  auto d = n.normalize_tokens("took two 30s and 2.5mg");
  CHECK(std::find(d.begin(), d.end(), "30s") != d.end());
  CHECK(std::find(d.begin(), d.end(), "5mg") != d.end());

  // punctuation splits tokens
  auto p = n.normalize_tokens("oxy,heroin;fentanyl");
  CHECK(p == std::vector<std::string>{"oxy", "heroin", "fentanyl"});
}

TEST_CASE("lemma: table entries, suffix rules, idempotency") {
  const Normalizer& n = shipped();
  CHECK(n.lemma("smoking") == "smoke");
  CHECK(n.lemma("dissolved") == "dissolve");
  CHECK(n.lemma("ground") == "grind");
  CHECK(n.lemma("grinded") == "grind");
  CHECK(n.lemma("insufflated") == "insufflate");

  // suffix rules
  CHECK(n.lemma("tablets") == "tablet");
  CHECK(n.lemma("bodies") == "body");
  CHECK(n.lemma("classes") == "class");
  CHECK(n.lemma("patches") == "patch");
  CHECK(n.lemma("crushes") == "crush");
  CHECK(n.lemma("injected") == "inject");
  CHECK(n.lemma("snorting") == "snort");
  CHECK(n.lemma("stopped") == "stop");     // consonant undoubling
  CHECK(n.lemma("filling") == "fill");     // ...except l
  CHECK(n.lemma("crossed") == "cross");    // ...and s
  CHECK(n.lemma("bolus") == "bolus");      // -us nouns keep their s
  CHECK(n.lemma("analysis") == "analysis");  // -is too

  // digit tokens verbatim
  CHECK(n.lemma("30s") == "30s");

  for (const char* w :
       {"smoking", "tablets", "bodies", "injected", "doses", "needles",
        "grinded", "chewing", "plugging", "capsules"}) {
    std::string once = n.lemma(w);
    CHECK(n.lemma(once) == once);  // fixpoint
  }
}

TEST_CASE("normalize_tokens is idempotent on its own output") {
  const Normalizer& n = shipped();
  for (const char* text :
       {"I was snorting crushed pills yesterday, don't judge",
        "Dissolved the tablets in water and filtered it twice.",
        "He stopped using needles after the overdoses",
        "CWE on 30s works; plugging doesn't do much for me"}) {
    auto once = n.normalize_tokens(text);
    auto twice = n.normalize_tokens(join(once));
    CHECK(once == twice);
  }
}

TEST_CASE("normalize_post: sentence structure and vocabulary filter") {
  const Normalizer& n = shipped();
  RawPost post;
  post.post_id = "p";
  post.author_id = "a";
  post.subreddit = "s";
  post.text = "Snorting the pills. Dissolving them works better!";
  NormalizedPost np = n.normalize_post(post);
  REQUIRE(np.sentences.size() == 2);
  CHECK(np.sentences[0] == std::vector<std::string>{"snort", "pill"});

  Vocabulary vocab;
  vocab.entries = {{"snort", 5}};
  NormalizedPost filtered = n.normalize_post(post, &vocab);
  CHECK(filtered.sentences[0] == std::vector<std::string>{"snort"});
  CHECK(filtered.sentences[1].empty());
}

TEST_CASE("build_vocabulary prunes below min_count; shards agree") {
  const Normalizer& n = shipped();
  CorpusSlice slice;
  slice.year = 2018;
  for (int i = 0; i < 6; ++i) {
    RawPost p;
    p.post_id = "p" + std::to_string(i);
    p.author_id = "a";
    p.subreddit = "s";
    p.text = i < 3 ? "heroin heroin needle" : (i < 5 ? "heroin oxy" : "heroin");
    slice.posts.push_back(p);
  }
  Vocabulary v = build_vocabulary(slice, n, 3);
  CHECK(v.entries.at("heroin") == 9);
  CHECK(v.entries.at("needle") == 3);  // min_count is inclusive
  CHECK_FALSE(v.contains("oxy"));      // 2 occurrences < 3

  Vocabulary v4 = build_vocabulary(slice, n, 3, 4);
  CHECK(v.entries == v4.entries);
}

TEST_CASE("normalized cache round trip") {
  const Normalizer& n = shipped();
  RawPost raw;
  raw.post_id = "p1";
  raw.author_id = "abcd";
  raw.subreddit = "opiates";
  raw.created_utc = 1514764800;
  raw.text = "Snorted a crushed pill. It hurt!";
  std::vector<NormalizedPost> posts = {n.normalize_post(raw)};

  std::ostringstream out;
  save_normalized(posts, out);
  std::istringstream in(out.str());
  std::vector<NormalizedPost> loaded = load_normalized(in);
  REQUIRE(loaded.size() == 1);
  CHECK(loaded[0].post_id == posts[0].post_id);
  CHECK(loaded[0].sentences == posts[0].sentences);

  std::istringstream bad("{\"format\":\"opilex-corpus\"}\n");
  CHECK_THROWS_AS(load_normalized(bad), CorruptModel);
}
