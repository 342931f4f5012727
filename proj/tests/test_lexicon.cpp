#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "opilex/errors.hpp"
#include "opilex/lexicon.hpp"
#include "opilex/textnorm.hpp"

using namespace opilex;
namespace fs = std::filesystem;

namespace {

std::string temp_path(const char* name) {
  return (fs::temp_directory_path() / name).string();
}

NormalizedPost post_of(std::vector<std::vector<std::string>> sentences) {
  NormalizedPost p;
  p.post_id = "p";
  p.author_id = "a";
  p.subreddit = "s";
  p.sentences = std::move(sentences);
  return p;
}

EmbeddingModel toy_model() {
  // two tight pairs: (h, dope) and (oxy, roxy); cross pairs orthogonal-ish
  EmbeddingModel m;
  m.params.vector_size = 2;
  m.terms = {"h", "dope", "oxy", "roxy"};
  m.counts = {4, 3, 2, 1};
  for (uint32_t i = 0; i < m.terms.size(); ++i) m.vocabulary[m.terms[i]] = i;
  m.input_vectors = {1.0f, 0.1f, 1.0f, 0.0f, 0.1f, 1.0f, 0.0f, 1.0f};
  m.output_vectors.assign(8, 0.0f);
  return m;
}

}  // namespace

TEST_CASE("fixture lexicons load with taxonomy and seeds") {
  Lexicon sub = load_fixture_lexicon(LexiconDomain::substance, data_dir());
  CHECK(sub.domain == LexiconDomain::substance);
  CHECK(sub.categories.at("Heroin").count("bth") == 1);
  CHECK(sub.seed_terms.count("bth") == 1);
  CHECK(sub.categories.size() == 12);

  Lexicon roa = load_fixture_lexicon(LexiconDomain::roa, data_dir());
  CHECK(roa.taxonomy.at("Sublingual") == "Ingestion");
  CHECK(roa.taxonomy.at("Intravenous") == "Injection");

  Lexicon tamper = load_fixture_lexicon(LexiconDomain::tampering, data_dir());
  CHECK(tamper.categories.at("Extract").count("cwe") == 1);
  CHECK(tamper.categories.size() == 11);
}

TEST_CASE("lexicon CSV round trip") {
  Lexicon roa = load_fixture_lexicon(LexiconDomain::roa, data_dir());
  std::string path = temp_path("opilex_lex_rt.csv");
  save_lexicon(roa, path);
  Lexicon back = load_lexicon(path);
  CHECK(back.domain == roa.domain);
  CHECK(back.categories == roa.categories);
  CHECK(back.taxonomy == roa.taxonomy);
  CHECK(back.seed_terms == roa.seed_terms);
  fs::remove(path);
}

TEST_CASE("load_lexicon rejects duplicate cross-category terms") {
  std::string path = temp_path("opilex_lex_dup.csv");
  {
    std::ofstream out(path);
    out << "domain,category,primary_category,term,seed\n"
        << "substance,Heroin,,dope,1\n"
        << "substance,Oxycodone,,dope,0\n";
  }
  CHECK_THROWS_AS(load_lexicon(path), DuplicateTermAssignment);
  fs::remove(path);
}

TEST_CASE("expand_seeds: seeds kept at cosine 1, best-seed dedup") {
  EmbeddingModel model = toy_model();
  SeedSet seeds{"test", {"h", "oxy", "ghost"}};
  CandidateSet cs = expand_seeds(model, seeds, 2);
  REQUIRE(cs.missing_seeds == std::vector<std::string>{"ghost"});

  double h_cos = 0.0, dope_cos = 0.0;
  std::string dope_seed;
  bool saw_oxy = false;
  for (const Candidate& c : cs.candidates) {
    if (c.term == "h") h_cos = c.best_cosine;
    if (c.term == "dope") {
      dope_cos = c.best_cosine;
      dope_seed = c.nearest_seed;
    }
    if (c.term == "oxy") saw_oxy = true;
  }
  CHECK(h_cos == 1.0);
  CHECK(saw_oxy);
  CHECK(dope_cos > 0.9);
  CHECK(dope_seed == "h");  // nearest seed wins the dedup

  // candidates sorted by term
  for (size_t i = 1; i < cs.candidates.size(); ++i)
    CHECK(cs.candidates[i - 1].term < cs.candidates[i].term);

  // larger n never shrinks the candidate set
  CandidateSet bigger = expand_seeds(model, seeds, 3);
  CHECK(bigger.candidates.size() >= cs.candidates.size());

  SeedSet absent{"none", {"ghost", "phantom"}};
  CHECK_THROWS_AS(expand_seeds(model, absent, 2), NoSeedsInVocabulary);
}

TEST_CASE("review export/import round trip") {
  EmbeddingModel model = toy_model();
  SeedSet seeds{"test", {"h"}};
  CandidateSet cs = expand_seeds(model, seeds, 3);
  std::string path = temp_path("opilex_review.csv");
  export_review(cs, path);

  // simulate the reviewer: accept two terms into one category
  {
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "term,best_cosine,nearest_seed,accept,category");
  }
  {
    std::ofstream out(path, std::ios::trunc);
    out << "term,best_cosine,nearest_seed,accept,category\n"
        << "h,1,h,1,Heroin\n"
        << "dope,0.99,h,1,Heroin\n"
        << "oxy,0.2,h,0,\n";
  }
  Lexicon lex = import_review(path, LexiconDomain::substance);
  CHECK(lex.categories.at("Heroin") == std::set<std::string>{"dope", "h"});
  CHECK(lex.categories.size() == 1);
  fs::remove(path);
}

TEST_CASE("import_review error cases") {
  std::string path = temp_path("opilex_review_bad.csv");
  auto write = [&](const std::string& body) {
    std::ofstream out(path, std::ios::trunc);
    out << body;
  };

  write("wrong,header\nx,1\n");
  CHECK_THROWS_AS(import_review(path, LexiconDomain::substance),
                  MalformedReviewFile);

  write("term,best_cosine,nearest_seed,accept,category\nh,1,h,yes,Heroin\n");
  CHECK_THROWS_AS(import_review(path, LexiconDomain::substance),
                  MalformedReviewFile);

  write(
      "term,best_cosine,nearest_seed,accept,category\n"
      "h,1,h,1,Heroin\nh,1,h,1,Oxycodone\n");
  CHECK_THROWS_AS(import_review(path, LexiconDomain::substance),
                  DuplicateTermAssignment);

  write("term,best_cosine,nearest_seed,accept,category\nh,1,h,0,\n");
  CHECK_THROWS_AS(import_review(path, LexiconDomain::substance),
                  NoTermsAccepted);
  fs::remove(path);
}

TEST_CASE("MentionMatcher: one mention per occurrence, lemma-aligned keys") {
  Lexicon lex;
  lex.domain = LexiconDomain::tampering;
  lex.categories["Dissolve"] = {"dissolved"};  // inflected fixture spelling
  lex.categories["Grind"] = {"crush"};

  Normalizer norm(data_dir());
  MentionMatcher matcher(lex, &norm);

  // post tokens are already lemmas; "dissolved" indexes under "dissolve"
  NormalizedPost post =
      post_of({{"dissolve", "pill"}, {"crush", "crush", "water"}});
  auto mentions = matcher.match(post);
  REQUIRE(mentions.size() == 3);
  CHECK(mentions[0].category == "Dissolve");
  CHECK(mentions[0].term == "dissolved");  // original lexicon spelling
  CHECK(mentions[0].sentence_index == 0);
  CHECK(mentions[1].sentence_index == 1);
  CHECK(mentions[2].sentence_index == 1);

  // without a normalizer the raw spelling must match exactly
  MentionMatcher raw(lex);
  CHECK(raw.match(post).size() == 2);  // only the two "crush" hits
}

TEST_CASE("MentionMatcher rejects cross-category collisions") {
  Lexicon lex;
  lex.domain = LexiconDomain::roa;
  lex.categories["Smoking"] = {"smoke"};
  lex.categories["General Inhalation"] = {"smoking"};  // lemma collides
  Normalizer norm(data_dir());
  CHECK_THROWS_AS(MentionMatcher(lex, &norm), DuplicateTermAssignment);
  // raw matching has no collision
  CHECK_NOTHROW((void)MentionMatcher{lex});
}

TEST_CASE("volume_growth on a hand fixture") {
  Lexicon lex;
  lex.domain = LexiconDomain::substance;
  lex.categories["Heroin"] = {"h", "dope", "bth"};

  std::vector<NormalizedPost> posts;
  // 10 posts mention the seed, 6 more only expansion terms, 4 neither
  for (int i = 0; i < 10; ++i) posts.push_back(post_of({{"h", "today"}}));
  for (int i = 0; i < 6; ++i) posts.push_back(post_of({{"dope"}}));
  for (int i = 0; i < 4; ++i) posts.push_back(post_of({{"coffee"}}));

  double growth = volume_growth(posts, lex, "Heroin", {"h"});
  CHECK(growth == doctest::Approx(60.0));

  CHECK_THROWS_AS(volume_growth(posts, lex, "Heroin", {"bth"}),
                  ZeroSeedVolume);
  CHECK_THROWS_AS(volume_growth(posts, lex, "Nope", {"h"}), Error);
}
