#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "opilex/embed.hpp"
#include "opilex/textnorm.hpp"

namespace opilex {

enum class LexiconDomain { substance, roa, tampering };

std::string_view to_string(LexiconDomain domain);
LexiconDomain lexicon_domain_from(std::string_view name);

struct SeedSet {
  std::string name;
  std::set<std::string> terms;
};

struct Candidate {
  std::string term;
  double best_cosine = 0.0;
  std::string nearest_seed;
};

struct CandidateSet {
  std::string seed_set_name;
  std::vector<Candidate> candidates;          // sorted by term
  std::vector<std::string> missing_seeds;     // seeds absent from the model
};

struct Lexicon {
  LexiconDomain domain = LexiconDomain::substance;
  std::map<std::string, std::set<std::string>> categories;  // category -> terms
  std::map<std::string, std::string> taxonomy;  // secondary -> primary (ROA)
  std::set<std::string> seed_terms;             // fixture seed flags

  std::set<std::string> all_terms() const;
};

struct Mention {
  std::string post_id;
  std::string term;      // the lexicon term that matched
  std::string category;
  size_t sentence_index = 0;
};

// union of neighbours(w, n) over seeds, plus the seeds themselves;
// duplicate terms keep the max cosine and its seed. Seeds missing from the
// model are reported in missing_seeds; all missing throws
// NoSeedsInVocabulary.
CandidateSet expand_seeds(const EmbeddingModel& model, const SeedSet& seeds,
                          size_t n = 20);

// Review CSV: term,best_cosine,nearest_seed,accept,category.
void export_review(const CandidateSet& candidates, const std::string& path);
Lexicon import_review(const std::string& path, LexiconDomain domain);

// Shipped transcriptions of the substance / ROA / tampering tables.
Lexicon load_fixture_lexicon(LexiconDomain domain, const std::string& data_dir);

// Lexicon CSV: domain,category,primary_category,term,seed.
void save_lexicon(const Lexicon& lexicon, const std::string& path);
Lexicon load_lexicon(const std::string& path);

// Exact-equality mention matching over normalized posts. When a Normalizer
// is supplied the index keys are the lemma-normalized lexicon terms, so
// both sides of a match went through the same pipeline.
class MentionMatcher {
 public:
  explicit MentionMatcher(const Lexicon& lexicon,
                          const Normalizer* normalizer = nullptr);

  std::vector<Mention> match(const NormalizedPost& post) const;
  const Lexicon& lexicon() const { return *lexicon_; }

 private:
  const Lexicon* lexicon_;
  struct Hit {
    std::string term;
    std::string category;
  };
  std::unordered_map<std::string, Hit> index_;  // match key -> term/category
};

std::vector<Mention> match_mentions(const NormalizedPost& post,
                                    const Lexicon& lexicon);

// 100 * (C_full - C_seed) / C_seed over posts mentioning >= 1 term of the
// category vs. only its seed subset. Throws ZeroSeedVolume.
double volume_growth(const std::vector<NormalizedPost>& posts,
                     const Lexicon& lexicon, const std::string& category,
                     const std::set<std::string>& seed_only_terms,
                     const Normalizer* normalizer = nullptr);

}  // namespace opilex
