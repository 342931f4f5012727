#pragma once

#include <functional>
#include <string>
#include <vector>

#include "opilex/textnorm.hpp"

namespace opilex {

struct ScoredSubreddit {
  std::string subreddit;
  double score = 0.0;
};

struct ScoredTerm {
  std::string term;
  double score = 0.0;
};

struct DiscoveryResult {
  std::vector<std::string> query_terms;        // seeds + accepted expansions
  std::vector<ScoredSubreddit> subreddit_ranking;  // non-increasing scores
  int rounds_run = 0;
};

struct DiscoveryOptions {
  int rounds = 1;
  size_t top_m = 150;  // subreddits fed into each expansion round
  size_t k = 10;       // expansion terms requested per round
  // Human checkpoint: given the round's candidates, return the accepted
  // terms. The default accepts everything (batch mode); the CLI installs a
  // review-file round trip here in interactive mode.
  std::function<std::vector<std::string>(const std::vector<ScoredTerm>&)>
      review;
};

// score(s) = sum_t tf(t,s) * idf(t) / total_tokens(s) with
// idf(t) = log(N_subreddits / df(t)), subreddits as documents.
// Descending score, ties lexicographic. Throws EmptyQuery.
std::vector<ScoredSubreddit> score_subreddits(
    const std::vector<NormalizedPost>& corpus,
    const std::vector<std::string>& terms);

// Top-k terms by tf-idf of the top subreddits merged into one document
// against every remaining subreddit; query terms excluded. May return
// fewer than k.
std::vector<ScoredTerm> expand_query(
    const std::vector<NormalizedPost>& corpus,
    const std::vector<std::string>& top_subreddits,
    const std::vector<std::string>& current_query, size_t k);

DiscoveryResult run_discovery(const std::vector<NormalizedPost>& corpus,
                              const std::vector<std::string>& seeds,
                              const DiscoveryOptions& options);

// Fleiss' kappa -------------------------------------------------------------

struct AnnotationMatrix {
  // subjects x raters category labels; every row must have the same size >= 2.
  std::vector<std::vector<std::string>> labels;
};

struct KappaResult {
  double kappa = 0.0;
  double p_bar = 0.0;  // mean per-subject agreement
  double p_e = 0.0;    // expected chance agreement
};

// Standard Fleiss formula; kappa := 1 when both p_bar and p_e are 1.
// Throws InvalidMatrix on empty or ragged input.
KappaResult fleiss_kappa(const AnnotationMatrix& matrix);

}  // namespace opilex
