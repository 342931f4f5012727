#include "opilex/discovery.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "opilex/errors.hpp"

namespace opilex {

namespace {

// term -> count per subreddit, plus per-subreddit token totals.
struct SubredditIndex {
  std::map<std::string, std::unordered_map<std::string, uint64_t>> counts;
  std::map<std::string, uint64_t> totals;

  static SubredditIndex build(const std::vector<NormalizedPost>& corpus) {
    SubredditIndex idx;
    for (const auto& post : corpus) {
      auto& c = idx.counts[post.subreddit];
      auto& total = idx.totals[post.subreddit];
      for (const auto& sent : post.sentences)
        for (const std::string& lemma : sent) {
          ++c[lemma];
          ++total;
        }
    }
    return idx;
  }

  uint64_t doc_frequency(const std::string& term) const {
    uint64_t df = 0;
    for (const auto& [sub, c] : counts) df += c.count(term) ? 1 : 0;
    return df;
  }
};

}  // namespace

std::vector<ScoredSubreddit> score_subreddits(
    const std::vector<NormalizedPost>& corpus,
    const std::vector<std::string>& terms) {
  if (terms.empty()) throw EmptyQuery("no query terms");
  if (corpus.empty()) throw EmptyCorpus("no posts to score");
  SubredditIndex idx = SubredditIndex::build(corpus);
  const double n_sub = static_cast<double>(idx.counts.size());

  std::unordered_map<std::string, double> idf;
  for (const std::string& t : terms) {
    uint64_t df = idx.doc_frequency(t);
    idf[t] = df ? std::log(n_sub / static_cast<double>(df)) : 0.0;
  }

  std::vector<ScoredSubreddit> ranking;
  for (const auto& [sub, c] : idx.counts) {
    double score = 0.0;
    uint64_t total = idx.totals.at(sub);
    if (total > 0) {
      for (const std::string& t : terms) {
        auto it = c.find(t);
        if (it == c.end()) continue;
        score += static_cast<double>(it->second) * idf.at(t) /
                 static_cast<double>(total);
      }
    }
    ranking.push_back({sub, score});
  }
  std::sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.subreddit < b.subreddit;
  });
  return ranking;
}

std::vector<ScoredTerm> expand_query(
    const std::vector<NormalizedPost>& corpus,
    const std::vector<std::string>& top_subreddits,
    const std::vector<std::string>& current_query, size_t k) {
  if (k == 0 || corpus.empty()) return {};
  SubredditIndex idx = SubredditIndex::build(corpus);
  std::set<std::string> top(top_subreddits.begin(), top_subreddits.end());
  std::set<std::string> query(current_query.begin(), current_query.end());

  // The top subreddits merge into one document; each remaining subreddit
  // stays its own document for the df denominator.
  std::unordered_map<std::string, uint64_t> top_counts;
  uint64_t top_total = 0;
  size_t n_rest = 0;
  for (const auto& [sub, c] : idx.counts) {
    if (top.count(sub)) {
      for (const auto& [term, n] : c) {
        top_counts[term] += n;
        top_total += n;
      }
    } else {
      ++n_rest;
    }
  }
  if (top_total == 0) return {};
  const double n_docs = static_cast<double>(1 + n_rest);

  std::vector<ScoredTerm> scored;
  for (const auto& [term, tf] : top_counts) {
    if (query.count(term)) continue;
    uint64_t df = 1;  // the merged top document itself
    for (const auto& [sub, c] : idx.counts)
      if (!top.count(sub) && c.count(term)) ++df;
    double score = static_cast<double>(tf) /
                   static_cast<double>(top_total) * std::log(n_docs / df);
    scored.push_back({term, score});
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.term < b.term;
  });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

DiscoveryResult run_discovery(const std::vector<NormalizedPost>& corpus,
                              const std::vector<std::string>& seeds,
                              const DiscoveryOptions& options) {
  if (seeds.empty()) throw EmptyQuery("no seed terms");
  if (corpus.empty()) throw EmptyCorpus("no posts to discover over");
  if (options.rounds < 1) throw Error("rounds must be >= 1");

  DiscoveryResult result;
  std::vector<std::string> query = seeds;
  std::set<std::string> seen(seeds.begin(), seeds.end());

  for (int round = 0; round < options.rounds; ++round) {
    result.subreddit_ranking = score_subreddits(corpus, query);
    ++result.rounds_run;
    if (round + 1 == options.rounds || options.k == 0) continue;

    std::vector<std::string> top;
    for (const auto& s : result.subreddit_ranking) {
      if (top.size() >= options.top_m) break;
      top.push_back(s.subreddit);
    }
    std::vector<ScoredTerm> candidates =
        expand_query(corpus, top, query, options.k);
    if (candidates.empty()) continue;

    std::vector<std::string> accepted;
    if (options.review) {
      accepted = options.review(candidates);
    } else {
      for (const auto& c : candidates) accepted.push_back(c.term);
    }
    for (const std::string& term : accepted)
      if (seen.insert(term).second) query.push_back(term);
  }
  result.query_terms = std::move(query);
  return result;
}

KappaResult fleiss_kappa(const AnnotationMatrix& matrix) {
  const auto& rows = matrix.labels;
  if (rows.empty()) throw InvalidMatrix("no subjects");
  const size_t n_raters = rows.front().size();
  if (n_raters < 2) throw InvalidMatrix("need at least 2 raters");
  for (const auto& row : rows)
    if (row.size() != n_raters) throw InvalidMatrix("ragged annotation rows");

  const double n = static_cast<double>(n_raters);
  const double big_n = static_cast<double>(rows.size());
  std::map<std::string, double> category_totals;
  double p_bar = 0.0;
  for (const auto& row : rows) {
    std::map<std::string, double> counts;
    for (const std::string& label : row) {
      ++counts[label];
      ++category_totals[label];
    }
    double sq = 0.0;
    for (const auto& [label, c] : counts) sq += c * c;
    p_bar += (sq - n) / (n * (n - 1.0));
  }
  p_bar /= big_n;

  double p_e = 0.0;
  for (const auto& [label, total] : category_totals) {
    double pj = total / (big_n * n);
    p_e += pj * pj;
  }

  KappaResult result;
  result.p_bar = p_bar;
  result.p_e = p_e;
  // p_e can hit 1 only when a single category is ever used, which forces
  // p_bar = 1 as well; perfect agreement by definition.
  result.kappa = p_e < 1.0 ? (p_bar - p_e) / (1.0 - p_e) : 1.0;
  return result;
}

}  // namespace opilex
