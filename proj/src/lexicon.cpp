#include "opilex/lexicon.hpp"

#include <algorithm>
#include <fstream>

#include "opilex/csv.hpp"
#include "opilex/errors.hpp"

namespace opilex {

std::string_view to_string(LexiconDomain domain) {
  switch (domain) {
    case LexiconDomain::substance: return "substance";
    case LexiconDomain::roa: return "roa";
    case LexiconDomain::tampering: return "tampering";
  }
  return "substance";
}

LexiconDomain lexicon_domain_from(std::string_view name) {
  if (name == "substance") return LexiconDomain::substance;
  if (name == "roa") return LexiconDomain::roa;
  if (name == "tampering") return LexiconDomain::tampering;
  throw Error("unknown lexicon domain: " + std::string(name));
}

std::set<std::string> Lexicon::all_terms() const {
  std::set<std::string> terms;
  for (const auto& [cat, ts] : categories) terms.insert(ts.begin(), ts.end());
  return terms;
}

CandidateSet expand_seeds(const EmbeddingModel& model, const SeedSet& seeds,
                          size_t n) {
  CandidateSet out;
  out.seed_set_name = seeds.name;
  std::map<std::string, Candidate> best;  // term -> best cosine + seed
  auto consider = [&](const std::string& term, double cos,
                      const std::string& seed) {
    auto [it, inserted] = best.try_emplace(term, Candidate{term, cos, seed});
    if (!inserted && cos > it->second.best_cosine) {
      it->second.best_cosine = cos;
      it->second.nearest_seed = seed;
    }
  };
  size_t present = 0;
  for (const std::string& seed : seeds.terms) {
    if (!model.vocabulary.count(seed)) {
      out.missing_seeds.push_back(seed);
      continue;
    }
    ++present;
    consider(seed, 1.0, seed);  // K itself is part of the expansion set
    for (const auto& [term, cos] : neighbours(model, seed, n))
      consider(term, cos, seed);
  }
  if (present == 0)
    throw NoSeedsInVocabulary("no seed of '" + seeds.name +
                              "' is in the model vocabulary");
  for (auto& [term, cand] : best) out.candidates.push_back(std::move(cand));
  return out;
}

void export_review(const CandidateSet& candidates, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write review file: " + path);
  out << "term,best_cosine,nearest_seed,accept,category\n";
  for (const Candidate& c : candidates.candidates)
    out << csv_escape(c.term) << ',' << format_number(c.best_cosine) << ','
        << csv_escape(c.nearest_seed) << ",0,\n";
}

Lexicon import_review(const std::string& path, LexiconDomain domain) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open review file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw MalformedReviewFile("empty review file: " + path);
  auto header = split_csv_line(line);
  if (header.size() < 5 || header[0] != "term" || header[3] != "accept" ||
      header[4] != "category")
    throw MalformedReviewFile("unexpected review header in " + path);

  Lexicon lex;
  lex.domain = domain;
  std::map<std::string, std::string> assigned;  // term -> category
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 5)
      throw MalformedReviewFile(path + ":" + std::to_string(lineno) +
                                ": expected 5 columns");
    const std::string& term = fields[0];
    const std::string& accept = fields[3];
    const std::string& category = fields[4];
    if (accept != "0" && accept != "1")
      throw MalformedReviewFile(path + ":" + std::to_string(lineno) +
                                ": accept must be 0 or 1");
    if (accept == "0" || category.empty()) continue;
    auto [it, inserted] = assigned.emplace(term, category);
    if (!inserted && it->second != category)
      throw DuplicateTermAssignment("term '" + term +
                                    "' assigned to two categories");
    lex.categories[category].insert(term);
  }
  if (lex.categories.empty())
    throw NoTermsAccepted("review file accepted no terms: " + path);
  return lex;
}

Lexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error("empty lexicon file: " + path);
  auto header = split_csv_line(line);
  const std::vector<std::string> expected = {"domain", "category",
                                             "primary_category", "term",
                                             "seed"};
  if (std::vector<std::string>(header.begin(), header.end()) != expected)
    throw Error("unexpected lexicon header in " + path);

  Lexicon lex;
  std::map<std::string, std::string> assigned;
  bool first_row = true;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 5)
      throw Error(path + ":" + std::to_string(lineno) + ": expected 5 columns");
    if (first_row) {
      lex.domain = lexicon_domain_from(fields[0]);
      first_row = false;
    }
    const std::string& category = fields[1];
    const std::string& primary = fields[2];
    const std::string& term = fields[3];
    auto [it, inserted] = assigned.emplace(term, category);
    if (!inserted && it->second != category)
      throw DuplicateTermAssignment("term '" + term +
                                    "' assigned to two categories in " + path);
    lex.categories[category].insert(term);
    if (!primary.empty()) lex.taxonomy[category] = primary;
    if (fields[4] == "1") lex.seed_terms.insert(term);
  }
  if (lex.categories.empty()) throw Error("lexicon has no terms: " + path);
  return lex;
}

void save_lexicon(const Lexicon& lexicon, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write lexicon file: " + path);
  out << "domain,category,primary_category,term,seed\n";
  for (const auto& [category, terms] : lexicon.categories) {
    std::string primary;
    if (auto it = lexicon.taxonomy.find(category); it != lexicon.taxonomy.end())
      primary = it->second;
    for (const std::string& term : terms)
      out << to_string(lexicon.domain) << ',' << csv_escape(category) << ','
          << csv_escape(primary) << ',' << csv_escape(term) << ','
          << (lexicon.seed_terms.count(term) ? '1' : '0') << '\n';
  }
}

Lexicon load_fixture_lexicon(LexiconDomain domain,
                             const std::string& data_dir) {
  return load_lexicon(data_dir + "/lexicon_" + std::string(to_string(domain)) +
                      ".csv");
}

MentionMatcher::MentionMatcher(const Lexicon& lexicon,
                               const Normalizer* normalizer)
    : lexicon_(&lexicon) {
  for (const auto& [category, terms] : lexicon.categories) {
    for (const std::string& term : terms) {
      std::string key = normalizer ? normalizer->lemma(term) : term;
      auto [it, inserted] = index_.try_emplace(key, Hit{term, category});
      if (!inserted && it->second.category != category)
        throw DuplicateTermAssignment(
            "terms '" + it->second.term + "' and '" + term +
            "' collide across categories after normalization");
    }
  }
}

std::vector<Mention> MentionMatcher::match(const NormalizedPost& post) const {
  std::vector<Mention> mentions;
  for (size_t si = 0; si < post.sentences.size(); ++si) {
    for (const std::string& lemma : post.sentences[si]) {
      auto it = index_.find(lemma);
      if (it == index_.end()) continue;
      mentions.push_back({post.post_id, it->second.term, it->second.category,
                          si});
    }
  }
  return mentions;
}

std::vector<Mention> match_mentions(const NormalizedPost& post,
                                    const Lexicon& lexicon) {
  return MentionMatcher(lexicon).match(post);
}

double volume_growth(const std::vector<NormalizedPost>& posts,
                     const Lexicon& lexicon, const std::string& category,
                     const std::set<std::string>& seed_only_terms,
                     const Normalizer* normalizer) {
  auto it = lexicon.categories.find(category);
  if (it == lexicon.categories.end())
    throw Error("unknown category: " + category);
  const std::set<std::string>& full = it->second;
  for (const std::string& seed : seed_only_terms)
    if (!full.count(seed))
      throw Error("seed term '" + seed + "' not in category " + category);

  auto keyset = [&](const std::set<std::string>& terms) {
    std::set<std::string> keys;
    for (const std::string& t : terms)
      keys.insert(normalizer ? normalizer->lemma(t) : t);
    return keys;
  };
  std::set<std::string> full_keys = keyset(full);
  std::set<std::string> seed_keys = keyset(seed_only_terms);

  uint64_t c_full = 0, c_seed = 0;
  for (const NormalizedPost& post : posts) {
    bool hit_full = false, hit_seed = false;
    for (const auto& sent : post.sentences) {
      for (const std::string& lemma : sent) {
        if (!hit_full && full_keys.count(lemma)) hit_full = true;
        if (!hit_seed && seed_keys.count(lemma)) hit_seed = true;
      }
      if (hit_full && hit_seed) break;
    }
    c_full += hit_full;
    c_seed += hit_seed;
  }
  if (c_seed == 0)
    throw ZeroSeedVolume("no post mentions a seed term of " + category);
  return 100.0 * static_cast<double>(c_full - c_seed) /
         static_cast<double>(c_seed);
}

}  // namespace opilex
