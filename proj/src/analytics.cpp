#include "opilex/analytics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include "opilex/csv.hpp"
#include "opilex/errors.hpp"
#include "opilex/hashing.hpp"

namespace opilex {

std::pair<int, int> utc_year_quarter(int64_t epoch_seconds) {
  using namespace std::chrono;
  sys_days day = floor<days>(sys_seconds{seconds{epoch_seconds}});
  year_month_day ymd{day};
  int month = static_cast<int>(static_cast<unsigned>(ymd.month()));
  return {static_cast<int>(ymd.year()), (month - 1) / 3 + 1};
}

std::vector<PostWithMentions> collect_mentions(
    const std::vector<NormalizedPost>& posts,
    const std::vector<const MentionMatcher*>& matchers) {
  std::vector<PostWithMentions> out;
  out.reserve(posts.size());
  for (const NormalizedPost& post : posts) {
    PostWithMentions p;
    p.post_id = post.post_id;
    p.author_id = post.author_id;
    p.created_utc = post.created_utc;
    p.sentence_count = post.sentences.size();
    for (const MentionMatcher* m : matchers) {
      std::vector<Mention> ms = m->match(post);
      p.mentions.insert(p.mentions.end(), std::make_move_iterator(ms.begin()),
                        std::make_move_iterator(ms.end()));
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<TrendSeries> quarterly_popularity(
    const std::vector<PostWithMentions>& posts, const Lexicon& lexicon,
    TrendLevel level, YearRange range, bool cohort_denominator) {
  if (range.first > range.last) throw EmptyRange("empty year range");

  // category name per output series; at the primary level the secondary
  // categories' author sets union under their taxonomy parent.
  std::map<std::string, std::string> series_of;
  for (const auto& [category, terms] : lexicon.categories) {
    if (level == TrendLevel::primary_roa_aggregate) {
      auto it = lexicon.taxonomy.find(category);
      if (it == lexicon.taxonomy.end())
        throw Error("category without taxonomy parent: " + category);
      series_of[category] = it->second;
    } else {
      series_of[category] = category;
    }
  }

  const size_t n_quarters = static_cast<size_t>(range.last - range.first + 1) * 4;
  auto quarter_slot = [&](int year, int quarter) {
    return static_cast<size_t>(year - range.first) * 4 +
           static_cast<size_t>(quarter - 1);
  };

  std::vector<std::set<std::string>> active(n_quarters);
  std::set<std::string> cohort;
  std::map<std::string, std::vector<std::set<std::string>>> mentioning;
  for (const auto& [cat, series] : series_of)
    mentioning.try_emplace(series,
                           std::vector<std::set<std::string>>(n_quarters));

  for (const PostWithMentions& post : posts) {
    if (post.author_id == kDeletedAuthor) continue;
    auto [year, quarter] = utc_year_quarter(post.created_utc);
    if (year < range.first || year > range.last) continue;
    size_t slot = quarter_slot(year, quarter);
    active[slot].insert(post.author_id);
    cohort.insert(post.author_id);
    for (const Mention& m : post.mentions) {
      auto it = series_of.find(m.category);
      if (it == series_of.end()) continue;
      mentioning.at(it->second)[slot].insert(post.author_id);
    }
  }

  std::vector<TrendSeries> out;
  for (const auto& [series_name, quarters] : mentioning) {
    TrendSeries series;
    series.category = series_name;
    for (size_t slot = 0; slot < n_quarters; ++slot) {
      TrendPoint pt;
      pt.year = range.first + static_cast<int>(slot / 4);
      pt.quarter = static_cast<int>(slot % 4) + 1;
      pt.active_authors =
          cohort_denominator ? cohort.size() : active[slot].size();
      pt.mentioning_authors = quarters[slot].size();
      pt.share = pt.active_authors
                     ? static_cast<double>(pt.mentioning_authors) /
                           static_cast<double>(pt.active_authors)
                     : 0.0;
      series.points.push_back(pt);
    }
    out.push_back(std::move(series));
  }
  return out;
}

namespace {

// Smallest |sa - sb| over the two sorted index lists.
size_t min_sentence_gap(const std::vector<size_t>& a,
                        const std::vector<size_t>& b) {
  size_t best = SIZE_MAX;
  for (size_t sa : a) {
    auto it = std::lower_bound(b.begin(), b.end(), sa);
    if (it != b.end()) best = std::min(best, *it - sa);
    if (it != b.begin()) best = std::min(best, sa - *(it - 1));
    if (best == 0) break;
  }
  return best;
}

}  // namespace

ContingencyTable build_contingency(const std::vector<PostWithMentions>& posts,
                                   const std::string& category_a,
                                   const std::string& category_b,
                                   Proximity rho, bool distant_as_joint) {
  if (category_a == category_b)
    throw SameCategory("contingency needs two distinct categories");
  ContingencyTable table;
  std::vector<size_t> a_sents, b_sents;
  for (const PostWithMentions& post : posts) {
    a_sents.clear();
    b_sents.clear();
    for (const Mention& m : post.mentions) {
      if (m.category == category_a) a_sents.push_back(m.sentence_index);
      else if (m.category == category_b) b_sents.push_back(m.sentence_index);
    }
    if (a_sents.empty() && b_sents.empty()) {
      ++table.d;
      continue;
    }
    if (a_sents.empty()) {
      ++table.c;
      continue;
    }
    if (b_sents.empty()) {
      ++table.b;
      continue;
    }
    bool joint;
    if (rho.is_infinite || distant_as_joint) {
      joint = true;
    } else {
      std::sort(a_sents.begin(), a_sents.end());
      std::sort(b_sents.begin(), b_sents.end());
      joint = min_sentence_gap(a_sents, b_sents) <=
              static_cast<size_t>(rho.value);
    }
    if (joint) {
      ++table.a;
    } else {
      // both categories present but far apart: separate events
      ++table.b;
      ++table.c;
    }
  }
  return table;
}

AssociationResult odds_ratio(const ContingencyTable& table,
                             const AssociationConfig& config) {
  const uint64_t total = table.a + table.b + table.c + table.d;
  if (total == 0) throw DegenerateTable("empty contingency table");
  if ((table.a + table.b) == 0 || (table.c + table.d) == 0 ||
      (table.a + table.c) == 0 || (table.b + table.d) == 0)
    throw DegenerateTable("empty margin in contingency table");

  bool has_zero_cell =
      table.a == 0 || table.b == 0 || table.c == 0 || table.d == 0;
  if (has_zero_cell && !config.zero_cell_correction)
    throw DegenerateTable("zero cell without Haldane-Anscombe correction");

  const double shift = has_zero_cell && config.zero_cell_correction ? 0.5 : 0.0;
  const double a = static_cast<double>(table.a) + shift;
  const double b = static_cast<double>(table.b) + shift;
  const double c = static_cast<double>(table.c) + shift;
  const double d = static_cast<double>(table.d) + shift;
  const double n = a + b + c + d;

  AssociationResult result;
  result.table = table;
  result.n_comentions = table.a;
  result.odds_ratio = (a * d) / (b * c);
  double se = std::sqrt(1.0 / a + 1.0 / b + 1.0 / c + 1.0 / d);
  result.ci_low = std::exp(std::log(result.odds_ratio) - config.z * se);
  result.ci_high = std::exp(std::log(result.odds_ratio) + config.z * se);
  double x2 = n * (a * d - b * c) * (a * d - b * c) /
              ((a + b) * (c + d) * (a + c) * (b + d));
  result.p_value = std::erfc(std::sqrt(x2 / 2.0));
  result.significant = result.p_value <= config.alpha;
  return result;
}

std::vector<AssociationResult> association_matrix(
    const std::vector<NormalizedPost>& posts, const Lexicon& lexicon_a,
    const Lexicon& lexicon_b, const std::vector<Proximity>& rho_list,
    const AssociationConfig& config, const Normalizer* normalizer) {
  if (lexicon_a.domain == lexicon_b.domain)
    throw SameCategory("association needs two distinct lexicon domains");
  MentionMatcher matcher_a(lexicon_a, normalizer);
  MentionMatcher matcher_b(lexicon_b, normalizer);
  std::vector<PostWithMentions> with_mentions =
      collect_mentions(posts, {&matcher_a, &matcher_b});

  std::vector<AssociationResult> results;
  for (const auto& [cat_a, terms_a] : lexicon_a.categories) {
    for (const auto& [cat_b, terms_b] : lexicon_b.categories) {
      for (const Proximity& rho : rho_list) {
        ContingencyTable table = build_contingency(
            with_mentions, cat_a, cat_b, rho, config.distant_as_joint);
        try {
          AssociationResult r = odds_ratio(table, config);
          r.domain_a = to_string(lexicon_a.domain);
          r.category_a = cat_a;
          r.domain_b = to_string(lexicon_b.domain);
          r.category_b = cat_b;
          r.rho = rho;
          results.push_back(std::move(r));
        } catch (const DegenerateTable&) {
          // pair unmeasurable on this corpus; nothing to report
        }
      }
    }
  }
  return results;
}

void trends_to_csv(const std::vector<TrendSeries>& series, std::ostream& out) {
  out << "category,year,quarter,active_authors,mentioning_authors,share\n";
  for (const TrendSeries& s : series)
    for (const TrendPoint& pt : s.points)
      out << csv_escape(s.category) << ',' << pt.year << ',' << pt.quarter
          << ',' << pt.active_authors << ',' << pt.mentioning_authors << ','
          << format_number(pt.share) << '\n';
}

void associations_to_csv(const std::vector<AssociationResult>& results,
                         std::ostream& out) {
  out << "domain_a,category_a,domain_b,category_b,rho,a,b,c,d,odds_ratio,"
         "ci_low,ci_high,p_value,significant\n";
  for (const AssociationResult& r : results)
    out << r.domain_a << ',' << csv_escape(r.category_a) << ',' << r.domain_b
        << ',' << csv_escape(r.category_b) << ',' << r.rho.label() << ','
        << r.table.a << ',' << r.table.b << ',' << r.table.c << ','
        << r.table.d << ',' << format_number(r.odds_ratio) << ','
        << format_number(r.ci_low) << ',' << format_number(r.ci_high) << ','
        << format_number(r.p_value) << ',' << (r.significant ? 1 : 0) << '\n';
}

}  // namespace opilex
