#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "opilex/lexicon.hpp"
#include "opilex/textnorm.hpp"

namespace opilex {

// Sentence-distance threshold for co-occurrence; rho = infinity means
// "anywhere in the post".
struct Proximity {
  static Proximity sentences(int n) { return {false, n}; }
  static Proximity infinite() { return {true, 0}; }

  bool is_infinite = false;
  int value = 0;

  std::string label() const {
    return is_infinite ? "inf" : std::to_string(value);
  }
  bool operator==(const Proximity&) const = default;
};

struct AssociationConfig {
  double alpha = 0.01;
  double z = 1.96;  // 95% CI
  bool zero_cell_correction = false;
  // Sensitivity variant: count both-present-beyond-rho as a joint event
  // instead of the separate-events rule.
  bool distant_as_joint = false;
};

struct ContingencyTable {
  uint64_t a = 0;  // joint events
  uint64_t b = 0;  // A-only events
  uint64_t c = 0;  // B-only events
  uint64_t d = 0;  // neither
};

struct AssociationResult {
  std::string domain_a, category_a;
  std::string domain_b, category_b;
  Proximity rho;
  ContingencyTable table;
  double odds_ratio = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double p_value = 1.0;
  uint64_t n_comentions = 0;  // = table.a
  bool significant = false;
};

struct PostWithMentions {
  std::string post_id;
  std::string author_id;
  int64_t created_utc = 0;
  size_t sentence_count = 0;
  std::vector<Mention> mentions;
};

struct TrendPoint {
  int year = 0;
  int quarter = 0;  // 1..4
  uint64_t active_authors = 0;
  uint64_t mentioning_authors = 0;
  double share = 0.0;
};

struct TrendSeries {
  std::string category;
  std::vector<TrendPoint> points;
};

enum class TrendLevel { category, primary_roa_aggregate };

struct YearRange {
  int first = 0;
  int last = 0;
};

// Calendar quarter of an epoch timestamp, resolved in UTC.
std::pair<int, int> utc_year_quarter(int64_t epoch_seconds);

// Joins posts with their mentions from one or two matchers.
std::vector<PostWithMentions> collect_mentions(
    const std::vector<NormalizedPost>& posts,
    const std::vector<const MentionMatcher*>& matchers);

// Quarterly author-share trends. Deleted-author posts are excluded from
// numerator and denominator; an author counts once per quarter no matter
// how often they mention a category. cohort_denominator switches the
// denominator from quarter-active authors to the full-range cohort.
std::vector<TrendSeries> quarterly_popularity(
    const std::vector<PostWithMentions>& posts, const Lexicon& lexicon,
    TrendLevel level, YearRange range, bool cohort_denominator = false);

// Per post: a joint event if some A and B mention are within rho sentences;
// both present beyond rho counts as separate A-only and B-only events
// (unless distant_as_joint); single-category posts go to b or c; the rest
// to d. Throws SameCategory.
ContingencyTable build_contingency(const std::vector<PostWithMentions>& posts,
                                   const std::string& category_a,
                                   const std::string& category_b,
                                   Proximity rho,
                                   bool distant_as_joint = false);

// OR = ad/bc, Woolf CI, Pearson chi-square p (df=1, no continuity
// correction) computed as erfc(sqrt(x2/2)). With zero_cell_correction every
// cell gets +0.5 first (Haldane-Anscombe); otherwise a zero cell or an
// empty margin throws DegenerateTable.
AssociationResult odds_ratio(const ContingencyTable& table,
                             const AssociationConfig& config);

// All category pairs of the two lexicons at every rho; insignificant
// results are flagged, not dropped. Pairs whose table degenerates without
// correction are skipped.
std::vector<AssociationResult> association_matrix(
    const std::vector<NormalizedPost>& posts, const Lexicon& lexicon_a,
    const Lexicon& lexicon_b, const std::vector<Proximity>& rho_list,
    const AssociationConfig& config, const Normalizer* normalizer = nullptr);

// Output files: fixed column order, '.' decimals, 6 significant digits.
void trends_to_csv(const std::vector<TrendSeries>& series, std::ostream& out);
void associations_to_csv(const std::vector<AssociationResult>& results,
                         std::ostream& out);

}  // namespace opilex
