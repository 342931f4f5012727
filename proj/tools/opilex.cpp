// opilex: corpus analytics for opioid-discourse dump files.
// Subcommands cover the pipeline end to end: ingest -> train/discover ->
// expand/lexicon-import -> trends/associate/stats, all driven by one JSON
// config plus a few overrides.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "opilex/analytics.hpp"
#include "opilex/csv.hpp"
#include "opilex/discovery.hpp"
#include "opilex/embed.hpp"
#include "opilex/errors.hpp"
#include "opilex/hashing.hpp"
#include "opilex/ingest.hpp"
#include "opilex/lexicon.hpp"
#include "opilex/textnorm.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace opilex;

namespace {

constexpr const char* kVersion = "opilex 0.1.0";

struct PipelineConfig {
  std::vector<std::string> inputs;
  int year_first = 0;
  int year_last = 0;
  std::string salt;
  uint64_t min_subreddit_comments = 100;
  uint64_t vocab_min_count = 100;
  std::string data_dir = "data";
  std::string output_dir = "out";
  std::vector<std::string> allowed_subreddits;

  EmbeddingParams embedding;

  std::vector<std::string> discovery_seeds;
  int discovery_rounds = 1;
  size_t discovery_top_m = 150;
  size_t discovery_k = 10;

  std::map<std::string, std::string> lexicon_paths;  // domain -> csv path

  std::string kappa_annotations;

  std::string expand_seed_set = "seeds";
  std::vector<std::string> expand_seeds;
  size_t expand_n = 20;

  std::string import_review_path;
  std::string import_domain = "substance";

  std::string trends_lexicon = "substance";
  std::string trends_level = "category";
  bool trends_cohort_denominator = false;

  std::string associate_domain_a = "substance";
  std::string associate_domain_b = "roa";
  std::vector<Proximity> rho_list = {Proximity::sentences(0),
                                     Proximity::sentences(1),
                                     Proximity::infinite()};
  double alpha = 0.01;
  bool zero_cell_correction = true;
  bool distant_as_joint = false;
  std::vector<std::string> exclude_categories;

  std::map<std::string, uint64_t> background_authors;  // year -> count

  std::string config_path;
};

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& context) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown config key '" + it.key() + "' in " + context);
}

Proximity parse_rho(const json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return Proximity::infinite();
    throw ConfigError("rho must be a non-negative integer or \"inf\"");
  }
  if (!v.is_number_integer() || v.get<int>() < 0)
    throw ConfigError("rho must be a non-negative integer or \"inf\"");
  return Proximity::sentences(v.get<int>());
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json root = json::parse(in, nullptr, false);
  if (root.is_discarded() || !root.is_object())
    throw ConfigError("config is not a JSON object: " + path);

  check_keys(root,
             {"input", "years", "salt", "min_subreddit_comments",
              "vocab_min_count", "data_dir", "output_dir",
              "allowed_subreddits", "embedding", "discovery", "lexicons",
              "kappa", "expand", "import", "trends", "associate", "rho_list",
              "alpha", "zero_cell_correction", "background_authors"},
             "top level");

  PipelineConfig cfg;
  cfg.config_path = path;
  if (root.contains("input"))
    cfg.inputs = root["input"].get<std::vector<std::string>>();
  if (!root.contains("years")) throw ConfigError("config needs \"years\"");
  check_keys(root["years"], {"first", "last"}, "years");
  cfg.year_first = root["years"].at("first").get<int>();
  cfg.year_last = root["years"].at("last").get<int>();
  if (cfg.year_first > cfg.year_last)
    throw ConfigError("years.first must be <= years.last");
  cfg.salt = root.value("salt", "");
  cfg.min_subreddit_comments = root.value("min_subreddit_comments", 100);
  cfg.vocab_min_count = root.value("vocab_min_count", 100);
  cfg.data_dir = root.value("data_dir", "data");
  cfg.output_dir = root.value("output_dir", "out");
  if (root.contains("allowed_subreddits"))
    cfg.allowed_subreddits =
        root["allowed_subreddits"].get<std::vector<std::string>>();

  if (root.contains("embedding")) {
    const json& e = root["embedding"];
    check_keys(e,
               {"min_term_count", "vector_size", "context_window",
                "negative_samples", "epochs", "initial_learning_rate",
                "subsample_threshold", "rng_seed"},
               "embedding");
    cfg.embedding.min_term_count =
        e.value("min_term_count", cfg.embedding.min_term_count);
    cfg.embedding.vector_size =
        e.value("vector_size", cfg.embedding.vector_size);
    cfg.embedding.context_window =
        e.value("context_window", cfg.embedding.context_window);
    cfg.embedding.negative_samples =
        e.value("negative_samples", cfg.embedding.negative_samples);
    cfg.embedding.epochs = e.value("epochs", cfg.embedding.epochs);
    cfg.embedding.initial_learning_rate =
        e.value("initial_learning_rate", cfg.embedding.initial_learning_rate);
    cfg.embedding.subsample_threshold =
        e.value("subsample_threshold", cfg.embedding.subsample_threshold);
    cfg.embedding.rng_seed = e.value("rng_seed", cfg.embedding.rng_seed);
    if (cfg.embedding.vector_size < 1 || cfg.embedding.negative_samples < 1 ||
        cfg.embedding.epochs < 1)
      throw ConfigError("invalid embedding parameters");
  }

  if (root.contains("discovery")) {
    const json& d = root["discovery"];
    check_keys(d, {"seeds", "rounds", "top_m", "k"}, "discovery");
    if (d.contains("seeds"))
      cfg.discovery_seeds = d["seeds"].get<std::vector<std::string>>();
    cfg.discovery_rounds = d.value("rounds", 1);
    cfg.discovery_top_m = d.value("top_m", 150);
    cfg.discovery_k = d.value("k", 10);
    if (cfg.discovery_rounds < 1)
      throw ConfigError("discovery.rounds must be >= 1");
  }

  if (root.contains("lexicons")) {
    for (auto it = root["lexicons"].begin(); it != root["lexicons"].end();
         ++it) {
      lexicon_domain_from(it.key());  // validates the name
      cfg.lexicon_paths[it.key()] = it.value().get<std::string>();
    }
  }

  if (root.contains("kappa")) {
    check_keys(root["kappa"], {"annotations"}, "kappa");
    cfg.kappa_annotations = root["kappa"].value("annotations", "");
  }

  if (root.contains("expand")) {
    const json& e = root["expand"];
    check_keys(e, {"seed_set", "seeds", "n"}, "expand");
    cfg.expand_seed_set = e.value("seed_set", "seeds");
    if (e.contains("seeds"))
      cfg.expand_seeds = e["seeds"].get<std::vector<std::string>>();
    cfg.expand_n = e.value("n", 20);
  }

  if (root.contains("import")) {
    const json& i = root["import"];
    check_keys(i, {"review", "domain"}, "import");
    cfg.import_review_path = i.value("review", "");
    cfg.import_domain = i.value("domain", "substance");
    lexicon_domain_from(cfg.import_domain);
  }

  if (root.contains("trends")) {
    const json& t = root["trends"];
    check_keys(t, {"lexicon", "level", "cohort_denominator"}, "trends");
    cfg.trends_lexicon = t.value("lexicon", "substance");
    cfg.trends_level = t.value("level", "category");
    if (cfg.trends_level != "category" && cfg.trends_level != "primary")
      throw ConfigError("trends.level must be \"category\" or \"primary\"");
    cfg.trends_cohort_denominator = t.value("cohort_denominator", false);
  }

  if (root.contains("associate")) {
    const json& a = root["associate"];
    check_keys(a, {"domain_a", "domain_b", "exclude_categories",
                   "distant_as_joint"},
               "associate");
    cfg.associate_domain_a = a.value("domain_a", "substance");
    cfg.associate_domain_b = a.value("domain_b", "roa");
    lexicon_domain_from(cfg.associate_domain_a);
    lexicon_domain_from(cfg.associate_domain_b);
    if (a.contains("exclude_categories"))
      cfg.exclude_categories =
          a["exclude_categories"].get<std::vector<std::string>>();
    cfg.distant_as_joint = a.value("distant_as_joint", false);
  }

  if (root.contains("rho_list")) {
    cfg.rho_list.clear();
    for (const json& v : root["rho_list"]) cfg.rho_list.push_back(parse_rho(v));
    if (cfg.rho_list.empty()) throw ConfigError("rho_list must be non-empty");
  }
  cfg.alpha = root.value("alpha", 0.01);
  if (cfg.alpha <= 0.0 || cfg.alpha >= 1.0)
    throw ConfigError("alpha must be in (0,1)");
  cfg.zero_cell_correction = root.value("zero_cell_correction", true);

  if (root.contains("background_authors"))
    for (auto it = root["background_authors"].begin();
         it != root["background_authors"].end(); ++it)
      cfg.background_authors[it.key()] = it.value().get<uint64_t>();

  return cfg;
}

std::string corpus_cache_path(const PipelineConfig& cfg, int year) {
  return cfg.output_dir + "/corpus_" + std::to_string(year) + ".ndjson";
}

void write_manifest(const PipelineConfig& cfg, const std::string& command,
                    const std::vector<std::string>& input_files,
                    unsigned threads) {
  json manifest;
  manifest["tool"] = kVersion;
  manifest["command"] = command;
  manifest["config"] = cfg.config_path;
  manifest["config_sha256"] = sha256_file_hex(cfg.config_path);
  manifest["threads"] = threads;
  json inputs = json::object();
  for (const std::string& f : input_files)
    if (fs::exists(f)) inputs[f] = sha256_file_hex(f);
  manifest["input_sha256"] = inputs;
  std::ofstream out(cfg.output_dir + "/manifest_" + command + ".json",
                    std::ios::trunc);
  out << manifest.dump(2) << '\n';
}

// Loads every per-year corpus cache in the configured range and pools the
// posts in year order.
std::vector<RawPost> load_pooled_corpus(const PipelineConfig& cfg,
                                        std::vector<std::string>* used_files) {
  std::vector<RawPost> posts;
  for (int year = cfg.year_first; year <= cfg.year_last; ++year) {
    std::string path = corpus_cache_path(cfg, year);
    std::ifstream in(path);
    if (!in) continue;
    CorpusSlice slice = load_corpus_cache(in);
    posts.insert(posts.end(), std::make_move_iterator(slice.posts.begin()),
                 std::make_move_iterator(slice.posts.end()));
    if (used_files) used_files->push_back(path);
  }
  if (posts.empty())
    throw EmptyCorpus("no corpus caches in " + cfg.output_dir +
                      "; run `opilex ingest` first");
  return posts;
}

std::vector<NormalizedPost> normalized_pooled(const PipelineConfig& cfg,
                                              unsigned threads,
                                              std::vector<std::string>* files) {
  std::vector<RawPost> raw = load_pooled_corpus(cfg, files);
  CorpusSlice pooled;
  pooled.year = cfg.year_first;
  pooled.posts = std::move(raw);
  Normalizer norm(cfg.data_dir);
  if (cfg.vocab_min_count > 1) {
    Vocabulary vocab =
        build_vocabulary(pooled, norm, cfg.vocab_min_count, threads);
    return normalize_corpus(pooled, norm, &vocab, threads);
  }
  return normalize_corpus(pooled, norm, nullptr, threads);
}

Lexicon load_domain_lexicon(const PipelineConfig& cfg,
                            const std::string& domain) {
  auto it = cfg.lexicon_paths.find(domain);
  if (it != cfg.lexicon_paths.end()) return load_lexicon(it->second);
  return load_fixture_lexicon(lexicon_domain_from(domain), cfg.data_dir);
}

// --- subcommands -----------------------------------------------------------

int cmd_ingest(const PipelineConfig& cfg, unsigned threads) {
  if (cfg.inputs.empty()) throw ConfigError("ingest needs config \"input\"");
  std::map<int, CorpusSlice> slices;
  uint64_t malformed = 0;
  for (const std::string& file : cfg.inputs) {
    std::ifstream in(file);
    if (!in) throw Error("cannot open dump file: " + file);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        RawPost post = parse_dump_line(line, cfg.salt);
        auto [year, quarter] = utc_year_quarter(post.created_utc);
        (void)quarter;
        if (year < cfg.year_first || year > cfg.year_last) continue;
        CorpusSlice& slice = slices[year];
        slice.year = year;
        slice.posts.push_back(std::move(post));
      } catch (const MalformedRecord&) {
        ++malformed;
      }
    }
  }
  if (slices.empty()) throw EmptyCorpus("no valid posts in the year range");

  for (auto& [year, slice] : slices) {
    for (const RawPost& p : slice.posts) ++slice.subreddit_index[p.subreddit];
    CorpusSlice kept = filter_subreddits(slice, cfg.min_subreddit_comments);
    if (!cfg.allowed_subreddits.empty()) {
      std::set<std::string> allowed(cfg.allowed_subreddits.begin(),
                                    cfg.allowed_subreddits.end());
      kept = restrict_to_subreddits(kept, allowed);
    }
    std::ofstream out(corpus_cache_path(cfg, year), std::ios::trunc);
    save_corpus(kept, out);
    std::cout << year << ": " << kept.posts.size() << " posts, "
              << kept.subreddit_index.size() << " subreddits\n";
  }
  std::cout << "malformed lines skipped: " << malformed << "\n";
  write_manifest(cfg, "ingest", cfg.inputs, threads);
  return 0;
}

int cmd_stats(const PipelineConfig& cfg, unsigned threads) {
  std::vector<std::string> files;
  std::ofstream out(cfg.output_dir + "/stats.csv", std::ios::trunc);
  out << "year,n_comments,n_authors,n_subreddits,author_prevalence\n";
  bool any = false;
  for (int year = cfg.year_first; year <= cfg.year_last; ++year) {
    std::string path = corpus_cache_path(cfg, year);
    std::ifstream in(path);
    if (!in) continue;
    any = true;
    files.push_back(path);
    CorpusSlice slice = load_corpus_cache(in);
    std::optional<uint64_t> background;
    if (auto it = cfg.background_authors.find(std::to_string(year));
        it != cfg.background_authors.end())
      background = it->second;
    DatasetStats stats = dataset_stats(slice, background);
    out << stats.year << ',' << stats.n_comments << ',' << stats.n_authors
        << ',' << stats.n_subreddits << ','
        << (stats.author_prevalence ? format_number(*stats.author_prevalence)
                                    : std::string())
        << '\n';
  }
  if (!any) throw EmptyCorpus("no corpus caches; run `opilex ingest` first");
  write_manifest(cfg, "stats", files, threads);
  return 0;
}

int cmd_kappa(const PipelineConfig& cfg, const std::string& override_path,
              unsigned threads) {
  std::string path =
      !override_path.empty() ? override_path : cfg.kappa_annotations;
  if (path.empty())
    throw ConfigError("kappa needs config kappa.annotations or --annotations");
  std::ifstream in(path);
  if (!in) throw Error("cannot open annotation file: " + path);
  AnnotationMatrix matrix;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    matrix.labels.push_back(split_csv_line(line));
  }
  KappaResult result = fleiss_kappa(matrix);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", result.kappa);
  std::cout << buf << "\n";
  write_manifest(cfg, "kappa", {path}, threads);
  return 0;
}

int cmd_discover(const PipelineConfig& cfg, bool interactive,
                 unsigned threads) {
  if (cfg.discovery_seeds.empty())
    throw ConfigError("discover needs config discovery.seeds");
  std::vector<std::string> files;
  std::vector<NormalizedPost> posts = normalized_pooled(cfg, threads, &files);

  int round = 0;
  DiscoveryOptions options;
  options.rounds = cfg.discovery_rounds;
  options.top_m = cfg.discovery_top_m;
  options.k = cfg.discovery_k;
  options.review = [&](const std::vector<ScoredTerm>& candidates) {
    ++round;
    std::string path = cfg.output_dir + "/discover_review_round" +
                       std::to_string(round) + ".csv";
    {
      std::ofstream out(path, std::ios::trunc);
      out << "term,score,accept\n";
      for (const ScoredTerm& c : candidates)
        out << csv_escape(c.term) << ',' << format_number(c.score) << ",1\n";
    }
    if (!interactive) {
      std::vector<std::string> all;
      for (const ScoredTerm& c : candidates) all.push_back(c.term);
      return all;
    }
    std::cerr << "round " << round << ": edit " << path
              << " (set accept to 0/1), then press Enter\n";
    std::string dummy;
    std::getline(std::cin, dummy);
    std::ifstream in(path);
    if (!in) throw Error("review file vanished: " + path);
    std::vector<std::string> accepted;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto fields = split_csv_line(line);
      if (fields.size() != 3)
        throw MalformedReviewFile(path + ": expected 3 columns");
      if (fields[2] == "1") accepted.push_back(fields[0]);
    }
    return accepted;
  };

  DiscoveryResult result =
      run_discovery(posts, cfg.discovery_seeds, options);
  json out_json;
  out_json["query_terms"] = result.query_terms;
  out_json["rounds_run"] = result.rounds_run;
  json ranking = json::array();
  for (const ScoredSubreddit& s : result.subreddit_ranking)
    ranking.push_back({{"subreddit", s.subreddit}, {"score", s.score}});
  out_json["subreddit_ranking"] = ranking;
  std::ofstream out(cfg.output_dir + "/discovery.json", std::ios::trunc);
  out << out_json.dump(2) << '\n';
  write_manifest(cfg, "discover", files, threads);
  return 0;
}

int cmd_train(const PipelineConfig& cfg, unsigned threads) {
  std::vector<std::string> files;
  std::vector<NormalizedPost> posts = normalized_pooled(cfg, threads, &files);
  EmbeddingModel model = train_embeddings(posts, cfg.embedding, threads);
  save_model(model, cfg.output_dir + "/model.bin");
  export_text(model, cfg.output_dir + "/model.txt");
  std::cout << "vocabulary " << model.vocab_size() << ", final mean loss "
            << format_number(model.epoch_mean_loss.back()) << "\n";
  write_manifest(cfg, "train", files, threads);
  return 0;
}

int cmd_expand(const PipelineConfig& cfg, unsigned threads) {
  if (cfg.expand_seeds.empty())
    throw ConfigError("expand needs config expand.seeds");
  std::string model_path = cfg.output_dir + "/model.bin";
  EmbeddingModel model = load_model(model_path);
  SeedSet seeds;
  seeds.name = cfg.expand_seed_set;
  seeds.terms.insert(cfg.expand_seeds.begin(), cfg.expand_seeds.end());
  CandidateSet candidates = expand_seeds(model, seeds, cfg.expand_n);
  std::string path =
      cfg.output_dir + "/review_" + cfg.expand_seed_set + ".csv";
  export_review(candidates, path);
  for (const std::string& missing : candidates.missing_seeds)
    std::cerr << "seed not in vocabulary: " << missing << "\n";
  std::cout << candidates.candidates.size() << " candidates -> " << path
            << "\n";
  write_manifest(cfg, "expand", {model_path}, threads);
  return 0;
}

int cmd_lexicon_import(const PipelineConfig& cfg, unsigned threads) {
  if (cfg.import_review_path.empty())
    throw ConfigError("lexicon-import needs config import.review");
  LexiconDomain domain = lexicon_domain_from(cfg.import_domain);
  Lexicon lex = import_review(cfg.import_review_path, domain);
  std::string path =
      cfg.output_dir + "/lexicon_" + cfg.import_domain + ".csv";
  save_lexicon(lex, path);
  std::cout << lex.all_terms().size() << " terms in "
            << lex.categories.size() << " categories -> " << path << "\n";
  write_manifest(cfg, "lexicon-import", {cfg.import_review_path}, threads);
  return 0;
}

int cmd_trends(const PipelineConfig& cfg, unsigned threads) {
  std::vector<std::string> files;
  std::vector<NormalizedPost> posts = normalized_pooled(cfg, threads, &files);
  Lexicon lexicon = load_domain_lexicon(cfg, cfg.trends_lexicon);
  Normalizer norm(cfg.data_dir);
  MentionMatcher matcher(lexicon, &norm);
  std::vector<PostWithMentions> with_mentions =
      collect_mentions(posts, {&matcher});
  TrendLevel level = cfg.trends_level == "primary"
                         ? TrendLevel::primary_roa_aggregate
                         : TrendLevel::category;
  std::vector<TrendSeries> series =
      quarterly_popularity(with_mentions, lexicon, level,
                           {cfg.year_first, cfg.year_last},
                           cfg.trends_cohort_denominator);
  std::ofstream out(cfg.output_dir + "/trends.csv", std::ios::trunc);
  trends_to_csv(series, out);
  write_manifest(cfg, "trends", files, threads);
  return 0;
}

int cmd_associate(const PipelineConfig& cfg, unsigned threads) {
  std::vector<std::string> files;
  std::vector<NormalizedPost> posts = normalized_pooled(cfg, threads, &files);
  Lexicon lex_a = load_domain_lexicon(cfg, cfg.associate_domain_a);
  Lexicon lex_b = load_domain_lexicon(cfg, cfg.associate_domain_b);
  for (const std::string& cat : cfg.exclude_categories) {
    lex_a.categories.erase(cat);
    lex_b.categories.erase(cat);
  }
  AssociationConfig assoc;
  assoc.alpha = cfg.alpha;
  assoc.zero_cell_correction = cfg.zero_cell_correction;
  assoc.distant_as_joint = cfg.distant_as_joint;
  Normalizer norm(cfg.data_dir);
  std::vector<AssociationResult> results = association_matrix(
      posts, lex_a, lex_b, cfg.rho_list, assoc, &norm);
  std::ofstream out(cfg.output_dir + "/associations.csv", std::ios::trunc);
  associations_to_csv(results, out);
  write_manifest(cfg, "associate", files, threads);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corpus analytics over social-media dump files"};
  app.require_subcommand(1);
  app.fallthrough();  // --config etc. may follow the subcommand

  std::string config_path;
  std::string output_override;
  unsigned threads = 1;
  if (const char* env = std::getenv("OPILEX_THREADS")) {
    threads = static_cast<unsigned>(std::max(1, std::atoi(env)));
  }
  app.add_option("--config", config_path, "pipeline config (JSON)")
      ->required();
  app.add_option("--threads", threads, "worker threads (1 = deterministic)");
  app.add_option("--output", output_override, "override config output_dir");

  bool interactive = false;
  std::string annotations_override;

  auto* ingest = app.add_subcommand("ingest", "dump files -> corpus caches");
  auto* discover =
      app.add_subcommand("discover", "rank subreddits, expand the query");
  discover->add_flag("--interactive", interactive,
                     "pause for review-file edits between rounds");
  auto* kappa = app.add_subcommand("kappa", "annotation CSV -> Fleiss kappa");
  kappa->add_option("--annotations", annotations_override,
                    "annotation CSV (subjects x raters)");
  auto* train = app.add_subcommand("train", "corpus caches -> embedding model");
  auto* expand =
      app.add_subcommand("expand", "model + seeds -> review file");
  auto* lexicon_import =
      app.add_subcommand("lexicon-import", "review file -> lexicon CSV");
  auto* trends = app.add_subcommand("trends", "quarterly popularity CSV");
  auto* associate = app.add_subcommand("associate", "odds-ratio CSV");
  auto* stats = app.add_subcommand("stats", "dataset statistics CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    PipelineConfig cfg = load_config(config_path);
    if (!output_override.empty()) cfg.output_dir = output_override;
    fs::create_directories(cfg.output_dir);
    if (threads < 1) threads = 1;

    if (ingest->parsed()) return cmd_ingest(cfg, threads);
    if (discover->parsed()) return cmd_discover(cfg, interactive, threads);
    if (kappa->parsed()) return cmd_kappa(cfg, annotations_override, threads);
    if (train->parsed()) return cmd_train(cfg, threads);
    if (expand->parsed()) return cmd_expand(cfg, threads);
    if (lexicon_import->parsed()) return cmd_lexicon_import(cfg, threads);
    if (trends->parsed()) return cmd_trends(cfg, threads);
    if (associate->parsed()) return cmd_associate(cfg, threads);
    if (stats->parsed()) return cmd_stats(cfg, threads);
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
