#include "opilex/embed.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <thread>

#include "opilex/errors.hpp"

namespace opilex {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

namespace sgns {

double pair_loss(std::span<const double> center, std::span<const double> ctx,
                 std::span<const std::vector<double>> negatives) {
  double loss = -std::log(sigmoid(dot(center, ctx)));
  for (const auto& neg : negatives)
    loss -= std::log(sigmoid(-dot(center, neg)));
  return loss;
}

void pair_gradients(std::span<const double> center, std::span<const double> ctx,
                    std::span<const std::vector<double>> negatives,
                    std::span<double> grad_center, std::span<double> grad_ctx,
                    std::span<std::vector<double>> grad_negatives) {
  const size_t d = center.size();
  std::fill(grad_center.begin(), grad_center.end(), 0.0);
  // d/dx -log sigmoid(x) = sigmoid(x) - 1; for the negative term with
  // x = -u.v the sign folds into sigmoid(u.v).
  double g_pos = sigmoid(dot(center, ctx)) - 1.0;
  for (size_t i = 0; i < d; ++i) {
    grad_center[i] += g_pos * ctx[i];
    grad_ctx[i] = g_pos * center[i];
  }
  for (size_t k = 0; k < negatives.size(); ++k) {
    double g_neg = sigmoid(dot(center, negatives[k]));
    for (size_t i = 0; i < d; ++i) {
      grad_center[i] += g_neg * negatives[k][i];
      grad_negatives[k][i] = g_neg * center[i];
    }
  }
}

}  // namespace sgns

namespace {

struct TrainingData {
  std::vector<std::vector<uint32_t>> sentences;
  std::vector<double> keep_prob;    // subsampling keep probability per term
  std::vector<double> noise_cdf;    // cumulative unigram^0.75
  uint64_t total_tokens = 0;
};

uint32_t sample_noise(const std::vector<double>& cdf, double u) {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u * cdf.back());
  return static_cast<uint32_t>(std::min<size_t>(cdf.size() - 1,
                                                it - cdf.begin()));
}

}  // namespace

EmbeddingModel train_embeddings(const std::vector<NormalizedPost>& corpus,
                                const EmbeddingParams& params,
                                unsigned threads) {
  if (corpus.empty()) throw EmptyCorpus("empty training corpus");

  // Vocabulary: count, prune, order by (count desc, term asc) for a
  // deterministic dense indexing.
  std::unordered_map<std::string, uint64_t> raw_counts;
  for (const auto& post : corpus)
    for (const auto& sent : post.sentences)
      for (const std::string& lemma : sent) ++raw_counts[lemma];
  std::vector<std::pair<std::string, uint64_t>> kept;
  for (auto& [term, n] : raw_counts)
    if (n >= params.min_term_count) kept.emplace_back(term, n);
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (kept.size() < 2)
    throw DegenerateVocabulary("fewer than 2 terms reach min_term_count");

  EmbeddingModel model;
  model.params = params;
  model.terms.reserve(kept.size());
  for (uint32_t i = 0; i < kept.size(); ++i) {
    model.vocabulary.emplace(kept[i].first, i);
    model.terms.push_back(kept[i].first);
    model.counts.push_back(kept[i].second);
  }

  TrainingData data;
  bool any_trainable_sentence = false;
  for (const auto& post : corpus) {
    for (const auto& sent : post.sentences) {
      std::vector<uint32_t> ids;
      for (const std::string& lemma : sent) {
        auto it = model.vocabulary.find(lemma);
        if (it != model.vocabulary.end()) ids.push_back(it->second);
      }
      if (ids.size() >= 2) any_trainable_sentence = true;
      data.total_tokens += ids.size();
      if (!ids.empty()) data.sentences.push_back(std::move(ids));
    }
  }
  if (!any_trainable_sentence)
    throw EmptyCorpus("no sentence with two in-vocabulary terms");

  data.keep_prob.resize(model.vocab_size());
  for (size_t i = 0; i < model.vocab_size(); ++i) {
    double z = static_cast<double>(model.counts[i]) /
               static_cast<double>(data.total_tokens);
    double t = params.subsample_threshold;
    double keep = (std::sqrt(z / t) + 1.0) * (t / z);
    data.keep_prob[i] = std::min(1.0, keep);
  }
  data.noise_cdf.resize(model.vocab_size());
  double acc = 0.0;
  for (size_t i = 0; i < model.vocab_size(); ++i) {
    acc += std::pow(static_cast<double>(model.counts[i]), 0.75);
    data.noise_cdf[i] = acc;
  }

  const size_t d = static_cast<size_t>(params.vector_size);
  model.input_vectors.resize(model.vocab_size() * d);
  model.output_vectors.assign(model.vocab_size() * d, 0.0f);
  {
    std::mt19937_64 rng(params.rng_seed);
    std::uniform_real_distribution<float> init(-0.5f / d, 0.5f / d);
    for (float& v : model.input_vectors) v = init(rng);
  }

  const uint64_t planned_tokens =
      data.total_tokens * static_cast<uint64_t>(params.epochs);
  std::atomic<uint64_t> tokens_done{0};

  auto train_range = [&](size_t begin, size_t end, uint64_t seed,
                         double& loss_sum, uint64_t& loss_pairs) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<uint32_t> sent;
    std::vector<float> grad_center(d);
    float* in = model.input_vectors.data();
    float* out = model.output_vectors.data();
    uint64_t local_tokens = 0;

    for (size_t si = begin; si < end; ++si) {
      sent.clear();
      for (uint32_t id : data.sentences[si]) {
        ++local_tokens;
        if (data.keep_prob[id] >= 1.0 || unit(rng) < data.keep_prob[id])
          sent.push_back(id);
      }
      if (sent.size() < 2) continue;
      for (size_t c = 0; c < sent.size(); ++c) {
        uint64_t done = tokens_done.load(std::memory_order_relaxed);
        double progress =
            static_cast<double>(done) / static_cast<double>(planned_tokens);
        double alpha = params.initial_learning_rate *
                       std::max(1e-4, 1.0 - progress);
        int w_eff = 1 + static_cast<int>(rng() %
                                         static_cast<uint64_t>(
                                             params.context_window));
        size_t lo = c >= static_cast<size_t>(w_eff) ? c - w_eff : 0;
        size_t hi = std::min(sent.size() - 1, c + static_cast<size_t>(w_eff));
        float* v_c = in + size_t(sent[c]) * d;
        for (size_t x = lo; x <= hi; ++x) {
          if (x == c) continue;
          std::fill(grad_center.begin(), grad_center.end(), 0.0f);
          // positive pair
          {
            float* u = out + size_t(sent[x]) * d;
            double s = 0.0;
            for (size_t i = 0; i < d; ++i) s += double(v_c[i]) * u[i];
            double sg = sigmoid(s);
            loss_sum += -std::log(std::max(sg, 1e-12));
            float g = static_cast<float>((sg - 1.0) * alpha);
            for (size_t i = 0; i < d; ++i) {
              grad_center[i] += g * u[i];
              u[i] -= g * v_c[i];
            }
          }
          for (int k = 0; k < params.negative_samples; ++k) {
            uint32_t noise = sample_noise(data.noise_cdf, unit(rng));
            if (noise == sent[x]) continue;  // canonical: skip the target
            float* u = out + size_t(noise) * d;
            double s = 0.0;
            for (size_t i = 0; i < d; ++i) s += double(v_c[i]) * u[i];
            double sg = sigmoid(s);
            loss_sum += -std::log(std::max(1.0 - sg, 1e-12));
            float g = static_cast<float>(sg * alpha);
            for (size_t i = 0; i < d; ++i) {
              grad_center[i] += g * u[i];
              u[i] -= g * v_c[i];
            }
          }
          for (size_t i = 0; i < d; ++i) v_c[i] -= grad_center[i];
          ++loss_pairs;
        }
      }
      if (local_tokens >= 4096) {
        tokens_done.fetch_add(local_tokens, std::memory_order_relaxed);
        local_tokens = 0;
      }
    }
    tokens_done.fetch_add(local_tokens, std::memory_order_relaxed);
  };

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    double loss_sum = 0.0;
    uint64_t loss_pairs = 0;
    if (threads <= 1) {
      train_range(0, data.sentences.size(),
                  params.rng_seed + 0x9e3779b97f4a7c15ull * (epoch + 1),
                  loss_sum, loss_pairs);
    } else {
      size_t n = std::min<size_t>(threads, data.sentences.size());
      std::vector<double> sums(n, 0.0);
      std::vector<uint64_t> pairs(n, 0);
      std::vector<std::thread> workers;
      size_t chunk = (data.sentences.size() + n - 1) / n;
      for (size_t w = 0; w < n; ++w) {
        size_t b = w * chunk, e = std::min(data.sentences.size(), b + chunk);
        workers.emplace_back([&, w, b, e] {
          train_range(b, e,
                      params.rng_seed +
                          0x9e3779b97f4a7c15ull * (uint64_t(epoch) * n + w + 1),
                      sums[w], pairs[w]);
        });
      }
      for (auto& t : workers) t.join();
      for (size_t w = 0; w < n; ++w) {
        loss_sum += sums[w];
        loss_pairs += pairs[w];
      }
    }
    model.epoch_mean_loss.push_back(
        loss_pairs ? loss_sum / static_cast<double>(loss_pairs) : 0.0);
  }
  return model;
}

namespace {

uint32_t require_term(const EmbeddingModel& model, std::string_view w) {
  auto it = model.vocabulary.find(std::string(w));
  if (it == model.vocabulary.end())
    throw UnknownTerm("term not in vocabulary: " + std::string(w));
  return it->second;
}

double vector_cosine(std::span<const float> a, std::span<const float> b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    ab += double(a[i]) * b[i];
    aa += double(a[i]) * a[i];
    bb += double(b[i]) * b[i];
  }
  if (aa == 0.0 || bb == 0.0) throw ZeroVector("zero vector in cosine");
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

}  // namespace

double cosine(const EmbeddingModel& model, std::string_view w1,
              std::string_view w2) {
  return vector_cosine(model.input_vector(require_term(model, w1)),
                       model.input_vector(require_term(model, w2)));
}

std::vector<std::pair<std::string, double>> neighbours(
    const EmbeddingModel& model, std::string_view w, size_t n) {
  uint32_t wi = require_term(model, w);
  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(model.vocab_size());
  auto wv = model.input_vector(wi);
  for (uint32_t i = 0; i < model.vocab_size(); ++i) {
    if (i == wi) continue;
    scored.emplace_back(model.terms[i],
                        vector_cosine(wv, model.input_vector(i)));
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (scored.size() > n) scored.resize(n);
  return scored;
}

namespace {

constexpr char kMagic[8] = {'O', 'P', 'L', 'X', 'E', 'M', 'B', '\0'};
constexpr uint32_t kModelVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw CorruptModel("truncated model file");
  return v;
}

}  // namespace

void save_model(const EmbeddingModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write model file: " + path);
  out.write(kMagic, sizeof(kMagic));
  write_pod(out, kModelVersion);
  write_pod(out, model.params.min_term_count);
  write_pod(out, static_cast<int32_t>(model.params.vector_size));
  write_pod(out, static_cast<int32_t>(model.params.context_window));
  write_pod(out, static_cast<int32_t>(model.params.negative_samples));
  write_pod(out, static_cast<int32_t>(model.params.epochs));
  write_pod(out, model.params.initial_learning_rate);
  write_pod(out, model.params.subsample_threshold);
  write_pod(out, model.params.rng_seed);
  write_pod(out, static_cast<uint64_t>(model.vocab_size()));
  for (size_t i = 0; i < model.vocab_size(); ++i) {
    write_pod(out, static_cast<uint32_t>(model.terms[i].size()));
    out.write(model.terms[i].data(),
              static_cast<std::streamsize>(model.terms[i].size()));
    write_pod(out, model.counts[i]);
  }
  auto write_matrix = [&](const std::vector<float>& m) {
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(m.size() * sizeof(float)));
  };
  write_matrix(model.input_vectors);
  write_matrix(model.output_vectors);
  if (!out) throw Error("write failed: " + path);
}

EmbeddingModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw CorruptModel("bad magic in model file");
  uint32_t version = read_pod<uint32_t>(in);
  if (version != kModelVersion)
    throw VersionMismatch("unsupported model version " +
                          std::to_string(version));
  EmbeddingModel model;
  model.params.min_term_count = read_pod<uint64_t>(in);
  model.params.vector_size = read_pod<int32_t>(in);
  model.params.context_window = read_pod<int32_t>(in);
  model.params.negative_samples = read_pod<int32_t>(in);
  model.params.epochs = read_pod<int32_t>(in);
  model.params.initial_learning_rate = read_pod<double>(in);
  model.params.subsample_threshold = read_pod<double>(in);
  model.params.rng_seed = read_pod<uint64_t>(in);
  uint64_t vocab = read_pod<uint64_t>(in);
  if (model.params.vector_size < 1 || vocab < 1)
    throw CorruptModel("implausible model header");
  for (uint64_t i = 0; i < vocab; ++i) {
    uint32_t len = read_pod<uint32_t>(in);
    std::string term(len, '\0');
    in.read(term.data(), len);
    if (!in) throw CorruptModel("truncated vocabulary block");
    uint64_t count = read_pod<uint64_t>(in);
    model.vocabulary.emplace(term, static_cast<uint32_t>(i));
    model.terms.push_back(std::move(term));
    model.counts.push_back(count);
  }
  size_t cells = vocab * static_cast<size_t>(model.params.vector_size);
  auto read_matrix = [&](std::vector<float>& m) {
    m.resize(cells);
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(cells * sizeof(float)));
    if (!in) throw CorruptModel("truncated matrix block");
  };
  read_matrix(model.input_vectors);
  read_matrix(model.output_vectors);
  return model;
}

void export_text(const EmbeddingModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write text export: " + path);
  out << model.vocab_size() << ' ' << model.params.vector_size << '\n';
  for (uint32_t i = 0; i < model.vocab_size(); ++i) {
    out << model.terms[i];
    for (float v : model.input_vector(i)) out << ' ' << v;
    out << '\n';
  }
}

}  // namespace opilex
