#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "opilex/textnorm.hpp"

namespace opilex {

struct EmbeddingParams {
  uint64_t min_term_count = 5;
  int vector_size = 256;
  int context_window = 5;
  int negative_samples = 10;
  int epochs = 200;
  double initial_learning_rate = 0.025;
  double subsample_threshold = 1e-3;
  uint64_t rng_seed = 1;
};

struct EmbeddingModel {
  std::unordered_map<std::string, uint32_t> vocabulary;  // term -> dense index
  std::vector<std::string> terms;                        // index -> term
  std::vector<uint64_t> counts;                          // index -> corpus count
  std::vector<float> input_vectors;                      // |V| x d, row-major
  std::vector<float> output_vectors;                     // |V| x d, row-major
  EmbeddingParams params;
  std::vector<double> epoch_mean_loss;  // one entry per trained epoch

  size_t vocab_size() const { return terms.size(); }
  std::span<const float> input_vector(uint32_t idx) const {
    return {input_vectors.data() + size_t(idx) * params.vector_size,
            size_t(params.vector_size)};
  }
};

// SGNS objective pieces, exposed so the gradient can be checked against
// finite differences of the loss. One training event: a center vector, the
// positive context output vector, and `neg` noise output vectors.
// loss = -log sigmoid(u_ctx . v_c) - sum_i log sigmoid(-u_neg_i . v_c)
namespace sgns {

double pair_loss(std::span<const double> center, std::span<const double> ctx,
                 std::span<const std::vector<double>> negatives);

// Gradients of pair_loss; each output span must have center.size() slots.
void pair_gradients(std::span<const double> center, std::span<const double> ctx,
                    std::span<const std::vector<double>> negatives,
                    std::span<double> grad_center, std::span<double> grad_ctx,
                    std::span<std::vector<double>> grad_negatives);

}  // namespace sgns

// Trains on the sentence stream; windows never cross sentence boundaries.
// threads == 1 is bit-reproducible for a fixed rng_seed; more threads run
// lock-free hogwild updates. Throws EmptyCorpus / DegenerateVocabulary.
EmbeddingModel train_embeddings(const std::vector<NormalizedPost>& corpus,
                                const EmbeddingParams& params,
                                unsigned threads = 1);

double cosine(const EmbeddingModel& model, std::string_view w1,
              std::string_view w2);

// Top-n by cosine over the whole vocabulary, excluding w. Descending score,
// ties broken lexicographically.
std::vector<std::pair<std::string, double>> neighbours(
    const EmbeddingModel& model, std::string_view w, size_t n = 20);

// Binary model file: magic, version, params, vocab, float32 LE matrices.
// save -> load -> save is byte-identical.
void save_model(const EmbeddingModel& model, const std::string& path);
EmbeddingModel load_model(const std::string& path);

// Plain-text "term v1 v2 ..." export of the input vectors.
void export_text(const EmbeddingModel& model, const std::string& path);

}  // namespace opilex
