#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace mss {

/// A bag of tokens describing one graph.
struct WlDocument {
  std::vector<std::string> tokens;
};

struct Doc2VecParams {
  std::uint32_t dim = 128;
  std::uint32_t epochs = 250;
  double learning_rate = 0.025;
  std::uint32_t negatives = 5;
  std::uint64_t seed = 42;
  /// Tokens seen fewer times in the corpus are dropped from the vocabulary.
  std::uint32_t min_count = 5;
  /// Frequent-token down-sampling threshold; 0 disables it.
  double sample = 1e-4;
};

/// Distributed bag-of-words document embedding trained with negative
/// sampling. Every document vector is pushed to score its own tokens above
/// randomly drawn tokens (unigram^0.75 noise) under a logistic loss, with a
/// learning rate decaying linearly to zero. Single-threaded, so identical
/// seed and corpus give bit-identical vectors.
class DocEmbeddingModel {
 public:
  static DocEmbeddingModel train(std::span<const WlDocument> corpus, const Doc2VecParams& params);

  std::size_t document_count() const noexcept { return doc_vectors_.size() / dim(); }
  std::uint32_t dim() const noexcept { return params_.dim; }
  std::vector<float> vector(std::size_t doc) const;
  std::size_t vocabulary_size() const noexcept { return vocab_.size(); }

  /// Embeds an unseen document against the frozen token weights.
  std::vector<float> infer(const WlDocument& doc) const;

 private:
  std::vector<std::uint32_t> encode(const WlDocument& doc) const;

  Doc2VecParams params_;
  std::unordered_map<std::string, std::uint32_t> vocab_;
  std::vector<double> keep_probability_;
  std::vector<double> noise_cdf_;
  std::vector<float> output_;       // vocab x dim
  std::vector<float> doc_vectors_;  // docs x dim
};

/// Trains and returns one vector per corpus document.
std::vector<std::vector<float>> doc_embed_train(std::span<const WlDocument> corpus, const Doc2VecParams& params);

}  // namespace mss
