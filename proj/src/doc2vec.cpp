#include "mss/doc2vec.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace mss {
namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

void init_vector(std::span<float> v, Rng& rng) {
  for (float& x : v) x = static_cast<float>((rng.uniform() - 0.5) / static_cast<double>(v.size()));
}

std::uint32_t draw_noise(const std::vector<double>& cdf, Rng& rng) {
  const double u = rng.uniform() * cdf.back();
  return static_cast<std::uint32_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
}

/// One pass of negative-sampling updates of `doc` over `tokens`. Output
/// weights are written through `trainable` unless it is null (inference).
void train_document(std::span<float> doc, const std::vector<std::uint32_t>& tokens, const float* output,
                    float* trainable, const std::vector<double>& keep, const std::vector<double>& cdf,
                    std::uint32_t negatives, Rng& rng, double lr, std::uint64_t total, std::uint64_t& done) {
  const std::size_t dim = doc.size();
  std::vector<float> grad(dim);
  for (std::uint32_t w : tokens) {
    const double alpha = std::max(lr * (1.0 - static_cast<double>(done) / static_cast<double>(total + 1)), lr * 1e-4);
    ++done;
    if (keep[w] < 1.0 && rng.uniform() > keep[w]) continue;
    std::fill(grad.begin(), grad.end(), 0.0f);
    for (std::uint32_t s = 0; s <= negatives; ++s) {
      std::uint32_t target = w;
      float label = 1.0f;
      if (s > 0) {
        target = draw_noise(cdf, rng);
        if (target == w) continue;
        label = 0.0f;
      }
      const std::size_t row = static_cast<std::size_t>(target) * dim;
      const float* out = output + row;
      float f = 0.0f;
      for (std::size_t c = 0; c < dim; ++c) f += doc[c] * out[c];
      const float g = (label - 1.0f / (1.0f + std::exp(-f))) * static_cast<float>(alpha);
      for (std::size_t c = 0; c < dim; ++c) grad[c] += g * out[c];
      if (trainable)
        for (std::size_t c = 0; c < dim; ++c) trainable[row + c] += g * doc[c];
    }
    for (std::size_t c = 0; c < dim; ++c) doc[c] += grad[c];
  }
}

}  // namespace

DocEmbeddingModel DocEmbeddingModel::train(std::span<const WlDocument> corpus, const Doc2VecParams& params) {
  if (corpus.empty()) throw std::invalid_argument("doc_embed_train: empty corpus");
  if (params.dim < 1 || params.epochs < 1) throw std::invalid_argument("doc_embed_train: dim and epochs must be >= 1");

  DocEmbeddingModel m;
  m.params_ = params;

  std::map<std::string, std::uint64_t> counts;  // ordered: vocabulary ids are stable
  for (const auto& doc : corpus)
    for (const auto& t : doc.tokens) ++counts[t];
  std::vector<std::uint64_t> freq;
  for (const auto& [token, c] : counts) {
    if (c < params.min_count) continue;
    m.vocab_.emplace(token, static_cast<std::uint32_t>(freq.size()));
    freq.push_back(c);
  }
  const std::size_t dim = params.dim;
  m.doc_vectors_.assign(corpus.size() * dim, 0.0f);
  if (freq.empty()) return m;  // nothing to learn from; vectors stay zero

  std::uint64_t total_tokens = 0;
  for (auto c : freq) total_tokens += c;
  m.keep_probability_.resize(freq.size(), 1.0);
  if (params.sample > 0.0) {
    const double threshold = params.sample * static_cast<double>(total_tokens);
    for (std::size_t i = 0; i < freq.size(); ++i) {
      const double f = static_cast<double>(freq[i]);
      m.keep_probability_[i] = std::min(1.0, (std::sqrt(f / threshold) + 1.0) * threshold / f);
    }
  }
  m.noise_cdf_.resize(freq.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < freq.size(); ++i) m.noise_cdf_[i] = acc += std::pow(static_cast<double>(freq[i]), 0.75);
  m.output_.assign(freq.size() * dim, 0.0f);

  Rng rng(mix_seed(params.seed, 0));
  for (std::size_t d = 0; d < corpus.size(); ++d) init_vector(std::span(m.doc_vectors_).subspan(d * dim, dim), rng);

  std::vector<std::vector<std::uint32_t>> encoded;
  std::uint64_t per_epoch = 0;
  for (const auto& doc : corpus) {
    encoded.push_back(m.encode(doc));
    per_epoch += encoded.back().size();
  }
  const std::uint64_t total = per_epoch * params.epochs;
  std::uint64_t done = 0;
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::uint32_t epoch = 0; epoch < params.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    for (std::size_t d : order)
      train_document(std::span(m.doc_vectors_).subspan(d * dim, dim), encoded[d], m.output_.data(),
                     m.output_.data(), m.keep_probability_, m.noise_cdf_, params.negatives, rng, params.learning_rate,
                     total, done);
  }
  return m;
}

std::vector<std::uint32_t> DocEmbeddingModel::encode(const WlDocument& doc) const {
  std::vector<std::uint32_t> ids;
  ids.reserve(doc.tokens.size());
  for (const auto& t : doc.tokens) {
    auto it = vocab_.find(t);
    if (it != vocab_.end()) ids.push_back(it->second);
  }
  return ids;
}

std::vector<float> DocEmbeddingModel::vector(std::size_t doc) const {
  const auto first = doc_vectors_.begin() + static_cast<std::ptrdiff_t>(doc * dim());
  return {first, first + dim()};
}

std::vector<float> DocEmbeddingModel::infer(const WlDocument& doc) const {
  std::vector<float> v(dim(), 0.0f);
  const auto ids = encode(doc);
  if (ids.empty()) return v;
  std::uint64_t salt = 1469598103934665603ull;
  for (auto id : ids) salt = (salt ^ id) * 1099511628211ull;
  Rng rng(mix_seed(params_.seed, salt));
  init_vector(v, rng);
  const std::uint64_t total = ids.size() * std::uint64_t{params_.epochs};
  std::uint64_t done = 0;
  for (std::uint32_t epoch = 0; epoch < params_.epochs; ++epoch)
    train_document(v, ids, output_.data(), nullptr, keep_probability_, noise_cdf_, params_.negatives, rng,
                   params_.learning_rate, total, done);
  return v;
}

std::vector<std::vector<float>> doc_embed_train(std::span<const WlDocument> corpus, const Doc2VecParams& params) {
  const auto model = DocEmbeddingModel::train(corpus, params);
  std::vector<std::vector<float>> out;
  out.reserve(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) out.push_back(model.vector(d));
  return out;
}

}  // namespace mss
