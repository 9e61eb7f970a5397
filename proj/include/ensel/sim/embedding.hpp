#pragma once

// Token embeddings and the BERTScore-style F3 similarity.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace ensel::sim {

using Vec = std::vector<double>;

// One unit-norm vector per token, all of the same dimension.
struct EmbeddingSeq {
  std::vector<Vec> vectors;

  bool empty() const { return vectors.empty(); }
  std::size_t size() const { return vectors.size(); }
  // Throws DataError unless every vector has norm 1 within 1e-9 and all
  // share one dimension.
  void validate() const;
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::size_t dimension() const = 0;
  virtual Vec embed(const std::string& token) const = 0;

  EmbeddingSeq embed_all(const std::vector<std::string>& tokens) const;
};

// Deterministic pseudo-random unit vector per token, seeded by the token's
// bytes. Equal tokens map to equal vectors; unrelated tokens are nearly
// orthogonal for large dimensions.
class HashingEmbedder final : public Embedder {
 public:
  explicit HashingEmbedder(std::size_t dim = 64, std::uint64_t seed = 0x5eed);
  std::size_t dimension() const override { return dim_; }
  Vec embed(const std::string& token) const override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

// Token table read from a sidecar text file:
//
//   <dimension> <count>
//   <token> <v1> ... <vd>      (count rows)
//
// Tokens are percent-encoded (%20 space, %09 tab, %0A newline, %25 percent)
// so each row splits on whitespace. Rows are normalized to unit length on
// load. Negative cosines between rows are clamped to 0 by bertscore_f3
// rather than rescaled. Tokens missing from the table fall back to a
// HashingEmbedder of the same dimension.
class EmbeddingTable final : public Embedder {
 public:
  static EmbeddingTable read(std::istream& in);
  static EmbeddingTable read(const std::filesystem::path& path);
  void write(std::ostream& out) const;

  void add(const std::string& token, Vec v);
  std::size_t dimension() const override { return dim_; }
  std::size_t count() const { return table_.size(); }
  Vec embed(const std::string& token) const override;

  explicit EmbeddingTable(std::size_t dim) : dim_(dim), fallback_(dim) {}

 private:
  std::size_t dim_;
  std::unordered_map<std::string, Vec> table_;
  HashingEmbedder fallback_;
};

std::string percent_encode_token(const std::string& token);
std::string percent_decode_token(const std::string& token);

inline constexpr double kF3Beta = 3.0;

// P = mean over a of the best clamped cosine into b, R the same from b into
// a, result = (1+β²)PR / (β²P + R) with β = 3; 0 when P = R = 0.
// Throws DataError "empty embedding sequence" if either side is empty.
double bertscore_f3(const EmbeddingSeq& a, const EmbeddingSeq& b);

// Clamped cosines between the distinct tokens of a batch of sequences, so
// each pair of distinct tokens is embedded and compared once.
class TokenCosines {
 public:
  // Dense ids in order of first appearance.
  std::vector<std::size_t> intern(const std::vector<std::string>& tokens);
  // Embeds every interned token and fills the table. Call after the last
  // intern and before at().
  void finalize(const Embedder& embedder);
  std::size_t size() const { return tokens_.size(); }
  double at(std::size_t i, std::size_t j) const { return table_[i * tokens_.size() + j]; }

 private:
  std::unordered_map<std::string, std::size_t> ids_;
  std::vector<std::string> tokens_;
  std::vector<double> table_;
};

// bertscore_f3 over interned sequences; equal to the EmbeddingSeq form for
// the same embedder.
double bertscore_f3(const TokenCosines& cos, const std::vector<std::size_t>& a,
                    const std::vector<std::size_t>& b);

}  // namespace ensel::sim
