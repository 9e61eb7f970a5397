#include "ensel/sim/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ensel/error.hpp"

namespace ensel::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double norm(const Vec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void normalize(Vec& v) {
  const double n = norm(v);
  if (n == 0.0) throw DataError("cannot normalize a zero embedding vector");
  for (double& x : v) x /= n;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

void EmbeddingSeq::validate() const {
  if (vectors.empty()) return;
  const std::size_t dim = vectors.front().size();
  for (const auto& v : vectors) {
    if (v.size() != dim) throw DataError("embedding vectors differ in dimension");
    if (std::abs(norm(v) - 1.0) > 1e-9) throw DataError("embedding vector is not unit-norm");
  }
}

EmbeddingSeq Embedder::embed_all(const std::vector<std::string>& tokens) const {
  EmbeddingSeq seq;
  seq.vectors.reserve(tokens.size());
  for (const auto& t : tokens) seq.vectors.push_back(embed(t));
  return seq;
}

HashingEmbedder::HashingEmbedder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim == 0) throw UsageError("embedding dimension must be positive");
}

Vec HashingEmbedder::embed(const std::string& token) const {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed_;
  for (unsigned char c : token) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  Vec v(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    const std::uint64_t r = splitmix64(h + 0x632be59bd9b4e019ULL * (i + 1));
    v[i] = static_cast<double>(r >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  }
  if (norm(v) == 0.0) v[0] = 1.0;
  normalize(v);
  return v;
}

std::string percent_encode_token(const std::string& token) {
  std::string out;
  for (unsigned char c : token) {
    if (c == '%' || std::isspace(c) || c < 0x20) {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", c);
      out += buf;
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

std::string percent_decode_token(const std::string& token) {
  std::string out;
  for (std::size_t i = 0; i < token.size(); ++i) {
    if (token[i] == '%' && i + 2 < token.size() && hex_value(token[i + 1]) >= 0 &&
        hex_value(token[i + 2]) >= 0) {
      out += static_cast<char>(hex_value(token[i + 1]) * 16 + hex_value(token[i + 2]));
      i += 2;
    } else {
      out += token[i];
    }
  }
  return out;
}

void EmbeddingTable::add(const std::string& token, Vec v) {
  if (v.size() != dim_) throw DataError("embedding for '" + token + "' has the wrong dimension");
  normalize(v);
  table_[token] = std::move(v);
}

Vec EmbeddingTable::embed(const std::string& token) const {
  if (auto it = table_.find(token); it != table_.end()) return it->second;
  return fallback_.embed(token);
}

EmbeddingTable EmbeddingTable::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("embeddings: missing header");
  std::istringstream hs(line);
  long long dim = 0;
  long long count = 0;
  if (!(hs >> dim >> count) || dim <= 0 || count < 0) {
    throw DataError("embeddings: header must be '<dimension> <count>'");
  }
  EmbeddingTable table(static_cast<std::size_t>(dim));
  for (long long row = 0; row < count; ++row) {
    if (!std::getline(in, line)) {
      throw DataError("embeddings: expected " + std::to_string(count) + " rows, got " + std::to_string(row));
    }
    std::istringstream rs(line);
    std::string token;
    rs >> token;
    Vec v;
    double x;
    while (rs >> x) v.push_back(x);
    if (!rs.eof() || v.size() != static_cast<std::size_t>(dim)) {
      throw DataError("embeddings: row " + std::to_string(row + 2) + " must hold a token and " +
                      std::to_string(dim) + " numbers");
    }
    try {
      table.add(percent_decode_token(token), std::move(v));
    } catch (const DataError& e) {
      throw DataError("embeddings: row " + std::to_string(row + 2) + ": " + e.what());
    }
  }
  return table;
}

EmbeddingTable EmbeddingTable::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embeddings file " + path.string());
  return read(in);
}

void EmbeddingTable::write(std::ostream& out) const {
  std::vector<const std::string*> tokens;
  for (const auto& [t, _] : table_) tokens.push_back(&t);
  std::sort(tokens.begin(), tokens.end(), [](auto* a, auto* b) { return *a < *b; });
  out << dim_ << ' ' << table_.size() << '\n';
  char buf[32];
  for (const auto* t : tokens) {
    out << percent_encode_token(*t);
    for (double x : table_.at(*t)) {
      std::snprintf(buf, sizeof buf, " %.17g", x);
      out << buf;
    }
    out << '\n';
  }
}

namespace {

template <typename Cos>
double f3_core(std::size_t na, std::size_t nb, const Cos& cos) {
  std::vector<double> best_a(na, 0.0);
  std::vector<double> best_b(nb, 0.0);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      const double c = cos(i, j);
      best_a[i] = std::max(best_a[i], c);
      best_b[j] = std::max(best_b[j], c);
    }
  }
  double p = 0.0;
  for (double x : best_a) p += x;
  p /= static_cast<double>(na);
  double r = 0.0;
  for (double x : best_b) r += x;
  r /= static_cast<double>(nb);
  constexpr double b2 = kF3Beta * kF3Beta;
  const double den = b2 * p + r;
  if (den <= 0.0) return 0.0;
  return std::min(1.0, (1.0 + b2) * p * r / den);
}

}  // namespace

double bertscore_f3(const EmbeddingSeq& a, const EmbeddingSeq& b) {
  if (a.empty() || b.empty()) throw DataError("empty embedding sequence");
  return f3_core(a.size(), b.size(), [&](std::size_t i, std::size_t j) {
    return std::clamp(dot(a.vectors[i], b.vectors[j]), 0.0, 1.0);
  });
}

std::vector<std::size_t> TokenCosines::intern(const std::vector<std::string>& tokens) {
  std::vector<std::size_t> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    auto [it, fresh] = ids_.try_emplace(t, tokens_.size());
    if (fresh) tokens_.push_back(t);
    out.push_back(it->second);
  }
  return out;
}

void TokenCosines::finalize(const Embedder& embedder) {
  const std::size_t n = tokens_.size();
  std::vector<Vec> vecs;
  vecs.reserve(n);
  for (const auto& t : tokens_) vecs.push_back(embedder.embed(t));
  table_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) table_[i * n + j] = std::clamp(dot(vecs[i], vecs[j]), 0.0, 1.0);
  }
}

double bertscore_f3(const TokenCosines& cos, const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (a.empty() || b.empty()) throw DataError("empty embedding sequence");
  return f3_core(a.size(), b.size(), [&](std::size_t i, std::size_t j) { return cos.at(a[i], b[j]); });
}

}  // namespace ensel::sim
