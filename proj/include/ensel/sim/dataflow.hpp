#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ensel/lexer.hpp"

namespace ensel::sim {

// (defined identifier, used identifier)
using DataflowEdge = std::pair<std::string, std::string>;

// Multiset of edges, kept sorted so that intersections are linear.
struct DataflowSet {
  std::vector<DataflowEdge> edges;

  static DataflowSet from(std::vector<DataflowEdge> edges);
  std::size_t size() const { return edges.size(); }
};

class DataflowProvider {
 public:
  virtual ~DataflowProvider() = default;
  virtual std::optional<DataflowSet> extract(std::string_view code) const = 0;
};

// Assignment-chain approximation of data flow: for every assignment
// `x op= expr` it records (x, y) for each identifier y in expr. The target is
// the last identifier at the assignment's bracket depth before the operator
// (so `a[i] = v` defines a, `this.f = v` defines f).
class AssignmentDataflowProvider final : public DataflowProvider {
 public:
  explicit AssignmentDataflowProvider(Language lang) : lang_(lang) {}
  std::optional<DataflowSet> extract(std::string_view code) const override;

 private:
  Language lang_;
};

// |a ∩ b| / |a| as multisets. Both empty -> 1, only a empty -> 0.
double dataflow_match(const DataflowSet& a, const DataflowSet& b);

}  // namespace ensel::sim
