#ifndef HNB_HYPERGRAPH_HPP
#define HNB_HYPERGRAPH_HPP

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hnb/sparse.hpp"

namespace hnb {

using Node = std::size_t;
using LabelVector = std::vector<int>;

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EdgeId {
  int size;
  std::size_t index;  // position within the size-k edge list
};

struct PointedEdge {
  Node point;
  EdgeId edge;
};

// Immutable hypergraph: node indices 0..n-1, edges grouped by size, each edge
// stored as a sorted list of distinct nodes. Parallel edges are kept as
// distinct instances.
class Hypergraph {
 public:
  explicit Hypergraph(std::size_t n, std::vector<std::vector<Node>> edges = {}) : n_(n) {
    for (auto& e : edges) {
      std::sort(e.begin(), e.end());
      if (e.size() < 2) throw DataError("edge with fewer than 2 nodes");
      for (std::size_t i = 0; i + 1 < e.size(); ++i)
        if (e[i] == e[i + 1]) throw DataError("edge with repeated node id");
      if (e.back() >= n_) throw DataError("node id out of range");
      edges_by_size_[static_cast<int>(e.size())].push_back(std::move(e));
    }
    std::size_t offset = 0;
    for (const auto& [k, list] : edges_by_size_) {
      sizes_.push_back(k);
      pointed_offset_[k] = offset;
      offset += static_cast<std::size_t>(k) * list.size();
    }
    m_check_ = offset;
  }

  std::size_t n() const { return n_; }
  const std::vector<int>& sizes() const { return sizes_; }  // K, ascending
  std::size_t kappa() const { return sizes_.size(); }
  int kmax() const { return sizes_.empty() ? 0 : sizes_.back(); }

  std::size_t edge_count(int k) const {
    auto it = edges_by_size_.find(k);
    return it == edges_by_size_.end() ? 0 : it->second.size();
  }

  std::size_t edge_count() const {
    std::size_t m = 0;
    for (const auto& [k, list] : edges_by_size_) m += list.size();
    return m;
  }

  const std::vector<std::vector<Node>>& edges(int k) const {
    static const std::vector<std::vector<Node>> empty;
    auto it = edges_by_size_.find(k);
    return it == edges_by_size_.end() ? empty : it->second;
  }

  const std::vector<Node>& edge(EdgeId id) const { return edges(id.size).at(id.index); }

  // m-caron = sum_k k m_k, the pointed-edge count and the dimension of B
  std::size_t pointed_count() const { return m_check_; }

  std::size_t pointed_count(int k) const { return static_cast<std::size_t>(k) * edge_count(k); }

  // canonical index of a pointed edge: ascending k, then edge index, then
  // position of the point within the sorted edge
  std::size_t pointed_index(const PointedEdge& pe) const {
    const auto& e = edge(pe.edge);
    auto it = std::lower_bound(e.begin(), e.end(), pe.point);
    if (it == e.end() || *it != pe.point) throw DataError("point not in edge");
    return pointed_offset_.at(pe.edge.size) +
           static_cast<std::size_t>(pe.edge.size) * pe.edge.index +
           static_cast<std::size_t>(it - e.begin());
  }

  std::size_t pointed_offset(int k) const {
    auto it = pointed_offset_.find(k);
    return it == pointed_offset_.end() ? m_check_ : it->second;
  }

 private:
  std::size_t n_;
  std::map<int, std::vector<std::vector<Node>>> edges_by_size_;
  std::vector<int> sizes_;
  std::map<int, std::size_t> pointed_offset_;
  std::size_t m_check_ = 0;
};

inline std::vector<PointedEdge> pointed_edges(const Hypergraph& H) {
  std::vector<PointedEdge> out;
  out.reserve(H.pointed_count());
  for (int k : H.sizes()) {
    const auto& list = H.edges(k);
    for (std::size_t e = 0; e < list.size(); ++e)
      for (Node i : list[e]) out.push_back({i, {k, e}});
  }
  return out;
}

inline SparseLinearOperator degree_operator(const Hypergraph& H, int k) {
  std::vector<Triplet> ts;
  for (const auto& e : H.edges(k))
    for (Node i : e) ts.push_back({static_cast<Index>(i), static_cast<Index>(i), 1.0});
  return SparseLinearOperator(static_cast<Index>(H.n()), static_cast<Index>(H.n()),
                              std::move(ts), OpTag::Dk);
}

// zero diagonal; entry (i,j) counts size-k edges containing both, with multiplicity
inline SparseLinearOperator adjacency_operator(const Hypergraph& H, int k) {
  std::vector<Triplet> ts;
  for (const auto& e : H.edges(k))
    for (std::size_t a = 0; a < e.size(); ++a)
      for (std::size_t b = 0; b < e.size(); ++b)
        if (a != b) ts.push_back({static_cast<Index>(e[a]), static_cast<Index>(e[b]), 1.0});
  return SparseLinearOperator(static_cast<Index>(H.n()), static_cast<Index>(H.n()),
                              std::move(ts), OpTag::Ak);
}

inline Hypergraph clique_projection(const Hypergraph& H) {
  std::vector<std::vector<Node>> pairs;
  for (int k : H.sizes())
    for (const auto& e : H.edges(k))
      for (std::size_t a = 0; a < e.size(); ++a)
        for (std::size_t b = a + 1; b < e.size(); ++b) pairs.push_back({e[a], e[b]});
  return Hypergraph(H.n(), std::move(pairs));
}

// hyperedge-list text format: one edge per line, 1-based node ids, whitespace
// or comma separated. Internally everything is 0-based.
inline Hypergraph load_hypergraph(std::istream& is, std::optional<std::size_t> n_override = {},
                                  bool dedup = false) {
  std::vector<std::vector<Node>> edges;
  std::size_t max_id = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ls(line);
    std::vector<Node> e;
    std::string tok;
    while (ls >> tok) {
      std::size_t pos = 0;
      unsigned long long v = 0;
      try {
        v = std::stoull(tok, &pos);
      } catch (const std::exception&) {
        throw DataError("line " + std::to_string(lineno) + ": malformed token '" + tok + "'");
      }
      if (pos != tok.size() || v == 0)
        throw DataError("line " + std::to_string(lineno) + ": malformed token '" + tok + "'");
      e.push_back(static_cast<Node>(v - 1));
    }
    if (e.empty()) continue;
    std::sort(e.begin(), e.end());
    for (std::size_t i = 0; i + 1 < e.size(); ++i)
      if (e[i] == e[i + 1])
        throw DataError("line " + std::to_string(lineno) + ": repeated node id");
    if (e.size() < 2) throw DataError("line " + std::to_string(lineno) + ": fewer than 2 ids");
    max_id = std::max(max_id, static_cast<std::size_t>(e.back()) + 1);
    edges.push_back(std::move(e));
  }
  if (edges.empty()) throw DataError("empty hypergraph file");
  if (dedup) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }
  std::size_t n = n_override.value_or(max_id);
  if (n < max_id) throw DataError("node id exceeds declared node count");
  return Hypergraph(n, std::move(edges));
}

inline Hypergraph load_hypergraph_file(const std::string& path,
                                       std::optional<std::size_t> n_override = {},
                                       bool dedup = false) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open file: " + path);
  return load_hypergraph(f, n_override, dedup);
}

inline void save_hypergraph(const Hypergraph& H, std::ostream& os) {
  for (int k : H.sizes())
    for (const auto& e : H.edges(k)) {
      for (std::size_t i = 0; i < e.size(); ++i) os << (i ? " " : "") << e[i] + 1;
      os << '\n';
    }
}

inline LabelVector load_labels(const std::string& path, std::size_t n_expected, int ell) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open file: " + path);
  LabelVector z;
  std::string tok;
  while (f >> tok) {
    try {
      std::size_t pos = 0;
      int v = std::stoi(tok, &pos);
      if (pos != tok.size()) throw DataError("");
      z.push_back(v);
    } catch (const std::exception&) {
      throw DataError("malformed label '" + tok + "' in " + path);
    }
  }
  if (n_expected != 0 && z.size() != n_expected)
    throw DataError("label file length " + std::to_string(z.size()) + " != node count " +
                    std::to_string(n_expected));
  for (int v : z)
    if (v < 0 || (ell > 0 && v >= ell)) throw DataError("label out of range in " + path);
  return z;
}

inline void save_labels(const LabelVector& z, std::ostream& os) {
  for (int v : z) os << v << '\n';
}

}  // namespace hnb

#endif
