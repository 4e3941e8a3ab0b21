#pragma once

#include "netres/types.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

namespace netres {

// Weighted directed graph: node count plus a directed edge list with strictly
// positive weights, no self-loops, at most one edge per ordered pair.
template <typename Scalar = double>
struct WeightedDigraph {
  struct Edge {
    Index from = 0;
    Index to = 0;
    Scalar weight = Scalar(0);
  };

  Index node_count = 0;
  std::vector<Edge> edges;

  Index edge_count() const { return static_cast<Index>(edges.size()); }
};

using WeightedDigraphd = WeightedDigraph<double>;

// Throws std::invalid_argument on any structural violation.
template <typename Scalar>
void validate_graph(const WeightedDigraph<Scalar>& g) {
  if (g.node_count <= 0) throw std::invalid_argument("graph must have at least one node");
  std::set<std::pair<Index, Index>> seen;
  for (const auto& e : g.edges) {
    if (e.from < 0 || e.from >= g.node_count || e.to < 0 || e.to >= g.node_count)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.from == e.to) throw std::invalid_argument("self-loop");
    if (!(e.weight > Scalar(0))) throw std::invalid_argument("non-positive edge weight");
    if (!seen.insert({e.from, e.to}).second) throw std::invalid_argument("duplicate edge");
  }
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const char* ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace detail

// Edge-list document: first non-comment line is the node count n, each further
// non-comment line is "i j w" (0-based endpoints, decimal weight). '#' starts
// a comment. Duplicate ordered pairs, self-loops and non-positive weights are
// rejected with the offending line number.
template <typename Scalar = double>
WeightedDigraph<Scalar> parse_graph(std::string_view text) {
  WeightedDigraph<Scalar> g;
  bool have_n = false;
  std::set<std::pair<Index, Index>> seen;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    auto toks = detail::split_tokens(line);
    if (!have_n) {
      long long n = 0;
      if (toks.size() != 1 || !detail::parse_number(toks[0], n) || n <= 0)
        throw ParseError("expected a positive node count", line_no);
      g.node_count = static_cast<Index>(n);
      have_n = true;
      continue;
    }

    if (toks.size() != 3) throw ParseError("expected 'i j w'", line_no);
    long long i = 0, j = 0;
    double w = 0;
    if (!detail::parse_number(toks[0], i) || !detail::parse_number(toks[1], j))
      throw ParseError("malformed node index", line_no);
    if (!detail::parse_number(toks[2], w)) throw ParseError("malformed weight", line_no);
    if (i < 0 || i >= g.node_count || j < 0 || j >= g.node_count)
      throw ParseError("node index out of range", line_no);
    if (i == j) throw ParseError("self-loop", line_no);
    if (!(w > 0)) throw ParseError("non-positive weight", line_no);
    if (!seen.insert({static_cast<Index>(i), static_cast<Index>(j)}).second)
      throw ParseError("duplicate edge", line_no);
    g.edges.push_back({static_cast<Index>(i), static_cast<Index>(j), static_cast<Scalar>(w)});
  }

  if (!have_n) throw ParseError("empty document", line_no == 0 ? 1 : line_no);
  return g;
}

// Canonical edge-list text: node count, then edges sorted by (from, to) with
// shortest round-trip weight formatting. parse_graph(format_graph(g)) == g.
template <typename Scalar>
std::string format_graph(const WeightedDigraph<Scalar>& g) {
  auto edges = g.edges;
  std::sort(edges.begin(), edges.end(),
            [](const auto& a, const auto& b) { return std::pair(a.from, a.to) < std::pair(b.from, b.to); });
  std::string out = std::to_string(g.node_count) + "\n";
  char buf[64];
  for (const auto& e : edges) {
    out += std::to_string(e.from);
    out += ' ';
    out += std::to_string(e.to);
    out += ' ';
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), static_cast<double>(e.weight));
    out.append(buf, ptr);
    out += '\n';
  }
  return out;
}

template <typename Scalar>
MatrixX<Scalar> adjacency_matrix(const WeightedDigraph<Scalar>& g) {
  MatrixX<Scalar> a = MatrixX<Scalar>::Zero(g.node_count, g.node_count);
  for (const auto& e : g.edges) a(e.from, e.to) = e.weight;
  return a;
}

template <typename Scalar>
VectorX<Scalar> out_degrees(const WeightedDigraph<Scalar>& g) {
  VectorX<Scalar> d = VectorX<Scalar>::Zero(g.node_count);
  for (const auto& e : g.edges) d(e.from) += e.weight;
  return d;
}

// L = D - A. Every row sums to zero up to roundoff.
template <typename Scalar>
MatrixX<Scalar> laplacian_matrix(const WeightedDigraph<Scalar>& g) {
  MatrixX<Scalar> l = -adjacency_matrix(g);
  for (const auto& e : g.edges) l(e.from, e.from) += e.weight;
  return l;
}

namespace detail {

// One BFS sweep over adjacency lists; returns number of reached nodes.
inline Index bfs_reach(const std::vector<std::vector<Index>>& adj, Index start) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<Index> queue{start};
  seen[static_cast<std::size_t>(start)] = 1;
  Index count = 1;
  while (!queue.empty()) {
    Index u = queue.back();
    queue.pop_back();
    for (Index v : adj[static_cast<std::size_t>(u)]) {
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++count;
        queue.push_back(v);
      }
    }
  }
  return count;
}

}  // namespace detail

template <typename Scalar>
bool is_strongly_connected(const WeightedDigraph<Scalar>& g) {
  if (g.node_count <= 0) return false;
  if (g.node_count == 1) return true;
  std::vector<std::vector<Index>> fwd(g.node_count), rev(g.node_count);
  for (const auto& e : g.edges) {
    fwd[static_cast<std::size_t>(e.from)].push_back(e.to);
    rev[static_cast<std::size_t>(e.to)].push_back(e.from);
  }
  return detail::bfs_reach(fwd, 0) == g.node_count && detail::bfs_reach(rev, 0) == g.node_count;
}

}  // namespace netres
