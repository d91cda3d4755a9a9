#include "grig/graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <string>

namespace grig {

bool rect_overlap(const GranularRect& a, const GranularRect& b) {
  return std::abs(a.cx - b.cx) <= a.rx + b.rx && std::abs(a.cy - b.cy) <= a.ry + b.ry;
}

namespace {

// Treap of closed y-intervals keyed by (lo, id), each node caching the largest
// `hi` in its subtree so stabbing queries can skip whole branches.
class IntervalTreap {
 public:
  void insert(int lo, int hi, std::uint32_t id) {
    nodes_.push_back({lo, hi, hi, id, priority(id), kNil, kNil});
    root_ = insert(root_, static_cast<std::int32_t>(nodes_.size() - 1));
  }

  void erase(int lo, std::uint32_t id) { root_ = erase(root_, lo, id); }

  // Appends ids of stored intervals intersecting [lo, hi].
  void query(int lo, int hi, std::vector<std::uint32_t>& out) const { query(root_, lo, hi, out); }

 private:
  static constexpr std::int32_t kNil = -1;

  struct Node {
    int lo;
    int hi;
    int max_hi;
    std::uint32_t id;
    std::uint64_t prio;
    std::int32_t left;
    std::int32_t right;
  };

  static std::uint64_t priority(std::uint32_t id) {
    // splitmix64 finalizer; any fixed hash keeps the shape deterministic.
    std::uint64_t z = id + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static bool less(const Node& a, int lo, std::uint32_t id) {
    return a.lo < lo || (a.lo == lo && a.id < id);
  }

  void pull(std::int32_t t) {
    Node& n = nodes_[static_cast<std::size_t>(t)];
    n.max_hi = n.hi;
    if (n.left != kNil) n.max_hi = std::max(n.max_hi, at(n.left).max_hi);
    if (n.right != kNil) n.max_hi = std::max(n.max_hi, at(n.right).max_hi);
  }

  Node& at(std::int32_t t) { return nodes_[static_cast<std::size_t>(t)]; }
  const Node& at(std::int32_t t) const { return nodes_[static_cast<std::size_t>(t)]; }

  std::int32_t rotate_right(std::int32_t t) {
    const std::int32_t l = at(t).left;
    at(t).left = at(l).right;
    at(l).right = t;
    pull(t);
    pull(l);
    return l;
  }

  std::int32_t rotate_left(std::int32_t t) {
    const std::int32_t r = at(t).right;
    at(t).right = at(r).left;
    at(r).left = t;
    pull(t);
    pull(r);
    return r;
  }

  std::int32_t insert(std::int32_t t, std::int32_t n) {
    if (t == kNil) return n;
    if (less(at(n), at(t).lo, at(t).id)) {
      at(t).left = insert(at(t).left, n);
      if (at(at(t).left).prio > at(t).prio) t = rotate_right(t);
    } else {
      at(t).right = insert(at(t).right, n);
      if (at(at(t).right).prio > at(t).prio) t = rotate_left(t);
    }
    pull(t);
    return t;
  }

  std::int32_t merge(std::int32_t a, std::int32_t b) {
    if (a == kNil) return b;
    if (b == kNil) return a;
    if (at(a).prio > at(b).prio) {
      at(a).right = merge(at(a).right, b);
      pull(a);
      return a;
    }
    at(b).left = merge(a, at(b).left);
    pull(b);
    return b;
  }

  std::int32_t erase(std::int32_t t, int lo, std::uint32_t id) {
    if (t == kNil) return kNil;
    if (at(t).lo == lo && at(t).id == id) return merge(at(t).left, at(t).right);
    if (less(at(t), lo, id)) {
      at(t).right = erase(at(t).right, lo, id);
    } else {
      at(t).left = erase(at(t).left, lo, id);
    }
    pull(t);
    return t;
  }

  void query(std::int32_t t, int lo, int hi, std::vector<std::uint32_t>& out) const {
    if (t == kNil || at(t).max_hi < lo) return;
    const Node& n = at(t);
    query(n.left, lo, hi, out);
    if (n.lo > hi) return;  // everything to the right starts even later
    if (n.hi >= lo) out.push_back(n.id);
    query(n.right, lo, hi, out);
  }

  std::vector<Node> nodes_;
  std::int32_t root_ = kNil;
};

}  // namespace

std::vector<Edge> build_edges(std::span<const GranularRect> rects) {
  struct Event {
    int x;
    int kind;  // 0 = open, 1 = close; opens first so touching columns overlap
    std::uint32_t index;
  };
  std::vector<Event> events;
  events.reserve(rects.size() * 2);
  for (std::uint32_t i = 0; i < rects.size(); ++i) {
    events.push_back({rects[i].x0(), 0, i});
    events.push_back({rects[i].x1(), 1, i});
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.index < b.index;
  });

  IntervalTreap active;
  std::vector<Edge> edges;
  std::vector<std::uint32_t> hits;
  for (const Event& e : events) {
    const GranularRect& r = rects[e.index];
    if (e.kind == 0) {
      hits.clear();
      active.query(r.y0(), r.y1(), hits);
      for (std::uint32_t other : hits) {
        edges.emplace_back(std::min(other, e.index), std::max(other, e.index));
      }
      active.insert(r.y0(), r.y1(), e.index);
    } else {
      active.erase(r.y0(), e.index);
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

std::vector<std::uint32_t> ImageGraph::degrees() const {
  std::vector<std::uint32_t> deg(nodes.size(), 0);
  for (const auto& [a, b] : edges) {
    ++deg[a];
    ++deg[b];
  }
  return deg;
}

NodeFeatures node_feature_vector(const GranularRect& rect, std::uint32_t degree, int width,
                                 int height) {
  const double w = width;
  const double h = height;
  return {
      rect.cx / w,
      rect.cy / h,
      (2.0 * rect.rx + 1.0) / w,
      (2.0 * rect.ry + 1.0) / h,
      rect.v_mean / 255.0,
      rect.variance / (255.0 * 255.0),
      rect.v_max / 255.0,
      rect.v_min / 255.0,
      rect.purity,
      static_cast<double>(std::min<std::uint32_t>(degree, kDegreeClamp)) / kDegreeClamp,
  };
}

std::vector<NodeFeatures> compute_features(const ImageGraph& g) {
  const auto deg = g.degrees();
  std::vector<NodeFeatures> out;
  out.reserve(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    out.push_back(node_feature_vector(g.nodes[i], deg[i], g.width, g.height));
  }
  return out;
}

ImageGraph build_graph(const GrayImage& img, const SearchParams& params) {
  ImageGraph g;
  g.width = img.width();
  g.height = img.height();
  g.nodes = partition(img, params);
  g.edges = build_edges(g.nodes);
  g.features = compute_features(g);
  return g;
}

void normalize_edges(std::vector<Edge>& edges) {
  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::erase_if(edges, [](const Edge& e) { return e.first == e.second; });
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

void check_graph(const ImageGraph& g) {
  if (g.width < 1 || g.height < 1) {
    throw InvariantError("graph canvas must be at least 1x1, got " + std::to_string(g.width) +
                         "x" + std::to_string(g.height));
  }
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const auto& r = g.nodes[i];
    if (r.id != i) {
      throw InvariantError("node " + std::to_string(i) + " carries id " + std::to_string(r.id));
    }
    if (r.rx < 0 || r.ry < 0 || r.x0() < 0 || r.y0() < 0 || r.x1() >= g.width ||
        r.y1() >= g.height) {
      throw InvariantError("node " + std::to_string(i) + " rectangle leaves the canvas");
    }
  }
  const std::size_t n = g.nodes.size();
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& [a, b] = g.edges[k];
    if (a >= n || b >= n) {
      throw InvariantError("edge " + std::to_string(k) + " (" + std::to_string(a) + "," +
                           std::to_string(b) + ") references missing node " +
                           std::to_string(a >= n ? a : b));
    }
    if (a >= b) {
      throw InvariantError("edge " + std::to_string(k) + " is not ordered src < dst");
    }
    if (k > 0 && !(g.edges[k - 1] < g.edges[k])) {
      throw InvariantError("edge " + std::to_string(k) + " is duplicated or out of order");
    }
  }
  if (g.features && g.features->size() != n) {
    throw InvariantError("feature rows (" + std::to_string(g.features->size()) +
                         ") do not match node count " + std::to_string(n));
  }
}

}  // namespace grig
