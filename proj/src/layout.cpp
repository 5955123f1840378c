#include "mss/layout.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <stdexcept>

namespace mss {
namespace {

std::vector<Point> random_start(std::size_t n, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5; };
  std::vector<Point> p(n);
  for (auto& q : p) {
    q.x = unit() * scale;
    q.y = unit() * scale;
  }
  return p;
}

void fruchterman_reingold(const Csr& adj, std::vector<Point>& p, const LayoutParams& params) {
  const std::size_t n = p.size();
  const double k = params.edge_length;
  const double k2 = k * k;
  const double t0 = k * std::max(1.0, std::sqrt(static_cast<double>(n))) * 0.1;
  std::vector<Point> disp(n);
  for (std::uint32_t it = 0; it < params.iterations; ++it) {
    const double temp = t0 * (1.0 - static_cast<double>(it) / params.iterations);
    std::fill(disp.begin(), disp.end(), Point{});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        double dx = p[i].x - p[j].x, dy = p[i].y - p[j].y;
        double d2 = dx * dx + dy * dy;
        if (d2 < 1e-18) {
          // Coincident nodes: separate along a fixed direction.
          dx = 1e-6 * static_cast<double>(j - i);
          dy = 0.0;
          d2 = dx * dx;
        }
        const double f = k2 / d2;  // k^2/d along the unit vector
        disp[i].x += dx * f;
        disp[i].y += dy * f;
        disp[j].x -= dx * f;
        disp[j].y -= dy * f;
      }
    for (std::size_t i = 0; i < n; ++i)
      for (std::uint32_t j : adj.adj(i)) {
        if (j <= i) continue;
        const double dx = p[i].x - p[j].x, dy = p[i].y - p[j].y;
        const double d = std::sqrt(dx * dx + dy * dy);
        const double f = d / k;  // d^2/k along the unit vector
        disp[i].x -= dx * f;
        disp[i].y -= dy * f;
        disp[j].x += dx * f;
        disp[j].y += dy * f;
      }
    for (std::size_t i = 0; i < n; ++i) {
      const double len = std::sqrt(disp[i].x * disp[i].x + disp[i].y * disp[i].y);
      if (len < 1e-18) continue;
      const double step = std::min(len, temp) / len;
      p[i].x += disp[i].x * step;
      p[i].y += disp[i].y * step;
    }
  }
}

std::vector<double> hop_distances(const Csr& adj) {
  const std::size_t n = adj.size();
  std::vector<double> dist(n * n, std::numeric_limits<double>::infinity());
  std::deque<std::size_t> queue;
  for (std::size_t s = 0; s < n; ++s) {
    double* row = dist.data() + s * n;
    row[s] = 0.0;
    queue.assign(1, s);
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      for (std::uint32_t v : adj.adj(u))
        if (std::isinf(row[v])) {
          row[v] = row[u] + 1.0;
          queue.push_back(v);
        }
    }
  }
  double longest = 0.0;
  for (double d : dist)
    if (!std::isinf(d)) longest = std::max(longest, d);
  // Separate components sit one hop beyond the diameter.
  for (double& d : dist)
    if (std::isinf(d)) d = longest + 1.0;
  return dist;
}

void kamada_kawai(const Csr& adj, std::vector<Point>& p, const LayoutParams& params) {
  const std::size_t n = p.size();
  if (n < 2) return;
  const auto dist = hop_distances(adj);
  std::vector<double> len(n * n), spring(n * n);
  for (std::size_t i = 0; i < n * n; ++i) {
    const double d = dist[i];
    len[i] = params.edge_length * d;
    spring[i] = d > 0.0 ? 1.0 / (d * d) : 0.0;
  }
  auto gradient = [&](std::size_t m) {
    double gx = 0.0, gy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == m) continue;
      const double dx = p[m].x - p[i].x, dy = p[m].y - p[i].y;
      const double d = std::max(std::sqrt(dx * dx + dy * dy), 1e-12);
      const double kk = spring[m * n + i], l = len[m * n + i];
      gx += kk * (dx - l * dx / d);
      gy += kk * (dy - l * dy / d);
    }
    return Point{gx, gy};
  };
  std::vector<Point> grad(n);
  for (std::size_t i = 0; i < n; ++i) grad[i] = gradient(i);

  const std::size_t max_moves = static_cast<std::size_t>(params.iterations) * n;
  for (std::size_t move = 0; move < max_moves; ++move) {
    std::size_t m = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double delta = std::hypot(grad[i].x, grad[i].y);
      if (delta > best) {
        best = delta;
        m = i;
      }
    }
    if (best < 1e-7) break;
    // One Newton-Raphson step on node m with the others fixed.
    double hxx = 0.0, hxy = 0.0, hyy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == m) continue;
      const double dx = p[m].x - p[i].x, dy = p[m].y - p[i].y;
      const double d = std::max(std::sqrt(dx * dx + dy * dy), 1e-12);
      const double d3 = d * d * d;
      const double kk = spring[m * n + i], l = len[m * n + i];
      hxx += kk * (1.0 - l * dy * dy / d3);
      hxy += kk * (l * dx * dy / d3);
      hyy += kk * (1.0 - l * dx * dx / d3);
    }
    const double det = hxx * hyy - hxy * hxy;
    Point step;
    if (std::abs(det) > 1e-12) {
      step.x = (hxy * grad[m].y - hyy * grad[m].x) / det;
      step.y = (hxy * grad[m].x - hxx * grad[m].y) / det;
    } else {
      step.x = -grad[m].x * 0.1;
      step.y = -grad[m].y * 0.1;
    }
    const Point old = p[m];
    p[m].x += step.x;
    p[m].y += step.y;
    // Refresh gradients: node m's own, and its pairwise term in every other.
    for (std::size_t i = 0; i < n; ++i) {
      if (i == m) continue;
      const double kk = spring[i * n + m], l = len[i * n + m];
      auto term = [&](const Point& q) {
        const double dx = p[i].x - q.x, dy = p[i].y - q.y;
        const double d = std::max(std::sqrt(dx * dx + dy * dy), 1e-12);
        return Point{kk * (dx - l * dx / d), kk * (dy - l * dy / d)};
      };
      const Point before = term(old), after = term(p[m]);
      grad[i].x += after.x - before.x;
      grad[i].y += after.y - before.y;
    }
    grad[m] = gradient(m);
  }
}

}  // namespace

std::string_view to_string(LayoutAlgorithm a) {
  return a == LayoutAlgorithm::kamada_kawai ? "kamada_kawai" : "fruchterman_reingold";
}

std::optional<LayoutAlgorithm> parse_layout_algorithm(std::string_view s) {
  if (s == "fruchterman_reingold" || s == "fr") return LayoutAlgorithm::fruchterman_reingold;
  if (s == "kamada_kawai" || s == "kk") return LayoutAlgorithm::kamada_kawai;
  return std::nullopt;
}

std::optional<Point> LayoutResult::position(NodeId n) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), n);
  if (it == nodes.end() || *it != n) return std::nullopt;
  return positions[static_cast<std::size_t>(it - nodes.begin())];
}

LayoutResult global_layout(const StaticGraph& g, const LayoutParams& params) {
  if (g.empty()) throw std::invalid_argument("global_layout: empty graph");
  if (!(params.edge_length > 0.0)) throw std::invalid_argument("global_layout: edge length must be positive");
  LayoutResult out;
  out.algorithm = params.algorithm;
  out.seed = params.seed;
  out.nodes = g.nodes();
  const std::size_t n = g.node_count();
  const Csr adj = make_csr(g);
  out.positions = random_start(n, params.seed, params.edge_length * std::sqrt(static_cast<double>(n)));
  if (params.algorithm == LayoutAlgorithm::kamada_kawai)
    kamada_kawai(adj, out.positions, params);
  else
    fruchterman_reingold(adj, out.positions, params);

  Point c;
  for (const auto& q : out.positions) {
    c.x += q.x;
    c.y += q.y;
  }
  c.x /= static_cast<double>(n);
  c.y /= static_cast<double>(n);
  for (auto& q : out.positions) {
    q.x -= c.x;
    q.y -= c.y;
  }
  return out;
}

}  // namespace mss
