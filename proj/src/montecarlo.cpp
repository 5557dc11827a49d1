// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#include "sphreach/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "sphreach/reach.hpp"
#include "sphreach/rng.hpp"

namespace sphreach {

namespace {

constexpr double kPi = std::numbers::pi;

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec3 normalized(const Vec3& v) {
  const double r = std::sqrt(dot(v, v));
  return {v[0] / r, v[1] / r, v[2] / r};
}

// Orthonormal tangent frame at a unit vector p.
std::array<Vec3, 2> tangent_frame(const Vec3& p) {
  const Vec3 axis = std::fabs(p[0]) < 0.6 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  const Vec3 e1 = normalized(cross(p, axis));
  return {e1, cross(p, e1)};
}

Vec3 exp_map(const Vec3& p, const std::array<Vec3, 2>& e, double s, double t) {
  const double r = std::hypot(s, t);
  if (r == 0.0) return p;
  const double c = std::cos(r);
  const double k = std::sin(r) / r;
  Vec3 q;
  for (int i = 0; i < 3; ++i) q[i] = c * p[i] + k * (s * e[0][i] + t * e[1][i]);
  return normalized(q);
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(begin, end, worker) over contiguous blocks of [0, n).
template <class Body>
void parallel_blocks(std::int64_t n, int threads, Body body) {
  const int workers = static_cast<int>(std::min<std::int64_t>(resolve_threads(threads), std::max<std::int64_t>(n, 1)));
  if (workers == 1) {
    body(std::int64_t{0}, n, 0);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = n * w / workers;
    const std::int64_t hi = n * (w + 1) / workers;
    pool.emplace_back([&, lo, hi, w] {
      try {
        body(lo, hi, w);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Nearest vertex by greedy descent over the neighbour graph, then the face
// containing p among faces around it and its neighbours; brute force if the
// local search misses.
int containing_face(const SphereMesh& m, const Vec3& p, int start) {
  int v = start;
  double best = dot(m.vertices[v], p);
  for (bool moved = true; moved;) {
    moved = false;
    for (int i = m.neighbor_offsets[v]; i < m.neighbor_offsets[v + 1]; ++i) {
      const int w = m.neighbor_index[i];
      const double c = dot(m.vertices[w], p);
      if (c > best) {
        best = c;
        v = w;
        moved = true;
      }
    }
  }
  auto test = [&](int face) {
    const auto& f = m.faces[face];
    return in_spherical_triangle(p, m.vertices[f[0]], m.vertices[f[1]], m.vertices[f[2]]);
  };
  for (int i = m.face_offsets[v]; i < m.face_offsets[v + 1]; ++i) {
    if (test(m.face_index[i])) return m.face_index[i];
  }
  for (int j = m.neighbor_offsets[v]; j < m.neighbor_offsets[v + 1]; ++j) {
    const int w = m.neighbor_index[j];
    for (int i = m.face_offsets[w]; i < m.face_offsets[w + 1]; ++i) {
      if (test(m.face_index[i])) return m.face_index[i];
    }
  }
  for (std::size_t i = 0; i < m.faces.size(); ++i) {
    if (test(static_cast<int>(i))) return static_cast<int>(i);
  }
  throw std::runtime_error("containing_face: point not covered by the mesh");
}

// Local retriangulation of one face after star-inserting its peaks. Vertex
// codes: >= 0 mesh vertex, < 0 peak number -(code + 1).
struct Patch {
  int face = -1;
  std::vector<int> peaks;
  std::vector<std::array<int, 3>> tris;
  std::vector<std::array<int, 2>> new_edges;
};

std::vector<Patch> build_patches(const SphereMesh& m, std::span<const Peak> peaks) {
  std::vector<int> order(peaks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return peaks[a].face != peaks[b].face ? peaks[a].face < peaks[b].face : a < b;
  });
  std::vector<Patch> patches;
  auto position = [&](int code) -> const Vec3& {
    return code >= 0 ? m.vertices[code] : peaks[-code - 1].point;
  };
  for (int pi : order) {
    const Peak& pk = peaks[pi];
    if (pk.face < 0) throw std::invalid_argument("excursion: peak without a face");
    if (patches.empty() || patches.back().face != pk.face) {
      Patch patch;
      patch.face = pk.face;
      const auto& f = m.faces[pk.face];
      patch.tris.push_back({f[0], f[1], f[2]});
      patches.push_back(std::move(patch));
    }
    Patch& patch = patches.back();
    const int code = -(pi + 1);
    // Sub-triangle containing the peak; if rounding leaves it in none, take
    // the one it is least outside of.
    std::size_t host = 0;
    double host_score = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < patch.tris.size(); ++t) {
      const auto& tri = patch.tris[t];
      const Vec3& a = position(tri[0]);
      const Vec3& b = position(tri[1]);
      const Vec3& c = position(tri[2]);
      const double score = std::min({dot(cross(a, b), pk.point), dot(cross(b, c), pk.point),
                                     dot(cross(c, a), pk.point)});
      if (score > host_score) {
        host_score = score;
        host = t;
      }
    }
    const auto tri = patch.tris[host];
    patch.tris.erase(patch.tris.begin() + static_cast<std::ptrdiff_t>(host));
    patch.tris.push_back({tri[0], tri[1], code});
    patch.tris.push_back({tri[1], tri[2], code});
    patch.tris.push_back({tri[2], tri[0], code});
    for (int c = 0; c < 3; ++c) patch.new_edges.push_back({code, tri[c]});
    patch.peaks.push_back(pi);
  }
  return patches;
}

struct UnionFind {
  std::vector<int> parent;
  void reset(std::size_t n) {
    parent.resize(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

struct TopologyWorkspace {
  std::vector<int> local;  // vertex -> local node id, -1 when absent
  std::vector<int> members;
  UnionFind uf;
};

// Topology above u. `candidates` must contain every vertex with value > u.
ExcursionTopology topology_on(const SphereMesh& m, std::span<const double> values,
                              std::span<const Peak> peaks, const std::vector<Patch>& patches,
                              std::span<const int> candidates, double u, TopologyWorkspace& ws) {
  if (ws.local.size() != m.vertices.size()) ws.local.assign(m.vertices.size(), -1);
  ws.members.clear();
  for (int v : candidates) {
    if (values[v] > u) {
      ws.local[v] = static_cast<int>(ws.members.size());
      ws.members.push_back(v);
    }
  }
  const int nv = static_cast<int>(ws.members.size());
  ws.uf.reset(static_cast<std::size_t>(nv) + peaks.size());
  auto above = [&](int code) {
    return code >= 0 ? values[code] > u : peaks[-code - 1].value > u;
  };
  auto node = [&](int code) { return code >= 0 ? ws.local[code] : nv + (-code - 1); };

  long chi = nv;
  for (int v : ws.members) {
    for (int e = m.owned_edge_offsets[v]; e < m.owned_edge_offsets[v + 1]; ++e) {
      const int w = m.edges[e][1];
      if (values[w] > u) {
        --chi;
        ws.uf.unite(ws.local[v], ws.local[w]);
      }
    }
    for (int i = m.owned_face_offsets[v]; i < m.owned_face_offsets[v + 1]; ++i) {
      const auto& f = m.faces[m.owned_face_index[i]];
      if (values[f[0]] > u && values[f[1]] > u && values[f[2]] > u) ++chi;
    }
  }
  for (const Patch& patch : patches) {
    const auto& f = m.faces[patch.face];
    if (above(f[0]) && above(f[1]) && above(f[2])) --chi;
    for (int pi : patch.peaks) {
      if (peaks[pi].value > u) ++chi;
    }
    for (const auto& e : patch.new_edges) {
      if (above(e[0]) && above(e[1])) {
        --chi;
        ws.uf.unite(node(e[0]), node(e[1]));
      }
    }
    for (const auto& t : patch.tris) {
      if (above(t[0]) && above(t[1]) && above(t[2])) ++chi;
    }
  }
  // The ascent from a seed to its peak stays above the seed value, so a seed
  // above u lies in the peak's component even when the peak's face does not
  // touch it. Only joins are counted; an already connected pair adds nothing.
  for (std::size_t p = 0; p < peaks.size(); ++p) {
    if (!(peaks[p].value > u)) continue;
    const int id = nv + static_cast<int>(p);
    for (int v : peaks[p].seeds) {
      if (!(values[v] > u)) continue;
      if (ws.uf.find(ws.local[v]) != ws.uf.find(id)) {
        --chi;
        ws.uf.unite(ws.local[v], id);
      }
    }
  }
  int components = 0;
  for (int i = 0; i < nv; ++i) {
    if (ws.uf.find(i) == i) ++components;
  }
  for (std::size_t p = 0; p < peaks.size(); ++p) {
    const int id = nv + static_cast<int>(p);
    if (peaks[p].value > u && ws.uf.find(id) == id) ++components;
  }
  for (int v : ws.members) ws.local[v] = -1;
  return ExcursionTopology{static_cast<int>(chi), components};
}

double circle_sup(std::span<const double> a, int n) {
  // a0 cos(n t) + a1 sin(n t) over one period of n t.
  const double r = 1.0 / std::sqrt(kPi);
  auto f = [&](double t) { return -r * (a[0] * std::cos(n * t) + a[1] * std::sin(n * t)); };
  const int points = 64 * n + 1;
  const Minimum m = global_minimize(f, 0.0, 2.0 * kPi, points, 1e-12, 1e-3);
  return -m.value;
}

}  // namespace

FieldSample sample_ensemble(int k, std::uint64_t master_seed, std::uint64_t sample_index) {
  if (k < 2) throw std::invalid_argument("sample_ensemble: k must be >= 2");
  FieldSample s;
  s.master_seed = master_seed;
  s.sample_index = sample_index;
  s.a.resize(k);
  const NormalStream stream(master_seed, sample_index);
  for (int i = 0; i < k; i += 2) {
    const auto z = stream.pair(static_cast<std::uint32_t>(i / 2));
    s.a[i] = z[0];
    if (i + 1 < k) s.a[i + 1] = z[1];
  }
  double norm2 = 0.0;
  for (double v : s.a) norm2 += v * v;
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& v : s.a) v *= inv;
  return s;
}

std::uint64_t tube_stream_seed(std::uint64_t master_seed) {
  return master_seed ^ 0x9E3779B97F4A7C15ull;
}

FieldEvaluator::FieldEvaluator(const HarmonicIndex& idx, const SphereMesh& mesh)
    : idx_(idx), mesh_(mesh) {
  if (idx.d != 2) throw std::invalid_argument("FieldEvaluator: simulation supports d = 2 only");
  if (idx.n < 1) throw std::invalid_argument("FieldEvaluator: n must be >= 1");
  require_resolution(mesh, idx.n);
  k_ = static_cast<int>(dimension(idx));
  amplitude_ = std::sqrt(k_ / sphere_area(2));
  const double a = endpoint_derivative(idx);
  const double b = endpoint_second_derivative(idx);
  margin_ = 0.5 * amplitude_ * std::sqrt(a + 3.0 * b) * mesh.max_circumradius *
            mesh.max_circumradius;
  const std::size_t nv = mesh.vertices.size();
  basis_.assign(static_cast<std::size_t>(k_) * nv, 0.0);
  std::vector<double> row(k_), scratch(idx.n + 1);
  for (std::size_t v = 0; v < nv; ++v) {
    basis_eval_s2(idx.n, mesh.vertices[v], row, scratch);
    for (int j = 0; j < k_; ++j) basis_[j * nv + v] = row[j];
  }
}

void FieldEvaluator::vertex_values(std::span<const double> a, std::span<double> out) const {
  const std::size_t nv = mesh_.vertices.size();
  if (a.size() != static_cast<std::size_t>(k_) || out.size() != nv) {
    throw std::invalid_argument("vertex_values: size mismatch");
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (int j = 0; j < k_; ++j) {
    const double c = a[j];
    const double* row = basis_.data() + static_cast<std::size_t>(j) * nv;
    for (std::size_t v = 0; v < nv; ++v) out[v] += c * row[v];
  }
}

double FieldEvaluator::value(std::span<const double> a, const Vec3& p) const {
  thread_local std::vector<double> row, scratch;
  row.resize(k_);
  scratch.resize(idx_.n + 1);
  basis_eval_s2(idx_.n, p, row, scratch);
  double s = 0.0;
  for (int j = 0; j < k_; ++j) s += a[j] * row[j];
  return s;
}

Peak polish_maximum(const FieldEvaluator& ev, std::span<const double> a, const Vec3& start) {
  const double n = ev.index().n;
  const double h = 1e-3 / n;
  const double cap = 0.5 / n;
  Vec3 p = normalized(start);
  double fp = ev.value(a, p);
  for (int iter = 0; iter < 60; ++iter) {
    const auto e = tangent_frame(p);
    auto at = [&](double s, double t) { return ev.value(a, exp_map(p, e, s, t)); };
    const double fxp = at(h, 0), fxm = at(-h, 0), fyp = at(0, h), fym = at(0, -h);
    const double fpp = at(h, h), fpm = at(h, -h), fmp = at(-h, h), fmm = at(-h, -h);
    const double g1 = (fxp - fxm) / (2 * h);
    const double g2 = (fyp - fym) / (2 * h);
    const double h11 = (fxp - 2 * fp + fxm) / (h * h);
    const double h22 = (fyp - 2 * fp + fym) / (h * h);
    const double h12 = (fpp - fpm - fmp + fmm) / (4 * h * h);
    const double det = h11 * h22 - h12 * h12;
    double s, t;
    if (h11 < 0.0 && det > 0.0) {
      s = -(h22 * g1 - h12 * g2) / det;
      t = -(h11 * g2 - h12 * g1) / det;
    } else {
      const double g = std::hypot(g1, g2);
      if (g == 0.0) break;
      s = cap * g1 / g;
      t = cap * g2 / g;
    }
    const double len = std::hypot(s, t);
    if (len > cap) {
      s *= cap / len;
      t *= cap / len;
    }
    bool accepted = false;
    for (int back = 0; back < 40; ++back) {
      const Vec3 q = exp_map(p, e, s, t);
      const double fq = ev.value(a, q);
      if (fq > fp) {
        p = q;
        fp = fq;
        accepted = true;
        break;
      }
      s *= 0.5;
      t *= 0.5;
    }
    if (!accepted || std::hypot(s, t) < 1e-11 / n) break;
  }
  Peak out;
  out.point = p;
  out.value = fp;
  return out;
}

SupEstimate locate_peaks(const FieldEvaluator& ev, std::span<const double> a,
                         std::span<const double> values, double floor) {
  const SphereMesh& m = ev.mesh();
  SupEstimate out;
  const auto best = std::max_element(values.begin(), values.end());
  const int arg = static_cast<int>(best - values.begin());
  out.vertex_max = *best;
  out.value = *best;
  out.argmax = m.vertices[arg];
  const double threshold = std::min(floor, out.vertex_max) - ev.vertex_margin();
  const int nv = static_cast<int>(m.vertices.size());
  for (int v = 0; v < nv; ++v) {
    if (values[v] < threshold) continue;
    bool is_max = true;
    for (int i = m.neighbor_offsets[v]; i < m.neighbor_offsets[v + 1] && is_max; ++i) {
      is_max = values[m.neighbor_index[i]] <= values[v];
    }
    if (!is_max) continue;
    Peak pk = polish_maximum(ev, a, m.vertices[v]);
    bool duplicate = false;
    for (Peak& other : out.peaks) {
      if (angle_between(other.point, pk.point) < 1e-7) {
        other.seeds.push_back(v);
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;
    pk.face = containing_face(m, pk.point, v);
    pk.seeds.push_back(v);
    if (pk.value > out.value) {
      out.value = pk.value;
      out.argmax = pk.point;
    }
    out.peaks.push_back(pk);
  }
  return out;
}

double estimate_sup(const FieldSample& sample, const HarmonicIndex& idx, const SphereMesh& mesh) {
  if (idx.d == 1) {
    if (sample.a.size() != 2) throw std::invalid_argument("estimate_sup: d = 1 needs k = 2");
    return circle_sup(sample.a, idx.n);
  }
  const FieldEvaluator ev(idx, mesh);
  std::vector<double> values(mesh.vertices.size());
  ev.vertex_values(sample.a, values);
  return locate_peaks(ev, sample.a, values, std::numeric_limits<double>::infinity()).value;
}

ExcursionTopology excursion_topology(const SphereMesh& mesh, std::span<const double> values,
                                     std::span<const Peak> peaks, double u) {
  if (values.size() != mesh.vertices.size()) {
    throw std::invalid_argument("excursion_topology: one value per vertex required");
  }
  std::vector<int> all(mesh.vertices.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  TopologyWorkspace ws;
  return topology_on(mesh, values, peaks, build_patches(mesh, peaks), all, u, ws);
}

int excursion_euler_char(const FieldSample& sample, const HarmonicIndex& idx,
                         const SphereMesh& mesh, double u) {
  const FieldEvaluator ev(idx, mesh);
  std::vector<double> values(mesh.vertices.size());
  ev.vertex_values(sample.a, values);
  const SupEstimate sup = locate_peaks(ev, sample.a, values, u);
  return excursion_topology(mesh, values, sup.peaks, u).euler_char;
}

namespace {

struct Counters {
  std::vector<std::int64_t> tail_hits, chi_sum, chi_sq, tube_hits;
  std::int64_t lemma_checked = 0;
  std::int64_t lemma_violations = 0;

  explicit Counters(std::size_t m) : tail_hits(m), chi_sum(m), chi_sq(m), tube_hits(m) {}

  void add(const Counters& o) {
    for (std::size_t i = 0; i < tail_hits.size(); ++i) {
      tail_hits[i] += o.tail_hits[i];
      chi_sum[i] += o.chi_sum[i];
      chi_sq[i] += o.chi_sq[i];
      tube_hits[i] += o.tube_hits[i];
    }
    lemma_checked += o.lemma_checked;
    lemma_violations += o.lemma_violations;
  }
};

SimReport binomial_report(double level, std::int64_t hits, std::int64_t n, std::uint64_t seed) {
  SimReport r;
  r.level = level;
  r.n_samples = n;
  r.seed = seed;
  r.estimate = n > 0 ? static_cast<double>(hits) / n : 0.0;
  r.std_error = n > 0 ? std::sqrt(r.estimate * (1.0 - r.estimate) / n) : 0.0;
  return r;
}

SimReport mean_report(double level, std::int64_t sum, std::int64_t sq, std::int64_t n,
                      std::uint64_t seed) {
  SimReport r;
  r.level = level;
  r.n_samples = n;
  r.seed = seed;
  if (n == 0) return r;
  r.estimate = static_cast<double>(sum) / n;
  if (n > 1) {
    const double var = (static_cast<double>(sq) - static_cast<double>(sum) * r.estimate) / (n - 1);
    r.std_error = std::sqrt(std::max(var, 0.0) / n);
  }
  return r;
}

double level_rho(double u, double amplitude) {
  if (u >= amplitude) return 0.0;
  if (u <= -amplitude) return kPi;
  return std::acos(u / amplitude);
}

}  // namespace

SimulationResult simulate(const SimulationConfig& config, const SphereMesh& mesh) {
  if (config.n_samples < 1) throw std::invalid_argument("simulate: need at least one sample");
  const FieldEvaluator ev(config.idx, mesh);
  const std::size_t m = config.u_grid.size();
  const double amp = ev.max_amplitude();
  const double u_floor =
      m == 0 ? std::numeric_limits<double>::infinity()
             : *std::min_element(config.u_grid.begin(), config.u_grid.end());

  SimulationResult result;
  for (double u : config.u_grid) {
    result.valid.push_back(u > 0.0 && u <= amp && level_rho(u, amp) <= config.rho_d);
  }

  const int workers = static_cast<int>(
      std::min<std::int64_t>(resolve_threads(config.threads), config.n_samples));
  std::vector<Counters> partial(workers, Counters(m));
  std::vector<double> sups(static_cast<std::size_t>(config.n_samples));
  const std::size_t nv = mesh.vertices.size();

  parallel_blocks(config.n_samples, workers, [&](std::int64_t lo, std::int64_t hi, int w) {
    Counters& c = partial[w];
    std::vector<double> values(nv);
    std::vector<int> candidates;
    TopologyWorkspace ws;
    for (std::int64_t i = lo; i < hi; ++i) {
      const FieldSample s = sample_ensemble(ev.k(), config.seed, static_cast<std::uint64_t>(i));
      ev.vertex_values(s.a, values);
      const SupEstimate sup = locate_peaks(ev, s.a, values, u_floor);
      sups[static_cast<std::size_t>(i)] = sup.value;
      // Levels at or above the sup have an empty excursion set.
      double lowest = std::numeric_limits<double>::infinity();
      for (double u : config.u_grid) {
        if (u < sup.value) lowest = std::min(lowest, u);
      }
      if (!std::isfinite(lowest)) continue;
      candidates.clear();
      for (std::size_t v = 0; v < nv; ++v) {
        if (values[v] > lowest) candidates.push_back(static_cast<int>(v));
      }
      const std::vector<Patch> patches = build_patches(mesh, sup.peaks);
      for (std::size_t j = 0; j < m; ++j) {
        const double u = config.u_grid[j];
        if (!(u < sup.value)) continue;
        ++c.tail_hits[j];
        const ExcursionTopology top =
            topology_on(mesh, values, sup.peaks, patches, candidates, u, ws);
        c.chi_sum[j] += top.euler_char;
        c.chi_sq[j] += static_cast<std::int64_t>(top.euler_char) * top.euler_char;
        if (result.valid[j]) {
          ++c.lemma_checked;
          if (top.euler_char != top.components) ++c.lemma_violations;
        }
      }
    }
  });

  if (config.tube_pass && m > 0) {
    const std::uint64_t tube_seed = tube_stream_seed(config.seed);
    std::vector<double> cos_rho(m);
    for (std::size_t j = 0; j < m; ++j) cos_rho[j] = std::cos(level_rho(config.u_grid[j], amp));
    parallel_blocks(config.n_samples, workers, [&](std::int64_t lo, std::int64_t hi, int w) {
      Counters& c = partial[w];
      std::vector<double> values(nv);
      for (std::int64_t i = lo; i < hi; ++i) {
        const FieldSample s = sample_ensemble(ev.k(), tube_seed, static_cast<std::uint64_t>(i));
        ev.vertex_values(s.a, values);
        // max_x <a, i(x)> is the field sup divided by the amplitude.
        const double reach_cos =
            locate_peaks(ev, s.a, values, std::numeric_limits<double>::infinity()).value / amp;
        for (std::size_t j = 0; j < m; ++j) {
          if (reach_cos > cos_rho[j]) ++c.tube_hits[j];
        }
      }
    });
  }

  Counters total(m);
  for (const Counters& c : partial) total.add(c);
  const std::int64_t n = config.n_samples;
  for (std::size_t j = 0; j < m; ++j) {
    const double u = config.u_grid[j];
    result.tail.push_back(binomial_report(u, total.tail_hits[j], n, config.seed));
    result.ec.push_back(mean_report(u, total.chi_sum[j], total.chi_sq[j], n, config.seed));
    if (config.tube_pass) {
      result.tube.push_back(binomial_report(level_rho(u, amp), total.tube_hits[j], n,
                                            tube_stream_seed(config.seed)));
    }
  }
  result.lemma_checked = total.lemma_checked;
  result.lemma_violations = total.lemma_violations;
  result.mean_sup = pairwise_sum(sups.data(), sups.size()) / static_cast<double>(n);
  std::vector<double> dev(sups.size());
  for (std::size_t i = 0; i < sups.size(); ++i) {
    const double d = sups[i] - result.mean_sup;
    dev[i] = d * d;
  }
  if (n > 1) {
    result.sup_std_error =
        std::sqrt(pairwise_sum(dev.data(), dev.size()) / static_cast<double>(n - 1) / n);
  }
  return result;
}

std::vector<SimReport> mc_tail_estimate(const HarmonicIndex& idx, std::span<const double> u_grid,
                                        std::int64_t n_samples, std::uint64_t seed,
                                        const SphereMesh& mesh, int threads) {
  SimulationConfig cfg;
  cfg.idx = idx;
  cfg.u_grid.assign(u_grid.begin(), u_grid.end());
  cfg.n_samples = n_samples;
  cfg.seed = seed;
  cfg.threads = threads;
  cfg.tube_pass = false;
  return simulate(cfg, mesh).tail;
}

std::vector<SimReport> mc_ec_estimate(const HarmonicIndex& idx, std::span<const double> u_grid,
                                      std::int64_t n_samples, std::uint64_t seed,
                                      const SphereMesh& mesh, int threads) {
  SimulationConfig cfg;
  cfg.idx = idx;
  cfg.u_grid.assign(u_grid.begin(), u_grid.end());
  cfg.n_samples = n_samples;
  cfg.seed = seed;
  cfg.threads = threads;
  cfg.tube_pass = false;
  return simulate(cfg, mesh).ec;
}

SimReport mc_tube_fraction(const HarmonicIndex& idx, double rho, std::int64_t n_samples,
                           std::uint64_t seed, const SphereMesh& mesh, int threads) {
  if (!(rho >= 0.0 && rho <= kPi)) throw std::domain_error("mc_tube_fraction: rho outside [0, pi]");
  if (n_samples < 1) throw std::invalid_argument("mc_tube_fraction: need at least one sample");
  const FieldEvaluator ev(idx, mesh);
  const double amp = ev.max_amplitude();
  const double c = std::cos(rho);
  const std::uint64_t tube_seed = tube_stream_seed(seed);
  const int workers =
      static_cast<int>(std::min<std::int64_t>(resolve_threads(threads), n_samples));
  std::vector<std::int64_t> hits(workers, 0);
  const std::size_t nv = mesh.vertices.size();
  parallel_blocks(n_samples, workers, [&](std::int64_t lo, std::int64_t hi, int w) {
    std::vector<double> values(nv);
    for (std::int64_t i = lo; i < hi; ++i) {
      const FieldSample s = sample_ensemble(ev.k(), tube_seed, static_cast<std::uint64_t>(i));
      ev.vertex_values(s.a, values);
      const double best =
          locate_peaks(ev, s.a, values, std::numeric_limits<double>::infinity()).value / amp;
      if (best > c) ++hits[w];
    }
  });
  std::int64_t total = 0;
  for (std::int64_t h : hits) total += h;
  return binomial_report(rho, total, n_samples, tube_seed);
}

}  // namespace sphreach
