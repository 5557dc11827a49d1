// Copyright 2026 The sphreach Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHREACH_MONTECARLO_HPP
#define SPHREACH_MONTECARLO_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "sphreach/harmonics.hpp"
#include "sphreach/mesh.hpp"

namespace sphreach {

/// One draw of the spherical ensemble.
struct FieldSample {
  std::vector<double> a;  ///< unit coefficient vector
  std::uint64_t master_seed = 0;
  std::uint64_t sample_index = 0;
};

/// a = g / |g| with g standard normal from the Philox stream (seed, index).
FieldSample sample_ensemble(int k, std::uint64_t master_seed, std::uint64_t sample_index);

/// Seed of the independent stream used for tube-hit sampling.
std::uint64_t tube_stream_seed(std::uint64_t master_seed);

/// Level-n basis tabulated on mesh vertices (d = 2).
class FieldEvaluator {
 public:
  /// Throws std::invalid_argument if d != 2 or the mesh is too coarse.
  FieldEvaluator(const HarmonicIndex& idx, const SphereMesh& mesh);

  const HarmonicIndex& index() const { return idx_; }
  const SphereMesh& mesh() const { return mesh_; }
  int k() const { return k_; }
  double max_amplitude() const { return amplitude_; }

  /// Field values at every vertex; out.size() == vertex count.
  void vertex_values(std::span<const double> a, std::span<double> out) const;

  /// Field value at an arbitrary unit vector.
  double value(std::span<const double> a, const Vec3& p) const;

  /// Upper bound on sup(field) - max(vertex values) when the sup is taken
  /// near a vertex: half the second-derivative bound times the squared
  /// covering radius of the mesh.
  double vertex_margin() const { return margin_; }

 private:
  HarmonicIndex idx_;
  const SphereMesh& mesh_;
  int k_ = 0;
  double amplitude_ = 0.0;
  double margin_ = 0.0;
  std::vector<double> basis_;  ///< k rows of vertex count entries
};

/// A polished local maximum and the mesh face it lies in.
struct Peak {
  Vec3 point{};
  double value = 0.0;
  int face = -1;
  std::vector<int> seeds;  ///< mesh vertices whose ascent ended here
};

struct SupEstimate {
  double value = 0.0;       ///< best of vertex maximum and polished peaks
  double vertex_max = 0.0;
  Vec3 argmax{};
  std::vector<Peak> peaks;  ///< distinct polished maxima
};

/// Polish every discrete local maximum whose vertex value is at least
/// min(floor, vertex max) - vertex_margin.
SupEstimate locate_peaks(const FieldEvaluator& ev, std::span<const double> a,
                         std::span<const double> vertex_values, double floor);

/// Local ascent from p (exponential-map chart, finite-difference Newton).
Peak polish_maximum(const FieldEvaluator& ev, std::span<const double> a, const Vec3& p);

/// Supremum of the field. d = 2 uses the mesh; d = 1 ignores it and
/// maximizes on a dense circle grid.
double estimate_sup(const FieldSample& sample, const HarmonicIndex& idx, const SphereMesh& mesh);

struct ExcursionTopology {
  int euler_char = 0;
  int components = 0;
};

/// Topology of {field > u}: the vertex-induced subcomplex with each polished
/// peak star-inserted into the face containing it.
ExcursionTopology excursion_topology(const SphereMesh& mesh, std::span<const double> vertex_values,
                                     std::span<const Peak> peaks, double u);

/// Euler characteristic of the excursion set above u.
int excursion_euler_char(const FieldSample& sample, const HarmonicIndex& idx,
                         const SphereMesh& mesh, double u);

struct SimReport {
  double level = 0.0;  ///< u, or rho for tube-hit reports
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
};

std::vector<SimReport> mc_tail_estimate(const HarmonicIndex& idx, std::span<const double> u_grid,
                                        std::int64_t n_samples, std::uint64_t seed,
                                        const SphereMesh& mesh, int threads = 0);

std::vector<SimReport> mc_ec_estimate(const HarmonicIndex& idx, std::span<const double> u_grid,
                                      std::int64_t n_samples, std::uint64_t seed,
                                      const SphereMesh& mesh, int threads = 0);

/// Fraction of uniform points of S^{k-1} within geodesic distance rho of the
/// immersed surface, sampled on the tube stream of `seed`.
SimReport mc_tube_fraction(const HarmonicIndex& idx, double rho, std::int64_t n_samples,
                           std::uint64_t seed, const SphereMesh& mesh, int threads = 0);

struct SimulationConfig {
  HarmonicIndex idx{3, 2};
  std::vector<double> u_grid;
  std::int64_t n_samples = 10000;
  std::uint64_t seed = 1;
  int threads = 0;  ///< 0 picks the hardware concurrency
  double rho_d = 0.0;  ///< levels with arccos(u / max amplitude) <= rho_d are valid
  bool tube_pass = true;
};

struct SimulationResult {
  std::vector<SimReport> tail;
  std::vector<SimReport> ec;
  std::vector<SimReport> tube;  ///< level = rho matching each u
  std::vector<bool> valid;
  /// Nonempty excursion sets at valid levels, and how many had Euler
  /// characteristic different from their component count.
  std::int64_t lemma_checked = 0;
  std::int64_t lemma_violations = 0;
  double mean_sup = 0.0;
  double sup_std_error = 0.0;
};

/// Tail and Euler-characteristic estimates from one set of runs, plus an
/// independent tube-hit pass. Results do not depend on the thread count.
SimulationResult simulate(const SimulationConfig& config, const SphereMesh& mesh);

}  // namespace sphreach

#endif  // SPHREACH_MONTECARLO_HPP
