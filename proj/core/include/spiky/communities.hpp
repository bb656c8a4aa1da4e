#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "spiky/factorization.hpp"
#include "spiky/sparse.hpp"
#include "spiky/spikes.hpp"

namespace spiky {

/// Degree-corrected block-model parameters. Community labels are 0-based.
/// The block matrix b is symmetric with entries in [0, 1] and unit diagonal;
/// per-node degree parameters alphas lie in [0, 1].
struct DcbmSpec {
  std::vector<std::int32_t> partition;
  Matrix b;
  std::vector<double> alphas;

  std::int64_t n() const noexcept { return static_cast<std::int64_t>(partition.size()); }
  std::int64_t num_communities() const noexcept { return b.rows(); }
  void validate() const;
  /// b(k, k) > b(k, l) for every l != k.
  bool assortative() const;

  nlohmann::json to_json() const;
  static DcbmSpec from_json(const nlohmann::json& j);
};

/// Adjacency sample: edge (i, j), i < j, present with probability
/// b(C(i), C(j)). Zero diagonal. Deterministic per seed.
SparseSymmetric sample_sbm(const std::vector<std::int32_t>& partition, const Matrix& b,
                           std::uint64_t seed);

/// Adjacency sample with edge probability alpha_i * alpha_j * b(C(i), C(j)).
/// With unit alphas this consumes the same random stream as sample_sbm and
/// yields an identical adjacency for the same seed.
SparseSymmetric sample_dcbm(const DcbmSpec& spec, std::uint64_t seed);

/// Dense mean matrix: entry (i, j) = alpha_i * alpha_j * b(C(i), C(j)),
/// diagonal included.
Matrix dcbm_mean(const DcbmSpec& spec);

struct SynthSpikesConfig {
  std::int64_t num_spikes = 3;
  std::vector<std::int64_t> sizes;  // one per spike
  double alpha_min = 0.5;           // alpha range subset of (0, 1]
  double alpha_max = 1.0;
  std::int64_t noise_count = 0;
  double noise_scale = 0.5;  // noise norms stay below alpha_min * noise_scale
  std::int64_t f = 16;       // must be >= num_spikes
  std::uint64_t seed = 0;
};

struct SynthSpikes {
  Embeddings embeddings;
  std::vector<std::int32_t> labels;  // ground truth; -1 for noise rows
  std::vector<double> alphas;        // ground-truth row norms
  RowMatrix directions;              // num_spikes x f unit vectors
};

/// Draws num_spikes random unit directions with pairwise |cos| < 0.8, places
/// sizes[k] points at alpha * s_k with alpha uniform in the alpha range, then
/// appends isotropic noise rows with strictly smaller norms. Spike rows come
/// first, in community order.
SynthSpikes synth_spiky_embeddings(const SynthSpikesConfig& cfg);

/// Agreement report between the reconstructed matrix restricted to spike rows
/// and the block-model mean implied by the cover.
struct TheoremReport {
  Matrix b_estimate;  // num_spikes x num_spikes, |<s_k, s'_l>|
  double alpha_max = 0.0;
  double max_abs_deviation = 0.0;
  double mean_abs_deviation = 0.0;
  double most_negative_entry = 0.0;  // most negative reconstructed spike cell
  std::int64_t n_prime = 0;
  bool pass = false;

  nlohmann::json to_json() const;
};

/// Compares |reconstruct(fac)| restricted to covered rows against the
/// prediction alpha_i * alpha_j * |<s_C(i), s'_C(j)>| with s'_l = s_l *
/// diag(signs). Diagonal cells are excluded from the deviation statistics.
/// Requires fac.f == e.f with e the embeddings the cover was computed on;
/// the identity is exact (up to rounding) for square-root-scaled embeddings,
/// i.e. e = make_embeddings(fac, 0.5).
TheoremReport verify_theorem(const Embeddings& e, const SpikeCover& cover,
                             const Factorization& fac, double tolerance);

/// Row norms normalized by the largest covered norm, so recovered values lie
/// in [0, 1].
std::vector<double> recover_alphas(const SpikeCover& cover);

}  // namespace spiky
