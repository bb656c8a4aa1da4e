#include "spiky/communities.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "spiky/errors.hpp"

namespace spiky {

namespace {

void validate_block_matrix(const Matrix& b) {
  if (b.rows() != b.cols() || b.rows() < 1) {
    throw InvalidArgument("block matrix must be square and non-empty");
  }
  for (std::int64_t i = 0; i < b.rows(); ++i) {
    for (std::int64_t j = 0; j < b.cols(); ++j) {
      double v = b(i, j);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw InvalidArgument("block matrix entries must lie in [0, 1]");
      }
      if (b(i, j) != b(j, i)) throw InvalidArgument("block matrix must be symmetric");
    }
  }
}

void validate_partition(const std::vector<std::int32_t>& partition, std::int64_t k) {
  if (partition.empty()) throw InvalidArgument("partition must be non-empty");
  for (std::int32_t label : partition) {
    if (label < 0 || label >= k) {
      throw InvalidArgument("community label " + std::to_string(label) +
                            " outside [0, " + std::to_string(k) + ")");
    }
  }
}

// One uniform draw per (i < j) pair in row-major order; the stream consumed
// is identical for every probability function.
SparseSymmetric sample_edges(std::int64_t n, const std::function<double(std::int64_t, std::int64_t)>& prob,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<Triplet> edges;
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = i + 1; j < n; ++j) {
      double u = u01(rng);
      double p = prob(i, j);
      if (!(p >= 0.0 && p <= 1.0)) throw NumericError("edge probability outside [0, 1]");
      if (u < p) edges.push_back({i, j, 1.0});
    }
  }
  return SparseSymmetric::from_triplets(n, std::move(edges));
}

}  // namespace

void DcbmSpec::validate() const {
  validate_block_matrix(b);
  validate_partition(partition, num_communities());
  if (alphas.size() != partition.size()) {
    throw InvalidArgument("alphas must have one entry per node");
  }
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) throw InvalidArgument("alphas must lie in [0, 1]");
  }
  for (std::int64_t k = 0; k < num_communities(); ++k) {
    if (b(k, k) != 1.0) {
      throw InvalidArgument("block matrix diagonal must be normalized to 1");
    }
  }
}

bool DcbmSpec::assortative() const {
  for (std::int64_t k = 0; k < num_communities(); ++k) {
    for (std::int64_t l = 0; l < num_communities(); ++l) {
      if (k != l && !(b(k, k) > b(k, l))) return false;
    }
  }
  return true;
}

nlohmann::json DcbmSpec::to_json() const {
  nlohmann::json j;
  j["partition"] = partition;
  j["alphas"] = alphas;
  auto rows = nlohmann::json::array();
  for (std::int64_t i = 0; i < b.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (std::int64_t k = 0; k < b.cols(); ++k) row.push_back(b(i, k));
    rows.push_back(std::move(row));
  }
  j["b"] = std::move(rows);
  return j;
}

DcbmSpec DcbmSpec::from_json(const nlohmann::json& j) {
  for (const auto& [key, value] : j.items()) {
    if (key != "partition" && key != "b" && key != "alphas") {
      throw InvalidArgument("unknown key '" + key + "' in block-model spec");
    }
  }
  DcbmSpec spec;
  try {
    spec.partition = j.at("partition").get<std::vector<std::int32_t>>();
    spec.alphas = j.at("alphas").get<std::vector<double>>();
    auto rows = j.at("b");
    const auto k = static_cast<std::int64_t>(rows.size());
    spec.b.resize(k, k);
    for (std::int64_t i = 0; i < k; ++i) {
      if (static_cast<std::int64_t>(rows[static_cast<std::size_t>(i)].size()) != k) {
        throw InvalidArgument("block matrix rows must have equal length");
      }
      for (std::int64_t c = 0; c < k; ++c) {
        spec.b(i, c) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)].get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed block-model spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

SparseSymmetric sample_sbm(const std::vector<std::int32_t>& partition, const Matrix& b,
                           std::uint64_t seed) {
  validate_block_matrix(b);
  validate_partition(partition, b.rows());
  const auto n = static_cast<std::int64_t>(partition.size());
  return sample_edges(
      n,
      [&](std::int64_t i, std::int64_t j) {
        return b(partition[static_cast<std::size_t>(i)], partition[static_cast<std::size_t>(j)]);
      },
      seed);
}

SparseSymmetric sample_dcbm(const DcbmSpec& spec, std::uint64_t seed) {
  spec.validate();
  return sample_edges(
      spec.n(),
      [&](std::int64_t i, std::int64_t j) {
        return spec.alphas[static_cast<std::size_t>(i)] *
               spec.alphas[static_cast<std::size_t>(j)] *
               spec.b(spec.partition[static_cast<std::size_t>(i)],
                      spec.partition[static_cast<std::size_t>(j)]);
      },
      seed);
}

Matrix dcbm_mean(const DcbmSpec& spec) {
  spec.validate();
  const std::int64_t n = spec.n();
  Matrix out(n, n);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      out(i, j) = spec.alphas[static_cast<std::size_t>(i)] *
                  spec.alphas[static_cast<std::size_t>(j)] *
                  spec.b(spec.partition[static_cast<std::size_t>(i)],
                         spec.partition[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

SynthSpikes synth_spiky_embeddings(const SynthSpikesConfig& cfg) {
  const std::int64_t k = cfg.num_spikes;
  if (k < 1) throw InvalidArgument("need at least one spike");
  if (cfg.f < k) {
    throw InvalidArgument("f = " + std::to_string(cfg.f) + " cannot host " +
                          std::to_string(k) + " spike directions");
  }
  if (static_cast<std::int64_t>(cfg.sizes.size()) != k) {
    throw InvalidArgument("sizes must list one count per spike");
  }
  for (std::int64_t s : cfg.sizes) {
    if (s < 1) throw InvalidArgument("spike sizes must be positive");
  }
  if (!(cfg.alpha_min > 0.0 && cfg.alpha_min <= cfg.alpha_max && cfg.alpha_max <= 1.0)) {
    throw InvalidArgument("alpha range must be a subset of (0, 1]");
  }
  if (cfg.noise_count < 0) throw InvalidArgument("noise_count must be non-negative");
  if (cfg.noise_count > 0 && !(cfg.noise_scale > 0.0 && cfg.noise_scale < 1.0)) {
    throw InvalidArgument("noise_scale must lie in (0, 1)");
  }

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> alpha_draw(cfg.alpha_min, cfg.alpha_max);

  auto random_unit = [&]() {
    Eigen::RowVectorXd v(cfg.f);
    do {
      for (std::int64_t a = 0; a < cfg.f; ++a) v(a) = normal(rng);
    } while (v.norm() == 0.0);
    return Eigen::RowVectorXd(v / v.norm());
  };

  // Rejection-sample pairwise-separated directions (|cos| < 0.8 keeps spikes
  // distinct at the usual 0.9 threshold).
  SynthSpikes out;
  out.directions.resize(k, cfg.f);
  for (std::int64_t s = 0; s < k; ++s) {
    constexpr int kMaxAttempts = 100000;
    int attempt = 0;
    while (true) {
      if (++attempt > kMaxAttempts) {
        throw NumericError("could not place separated spike directions");
      }
      Eigen::RowVectorXd v = random_unit();
      bool ok = true;
      for (std::int64_t prev = 0; prev < s; ++prev) {
        if (std::abs(v.dot(out.directions.row(prev))) >= 0.8) {
          ok = false;
          break;
        }
      }
      if (ok) {
        out.directions.row(s) = v;
        break;
      }
    }
  }

  std::int64_t total = cfg.noise_count;
  for (std::int64_t s : cfg.sizes) total += s;

  out.embeddings.e.resize(total, cfg.f);
  out.embeddings.p = 1.0;
  out.embeddings.row_ids = default_row_ids(total);
  out.labels.reserve(static_cast<std::size_t>(total));
  out.alphas.reserve(static_cast<std::size_t>(total));

  std::int64_t row = 0;
  for (std::int64_t s = 0; s < k; ++s) {
    for (std::int64_t c = 0; c < cfg.sizes[static_cast<std::size_t>(s)]; ++c, ++row) {
      double alpha = alpha_draw(rng);
      out.embeddings.e.row(row) = alpha * out.directions.row(s);
      out.labels.push_back(static_cast<std::int32_t>(s));
      out.alphas.push_back(alpha);
    }
  }
  const double bound = cfg.alpha_min * cfg.noise_scale;
  std::uniform_real_distribution<double> noise_norm(0.1 * bound, 0.9 * bound);
  for (std::int64_t c = 0; c < cfg.noise_count; ++c, ++row) {
    double norm = noise_norm(rng);
    out.embeddings.e.row(row) = norm * random_unit();
    out.labels.push_back(-1);
    out.alphas.push_back(norm);
  }
  return out;
}

TheoremReport verify_theorem(const Embeddings& e, const SpikeCover& cover,
                             const Factorization& fac, double tolerance) {
  if (cover.n != e.n()) throw InvalidArgument("cover does not match the embeddings");
  if (fac.n() != e.n() || fac.f() != e.f()) {
    throw InvalidArgument("factorization does not match the embeddings");
  }
  if (tolerance < 0.0) throw InvalidArgument("tolerance must be non-negative");

  std::vector<std::int64_t> spike_rows;
  for (std::int64_t i = 0; i < cover.n; ++i) {
    if (cover.assignment[static_cast<std::size_t>(i)] >= 0) spike_rows.push_back(i);
  }
  if (spike_rows.empty()) throw InvalidArgument("cover assigns no rows to spikes");

  const std::int64_t k = cover.num_spikes();

  // s'_l = s_l * diag(signs), in embedding coordinates.
  RowMatrix flipped = cover.directions;
  for (std::int64_t a = 0; a < flipped.cols(); ++a) {
    if (fac.signs[static_cast<std::size_t>(a)] < 0) flipped.col(a) = -flipped.col(a);
  }
  TheoremReport report;
  report.b_estimate.resize(k, k);
  for (std::int64_t a = 0; a < k; ++a) {
    for (std::int64_t b = 0; b < k; ++b) {
      report.b_estimate(a, b) = std::abs(cover.directions.row(a).dot(flipped.row(b)));
    }
  }

  report.n_prime = static_cast<std::int64_t>(spike_rows.size());
  report.alpha_max = 0.0;
  for (std::int64_t i : spike_rows) {
    report.alpha_max = std::max(report.alpha_max, cover.alphas[static_cast<std::size_t>(i)]);
  }

  const Matrix m_hat = reconstruct(fac);

  double max_dev = 0.0;
  double sum_dev = 0.0;
  double most_negative = 0.0;
  std::int64_t pairs = 0;
  for (std::int64_t a = 0; a < report.n_prime; ++a) {
    const std::int64_t i = spike_rows[static_cast<std::size_t>(a)];
    const auto ci = cover.assignment[static_cast<std::size_t>(i)];
    for (std::int64_t b = 0; b < report.n_prime; ++b) {
      if (a == b) continue;  // diagonal excluded from the statistics
      const std::int64_t j = spike_rows[static_cast<std::size_t>(b)];
      const auto cj = cover.assignment[static_cast<std::size_t>(j)];
      double actual = m_hat(i, j);
      most_negative = std::min(most_negative, actual);
      double predicted = cover.alphas[static_cast<std::size_t>(i)] *
                         cover.alphas[static_cast<std::size_t>(j)] * report.b_estimate(ci, cj);
      double dev = std::abs(std::abs(actual) - predicted);
      max_dev = std::max(max_dev, dev);
      sum_dev += dev;
      ++pairs;
    }
  }
  report.max_abs_deviation = max_dev;
  report.mean_abs_deviation = pairs > 0 ? sum_dev / static_cast<double>(pairs) : 0.0;
  report.most_negative_entry = most_negative;
  report.pass = max_dev <= tolerance;
  return report;
}

nlohmann::json TheoremReport::to_json() const {
  nlohmann::json j;
  auto rows = nlohmann::json::array();
  for (std::int64_t i = 0; i < b_estimate.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (std::int64_t c = 0; c < b_estimate.cols(); ++c) row.push_back(b_estimate(i, c));
    rows.push_back(std::move(row));
  }
  j["b_estimate"] = std::move(rows);
  j["alpha_max"] = alpha_max;
  j["max_abs_deviation"] = max_abs_deviation;
  j["mean_abs_deviation"] = mean_abs_deviation;
  j["most_negative_entry"] = most_negative_entry;
  j["n_prime"] = n_prime;
  j["pass"] = pass;
  return j;
}

std::vector<double> recover_alphas(const SpikeCover& cover) {
  double alpha_max = 0.0;
  for (std::int64_t i = 0; i < cover.n; ++i) {
    if (cover.assignment[static_cast<std::size_t>(i)] >= 0) {
      alpha_max = std::max(alpha_max, cover.alphas[static_cast<std::size_t>(i)]);
    }
  }
  if (alpha_max == 0.0) throw InvalidArgument("cover assigns no rows to spikes");
  std::vector<double> out(cover.alphas.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = cover.alphas[i] / alpha_max;
  return out;
}

}  // namespace spiky
