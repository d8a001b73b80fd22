#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Dense>

#include "egin/ensemble.hpp"

namespace egin::sampling {

/// Identifies one independent random stream. Same (seed, stream_id) gives the
/// same sequence on every run and every worker count.
struct SeededStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

/// Philox4x32-10 counter-based generator. The key is the seed, the upper half
/// of the counter is the stream id and the lower half a block index, so
/// streams never overlap.
class Philox4x32 {
public:
  using Block = std::array<std::uint32_t, 4>;

  explicit Philox4x32(SeededStream s) : stream_(s) {}

  /// The raw bijection, exposed for known-answer tests.
  static Block bijection(Block counter, std::array<std::uint32_t, 2> key);

  Block next_block();
  std::uint64_t blocks_used() const { return index_; }

private:
  SeededStream stream_;
  std::uint64_t index_ = 0;
};

/// Standard normal variates by Box-Muller, two per Philox block.
class GaussianStream {
public:
  explicit GaussianStream(SeededStream s) : rng_(s) {}

  double next();
  /// Uniform on the open interval (0, 1) with 53 random bits.
  double next_uniform();

private:
  Philox4x32 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
  std::uint32_t pending_[2] = {0, 0};
  bool has_pending_ = false;
};

/// One matrix drawn from an ensemble. Only the member matching spec.kind is filled.
struct MatrixSample {
  EnsembleSpec spec;
  Eigen::MatrixXd real;
  Eigen::MatrixXcd complex;

  bool is_real() const { return spec.kind == Ensemble::RealElliptic; }
  /// Entries as a complex matrix for either kind.
  Eigen::MatrixXcd as_complex() const;
};

/// X = sqrt(1+tau) H1 + i sqrt(1-tau) H2 with H1, H2 independent Hermitian
/// Gaussians: diagonal variance 1/2, off-diagonal real and imaginary parts 1/4.
MatrixSample sample_eginue(const EnsembleSpec& spec, GaussianStream& g);

/// X = sqrt(1+tau) H + sqrt(1-tau) A, H real symmetric (diagonal variance 1,
/// off-diagonal 1/2), A real antisymmetric (off-diagonal 1/2).
MatrixSample sample_eginoe(const EnsembleSpec& spec, GaussianStream& g);

/// Dispatches on spec.kind.
MatrixSample sample(const EnsembleSpec& spec, GaussianStream& g);

/// Normalised log joint density of the entries,
///   eGinUE: -N^2 log pi - N^2/2 log(1-tau^2) - Tr(X X^* - tau Re X^2)/(1-tau^2)
///   eGinOE: -log Z - Tr(X X^T - tau X^2) / (2(1-tau^2)).
/// tau < 1.
double log_jpdf(const MatrixSample& m, double tau);

}  // namespace egin::sampling
