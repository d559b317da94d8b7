#pragma once

// Parameter sweeps. Each sweep has a serial reference and an OpenMP version;
// sample i draws from its own generator seeded by (seed, i), so both return
// identical rows.

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "g2kit/coflow.hpp"
#include "g2kit/liealg.hpp"

namespace g2kit {

std::mt19937_64 indexed_rng(std::uint64_t seed, std::uint64_t index);

/// Diagonal triple with traceless diagonals drawn uniformly from [-scale, scale].
BracketTriple random_diagonal_traceless_triple(std::mt19937_64& rng, double scale = 2.0);

/// Commuting, generally non-diagonal triple: polynomials in one random 4x4
/// matrix, made traceless.
BracketTriple random_commuting_triple(std::mt19937_64& rng, double scale = 1.0);

struct TorsionSweepRow {
  double tau0 = 0.0;
  double tau1_norm = 0.0;
  /// |tau2 + *dpsi| and |tau3 - *dphi|.
  double tau2_defect = 0.0;
  double tau3_defect = 0.0;
  std::string label;
  double F = 0.0;

  friend bool operator==(const TorsionSweepRow&, const TorsionSweepRow&) = default;
};

TorsionSweepRow torsion_row(const BracketTriple& t);
std::vector<TorsionSweepRow> torsion_sweep_serial(std::size_t n, std::uint64_t seed);
std::vector<TorsionSweepRow> torsion_sweep(std::size_t n, std::uint64_t seed);

struct SolitonSweepRow {
  std::array<double, 4> base{};
  std::size_t count = 0;
  double max_residual = 0.0;
  double max_lambda_error = 0.0;
  /// Smallest modified-coflow residual (m = 1) over the solutions; +inf when none.
  double min_modified_residual = 0.0;

  friend bool operator==(const SolitonSweepRow&, const SolitonSweepRow&) = default;
};

/// Random (a1, a2, b1, b2) in [-2, 2]^4, redrawn until both right-hand sides
/// of the soliton equations are nonnegative.
std::array<double, 4> random_admissible_base(std::mt19937_64& rng);
SolitonSweepRow soliton_row(const std::array<double, 4>& base);
std::vector<SolitonSweepRow> soliton_sweep_serial(std::size_t n, std::uint64_t seed);
std::vector<SolitonSweepRow> soliton_sweep(std::size_t n, std::uint64_t seed);

struct FlowSweepRow {
  CoclosedParams init;
  FlowStatus status = FlowStatus::running;
  FlowSample final_sample;
  long steps = 0;
  /// Normalized drift over the trailing window, NaN when not available.
  double window_drift = 0.0;
};

FlowSweepRow flow_row(const CoclosedParams& init, double t_max, const FlowOptions& opts);
std::vector<FlowSweepRow> flow_sweep_serial(std::span<const CoclosedParams> inits, double t_max,
                                            const FlowOptions& opts = {});
/// threads <= 0 uses the OpenMP default.
std::vector<FlowSweepRow> flow_sweep(std::span<const CoclosedParams> inits, double t_max,
                                     const FlowOptions& opts = {}, int threads = 0);

}  // namespace g2kit
