#pragma once

// Recomputes a fixed list of claims about the coflow family and records
// the computed value next to the stated one. Disagreement is data, not an
// error.

#include <string>
#include <vector>

#include "g2kit/coflow.hpp"

namespace g2kit {

struct AuditEntry {
  std::string claim_id;
  std::string paper_location;
  std::string computed_value;
  std::string paper_value;
  bool agrees = false;

  friend bool operator==(const AuditEntry&, const AuditEntry&) = default;
};

struct AuditReport {
  std::vector<AuditEntry> entries;

  friend bool operator==(const AuditReport&, const AuditReport&) = default;
};

/// 1/2 dN/dt = <p, ode_rhs(p)>.
double half_norm_derivative(const CoclosedParams& p);

struct SolitonCountHistogram {
  /// counts[k] = number of 4-tuples with k solutions, k = 0..4.
  std::array<std::size_t, 5> counts{};
  std::size_t tuples = 0;
};

/// Solution counts of soliton_solve over the grid values^4.
SolitonCountHistogram soliton_count_histogram(const std::vector<double>& values);

AuditReport run_audit();

}  // namespace g2kit
