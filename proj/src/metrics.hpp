#pragma once

#include <string>
#include <vector>

#include "graph.hpp"

namespace fairgf {

/// Node indices a metric is evaluated over.
using IndexSet = std::vector<int>;

/// Per-group tallies behind the three metrics. Index 0 is the s = -1 group,
/// index 1 the s = +1 group; all counts are restricted to the mask.
struct GroupCounts {
  long group_size[2] = {0, 0};
  long predicted_positive[2] = {0, 0};   // y_hat = 1
  long actual_positive[2] = {0, 0};      // y = 1
  long true_positive[2] = {0, 0};        // y_hat = 1 and y = 1
  long correct = 0;                      // y_hat = y
  long mask_size = 0;
};

/// Fraction of masked nodes with y_hat = y. Throws empty_mask.
double accuracy(const std::vector<int>& y_hat, const std::vector<int>& y,
                const IndexSet& mask);

/// | P(y_hat=1 | s=-1) - P(y_hat=1 | s=+1) | over the mask; empirical
/// frequencies, no smoothing. Throws empty_group if a sensitive group has
/// no masked nodes.
double statistical_parity(const std::vector<int>& y_hat,
                          const Vector& sensitive, const IndexSet& mask);

/// | P(y_hat=1 | y=1, s=-1) - P(y_hat=1 | y=1, s=+1) | over the mask.
/// Throws empty_positive_group if a group has no masked node with y = 1;
/// returning 0 there would fake perfect fairness on degenerate splits.
double equal_opportunity(const std::vector<int>& y_hat,
                         const std::vector<int>& y, const Vector& sensitive,
                         const IndexSet& mask);

struct FairnessReport {
  double accuracy = 0.0;
  double delta_sp = 0.0;
  double delta_eo = 0.0;
  GroupCounts counts;

  std::string to_json() const;
};

/// All three metrics in one pass over the mask.
FairnessReport evaluate_fairness(const std::vector<int>& y_hat,
                                 const std::vector<int>& y,
                                 const Vector& sensitive,
                                 const IndexSet& mask);

}  // namespace fairgf
