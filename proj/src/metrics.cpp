#include "metrics.hpp"

#include <cmath>
#include <json.hpp>
#include <string>

namespace fairgf {

namespace {

GroupCounts tally(const std::vector<int>& y_hat, const std::vector<int>& y,
                  const Vector* sensitive, const IndexSet& mask) {
  if (mask.empty()) {
    throw Error(ErrorKind::empty_mask, "metric mask is empty");
  }
  GroupCounts c;
  c.mask_size = static_cast<long>(mask.size());
  for (int i : mask) {
    if (i < 0 || i >= static_cast<int>(y_hat.size()) ||
        (!y.empty() && i >= static_cast<int>(y.size())) ||
        (sensitive && i >= static_cast<int>(sensitive->size()))) {
      throw Error(ErrorKind::dimension_mismatch,
                  "mask index " + std::to_string(i) +
                      " is outside the prediction vectors");
    }
    const int group = (sensitive && (*sensitive)[i] < 0.0) ? 0 : 1;
    c.group_size[group] += 1;
    if (y_hat[i] == 1) c.predicted_positive[group] += 1;
    if (!y.empty()) {
      if (y[i] == 1) {
        c.actual_positive[group] += 1;
        if (y_hat[i] == 1) c.true_positive[group] += 1;
      }
      if (y_hat[i] == y[i]) c.correct += 1;
    }
  }
  return c;
}

const char* group_name(int g) { return g == 0 ? "-1" : "+1"; }

}  // namespace

double accuracy(const std::vector<int>& y_hat, const std::vector<int>& y,
                const IndexSet& mask) {
  const GroupCounts c = tally(y_hat, y, nullptr, mask);
  return static_cast<double>(c.correct) / static_cast<double>(c.mask_size);
}

double statistical_parity(const std::vector<int>& y_hat,
                          const Vector& sensitive, const IndexSet& mask) {
  const GroupCounts c = tally(y_hat, {}, &sensitive, mask);
  for (int g = 0; g < 2; ++g) {
    if (c.group_size[g] == 0) {
      throw Error(ErrorKind::empty_group,
                  std::string("sensitive group s=") + group_name(g) +
                      " has no nodes in the mask");
    }
  }
  const double rate_neg = static_cast<double>(c.predicted_positive[0]) /
                          static_cast<double>(c.group_size[0]);
  const double rate_pos = static_cast<double>(c.predicted_positive[1]) /
                          static_cast<double>(c.group_size[1]);
  return std::abs(rate_neg - rate_pos);
}

double equal_opportunity(const std::vector<int>& y_hat,
                         const std::vector<int>& y, const Vector& sensitive,
                         const IndexSet& mask) {
  const GroupCounts c = tally(y_hat, y, &sensitive, mask);
  for (int g = 0; g < 2; ++g) {
    if (c.actual_positive[g] == 0) {
      throw Error(ErrorKind::empty_positive_group,
                  std::string("sensitive group s=") + group_name(g) +
                      " has no positive-label nodes in the mask");
    }
  }
  const double tpr_neg = static_cast<double>(c.true_positive[0]) /
                         static_cast<double>(c.actual_positive[0]);
  const double tpr_pos = static_cast<double>(c.true_positive[1]) /
                         static_cast<double>(c.actual_positive[1]);
  return std::abs(tpr_neg - tpr_pos);
}

FairnessReport evaluate_fairness(const std::vector<int>& y_hat,
                                 const std::vector<int>& y,
                                 const Vector& sensitive,
                                 const IndexSet& mask) {
  FairnessReport report;
  report.counts = tally(y_hat, y, &sensitive, mask);
  report.accuracy = accuracy(y_hat, y, mask);
  report.delta_sp = statistical_parity(y_hat, sensitive, mask);
  report.delta_eo = equal_opportunity(y_hat, y, sensitive, mask);
  return report;
}

std::string FairnessReport::to_json() const {
  nlohmann::json j;
  j["accuracy"] = accuracy;
  j["delta_sp"] = delta_sp;
  j["delta_eo"] = delta_eo;
  j["counts"] = {{"mask_size", counts.mask_size},
                 {"group_size", {counts.group_size[0], counts.group_size[1]}},
                 {"predicted_positive",
                  {counts.predicted_positive[0], counts.predicted_positive[1]}},
                 {"actual_positive",
                  {counts.actual_positive[0], counts.actual_positive[1]}},
                 {"true_positive",
                  {counts.true_positive[0], counts.true_positive[1]}},
                 {"correct", counts.correct}};
  return j.dump(2);
}

}  // namespace fairgf
