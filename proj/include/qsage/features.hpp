#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qsage/ingest.hpp"
#include "qsage/matrix.hpp"

namespace qsage {

// The six predictive features plus label. submit_time is an ordering key,
// not a model input.
struct FeatureRow {
  std::int64_t submit_time = 0;
  double num_nodes = 0;
  double max_minutes = 0;
  double backlog_num_jobs = 0;
  double backlog_minutes = 0;
  double running_num_jobs = 0;
  double running_minutes = 0;
  double label_queue_minutes = 0;

  bool operator==(const FeatureRow&) const = default;
};

inline constexpr std::size_t kFeatureCount = 6;
inline constexpr const char* kFeatureHeader =
    "submit_ts,num_nodes,max_minutes,backlog_num_jobs,backlog_minutes,"
    "running_num_jobs,running_minutes,label_queue_minutes";

// Rebuilds the queue state each job observed at its submission instant.
//
// For job j submitted at t, the backlog is every other job with
// submit <= t and start > t; the running set is every other job with
// start <= t < end. Minute totals sum max_minutes over those sets
// (times num_nodes when node_weighted is set). Jobs never count
// themselves. Output is ordered by (submit_time, job_id).
//
// All records must belong to one queue; mixed queues throw DataError.
// Runs in O(n log n) via an event sweep.
std::vector<FeatureRow> reconstruct_queue_state(
    const std::vector<JobRecord>& records, bool node_weighted = false);

// Per-feature first and second moments, fitted on training rows only.
struct ScalerStats {
  std::vector<double> means;
  std::vector<double> stds;  // population standard deviation
};

ScalerStats fit_scaler(const Matrix& train);

// Z-scores each column with the training statistics. Zero-variance columns
// map to all zeros.
Matrix apply_scaler(const ScalerStats& stats, const Matrix& rows);

// Convenience wrapper: fit on `train`, transform `apply_to`.
std::pair<ScalerStats, Matrix> standardize(const Matrix& train,
                                           const Matrix& apply_to);

// Feature matrix (6 columns, fixed order) and label vector for modeling.
Matrix to_matrix(const std::vector<FeatureRow>& rows);
std::vector<double> labels_of(const std::vector<FeatureRow>& rows);

void write_feature_rows(std::ostream& out, const std::vector<FeatureRow>& rows);
std::vector<FeatureRow> read_feature_rows(std::istream& in);

}  // namespace qsage
