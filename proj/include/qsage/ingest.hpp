#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace qsage {

// One accounting-log entry. Timestamps are epoch seconds UTC.
struct JobRecord {
  std::string job_id;
  std::string queue;
  std::int64_t submit_time = 0;
  std::int64_t start_time = 0;
  std::int64_t end_time = 0;
  int num_nodes = 1;
  int max_minutes = 1;  // requested wall time

  double queue_time_minutes() const {
    return static_cast<double>(start_time - submit_time) / 60.0;
  }

  bool operator==(const JobRecord&) const = default;
};

struct RowError {
  std::size_t line;  // 1-based line number in the source
  std::string message;
};

struct ParseResult {
  std::vector<JobRecord> records;
  std::vector<RowError> errors;
};

inline constexpr const char* kJobLogHeader =
    "job_id,queue,submit_ts,start_ts,end_ts,num_nodes,max_minutes";

// Parses the job-log CSV. Well-formed rows become JobRecords; malformed rows
// are reported with their line numbers, never dropped silently. A missing or
// wrong header throws DataError.
ParseResult parse_log(std::istream& source);

struct CleanResult {
  std::vector<JobRecord> kept;
  std::size_t removed_count = 0;
};

// Drops records whose queue time is strictly greater than the threshold.
// Default is two days, the request-time cap that makes longer waits outliers.
CleanResult clean(const std::vector<JobRecord>& records,
                  int outlier_threshold_minutes = 2880);

// Splits records by queue name, preserving input order within each queue.
std::map<std::string, std::vector<JobRecord>> partition_by_queue(
    const std::vector<JobRecord>& records);

// Writes records in the same CSV schema parse_log reads.
void write_log(std::ostream& out, const std::vector<JobRecord>& records);

}  // namespace qsage
