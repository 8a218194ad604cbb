#include "qsage/ingest.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include "qsage/errors.hpp"

namespace qsage {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return fields;
}

bool parse_i64(const std::string& s, std::int64_t& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && !s.empty();
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

ParseResult parse_log(std::istream& source) {
  std::string line;
  if (!std::getline(source, line)) {
    throw DataError("job log: empty input, expected header '" +
                    std::string(kJobLogHeader) + "'");
  }
  if (strip_cr(line) != kJobLogHeader) {
    throw DataError("job log: bad header, expected '" +
                    std::string(kJobLogHeader) + "'");
  }

  ParseResult result;
  std::size_t line_no = 1;
  while (std::getline(source, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;

    const auto fields = split_fields(line);
    if (fields.size() != 7) {
      result.errors.push_back({line_no, "expected 7 fields, got " +
                                            std::to_string(fields.size())});
      continue;
    }

    JobRecord rec;
    rec.job_id = fields[0];
    rec.queue = fields[1];
    std::int64_t nodes = 0;
    std::int64_t minutes = 0;
    if (rec.job_id.empty() || rec.queue.empty()) {
      result.errors.push_back({line_no, "empty job_id or queue"});
      continue;
    }
    if (!parse_i64(fields[2], rec.submit_time) ||
        !parse_i64(fields[3], rec.start_time) ||
        !parse_i64(fields[4], rec.end_time) || !parse_i64(fields[5], nodes) ||
        !parse_i64(fields[6], minutes)) {
      result.errors.push_back({line_no, "non-integer numeric field"});
      continue;
    }
    if (rec.submit_time < 0 || rec.start_time < 0 || rec.end_time < 0) {
      result.errors.push_back({line_no, "negative timestamp"});
      continue;
    }
    if (rec.submit_time > rec.start_time || rec.start_time > rec.end_time) {
      result.errors.push_back({line_no, "time ordering"});
      continue;
    }
    if (nodes < 1 || minutes < 1) {
      result.errors.push_back({line_no, "num_nodes and max_minutes must be >= 1"});
      continue;
    }
    rec.num_nodes = static_cast<int>(nodes);
    rec.max_minutes = static_cast<int>(minutes);
    result.records.push_back(std::move(rec));
  }
  return result;
}

CleanResult clean(const std::vector<JobRecord>& records,
                  int outlier_threshold_minutes) {
  CleanResult result;
  result.kept.reserve(records.size());
  for (const auto& rec : records) {
    if (rec.queue_time_minutes() > static_cast<double>(outlier_threshold_minutes)) {
      ++result.removed_count;
    } else {
      result.kept.push_back(rec);
    }
  }
  return result;
}

std::map<std::string, std::vector<JobRecord>> partition_by_queue(
    const std::vector<JobRecord>& records) {
  std::map<std::string, std::vector<JobRecord>> parts;
  for (const auto& rec : records) parts[rec.queue].push_back(rec);
  return parts;
}

void write_log(std::ostream& out, const std::vector<JobRecord>& records) {
  out << kJobLogHeader << '\n';
  for (const auto& rec : records) {
    out << rec.job_id << ',' << rec.queue << ',' << rec.submit_time << ','
        << rec.start_time << ',' << rec.end_time << ',' << rec.num_nodes << ','
        << rec.max_minutes << '\n';
  }
}

}  // namespace qsage
