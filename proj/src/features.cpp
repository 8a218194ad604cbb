#include "qsage/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "qsage/errors.hpp"

namespace qsage {

namespace {

enum class EventKind : int { Submit = 0, Start = 1, End = 2 };

struct Event {
  std::int64_t time;
  EventKind kind;
  std::size_t job;
};

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

std::vector<FeatureRow> reconstruct_queue_state(
    const std::vector<JobRecord>& records, bool node_weighted) {
  if (records.empty()) return {};
  const std::string& queue = records.front().queue;
  for (const auto& rec : records) {
    if (rec.queue != queue) {
      throw DataError("reconstruct_queue_state: mixed queues '" + queue +
                      "' and '" + rec.queue + "'");
    }
  }

  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (records[a].submit_time != records[b].submit_time)
      return records[a].submit_time < records[b].submit_time;
    return records[a].job_id < records[b].job_id;
  });

  std::vector<Event> events;
  events.reserve(records.size() * 3);
  for (std::size_t i = 0; i < records.size(); ++i) {
    events.push_back({records[i].submit_time, EventKind::Submit, i});
    events.push_back({records[i].start_time, EventKind::Start, i});
    events.push_back({records[i].end_time, EventKind::End, i});
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.time != b.time) return a.time < b.time;
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });

  const auto weight = [&](const JobRecord& rec) {
    double w = static_cast<double>(rec.max_minutes);
    if (node_weighted) w *= static_cast<double>(rec.num_nodes);
    return w;
  };

  // Aggregate state after applying all events at or before the sweep time.
  double backlog_jobs = 0, backlog_minutes = 0;
  double running_jobs = 0, running_minutes = 0;
  std::size_t next_event = 0;

  std::vector<FeatureRow> rows;
  rows.reserve(records.size());
  for (std::size_t idx : order) {
    const JobRecord& job = records[idx];
    const std::int64_t t = job.submit_time;
    while (next_event < events.size() && events[next_event].time <= t) {
      const Event& ev = events[next_event++];
      const double w = weight(records[ev.job]);
      switch (ev.kind) {
        case EventKind::Submit:
          backlog_jobs += 1;
          backlog_minutes += w;
          break;
        case EventKind::Start:
          backlog_jobs -= 1;
          backlog_minutes -= w;
          running_jobs += 1;
          running_minutes += w;
          break;
        case EventKind::End:
          running_jobs -= 1;
          running_minutes -= w;
          break;
      }
    }

    FeatureRow row;
    row.submit_time = t;
    row.num_nodes = job.num_nodes;
    row.max_minutes = job.max_minutes;
    row.backlog_num_jobs = backlog_jobs;
    row.backlog_minutes = backlog_minutes;
    row.running_num_jobs = running_jobs;
    row.running_minutes = running_minutes;
    // The sweep counted the observing job itself; remove it from whichever
    // state it occupies at t.
    if (job.start_time > t) {
      row.backlog_num_jobs -= 1;
      row.backlog_minutes -= weight(job);
    } else if (job.end_time > t) {
      row.running_num_jobs -= 1;
      row.running_minutes -= weight(job);
    }
    row.label_queue_minutes = job.queue_time_minutes();
    rows.push_back(row);
  }
  return rows;
}

ScalerStats fit_scaler(const Matrix& train) {
  if (train.empty()) throw DataError("fit_scaler: empty training set");
  const std::size_t d = train.cols();
  ScalerStats stats;
  stats.means.assign(d, 0.0);
  stats.stds.assign(d, 0.0);
  const double n = static_cast<double>(train.rows());
  for (std::size_t r = 0; r < train.rows(); ++r)
    for (std::size_t c = 0; c < d; ++c) stats.means[c] += train.at(r, c);
  for (double& m : stats.means) m /= n;
  for (std::size_t r = 0; r < train.rows(); ++r)
    for (std::size_t c = 0; c < d; ++c) {
      const double dev = train.at(r, c) - stats.means[c];
      stats.stds[c] += dev * dev;
    }
  for (double& s : stats.stds) s = std::sqrt(s / n);
  return stats;
}

Matrix apply_scaler(const ScalerStats& stats, const Matrix& rows) {
  if (rows.cols() != stats.means.size())
    throw std::invalid_argument("apply_scaler: column count mismatch");
  Matrix out(rows.rows(), rows.cols());
  for (std::size_t r = 0; r < rows.rows(); ++r)
    for (std::size_t c = 0; c < rows.cols(); ++c) {
      const double sd = stats.stds[c];
      out.at(r, c) = sd > 0.0 ? (rows.at(r, c) - stats.means[c]) / sd : 0.0;
    }
  return out;
}

std::pair<ScalerStats, Matrix> standardize(const Matrix& train,
                                           const Matrix& apply_to) {
  ScalerStats stats = fit_scaler(train);
  Matrix transformed = apply_scaler(stats, apply_to);
  return {std::move(stats), std::move(transformed)};
}

Matrix to_matrix(const std::vector<FeatureRow>& rows) {
  Matrix m(rows.size(), kFeatureCount);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const FeatureRow& r = rows[i];
    m.at(i, 0) = r.num_nodes;
    m.at(i, 1) = r.max_minutes;
    m.at(i, 2) = r.backlog_num_jobs;
    m.at(i, 3) = r.backlog_minutes;
    m.at(i, 4) = r.running_num_jobs;
    m.at(i, 5) = r.running_minutes;
  }
  return m;
}

std::vector<double> labels_of(const std::vector<FeatureRow>& rows) {
  std::vector<double> y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) y[i] = rows[i].label_queue_minutes;
  return y;
}

void write_feature_rows(std::ostream& out, const std::vector<FeatureRow>& rows) {
  out << kFeatureHeader << '\n';
  for (const FeatureRow& r : rows) {
    out << r.submit_time << ',' << format_double(r.num_nodes) << ','
        << format_double(r.max_minutes) << ','
        << format_double(r.backlog_num_jobs) << ','
        << format_double(r.backlog_minutes) << ','
        << format_double(r.running_num_jobs) << ','
        << format_double(r.running_minutes) << ','
        << format_double(r.label_queue_minutes) << '\n';
  }
}

std::vector<FeatureRow> read_feature_rows(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("feature rows: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kFeatureHeader)
    throw DataError("feature rows: bad header, expected '" +
                    std::string(kFeatureHeader) + "'");

  std::vector<FeatureRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    FeatureRow r;
    double fields[8];
    std::size_t pos = 0;
    for (int f = 0; f < 8; ++f) {
      const std::size_t comma = line.find(',', pos);
      const std::size_t end = comma == std::string::npos ? line.size() : comma;
      const char* first = line.data() + pos;
      const char* last = line.data() + end;
      auto [ptr, ec] = std::from_chars(first, last, fields[f]);
      if (ec != std::errc() || ptr != last || (f < 7 && comma == std::string::npos) ||
          (f == 7 && comma != std::string::npos)) {
        throw DataError("feature rows: malformed line " + std::to_string(line_no));
      }
      pos = end + 1;
    }
    r.submit_time = static_cast<std::int64_t>(fields[0]);
    r.num_nodes = fields[1];
    r.max_minutes = fields[2];
    r.backlog_num_jobs = fields[3];
    r.backlog_minutes = fields[4];
    r.running_num_jobs = fields[5];
    r.running_minutes = fields[6];
    r.label_queue_minutes = fields[7];
    rows.push_back(r);
  }
  return rows;
}

}  // namespace qsage
