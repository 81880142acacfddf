#ifndef FLOWDEP_METRICS_HPP
#define FLOWDEP_METRICS_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "flowdep/error.hpp"

namespace flowdep::metrics {

// One connection or ADU in the log10 domain. log_rate is stored as the
// subtraction log_size - log_duration, never re-derived from raw rate, so the
// rate identity holds to the bit downstream.
struct LogLogPoint {
  double log_size;
  double log_duration;
  double log_rate;
};

inline LogLogPoint to_log_point(std::uint64_t size_bytes, double duration_s) {
  if (size_bytes < 1) throw DomainError("size must be at least 1 byte");
  if (!std::isfinite(duration_s) || duration_s <= 0.0)
    throw DomainError("duration must be a positive finite number of seconds");
  const double log_size = std::log10(double(size_bytes));
  const double log_duration = std::log10(duration_s);
  return {log_size, log_duration, log_size - log_duration};
}

// Works for any summary type carrying conn_id / size_bytes / duration_s.
template <typename Summary>
std::vector<LogLogPoint> batch_log_points(const std::vector<Summary>& summaries) {
  std::vector<LogLogPoint> points;
  points.reserve(summaries.size());
  for (const auto& s : summaries) {
    try {
      points.push_back(to_log_point(s.size_bytes, s.duration_s));
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " (conn_id " + s.conn_id + ")");
    }
  }
  return points;
}

}  // namespace flowdep::metrics

#endif
