#ifndef FLOWDEP_INGEST_HPP
#define FLOWDEP_INGEST_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "flowdep/error.hpp"
#include "flowdep/text.hpp"

namespace flowdep::ingest {

enum class Direction : std::uint8_t { AtoB, BtoA };

inline char direction_char(Direction d) { return d == Direction::AtoB ? 'A' : 'B'; }

// One data-carrying packet observation. Input files need not be ordered;
// aggregation sorts per connection.
struct PacketEvent {
  std::string conn_id;
  double timestamp = 0.0;  // seconds since epoch, microsecond precision
  Direction direction = Direction::AtoB;
  std::uint64_t payload_bytes = 0;
  std::uint16_t dst_port = 0;
};

// Whole-connection transfer record. Zero-duration connections (including all
// single-packet ones) are filtered out before this type is produced.
struct ConnectionSummary {
  std::string conn_id;
  std::uint64_t size_bytes = 0;  // both directions
  double duration_s = 0.0;       // last packet timestamp - first
  std::uint64_t packet_count = 0;
  bool is_http = false;
};

// One application data unit within a connection.
struct AduSummary {
  std::string conn_id;
  std::uint32_t adu_index = 0;
  Direction direction = Direction::AtoB;
  std::uint64_t size_bytes = 0;
  double duration_s = 0.0;
  bool is_http = false;
};

using PortSet = std::set<std::uint16_t>;

inline const PortSet& default_http_ports() {
  static const PortSet ports{80, 8080};
  return ports;
}

// Port-membership proxy for "used for HTTP": true iff any destination port
// observed on the connection is in http_ports.
inline bool classify_http(const PortSet& observed_dst_ports, const PortSet& http_ports) {
  for (std::uint16_t p : observed_dst_ports)
    if (http_ports.count(p)) return true;
  return false;
}

// --- packet-event format ----------------------------------------------------
// UTF-8 CSV, one event per line: conn_id,timestamp,direction,payload_bytes,dst_port
// direction is A or B; '#' comment lines and blank lines are skipped; no header.

namespace detail {

// One validated line; false for comments and blanks.
inline bool parse_packet_line(std::string_view line, std::size_t line_no, PacketEvent& ev) {
  if (is_skippable_line(line)) return false;
  const auto fields = split_fields(line);
  if (fields.size() != 5)
    throw InputError("expected 5 fields, got " + std::to_string(fields.size()), line_no);

  if (fields[0].empty()) throw InputError("empty conn_id", line_no);
  ev.conn_id.assign(fields[0]);

  if (!parse_f64(fields[1], ev.timestamp) || !std::isfinite(ev.timestamp) ||
      ev.timestamp < 0.0)
    throw InputError("invalid timestamp", line_no);

  if (fields[2] == "A")
    ev.direction = Direction::AtoB;
  else if (fields[2] == "B")
    ev.direction = Direction::BtoA;
  else
    throw InputError("invalid direction", line_no);

  if (!parse_u64(fields[3], ev.payload_bytes))
    throw InputError("invalid payload_bytes", line_no);

  std::uint64_t port = 0;
  if (!parse_u64(fields[4], port) || port > 65535)
    throw InputError("invalid dst_port", line_no);
  ev.dst_port = std::uint16_t(port);
  return true;
}

}  // namespace detail

inline std::vector<PacketEvent> parse_packet_events(std::istream& in) {
  std::vector<PacketEvent> events;
  std::string raw;
  std::size_t line_no = 0;
  PacketEvent ev;
  while (std::getline(in, raw)) {
    ++line_no;
    if (detail::parse_packet_line(strip_cr(raw), line_no, ev)) events.push_back(ev);
  }
  return events;
}

namespace detail {

struct ConnAccumulator {
  double first_ts = 0.0;
  double last_ts = 0.0;
  std::uint64_t bytes = 0;
  std::uint64_t packets = 0;
  PortSet dst_ports;
};

using ConnAccumulatorMap = std::unordered_map<std::string, ConnAccumulator>;

inline void accumulate_event(ConnAccumulatorMap& acc, const PacketEvent& ev) {
  auto [it, inserted] = acc.try_emplace(ev.conn_id);
  auto& a = it->second;
  if (inserted) {
    a.first_ts = ev.timestamp;
    a.last_ts = ev.timestamp;
  } else {
    a.first_ts = std::min(a.first_ts, ev.timestamp);
    a.last_ts = std::max(a.last_ts, ev.timestamp);
  }
  a.bytes += ev.payload_bytes;
  a.packets += 1;
  a.dst_ports.insert(ev.dst_port);
}

inline std::vector<ConnectionSummary> finalize_connections(ConnAccumulatorMap& acc,
                                                           const PortSet& http_ports) {
  std::vector<ConnectionSummary> out;
  out.reserve(acc.size());
  for (auto& [conn_id, a] : acc) {
    const double duration = a.last_ts - a.first_ts;
    if (duration <= 0.0) continue;  // single packet or all timestamps equal
    if (a.bytes == 0) continue;     // pure-ACK connection, no data transferred
    ConnectionSummary s;
    s.conn_id = conn_id;
    s.size_bytes = a.bytes;
    s.duration_s = duration;
    s.packet_count = a.packets;
    s.is_http = classify_http(a.dst_ports, http_ports);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(),
            [](const ConnectionSummary& a, const ConnectionSummary& b) {
              return a.conn_id < b.conn_id;
            });
  return out;
}

// Events grouped per connection, preserving input order within each group.
inline std::unordered_map<std::string, std::vector<std::size_t>> group_by_conn(
    std::span<const PacketEvent> events) {
  std::unordered_map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < events.size(); ++i)
    groups[events[i].conn_id].push_back(i);
  return groups;
}

}  // namespace detail

// size = sum of payload bytes over both directions, duration = last - first
// timestamp. Connections with duration 0 are dropped. Output is sorted by
// conn_id, so results do not depend on input order or hashing.
inline std::vector<ConnectionSummary> aggregate_connections(
    std::span<const PacketEvent> events, const PortSet& http_ports = default_http_ports()) {
  detail::ConnAccumulatorMap acc;
  for (const auto& ev : events) detail::accumulate_event(acc, ev);
  return detail::finalize_connections(acc, http_ports);
}

struct StreamAggregate {
  std::vector<ConnectionSummary> connections;
  std::uint64_t packet_count = 0;
};

// Line-by-line aggregation; memory is bounded by the number of distinct
// connections, events are never buffered. Equivalent to
// aggregate_connections(parse_packet_events(in)).
inline StreamAggregate aggregate_packet_stream(std::istream& in,
                                               const PortSet& http_ports = default_http_ports()) {
  detail::ConnAccumulatorMap acc;
  StreamAggregate result;
  std::string raw;
  std::size_t line_no = 0;
  PacketEvent ev;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!detail::parse_packet_line(strip_cr(raw), line_no, ev)) continue;
    detail::accumulate_event(acc, ev);
    result.packet_count += 1;
  }
  result.connections = detail::finalize_connections(acc, http_ports);
  return result;
}

// Heuristic ADU segmentation: within a connection (sorted by timestamp), a new
// ADU starts when the packet direction flips or the inter-packet gap exceeds
// quiet_threshold_s. Zero-duration ADUs are dropped, mirroring the connection
// filter; surviving ADUs are re-indexed consecutively from 0.
inline std::vector<AduSummary> segment_adus(std::span<const PacketEvent> events,
                                            double quiet_threshold_s,
                                            const PortSet& http_ports = default_http_ports()) {
  if (!(quiet_threshold_s > 0.0) || !std::isfinite(quiet_threshold_s))
    throw ConfigError("quiet threshold must be a positive number of seconds");

  auto groups = detail::group_by_conn(events);
  std::vector<std::string> conn_ids;
  conn_ids.reserve(groups.size());
  for (const auto& [id, _] : groups) conn_ids.push_back(id);
  std::sort(conn_ids.begin(), conn_ids.end());

  std::vector<AduSummary> out;
  for (const auto& conn_id : conn_ids) {
    auto& idx = groups[conn_id];
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return events[a].timestamp < events[b].timestamp;
    });

    PortSet ports;
    for (std::size_t i : idx) ports.insert(events[i].dst_port);
    const bool is_http = classify_http(ports, http_ports);

    std::uint32_t next_index = 0;
    std::size_t begin = 0;
    auto flush = [&](std::size_t end) {  // candidate ADU = events[idx[begin..end)]
      const double duration = events[idx[end - 1]].timestamp - events[idx[begin]].timestamp;
      std::uint64_t bytes = 0;
      for (std::size_t k = begin; k < end; ++k) bytes += events[idx[k]].payload_bytes;
      if (duration > 0.0 && bytes > 0) {  // zero-duration or pure-ACK: dropped
        AduSummary adu;
        adu.conn_id = conn_id;
        adu.adu_index = next_index++;
        adu.direction = events[idx[begin]].direction;
        adu.size_bytes = bytes;
        adu.duration_s = duration;
        adu.is_http = is_http;
        out.push_back(std::move(adu));
      }
      begin = end;
    };

    for (std::size_t k = 1; k < idx.size(); ++k) {
      const auto& prev = events[idx[k - 1]];
      const auto& cur = events[idx[k]];
      if (cur.direction != prev.direction || cur.timestamp - prev.timestamp > quiet_threshold_s)
        flush(k);
    }
    flush(idx.size());
  }
  return out;
}

// --- flow-summary format ----------------------------------------------------
// UTF-8 CSV: conn_id,size_bytes,duration_s,is_http with is_http in {0,1};
// '#' comment lines and blank lines skipped; no header.

inline std::vector<ConnectionSummary> parse_flow_summaries(
    std::istream& in, std::vector<std::string>* warnings = nullptr) {
  std::vector<ConnectionSummary> out;
  std::unordered_map<std::string, std::size_t> position;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = strip_cr(raw);
    if (is_skippable_line(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 4)
      throw InputError("expected 4 fields, got " + std::to_string(fields.size()), line_no);

    ConnectionSummary s;
    if (fields[0].empty()) throw InputError("empty conn_id", line_no);
    s.conn_id = std::string(fields[0]);

    if (!parse_u64(fields[1], s.size_bytes) || s.size_bytes < 1)
      throw InputError("invalid size_bytes", line_no);

    if (!parse_f64(fields[2], s.duration_s) || !std::isfinite(s.duration_s))
      throw InputError("invalid duration_s", line_no);
    if (s.duration_s <= 0.0) throw InputError("non-positive duration", line_no);

    if (fields[3] == "0")
      s.is_http = false;
    else if (fields[3] == "1")
      s.is_http = true;
    else
      throw InputError("invalid is_http flag", line_no);

    // The format carries no packet count; two packets are implied by a
    // positive duration.
    s.packet_count = 2;

    auto [it, inserted] = position.try_emplace(s.conn_id, out.size());
    if (inserted) {
      out.push_back(std::move(s));
    } else {
      if (warnings)
        warnings->push_back("duplicate conn_id '" + s.conn_id + "' at line " +
                            std::to_string(line_no) + ": keeping last occurrence");
      out[it->second] = std::move(s);
    }
  }
  return out;
}

inline void emit_flow_summaries(std::span<const ConnectionSummary> summaries,
                                std::ostream& os) {
  for (const auto& s : summaries)
    os << s.conn_id << ',' << s.size_bytes << ',' << format_double(s.duration_s) << ','
       << (s.is_http ? '1' : '0') << '\n';
}

// --- ADU format ---------------------------------------------------------------
// UTF-8 CSV: conn_id,adu_index,direction,size_bytes,duration_s,is_http

inline void emit_adus(std::span<const AduSummary> adus, std::ostream& os) {
  for (const auto& a : adus)
    os << a.conn_id << ',' << a.adu_index << ',' << direction_char(a.direction) << ','
       << a.size_bytes << ',' << format_double(a.duration_s) << ','
       << (a.is_http ? '1' : '0') << '\n';
}

inline std::vector<AduSummary> parse_adus(std::istream& in) {
  std::vector<AduSummary> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = strip_cr(raw);
    if (is_skippable_line(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 6)
      throw InputError("expected 6 fields, got " + std::to_string(fields.size()), line_no);

    AduSummary a;
    if (fields[0].empty()) throw InputError("empty conn_id", line_no);
    a.conn_id = std::string(fields[0]);

    std::uint64_t index = 0;
    if (!parse_u64(fields[1], index) || index > UINT32_MAX)
      throw InputError("invalid adu_index", line_no);
    a.adu_index = std::uint32_t(index);

    if (fields[2] == "A")
      a.direction = Direction::AtoB;
    else if (fields[2] == "B")
      a.direction = Direction::BtoA;
    else
      throw InputError("invalid direction", line_no);

    if (!parse_u64(fields[3], a.size_bytes) || a.size_bytes < 1)
      throw InputError("invalid size_bytes", line_no);

    if (!parse_f64(fields[4], a.duration_s) || !std::isfinite(a.duration_s))
      throw InputError("invalid duration_s", line_no);
    if (a.duration_s <= 0.0) throw InputError("non-positive duration", line_no);

    if (fields[5] == "0")
      a.is_http = false;
    else if (fields[5] == "1")
      a.is_http = true;
    else
      throw InputError("invalid is_http flag", line_no);

    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace flowdep::ingest

#endif
