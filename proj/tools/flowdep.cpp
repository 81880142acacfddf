// flowdep: dependence analysis of internet flow size, duration and rate.
//
// Subcommands: ingest, summarize, corr-grid, truncnorm, simulate, edm,
// scatter. All table outputs carry a comment header with the exact invocation
// and version; identical flags and seeds reproduce identical bytes.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "flowdep/corr.hpp"
#include "flowdep/error.hpp"
#include "flowdep/extremal.hpp"
#include "flowdep/ingest.hpp"
#include "flowdep/metrics.hpp"
#include "flowdep/rng.hpp"
#include "flowdep/text.hpp"
#include "flowdep/truncnorm.hpp"
#include "flowdep/version.hpp"

namespace ingest = flowdep::ingest;
namespace metrics = flowdep::metrics;
namespace corr = flowdep::corr;
namespace extremal = flowdep::extremal;
namespace truncnorm = flowdep::truncnorm;
using flowdep::ConfigError;
using flowdep::DomainError;
using flowdep::InputError;

namespace {

struct InFile {
  std::ifstream file;
  std::istream* stream = nullptr;
};

InFile open_input(const std::string& path) {
  InFile in;
  if (path == "-") {
    in.stream = &std::cin;
    return in;
  }
  in.file.open(path, std::ios::binary);
  if (!in.file) throw InputError("cannot open input file: " + path);
  in.stream = &in.file;
  return in;
}

struct OutFile {
  std::ofstream file;
  std::ostream* stream = nullptr;
  std::string path;

  void finish() {
    stream->flush();
    if (!*stream) throw InputError("failed writing output: " + path);
  }
};

OutFile open_output(const std::string& path) {
  OutFile out;
  out.path = path;
  if (path == "-") {
    out.stream = &std::cout;
    return out;
  }
  out.file.open(path, std::ios::binary);
  if (!out.file) throw InputError("cannot open output file: " + path);
  out.stream = &out.file;
  return out;
}

std::string make_invocation(int argc, char** argv) {
  std::string s = std::filesystem::path(argv[0]).filename().string();
  for (int i = 1; i < argc; ++i) {
    s += ' ';
    s += argv[i];
  }
  return s;
}

std::vector<std::string> table_header(const std::string& invocation) {
  return {std::string("flowdep ") + flowdep::kVersion, "invocation: " + invocation};
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "flowdep: warning: " << w << "\n";
}

ingest::PortSet to_port_set(const std::vector<unsigned>& ports) {
  ingest::PortSet set;
  for (unsigned p : ports) {
    if (p > 65535) throw ConfigError("port out of range: " + std::to_string(p));
    set.insert(std::uint16_t(p));
  }
  if (set.empty()) throw ConfigError("http port set is empty");
  return set;
}

enum class SummaryFormat { Flows, Adus };

SummaryFormat parse_format(const std::string& name) {
  if (name == "flows") return SummaryFormat::Flows;
  if (name == "adus") return SummaryFormat::Adus;
  throw ConfigError("unknown input format: " + name);
}

corr::Pair parse_pair(const std::string& name) {
  const auto p = corr::pair_from_name(name);
  if (!p) throw ConfigError("unknown variable pair: " + name);
  return *p;
}

extremal::RadiusNorm parse_norm(const std::string& name) {
  if (name == "l2") return extremal::RadiusNorm::L2;
  if (name == "l1") return extremal::RadiusNorm::L1;
  throw ConfigError("unknown radius norm: " + name);
}

struct Population {
  std::vector<metrics::LogLogPoint> points;
  // raw coordinates for rank-based analysis
  std::vector<double> sizes;
  std::vector<double> durations;
  std::vector<double> rates;
};

// Loads either summary format, applies --http-only before anything is
// computed, and converts to log points. Percentages downstream are relative
// to the filtered population.
Population load_population(const std::string& path, SummaryFormat format, bool http_only) {
  auto in = open_input(path);
  Population pop;
  auto add = [&](const std::string& conn_id, std::uint64_t size_bytes, double duration_s) {
    pop.points.push_back(metrics::to_log_point(size_bytes, duration_s));
    pop.sizes.push_back(double(size_bytes));
    pop.durations.push_back(duration_s);
    pop.rates.push_back(double(size_bytes) / duration_s);
    (void)conn_id;
  };
  if (format == SummaryFormat::Flows) {
    std::vector<std::string> warnings;
    const auto flows = ingest::parse_flow_summaries(*in.stream, &warnings);
    print_warnings(warnings);
    for (const auto& f : flows)
      if (!http_only || f.is_http) add(f.conn_id, f.size_bytes, f.duration_s);
  } else {
    const auto adus = ingest::parse_adus(*in.stream);
    for (const auto& a : adus)
      if (!http_only || a.is_http) add(a.conn_id, a.size_bytes, a.duration_s);
  }
  if (pop.points.empty()) throw InputError("empty population after filtering");
  return pop;
}

void pair_raw_series(const Population& pop, corr::Pair pair, const std::vector<double>*& xs,
                     const std::vector<double>*& ys) {
  switch (pair) {
    case corr::Pair::SizeDuration:
      xs = &pop.sizes;
      ys = &pop.durations;
      return;
    case corr::Pair::SizeRate:
      xs = &pop.sizes;
      ys = &pop.rates;
      return;
    case corr::Pair::DurationRate:
      xs = &pop.durations;
      ys = &pop.rates;
      return;
  }
  throw ConfigError("unknown variable pair");
}

// --- subcommand configs -------------------------------------------------------

struct IngestConfig {
  std::string in = "-";
  std::string conns_out;
  std::string adus_out;
  std::vector<unsigned> http_ports{80, 8080};
  double quiet_threshold_s = 0.5;
};

struct SummarizeConfig {
  std::string in = "-";
  std::string out = "-";
  std::string format = "flows";
  std::vector<unsigned> http_ports{80, 8080};
};

struct GridConfig {
  std::string in = "-";
  std::string out = "-";
  std::string json_out;
  std::string format = "flows";
  std::string pair = "size-rate";
  std::vector<double> size_thresholds;
  std::vector<double> duration_thresholds;
  bool http_only = false;
};

struct TruncnormConfig {
  double rho = 0.0;
  std::optional<double> t;
  std::optional<double> a;
  double mu1 = 0.0;
  double sigma1 = 1.0;
  std::uint64_t mc_check = 0;
  std::uint64_t seed = 1;
};

struct SimulateConfig {
  std::string out = "-";
  std::uint64_t n = 0;
  std::uint64_t seed = 1;
  truncnorm::BivariateNormalParams params = truncnorm::default_simulation_params();
};

struct EdmConfig {
  std::string in = "-";
  std::string out = "-";
  std::string json_out;
  std::string angles_out;
  std::optional<double> angles_fraction;
  std::string format = "flows";
  std::string pair = "size-rate";
  std::string norm = "l2";
  std::vector<double> fractions;
  bool http_only = false;
};

struct ScatterConfig {
  std::string in = "-";
  std::string out = "-";
  std::string format = "flows";
  std::string pair = "size-rate";
  std::uint64_t max_points = 100000;
  std::uint64_t seed = 1;
  bool http_only = false;
};

// --- subcommand implementations -------------------------------------------------

void run_ingest(const IngestConfig& cfg, const std::string& invocation) {
  const auto ports = to_port_set(cfg.http_ports);
  auto in = open_input(cfg.in);

  std::vector<ingest::ConnectionSummary> conns;
  std::vector<ingest::AduSummary> adus;
  if (cfg.adus_out.empty()) {
    // no ADU output wanted: aggregate the stream without buffering events
    conns = ingest::aggregate_packet_stream(*in.stream, ports).connections;
  } else {
    const auto events = ingest::parse_packet_events(*in.stream);
    conns = ingest::aggregate_connections(events, ports);
    adus = ingest::segment_adus(events, cfg.quiet_threshold_s, ports);
  }

  auto conns_out = open_output(cfg.conns_out);
  for (const auto& line : table_header(invocation)) *conns_out.stream << "# " << line << "\n";
  ingest::emit_flow_summaries(conns, *conns_out.stream);
  conns_out.finish();

  if (!cfg.adus_out.empty()) {
    auto adus_out = open_output(cfg.adus_out);
    for (const auto& line : table_header(invocation)) *adus_out.stream << "# " << line << "\n";
    ingest::emit_adus(adus, *adus_out.stream);
    adus_out.finish();
  }
}

void run_summarize(const SummarizeConfig& cfg, const std::string& invocation) {
  auto in = open_input(cfg.in);
  std::uint64_t packets = 0;
  bool have_packets = false;
  std::uint64_t conns = 0, http_conns = 0;
  std::uint64_t bytes = 0, http_bytes = 0;
  SummaryFormat format = SummaryFormat::Flows;

  if (cfg.format == "packets") {
    const auto agg = ingest::aggregate_packet_stream(*in.stream, to_port_set(cfg.http_ports));
    packets = agg.packet_count;
    have_packets = true;
    for (const auto& c : agg.connections) {
      conns += 1;
      bytes += c.size_bytes;
      if (c.is_http) {
        http_conns += 1;
        http_bytes += c.size_bytes;
      }
    }
  } else if ((format = parse_format(cfg.format)) == SummaryFormat::Flows) {
    std::vector<std::string> warnings;
    for (const auto& c : ingest::parse_flow_summaries(*in.stream, &warnings)) {
      conns += 1;
      bytes += c.size_bytes;
      if (c.is_http) {
        http_conns += 1;
        http_bytes += c.size_bytes;
      }
    }
    print_warnings(warnings);
  } else {
    for (const auto& a : ingest::parse_adus(*in.stream)) {
      conns += 1;
      bytes += a.size_bytes;
      if (a.is_http) {
        http_conns += 1;
        http_bytes += a.size_bytes;
      }
    }
  }

  auto out = open_output(cfg.out);
  for (const auto& line : table_header(invocation)) *out.stream << "# " << line << "\n";
  *out.stream << "metric\tall\thttp\n";
  if (have_packets) *out.stream << "packets\t" << packets << "\t-\n";
  const char* unit = format == SummaryFormat::Adus ? "adus" : "connections";
  *out.stream << unit << "\t" << conns << "\t" << http_conns << "\n";
  *out.stream << "bytes\t" << bytes << "\t" << http_bytes << "\n";
  out.finish();
}

void run_corr_grid(const GridConfig& cfg, const std::string& invocation, unsigned threads) {
  const auto pop = load_population(cfg.in, parse_format(cfg.format), cfg.http_only);
  corr::ThresholdGrid grid = corr::default_grid();
  if (!cfg.size_thresholds.empty()) grid.size_thresholds_bytes = cfg.size_thresholds;
  if (!cfg.duration_thresholds.empty()) grid.duration_thresholds_s = cfg.duration_thresholds;
  const auto g = corr::corr_grid(pop.points, grid, parse_pair(cfg.pair), threads);

  auto out = open_output(cfg.out);
  corr::write_grid_tsv(g, *out.stream, table_header(invocation));
  out.finish();

  if (!cfg.json_out.empty()) {
    nlohmann::json j = corr::grid_to_json(g);
    j["version"] = flowdep::kVersion;
    j["invocation"] = invocation;
    auto jout = open_output(cfg.json_out);
    *jout.stream << j.dump(2) << "\n";
    jout.finish();
  }
}

void run_truncnorm(const TruncnormConfig& cfg, unsigned threads) {
  double value = 0.0;
  truncnorm::BivariateNormalParams params;
  params.rho = cfg.rho;
  double a = 0.0;
  if (cfg.t) {
    if (cfg.a) throw ConfigError("give either --t or --a, not both");
    a = *cfg.t;  // standardized: mu1 = 0, sigma1 = 1
    value = truncnorm::truncated_corr_rt(cfg.rho, *cfg.t);
  } else if (cfg.a) {
    params.mu1 = cfg.mu1;
    params.sigma1 = cfg.sigma1;
    a = *cfg.a;
    value = truncnorm::truncated_corr(params, a);
  } else {
    throw ConfigError("truncnorm needs --t or --a");
  }
  std::cout << flowdep::format_fixed(value, 6) << "\n";

  if (cfg.mc_check > 0) {
    const double mc = truncnorm::mc_truncated_corr(params, a, cfg.mc_check, cfg.seed, threads);
    std::cout << "# mc[n=" << cfg.mc_check << ", seed=" << cfg.seed
              << "]: " << flowdep::format_fixed(mc, 6)
              << "  |diff|=" << flowdep::format_fixed(std::abs(mc - value), 6) << "\n";
  }
}

void run_simulate(const SimulateConfig& cfg, const std::string& invocation) {
  if (cfg.n == 0) throw ConfigError("--n must be positive");
  const auto points = truncnorm::simulate_loglog_points(cfg.params, cfg.n, cfg.seed);

  std::vector<ingest::ConnectionSummary> flows;
  flows.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    ingest::ConnectionSummary s;
    s.conn_id = "sim-" + std::to_string(i);
    // sizes become integer bytes, rounded up and clamped to [1, ~9e18]
    double raw = std::ceil(std::pow(10.0, points[i].log_size));
    if (!(raw >= 1.0)) raw = 1.0;
    if (raw > 9e18) raw = 9e18;
    s.size_bytes = std::uint64_t(raw);
    const double ld = std::clamp(points[i].log_duration, -300.0, 300.0);
    s.duration_s = std::pow(10.0, ld);
    s.packet_count = 2;
    s.is_http = false;
    flows.push_back(std::move(s));
  }

  auto out = open_output(cfg.out);
  for (const auto& line : table_header(invocation)) *out.stream << "# " << line << "\n";
  ingest::emit_flow_summaries(flows, *out.stream);
  out.finish();
}

void run_edm(const EdmConfig& cfg, const std::string& invocation) {
  const auto pop = load_population(cfg.in, parse_format(cfg.format), cfg.http_only);
  const auto norm = parse_norm(cfg.norm);
  const std::vector<double>& fractions =
      cfg.fractions.empty() ? extremal::default_fractions() : cfg.fractions;

  const std::vector<double>* xs = nullptr;
  const std::vector<double>* ys = nullptr;
  pair_raw_series(pop, parse_pair(cfg.pair), xs, ys);
  if (xs->size() < 100) throw InputError("edm needs at least 100 points");

  const auto tx = extremal::icrt(*xs);
  const auto ty = extremal::icrt(*ys);
  const auto polar = extremal::to_polar(tx, ty, norm);
  const auto curve = extremal::edm_curve_from_polar(polar, fractions);

  auto out = open_output(cfg.out);
  auto comments = table_header(invocation);
  comments.push_back(std::string("pair: ") + cfg.pair + "  norm: " + cfg.norm +
                     "  n: " + std::to_string(xs->size()));
  extremal::write_curve_tsv(curve, *out.stream, comments);
  out.finish();

  if (!cfg.json_out.empty()) {
    nlohmann::json j = extremal::curve_to_json(curve);
    j["version"] = flowdep::kVersion;
    j["invocation"] = invocation;
    j["pair"] = cfg.pair;
    j["norm"] = cfg.norm;
    j["n"] = xs->size();
    auto jout = open_output(cfg.json_out);
    *jout.stream << j.dump(2) << "\n";
    jout.finish();
  }

  if (!cfg.angles_out.empty()) {
    const double fraction = cfg.angles_fraction ? *cfg.angles_fraction : fractions.back();
    const auto top = extremal::top_fraction(polar, fraction);
    const auto bins = extremal::angle_histogram(top);
    auto aout = open_output(cfg.angles_out);
    for (const auto& line : table_header(invocation)) *aout.stream << "# " << line << "\n";
    *aout.stream << "# angle histogram of the top " << flowdep::format_label(fraction)
                 << " radius fraction (k=" << top.size() << ")\n";
    *aout.stream << "bin_low_rad\tbin_high_rad\tcount\n";
    const double half_pi = std::numbers::pi / 2.0;
    for (std::size_t b = 0; b < bins.size(); ++b)
      *aout.stream << flowdep::format_fixed(double(b) / 64.0 * half_pi, 6) << '\t'
                   << flowdep::format_fixed(double(b + 1) / 64.0 * half_pi, 6) << '\t'
                   << bins[b] << "\n";
    aout.finish();
  }
}

void run_scatter(const ScatterConfig& cfg, const std::string& invocation) {
  const auto pop = load_population(cfg.in, parse_format(cfg.format), cfg.http_only);
  const auto pair = parse_pair(cfg.pair);
  if (cfg.max_points == 0) throw ConfigError("--max-points must be positive");

  const std::size_t n = pop.points.size();
  std::vector<std::size_t> indices(n);
  for (std::size_t i = 0; i < n; ++i) indices[i] = i;
  flowdep::Rng rng(cfg.seed);
  flowdep::deterministic_shuffle(indices, rng);
  const std::size_t stride = (n + cfg.max_points - 1) / cfg.max_points;
  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < n; i += stride) selected.push_back(indices[i]);
  std::sort(selected.begin(), selected.end());

  auto out = open_output(cfg.out);
  for (const auto& line : table_header(invocation)) *out.stream << "# " << line << "\n";
  const auto grid = corr::default_grid();
  *out.stream << "# pair: " << cfg.pair << "  n_total: " << n
              << "  n_emitted: " << selected.size() << "\n";
  *out.stream << "# size_thresholds_bytes:";
  for (double s : grid.size_thresholds_bytes) *out.stream << ' ' << flowdep::format_label(s);
  *out.stream << "\n# duration_thresholds_s:";
  for (double d : grid.duration_thresholds_s) *out.stream << ' ' << flowdep::format_label(d);
  *out.stream << "\n";

  const char* x_name = "log_size";
  const char* y_name = pair == corr::Pair::SizeDuration ? "log_duration" : "log_rate";
  if (pair == corr::Pair::DurationRate) x_name = "log_duration";
  *out.stream << x_name << '\t' << y_name << "\n";
  for (std::size_t idx : selected) {
    const auto& p = pop.points[idx];
    double x = p.log_size, y = p.log_rate;
    switch (pair) {
      case corr::Pair::SizeDuration:
        x = p.log_size;
        y = p.log_duration;
        break;
      case corr::Pair::SizeRate:
        x = p.log_size;
        y = p.log_rate;
        break;
      case corr::Pair::DurationRate:
        x = p.log_duration;
        y = p.log_rate;
        break;
    }
    *out.stream << flowdep::format_double(x) << '\t' << flowdep::format_double(y) << "\n";
  }
  out.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dependence analysis of internet flow size, duration and rate"};
  app.set_version_flag("--version", flowdep::kVersion);
  app.require_subcommand(1);

  unsigned threads = 1;
  app.add_option("--threads", threads, "worker thread cap (1 = reference behavior)")
      ->envname("FLOWDEP_THREADS")
      ->check(CLI::Range(1u, 256u));

  IngestConfig ingest_cfg;
  auto* ingest_cmd =
      app.add_subcommand("ingest", "aggregate packet events into connection and ADU CSVs");
  ingest_cmd->add_option("--in", ingest_cfg.in, "packet-event CSV ('-' for stdin)");
  ingest_cmd->add_option("--conns-out", ingest_cfg.conns_out, "connection CSV output")
      ->required();
  ingest_cmd->add_option("--adus-out", ingest_cfg.adus_out, "ADU CSV output");
  ingest_cmd->add_option("--http-ports", ingest_cfg.http_ports, "destination ports counted as HTTP")
      ->delimiter(',');
  ingest_cmd->add_option("--quiet-threshold", ingest_cfg.quiet_threshold_s,
                         "inter-packet gap starting a new ADU (seconds)");

  SummarizeConfig summarize_cfg;
  auto* summarize_cmd = app.add_subcommand("summarize", "population counts and byte totals");
  summarize_cmd->add_option("--in", summarize_cfg.in, "input file ('-' for stdin)");
  summarize_cmd->add_option("--out", summarize_cfg.out, "output ('-' for stdout)");
  summarize_cmd->add_option("--format", summarize_cfg.format, "flows | adus | packets");
  summarize_cmd->add_option("--http-ports", summarize_cfg.http_ports,
                            "destination ports counted as HTTP (packets format)")
      ->delimiter(',');

  GridConfig grid_cfg;
  auto* grid_cmd = app.add_subcommand(
      "corr-grid", "log-log Pearson correlations under joint size/duration thresholds");
  grid_cmd->add_option("--in", grid_cfg.in, "input file ('-' for stdin)");
  grid_cmd->add_option("--out", grid_cfg.out, "TSV output ('-' for stdout)");
  grid_cmd->add_option("--json-out", grid_cfg.json_out, "JSON output file");
  grid_cmd->add_option("--format", grid_cfg.format, "flows | adus");
  grid_cmd->add_option("--pair", grid_cfg.pair, "size-duration | size-rate | duration-rate");
  grid_cmd->add_option("--size-thresholds", grid_cfg.size_thresholds,
                       "ascending size thresholds in bytes (0 = none)")
      ->delimiter(',');
  grid_cmd->add_option("--duration-thresholds", grid_cfg.duration_thresholds,
                       "ascending duration thresholds in seconds (0 = none)")
      ->delimiter(',');
  grid_cmd->add_flag("--http-only", grid_cfg.http_only, "restrict to HTTP-classified records");

  TruncnormConfig tn_cfg;
  auto* tn_cmd = app.add_subcommand(
      "truncnorm", "correlation of a bivariate normal truncated to x > a");
  tn_cmd->add_option("--rho", tn_cfg.rho, "untruncated correlation")->required();
  double t_val = 0.0, a_val = 0.0;
  auto* t_opt = tn_cmd->add_option("--t", t_val, "standardized truncation point (a-mu1)/sigma1");
  auto* a_opt = tn_cmd->add_option("--a", a_val, "truncation point ('-inf' for none)");
  tn_cmd->add_option("--mu1", tn_cfg.mu1, "mean of the truncated coordinate");
  tn_cmd->add_option("--sigma1", tn_cfg.sigma1, "standard deviation of the truncated coordinate");
  tn_cmd->add_option("--mc-check", tn_cfg.mc_check, "also run a Monte Carlo check with N samples");
  tn_cmd->add_option("--seed", tn_cfg.seed, "Monte Carlo seed");

  SimulateConfig sim_cfg;
  auto* sim_cmd = app.add_subcommand(
      "simulate", "draw bivariate Gaussian (log size, log duration) flow summaries");
  sim_cmd->add_option("--n", sim_cfg.n, "number of flows")->required();
  sim_cmd->add_option("--seed", sim_cfg.seed, "generator seed");
  sim_cmd->add_option("--out", sim_cfg.out, "flow-summary CSV output ('-' for stdout)");
  sim_cmd->add_option("--mu1", sim_cfg.params.mu1, "mean of log10 size");
  sim_cmd->add_option("--mu2", sim_cfg.params.mu2, "mean of log10 duration");
  sim_cmd->add_option("--sigma1", sim_cfg.params.sigma1, "sd of log10 size");
  sim_cmd->add_option("--sigma2", sim_cfg.params.sigma2, "sd of log10 duration");
  sim_cmd->add_option("--rho", sim_cfg.params.rho, "correlation of log size and log duration");

  EdmConfig edm_cfg;
  auto* edm_cmd = app.add_subcommand(
      "edm", "extremal dependence measure across top-radius fractions");
  edm_cmd->add_option("--in", edm_cfg.in, "input file ('-' for stdin)");
  edm_cmd->add_option("--out", edm_cfg.out, "TSV output ('-' for stdout)");
  edm_cmd->add_option("--json-out", edm_cfg.json_out, "JSON output file");
  edm_cmd->add_option("--angles-out", edm_cfg.angles_out, "64-bin angle histogram output");
  double angles_fraction = 0.0;
  auto* af_opt = edm_cmd->add_option("--angles-fraction", angles_fraction,
                                     "radius fraction for the angle histogram");
  edm_cmd->add_option("--format", edm_cfg.format, "flows | adus");
  edm_cmd->add_option("--pair", edm_cfg.pair, "size-duration | size-rate | duration-rate");
  edm_cmd->add_option("--norm", edm_cfg.norm, "radius norm: l2 | l1");
  edm_cmd->add_option("--fractions", edm_cfg.fractions, "ascending top-radius fractions")
      ->delimiter(',');
  edm_cmd->add_flag("--http-only", edm_cfg.http_only, "restrict to HTTP-classified records");

  ScatterConfig scatter_cfg;
  auto* scatter_cmd = app.add_subcommand(
      "scatter", "downsampled log-log point cloud with threshold-line metadata");
  scatter_cmd->add_option("--in", scatter_cfg.in, "input file ('-' for stdin)");
  scatter_cmd->add_option("--out", scatter_cfg.out, "TSV output ('-' for stdout)");
  scatter_cmd->add_option("--format", scatter_cfg.format, "flows | adus");
  scatter_cmd->add_option("--pair", scatter_cfg.pair,
                          "size-duration | size-rate | duration-rate");
  scatter_cmd->add_option("--max-points", scatter_cfg.max_points, "downsampling cap");
  scatter_cmd->add_option("--seed", scatter_cfg.seed, "shuffle seed");
  scatter_cmd->add_flag("--http-only", scatter_cfg.http_only,
                        "restrict to HTTP-classified records");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 1;
  }

  const std::string invocation = make_invocation(argc, argv);
  try {
    if (*ingest_cmd) {
      run_ingest(ingest_cfg, invocation);
    } else if (*summarize_cmd) {
      run_summarize(summarize_cfg, invocation);
    } else if (*grid_cmd) {
      run_corr_grid(grid_cfg, invocation, threads);
    } else if (*tn_cmd) {
      if (*t_opt) tn_cfg.t = t_val;
      if (*a_opt) tn_cfg.a = a_val;
      run_truncnorm(tn_cfg, threads);
    } else if (*sim_cmd) {
      run_simulate(sim_cfg, invocation);
    } else if (*edm_cmd) {
      if (*af_opt) edm_cfg.angles_fraction = angles_fraction;
      run_edm(edm_cfg, invocation);
    } else if (*scatter_cmd) {
      run_scatter(scatter_cfg, invocation);
    }
  } catch (const ConfigError& e) {
    std::cerr << "flowdep: " << e.what() << "\n";
    return 1;
  } catch (const InputError& e) {
    std::cerr << "flowdep: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "flowdep: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "flowdep: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
