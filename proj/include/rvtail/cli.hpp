#pragma once

// Command-line front end: sample, transform, estimate, verify, scan.
// Exit codes: 0 success, 1 scenario check failed, 2 usage or config error.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rvtail/error.hpp"
#include "rvtail/estimation.hpp"
#include "rvtail/io.hpp"
#include "rvtail/maps.hpp"
#include "rvtail/models.hpp"
#include "rvtail/scenarios.hpp"
#include "rvtail/transforms.hpp"

namespace rvtail {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// "start:stop:points", log-spaced, endpoints exact.
inline std::vector<double> parse_log_grid(const std::string& text) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ':') {
      fields.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  require(fields.size() == 3, ErrorKind::InvalidArgument, "r grid must look like start:stop:points");
  const double lo = detail::parse_double(fields[0], 0);
  const double hi = detail::parse_double(fields[1], 0);
  const double count = detail::parse_double(fields[2], 0);
  require(lo > 0.0 && hi > lo, ErrorKind::InvalidArgument, "r grid needs 0 < start < stop");
  require(count >= 2.0 && count == std::floor(count) && count <= 1e6, ErrorKind::InvalidArgument,
          "r grid needs an integer point count >= 2");
  const auto m = static_cast<std::size_t>(count);
  std::vector<double> grid(m);
  const double step = (std::log(hi) - std::log(lo)) / static_cast<double>(m - 1);
  for (std::size_t i = 0; i < m; ++i) grid[i] = std::exp(std::log(lo) + step * static_cast<double>(i));
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

/// JSON list of [begin, end] pairs; each pair becomes one arc set.
inline std::vector<ArcSet> parse_arcs(const json& spec) {
  require(spec.is_array() && !spec.empty(), ErrorKind::InvalidSpec, "arcs must be a nonempty list of [begin, end]");
  std::vector<ArcSet> out;
  try {
    for (const auto& a : spec) out.push_back(ArcSet::between(a.at(0).get<double>(), a.at(1).get<double>()));
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidSpec, std::string("malformed arcs: ") + e.what());
  }
  return out;
}

namespace detail {

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct CliArgs {
  unsigned workers = 1;
  // sample
  std::string model;
  std::size_t n = 0;
  std::uint64_t seed = 42;
  std::string output;
  // transform
  std::string input;
  std::string map;
  std::string gain;
  std::uint64_t gain_seed = 42;
  // estimate
  std::string top = "0.01";
  std::string target;
  // verify
  std::string scenario;
  std::string config;
  bool record_runtime = false;
  // scan
  double alpha = 0.0;
  std::string r_grid;
  std::string arcs;
};

inline int cmd_sample(const CliArgs& a, std::ostream& out) {
  const ModelPtr model = model_from_json(load_spec(a.model));
  require(a.n >= 1, ErrorKind::InvalidArgument, "-n must be positive");
  const SampleBatch batch = model->sample(a.n, a.seed, a.workers);
  write_csv(a.output, batch);
  out << dump({{"points", batch.size()}, {"seed", a.seed}, {"model", model->spec()}});
  return kExitOk;
}

inline int cmd_transform(const CliArgs& a, std::ostream& out) {
  const SampleBatch in = read_csv(a.input);
  SampleBatch y;
  if (!a.map.empty()) {
    y = spherical_map_apply(in, map_from_json(load_spec(a.map)));
  } else {
    const json spec = load_spec(a.gain);
    const bool random = is_random_gain_spec(spec) || (spec.is_object() && spec.value("type", "") == "deterministic");
    y = random ? randomized_scale_apply(in, process_from_json(spec), a.gain_seed, a.workers)
               : radial_scale_apply(in, gain_from_json(spec));
  }
  write_csv(a.output, y);
  out << dump({{"points", y.size()}, {"zero_count", y.zero_count()}});
  return kExitOk;
}

inline double parse_top(const std::string& s) { return parse_double(s, 0); }

inline int cmd_estimate(const CliArgs& a, std::ostream& out) {
  const SampleBatch batch = read_csv(a.input);
  require(!batch.empty(), ErrorKind::EmptyInput, "input sample is empty");
  const std::size_t k = resolve_top(parse_top(a.top), batch.size());
  std::optional<SpectralMeasure> target;
  if (!a.target.empty()) target = measure_from_json(load_spec(a.target));
  const json report = report_to_json(estimate(batch, k, target, a.seed, a.workers));
  write_text(a.output, dump(report));
  out << dump({{"alpha_hat", report.at("alpha_hat")}, {"k_used", k}, {"distances", report.at("distances")}});
  return kExitOk;
}

inline int cmd_verify(const CliArgs& a, std::ostream& out) {
  ScenarioOptions opt;
  opt.seed = a.seed;
  if (a.n) opt.n = a.n;
  opt.top_fraction = parse_top(a.top);
  opt.workers = a.workers;
  opt.record_runtime = a.record_runtime;
  if (!a.config.empty()) {
    opt.overrides = load_spec(a.config);
    require(opt.overrides.is_object(), ErrorKind::InvalidSpec, "--config must be a JSON object");
  }
  const Report rep = run_scenario(a.scenario, opt);
  const std::string text = dump(to_json(rep));
  if (a.output.empty()) out << text;
  else write_text(a.output, text);
  for (const Check& c : rep.checks) {
    if (!a.output.empty()) out << (c.pass ? "PASS " : "FAIL ") << c.name << " = " << c.value << '\n';
  }
  return rep.passed() ? kExitOk : kExitCheckFailed;
}

inline int cmd_scan(const CliArgs& a, std::ostream& out) {
  const auto grid = parse_log_grid(a.r_grid);
  const std::vector<ArcSet> arcs = a.arcs.empty() ? std::vector<ArcSet>{ArcSet::full()} : parse_arcs(load_spec(a.arcs));
  TailScan scan;
  if (!a.input.empty()) {
    require(a.gain.empty(), ErrorKind::InvalidArgument, "empirical scans take an already transformed sample");
    scan = tail_scan(read_csv(a.input), a.alpha, arcs, grid);
  } else {
    const ModelPtr model = model_from_json(load_spec(a.model));
    std::optional<RadialGain> gain;
    if (!a.gain.empty()) {
      const json spec = load_spec(a.gain);
      require(!is_random_gain_spec(spec), ErrorKind::InvalidArgument, "exact scans need a deterministic gain");
      gain = gain_from_json(spec);
    }
    scan = tail_scan(*model, a.alpha, arcs, grid, gain);
  }
  std::string csv = "r,arc_id,value,mode\n";
  for (std::size_t b = 0; b < scan.arcs.size(); ++b) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      append_double(csv, grid[j]);
      csv += ',' + std::to_string(b) + ',';
      append_double(csv, scan.values[b][j]);
      csv += ',' + scan.mode + '\n';
    }
  }
  write_text(a.output, csv);
  json summary = json::array();
  for (std::size_t b = 0; b < scan.arcs.size(); ++b) {
    summary.push_back({{"arc_id", b},
                       {"is_bounded", static_cast<bool>(scan.is_bounded[b])},
                       {"oscillation_range", scan.oscillation_range[b]},
                       {"full_range", scan.full_range[b]}});
  }
  out << dump(summary);
  return kExitOk;
}

}  // namespace detail

inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"rvtail: regularly varying vectors and their spectral measures"};
  app.require_subcommand(1);
  detail::CliArgs a;
  auto add_workers = [&](CLI::App* sub) {
    sub->add_option("--workers", a.workers, "Worker threads (output does not depend on this)")->check(CLI::PositiveNumber);
  };

  CLI::App* sample = app.add_subcommand("sample", "Draw a seeded sample from a model");
  sample->add_option("--model", a.model, "Model spec: inline JSON or file")->required();
  sample->add_option("-n", a.n, "Sample size")->required();
  sample->add_option("--seed", a.seed, "Seed");
  sample->add_option("-o,--output", a.output, "Output CSV")->required();
  add_workers(sample);

  CLI::App* transform = app.add_subcommand("transform", "Apply a spherical map or a radial gain");
  transform->add_option("--input", a.input, "Input CSV")->required();
  auto* map_opt = transform->add_option("--map", a.map, "Sphere map spec");
  auto* gain_opt = transform->add_option("--gain", a.gain, "Gain or random gain spec");
  map_opt->excludes(gain_opt);
  transform->add_option("--gain-seed", a.gain_seed, "Seed for random gains");
  transform->add_option("-o,--output", a.output, "Output CSV")->required();
  add_workers(transform);

  CLI::App* est = app.add_subcommand("estimate", "Estimate alpha and the spectral measure");
  est->add_option("--input", a.input, "Input CSV")->required();
  est->add_option("--top", a.top, "Exceedances: a count k or a fraction below 1");
  est->add_option("--target", a.target, "Declared target measure spec");
  est->add_option("--seed", a.seed, "Bootstrap seed");
  est->add_option("-o,--output", a.output, "Report JSON")->required();
  add_workers(est);

  CLI::App* verify = app.add_subcommand("verify", "Run a named scenario");
  verify->add_option("--scenario", a.scenario, "Scenario name")->required();
  verify->add_option("-n,--n", a.n, "Sample size");
  verify->add_option("--seed", a.seed, "Seed");
  verify->add_option("--top", a.top, "Top fraction of exceedances");
  verify->add_option("--config", a.config, "JSON merged over the scenario config");
  verify->add_flag("--record-runtime", a.record_runtime, "Store wall time in the report");
  verify->add_option("-o,--output", a.output, "Report JSON (stdout when omitted)");
  add_workers(verify);

  CLI::App* scan = app.add_subcommand("scan", "Tabulate r^alpha-normalized tails");
  auto* model_opt = scan->add_option("--model", a.model, "Model spec (exact mode)");
  auto* input_opt = scan->add_option("--input", a.input, "Sample CSV (empirical mode)");
  model_opt->excludes(input_opt);
  scan->add_option("--gain", a.gain, "Deterministic gain applied before the scan");
  scan->add_option("--alpha", a.alpha, "Normalizing exponent")->required();
  scan->add_option("--r-grid", a.r_grid, "start:stop:points, log-spaced")->required();
  scan->add_option("--arcs", a.arcs, "JSON list of [begin, end] arcs");
  scan->add_option("-o,--output", a.output, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*sample) return detail::cmd_sample(a, out);
    if (*transform) {
      if (a.map.empty() && a.gain.empty()) fail(ErrorKind::InvalidArgument, "transform needs --map or --gain");
      return detail::cmd_transform(a, out);
    }
    if (*est) return detail::cmd_estimate(a, out);
    if (*verify) return detail::cmd_verify(a, out);
    if (a.model.empty() && a.input.empty()) fail(ErrorKind::InvalidArgument, "scan needs --model or --input");
    return detail::cmd_scan(a, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "error [InvalidSpec]: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace rvtail
