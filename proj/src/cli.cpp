// SPDX-License-Identifier: Apache-2.0
#include "ricsim/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "ricsim/config.hpp"
#include "ricsim/wire/broker.hpp"
#include "ricsim/wire/node.hpp"
#include "ricsim/wire/xapp.hpp"

namespace ricsim::cli {

std::atomic<bool> stop_requested{false};

namespace {

// Bad input; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Output {
  std::string format = "csv";
  std::string path;
};

void emit(const Output& o, const std::string& text, std::ostream& out) {
  if (o.path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + o.path);
  f << text;
}

std::string render(const Output& o, const std::vector<scenario::SweepRow>& rows,
                   const std::vector<scenario::Mode>& modes) {
  if (o.format == "json") return scenario::to_json(rows, modes);
  return scenario::to_csv(rows, modes);
}

config::RunConfig load_config(const std::string& path, std::optional<std::uint64_t> seed) {
  config::RunConfig cfg;
  try {
    cfg = config::load(path);
  } catch (const config::ConfigError& e) {
    throw UsageError(e.what());
  }
  if (seed) cfg.scenario.seed = *seed;
  return cfg;
}

std::vector<scenario::SweepRow> execute(const config::RunConfig& cfg, std::optional<scenario::Axis> axis,
                                        std::vector<double> values) {
  if (!axis && cfg.sweep) {
    axis = cfg.sweep->axis;
    values = cfg.sweep->values;
  }
  if (!axis) {
    axis = scenario::Axis::Redundancy;
    values = {cfg.scenario.redundancy};
  }
  return scenario::sweep(cfg.scenario, *axis, values, cfg.power, cfg.sim);
}

void wait_for(double seconds) {
  const auto until = std::chrono::steady_clock::now() + std::chrono::duration<double>(seconds);
  while (!stop_requested && (seconds <= 0 || std::chrono::steady_clock::now() < until))
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
}

std::vector<power::MeasurementPoint> read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::vector<power::MeasurementPoint> points;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    line = line.substr(0, line.find('#'));
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line.rfind("sample_rate", 0) == 0) continue;
    std::istringstream ls(line);
    power::MeasurementPoint p;
    char comma = 0;
    if (!(ls >> p.sample_rate >> comma >> p.watts) || comma != ',')
      throw UsageError(fmt::format("{}:{}: expected sample_rate,watts", path, n));
    points.push_back(p);
  }
  return points;
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"RIC KPI subscription merging: scenarios, sweeps and live mode", "ricsim"};
  app.require_subcommand(1);

  Output o;
  std::optional<std::uint64_t> seed;
  const auto common = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", o.path, "write output to file instead of stdout");
    sub->add_option("--seed", seed, "override the scenario seed");
  };

  std::string cfg_path;
  auto* run = app.add_subcommand("run", "run a scenario config (its [sweep], if any)");
  run->add_option("config", cfg_path, "scenario config file")->required();
  common(run);

  std::string axis_name;
  std::string range;
  auto* sweep = app.add_subcommand("sweep", "sweep one scenario axis");
  sweep->add_option("config", cfg_path, "scenario config file")->required();
  sweep->add_option("--axis", axis_name, "redundancy, nodes or kpis")->required();
  sweep->add_option("--range", range, "start:stop[:step], inclusive")->required();
  common(sweep);

  std::string points_path;
  auto* calibrate = app.add_subcommand("calibrate", "fit the power model to sample_rate,watts points");
  calibrate->add_option("points", points_path, "CSV of sample_rate,watts")->required();
  common(calibrate);

  std::string listen;
  double duration = 0;
  auto* broker = app.add_subcommand("broker", "run the RIC broker");
  broker->add_option("--listen", listen, "host:port")->required();
  broker->add_option("--config", cfg_path, "config with [power] and [broker] sections");
  broker->add_option("--duration", duration, "seconds to run (default: until interrupted)");

  std::string broker_addr;
  std::uint64_t node_id = 0;
  int kpis = 0;
  std::int64_t header_bytes = 0;
  std::int64_t bytes_per_sample = 1000;
  auto* node = app.add_subcommand("node", "run an E2 node emulator");
  node->add_option("--broker", broker_addr, "host:port")->required();
  node->add_option("--node-id", node_id, "E2 node id")->required();
  node->add_option("--kpis", kpis, "catalog size (kpi.0 .. kpi.<k-1>)")->required()->check(CLI::PositiveNumber);
  node->add_option("--header-bytes", header_bytes, "accounted bytes per indication");
  node->add_option("--bytes-per-sample", bytes_per_sample, "accounted bytes per sample");
  node->add_option("--duration", duration, "seconds to run (default: until interrupted)");

  std::string subscribe_path;
  auto* xapp = app.add_subcommand("xapp", "run a monitoring xApp client");
  xapp->add_option("--broker", broker_addr, "host:port")->required();
  xapp->add_option("--subscribe", subscribe_path, "config file with [subscription] sections")->required();
  xapp->add_option("--duration", duration, "seconds to run (default: until interrupted)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "ricsim: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*run) {
      const auto cfg = load_config(cfg_path, seed);
      emit(o, render(o, execute(cfg, std::nullopt, {}), cfg.output_modes), out);
      return 0;
    }
    if (*sweep) {
      const auto cfg = load_config(cfg_path, seed);
      scenario::Axis axis;
      std::vector<double> values;
      try {
        axis = scenario::axis_from_string(axis_name);
        values = config::parse_range(range);
      } catch (const std::exception& e) {
        throw UsageError(e.what());
      }
      emit(o, render(o, execute(cfg, axis, values), cfg.output_modes), out);
      return 0;
    }
    if (*calibrate) {
      const auto pts = read_points(points_path);
      const power::PowerModel m = power::calibrate(pts);
      std::string text;
      if (o.format == "json") {
        text = nlohmann::json{{"ric_static_watts", m.ric_static_watts},
                              {"cpu_static_watts", m.cpu_static_watts},
                              {"watts_per_sample_rate", m.watts_per_sample_rate}}
                   .dump(2) +
               "\n";
      } else {
        text = fmt::format("ric_static_watts,cpu_static_watts,watts_per_sample_rate\n{:.6f},{:.6f},{:.9e}\n",
                           m.ric_static_watts, m.cpu_static_watts, m.watts_per_sample_rate);
      }
      emit(o, text, out);
      return 0;
    }
    if (*broker) {
      wire::BrokerOptions opts;
      opts.listen = listen;
      opts.log = &err;
      if (!cfg_path.empty()) {
        const auto cfg = load_config(cfg_path, std::nullopt);
        opts.power = cfg.power;
        opts.stats_interval_ms = cfg.stats_interval_ms;
      }
      wire::Broker b(opts);
      b.start();
      wait_for(duration);
      b.stop();
      return 0;
    }
    if (*node) {
      wire::NodeOptions opts;
      opts.broker = broker_addr;
      opts.node = E2NodeId{node_id};
      opts.kpis = kpis;
      opts.header_bytes = header_bytes;
      opts.bytes_per_sample = bytes_per_sample;
      opts.log = &err;
      wire::NodeEmulator n(opts);
      n.start();
      wait_for(duration);
      const auto s = n.stats();
      n.stop();
      out << fmt::format("messages={} samples={} logical_bytes={} wire_bytes={}\n", s.messages, s.samples,
                         s.logical_bytes, s.wire_bytes);
      return 0;
    }
    if (*xapp) {
      const auto cfg = load_config(subscribe_path, std::nullopt);
      if (cfg.subscriptions.empty()) throw UsageError(subscribe_path + ": no [subscription] sections");
      wire::XAppOptions opts;
      opts.broker = broker_addr;
      opts.subscriptions = cfg.subscriptions;
      opts.log = &err;
      wire::XAppClient c(opts);
      const auto responses = c.start();
      bool refused = false;
      for (const auto& r : responses) refused = refused || !r.success;
      if (refused) return 1;
      wait_for(duration);
      const auto s = c.stats();
      c.stop();
      out << "node,kpi,samples\n";
      for (const auto& [key, count] : s.per_kpi) out << fmt::format("{},{},{}\n", key.first, key.second, count);
      return 0;
    }
  } catch (const UsageError& e) {
    err << "ricsim: " << e.what() << '\n';
    return 2;
  } catch (const InvalidArgument& e) {
    err << "ricsim: invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "ricsim: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace ricsim::cli
