// SPDX-License-Identifier: Apache-2.0
#include "ricsim/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ricsim::config {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::int64_t to_int(const std::string& s) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

double to_double(const std::string& s) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError("not a number: '" + s + "'");
  return v;
}

std::optional<std::int64_t> to_optional_ms(const std::string& s) {
  if (s == "-" || s == "none") return std::nullopt;
  return to_int(s);
}

scenario::SensitivityPolicy to_policy(const std::string& v) {
  scenario::SensitivityPolicy p;
  if (v == "none") return p;
  if (v.rfind("fixed:", 0) == 0) {
    p.kind = scenario::SensitivityPolicy::Kind::Fixed;
    p.fixed_ms = to_int(v.substr(6));
    return p;
  }
  if (v.rfind("per_xapp:", 0) == 0) {
    p.kind = scenario::SensitivityPolicy::Kind::PerXApp;
    for (const auto& part : split(v.substr(9), ',')) p.per_xapp.push_back(to_optional_ms(part));
    return p;
  }
  throw ConfigError("bad sensitivity policy: '" + v + "'");
}

std::vector<RequestItem> to_items(const std::string& v) {
  std::vector<RequestItem> items;
  for (const auto& part : split(v, ',')) {
    const auto f = split(part, ':');
    if (f.size() < 2 || f.size() > 3) throw ConfigError("item must be kpi:period[:sensitivity], got '" + part + "'");
    TemporalSensitivity sens;
    if (f.size() == 3)
      if (auto d = to_optional_ms(f[2])) sens = TemporalSensitivity{*d};
    items.push_back({KpiId{f[0]}, ReportPeriod{to_int(f[1])}, sens});
  }
  return items;
}

class Parser {
public:
  Parser(const std::string& origin) : origin_(origin) {}

  RunConfig run(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_;
      std::string l = trim(raw.substr(0, raw.find('#')));
      if (l.empty()) continue;
      try {
        if (l.front() == '[') {
          if (l.back() != ']') throw ConfigError("unterminated section header");
          open_section(trim(std::string_view(l).substr(1, l.size() - 2)));
          continue;
        }
        const auto eq = l.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value");
        assign(trim(std::string_view(l).substr(0, eq)), trim(std::string_view(l).substr(eq + 1)));
      } catch (const ConfigError& e) {
        fail(e.what());
      } catch (const InvalidArgument& e) {
        fail(e.what());
      }
    }
    try {
      close_subscription();
    } catch (const std::exception& e) {
      fail(e.what());
    }
    try {
      cfg_.scenario.validate();
      cfg_.power.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(origin_ + ": " + e.what());
    }
    return std::move(cfg_);
  }

private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(origin_ + ":" + std::to_string(line_) + ": " + msg);
  }

  void open_section(const std::string& name) {
    close_subscription();
    static const char* known[] = {"scenario", "power", "sim", "sweep", "broker", "subscription"};
    bool ok = false;
    for (const char* k : known) ok = ok || name == k;
    if (!ok) throw ConfigError("unknown section [" + name + "]");
    section_ = name;
    if (name == "subscription") sub_ = Pending{};
    if (name == "sweep" && !cfg_.sweep) cfg_.sweep = SweepSpec{};
  }

  void assign(const std::string& key, const std::string& v) {
    auto& sc = cfg_.scenario;
    if (section_ == "scenario") {
      if (key == "nodes") sc.nodes = static_cast<int>(to_int(v));
      else if (key == "kpis_per_node") sc.kpis_per_node = static_cast<int>(to_int(v));
      else if (key == "period_ms") sc.period_ms = ReportPeriod{to_int(v)}.millis();
      else if (key == "redundancy") sc.redundancy = to_double(v);
      else if (key == "seed") sc.seed = static_cast<std::uint64_t>(to_int(v));
      else if (key == "sensitivity") sc.sensitivity = to_policy(v);
      else if (key == "period_mix") {
        sc.period_mix.clear();
        for (const auto& part : split(v, ',')) {
          const auto f = split(part, ':');
          if (f.size() != 2) throw ConfigError("period_mix entry must be period:weight");
          sc.period_mix.push_back({to_int(f[0]), to_double(f[1])});
        }
      } else if (key == "mode") {
        if (v == "all") {
          cfg_.output_modes.assign(scenario::kAllModes.begin(), scenario::kAllModes.end());
        } else {
          sc.mode = scenario::mode_from_string(v);
          cfg_.output_modes = {sc.mode};
        }
      } else if (key == "overlap") {
        if (v == "partial") sc.overlap = scenario::Overlap::Partial;
        else if (v == "full") sc.overlap = scenario::Overlap::Full;
        else throw ConfigError("overlap must be partial or full");
      } else if (key == "redundancy_basis") {
        if (v == "transmitted") sc.basis = scenario::RedundancyBasis::Transmitted;
        else if (v == "additional") sc.basis = scenario::RedundancyBasis::Additional;
        else throw ConfigError("redundancy_basis must be transmitted or additional");
      } else unknown(key);
    } else if (section_ == "power") {
      if (key == "ric_static_watts") cfg_.power.ric_static_watts = to_double(v);
      else if (key == "cpu_static_watts") cfg_.power.cpu_static_watts = to_double(v);
      else if (key == "watts_per_sample_rate") cfg_.power.watts_per_sample_rate = to_double(v);
      else unknown(key);
    } else if (section_ == "sim") {
      if (key == "horizon_ms") cfg_.sim.horizon_ms = to_int(v);
      else if (key == "header_bytes") cfg_.sim.header_bytes = to_int(v);
      else if (key == "bytes_per_sample") cfg_.sim.bytes_per_sample = to_int(v);
      else if (key == "batching") cfg_.sim.batching = sim::batching_from_string(v);
      else unknown(key);
    } else if (section_ == "sweep") {
      if (key == "axis") cfg_.sweep->axis = scenario::axis_from_string(v);
      else if (key == "range") cfg_.sweep->values = parse_range(v);
      else if (key == "values") {
        cfg_.sweep->values.clear();
        for (const auto& part : split(v, ',')) cfg_.sweep->values.push_back(to_double(part));
      } else unknown(key);
    } else if (section_ == "broker") {
      if (key == "stats_interval_ms") cfg_.stats_interval_ms = to_int(v);
      else unknown(key);
    } else if (section_ == "subscription") {
      if (key == "xapp") sub_->xapp = static_cast<std::uint64_t>(to_int(v));
      else if (key == "node") sub_->node = static_cast<std::uint64_t>(to_int(v));
      else if (key == "items") sub_->items = to_items(v);
      else unknown(key);
    } else {
      throw ConfigError("key outside of any section: " + key);
    }
  }

  [[noreturn]] void unknown(const std::string& key) const {
    throw ConfigError("unknown key '" + key + "' in [" + section_ + "]");
  }

  void close_subscription() {
    if (!sub_) return;
    if (!sub_->xapp || !sub_->node || sub_->items.empty())
      throw ConfigError("[subscription] needs xapp, node and items");
    SubscriptionRequest r{XAppId{*sub_->xapp}, E2NodeId{*sub_->node}, std::move(sub_->items)};
    validate(r);
    cfg_.subscriptions.push_back(std::move(r));
    sub_.reset();
  }

  struct Pending {
    std::optional<std::uint64_t> xapp;
    std::optional<std::uint64_t> node;
    std::vector<RequestItem> items;
  };

  std::string origin_;
  int line_ = 0;
  std::string section_;
  std::optional<Pending> sub_;
  RunConfig cfg_;
};

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  const auto f = split(text, ':');
  if (f.size() < 2 || f.size() > 3) throw ConfigError("range must be start:stop[:step], got '" + text + "'");
  const double start = to_double(f[0]);
  const double stop = to_double(f[1]);
  const double step = f.size() == 3 ? to_double(f[2]) : 1.0;
  if (!(step > 0) || stop < start) throw ConfigError("range needs step > 0 and stop >= start");
  std::vector<double> out;
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  for (long i = 0; i <= count; ++i) {
    // Round away accumulated binary noise (0.1 * 3 -> 0.3).
    const double v = start + static_cast<double>(i) * step;
    out.push_back(std::round(v * 1e9) / 1e9);
  }
  return out;
}

RunConfig parse(const std::string& text, const std::string& origin) { return Parser(origin).run(text); }

RunConfig load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.string());
}

}  // namespace ricsim::config
