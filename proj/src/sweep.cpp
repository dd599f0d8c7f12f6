#include "netrisk/sweep.hpp"

#include "netrisk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <regex>
#include <sstream>

namespace netrisk {

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); }

struct QconIndex {
  int a = 0;
  int b = 0;
};

std::optional<QconIndex> parse_qcon(const std::string& name) {
  static const std::regex re(R"(q_con\[(\d+)\]\[(\d+)\])");
  std::smatch m;
  if (!std::regex_match(name, m, re)) return std::nullopt;
  return QconIndex{std::stoi(m[1]) - 1, std::stoi(m[2]) - 1};
}

std::string run_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "run_%03zu", index);
  return buf;
}

}  // namespace

void RunConfig::validate() const {
  spec.validate();
  if (!generator && (!network_path || !scenarios_path)) {
    config_error("a network and scenario file, or a generator, is required");
  }
  if (generator && !scenarios_path && scenario_count <= 0) config_error("scenario_count must be positive");
  if (!sweep) return;
  const std::string& p = sweep->parameter;
  if (sweep->values.empty()) config_error("sweep needs at least one value");
  const bool needs_generator = p == "n_1" || p == "K" || parse_qcon(p).has_value();
  if (needs_generator && !generator) config_error("sweeping " + p + " requires a generator");
  if (p == "gamma_p") {
    for (double v : sweep->values) {
      if (!(v >= 0.0 && v <= 1.0)) config_error("gamma_p sweep values must lie in [0, 1]");
    }
  } else if (p == "alpha" || p == "beta") {
    for (double v : sweep->values) {
      if (!(v > 0.0 && v <= 1.0)) config_error(p + " sweep values must lie in (0, 1]");
    }
  } else if (p == "n_1") {
    if (generator->group_sizes.size() < 2) config_error("sweeping n_1 needs at least two groups");
    const int rest = generator->group_sizes.back() + generator->group_sizes.front();
    for (double v : sweep->values) {
      if (v != std::floor(v) || v < 1 || v >= rest) config_error("n_1 sweep values must keep groups nonempty");
    }
  } else if (p == "K") {
    if (scenarios_path) config_error("sweeping K requires generated scenarios");
    for (double v : sweep->values) {
      if (v != std::floor(v) || v < 1) config_error("K sweep values must be positive integers");
    }
  } else if (auto q = parse_qcon(p)) {
    const auto g = static_cast<int>(generator->group_sizes.size());
    if (q->a < 0 || q->b < 0 || q->a >= g || q->b >= g) config_error(p + " is outside the group range");
    for (double v : sweep->values) {
      if (!(v >= 0.0 && v <= 1.0)) config_error("q_con sweep values must lie in [0, 1]");
    }
  } else {
    config_error("unknown sweep parameter '" + p + "'");
  }
}

RunConfig run_config_from_json(const io::json& j, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  auto path = [&](const char* key) { return base_dir / j.at(key).get<std::string>(); };
  if (j.contains("network")) cfg.network_path = path("network");
  if (j.contains("scenarios")) cfg.scenarios_path = path("scenarios");
  if (j.contains("generator")) cfg.generator = io::generator_from_json(j.at("generator"));
  cfg.scenario_count = j.value("scenario_count", 0);
  if (j.contains("grouping")) cfg.grouping = io::grouping_from_json(j.at("grouping"));
  if (j.contains("spec")) cfg.spec = io::spec_from_json(j.at("spec"));
  if (j.contains("output")) cfg.output_dir = path("output");
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    cfg.sweep = SweepSpec{s.at("parameter").get<std::string>(), s.at("values").get<std::vector<double>>()};
  }
  cfg.batch = j.value("batch", false);
  return cfg;
}

Inputs materialize(const RunConfig& cfg, std::optional<double> sweep_value) {
  std::optional<GeneratorConfig> gen = cfg.generator;
  RiskSpec spec = cfg.spec;
  int k = cfg.scenario_count;
  const std::string param = cfg.sweep ? cfg.sweep->parameter : std::string();
  if (sweep_value) {
    const double v = *sweep_value;
    if (param == "gamma_p") {
      spec.gamma_p = v;
    } else if (param == "n_1") {
      auto& sizes = gen->group_sizes;
      const int total = sizes.front() + sizes.back();
      sizes.front() = static_cast<int>(v);
      sizes.back() = total - sizes.front();
    } else if (param == "K") {
      k = static_cast<int>(v);
    } else if (auto q = parse_qcon(param)) {
      gen->q_con(q->a, q->b) = v;
    }
  }

  auto apply_variant = [&](Variant var) {
    if (sweep_value && (param == "alpha" || param == "beta")) {
      if (!var.is_rv()) config_error("sweeping " + param + " requires a Rogers-Veraart network");
      (param == "alpha" ? var.alpha : var.beta) = *sweep_value;
    }
    return var;
  };

  std::optional<FinancialNetwork> net;
  if (cfg.network_path) {
    const FinancialNetwork loaded = io::load_network(*cfg.network_path);
    net = loaded.with_variant(apply_variant(loaded.variant()));
  } else {
    gen->variant = apply_variant(gen->variant);
    net = generate_network(*gen);
  }
  ScenarioSet scen = cfg.scenarios_path ? io::load_scenarios(*cfg.scenarios_path) : generate_scenarios(*gen, k);
  Grouping grouping = cfg.grouping ? *cfg.grouping
                      : gen        ? gen->grouping()
                                   : Grouping::single(net->size());
  if (param == "n_1" && gen) grouping = gen->grouping();
  return Inputs{*net, std::move(scen), std::move(grouping), spec};
}

std::vector<SummaryRow> run(const RunConfig& cfg, int jobs) {
  cfg.validate();
  std::vector<std::optional<double>> values;
  if (cfg.sweep) {
    values.assign(cfg.sweep->values.begin(), cfg.sweep->values.end());
  } else {
    values.emplace_back(std::nullopt);
  }
  ApproximateOptions opts;
  opts.batch = cfg.batch;

  auto one = [&](std::size_t index) {
    const Inputs in = materialize(cfg, values[index]);
    const ApproximationPair pair = approximate(in.net, in.scenarios, in.grouping, in.spec, opts);
    const std::string stem = run_name(index);
    io::write_file(cfg.output_dir / (stem + "_corners.csv"), io::corners_csv(pair));
    io::json meta = io::run_metadata(pair);
    if (values[index]) meta["sweep"] = {{"parameter", cfg.sweep->parameter}, {"value", *values[index]}};
    io::write_file(cfg.output_dir / (stem + "_metadata.json"), meta.dump(2) + "\n");
    if (in.grouping.groups() == 2) {
      io::write_file(cfg.output_dir / (stem + "_polyline.csv"), io::polyline_csv(pair));
    }
    SummaryRow row;
    row.value = values[index];
    row.inner_count = pair.inner_points.size();
    row.outer_count = pair.outer.corners.size();
    row.z2_count = pair.z2_count;
    row.avg_z2_seconds = meta["timings"]["z2_average_seconds"].get<double>();
    row.total_seconds = pair.total_seconds;
    return row;
  };

  std::vector<SummaryRow> rows(values.size());
  const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
  for (std::size_t lo = 0; lo < values.size(); lo += width) {
    const std::size_t hi = std::min(values.size(), lo + width);
    if (width == 1) {
      rows[lo] = one(lo);
      continue;
    }
    std::vector<std::future<SummaryRow>> futures;
    for (std::size_t u = lo; u < hi; ++u) futures.push_back(std::async(std::launch::async, one, u));
    for (std::size_t u = lo; u < hi; ++u) rows[u] = futures[u - lo].get();
  }
  io::write_file(cfg.output_dir / "summary.csv", summary_csv(rows));
  return rows;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  os << "sweep_value,inner_count,outer_count,z2_count,avg_z2_seconds,total_seconds\n";
  for (const SummaryRow& r : rows) {
    os << (r.value ? io::fmt_num(*r.value) : std::string()) << ',' << r.inner_count << ',' << r.outer_count
       << ',' << r.z2_count << ',' << io::fmt_num(r.avg_z2_seconds) << ',' << io::fmt_num(r.total_seconds)
       << '\n';
  }
  return os.str();
}

}  // namespace netrisk
