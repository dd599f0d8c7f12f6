#include "netrisk/io.hpp"

#include "netrisk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace netrisk::io {

namespace {

[[noreturn]] void parse_error(const std::string& msg) { throw Error(ErrorKind::Parse, msg); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) out.push_back(trim(cell));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s) {
  if (s.empty()) parse_error("empty numeric field");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) parse_error("not a number: '" + s + "'");
  return v;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

/// Parses a numeric CSV with a header. Returns the header and the rows.
std::pair<std::vector<std::string>, std::vector<std::vector<double>>> parse_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty()) parse_error("CSV input is empty");
  auto header = split(lines.front(), ',');
  std::vector<std::vector<double>> rows;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split(lines[r], ',');
    if (cells.size() != header.size()) {
      parse_error("CSV row " + std::to_string(r) + " has " + std::to_string(cells.size()) +
                  " fields, header has " + std::to_string(header.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(to_double(c));
    rows.push_back(std::move(row));
  }
  return {std::move(header), std::move(rows)};
}

template <typename T>
T field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) parse_error(std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    parse_error(std::string("field '") + name + "': " + e.what());
  }
}

std::vector<Vector> staircase(std::vector<Vector> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vector& a, const Vector& b) {
    return a(0) != b(0) ? a(0) < b(0) : a(1) > b(1);
  });
  std::vector<Vector> minimal;
  for (const Vector& p : pts) {
    if (minimal.empty() || p(1) < minimal.back()(1)) minimal.push_back(p);
  }
  std::vector<Vector> out;
  for (std::size_t u = 0; u < minimal.size(); ++u) {
    if (u > 0) {
      Vector knee(2);
      knee << minimal[u](0), minimal[u - 1](1);
      out.push_back(knee);
    }
    out.push_back(minimal[u]);
  }
  return out;
}

}  // namespace

std::string fmt_num(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidConfig, "cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidConfig, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::InvalidConfig, "write failed for " + path.string());
}

Vector vector_from_json(const json& j) {
  if (!j.is_array()) parse_error("expected a numeric array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) parse_error("expected a numeric array");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) parse_error("expected a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) parse_error("matrix rows must have equal length");
    m.row(static_cast<Eigen::Index>(r)) = vector_from_json(j[r]).transpose();
  }
  return m;
}

json to_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Vector(m.row(r).transpose())));
  return out;
}

Variant variant_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "en") return Variant::signed_en();
    parse_error("variant must be \"en\" or {\"rv\": {...}}");
  }
  if (j.is_object() && j.contains("rv")) {
    const json& rv = j.at("rv");
    return Variant::rogers_veraart(field<double>(rv, "alpha"), field<double>(rv, "beta"));
  }
  parse_error("variant must be \"en\" or {\"rv\": {...}}");
}

json variant_to_json(const Variant& v) {
  if (!v.is_rv()) return "en";
  return json{{"rv", {{"alpha", v.alpha}, {"beta", v.beta}}}};
}

FinancialNetwork network_from_json(const json& j) {
  const int n = field<int>(j, "n");
  if (!j.contains("liabilities")) parse_error("missing field 'liabilities'");
  const Matrix l = matrix_from_json(j.at("liabilities"));
  if (l.rows() != n || l.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "liabilities must be an n x n matrix");
  }
  const Variant variant = j.contains("variant") ? variant_from_json(j.at("variant")) : Variant::signed_en();
  return FinancialNetwork::from_liabilities(l, variant);
}

json network_to_json(const FinancialNetwork& net) {
  return json{{"n", net.size()}, {"variant", variant_to_json(net.variant())},
              {"liabilities", to_json(net.liabilities())}};
}

FinancialNetwork load_network(const std::filesystem::path& path) {
  try {
    return network_from_json(json::parse(read_file(path)));
  } catch (const json::exception& e) {
    parse_error(path.string() + ": " + e.what());
  }
}

ScenarioSet scenarios_from_csv(const std::string& text) {
  auto [header, rows] = parse_csv(text);
  if (header.size() < 2 || header.front() != "q") parse_error("scenario CSV header must be q,x1,...,xn");
  if (rows.empty()) parse_error("scenario CSV has no rows");
  const auto n = static_cast<Eigen::Index>(header.size() - 1);
  Matrix x(static_cast<Eigen::Index>(rows.size()), n);
  Vector q(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    q(static_cast<Eigen::Index>(r)) = rows[r][0];
    for (Eigen::Index i = 0; i < n; ++i) x(static_cast<Eigen::Index>(r), i) = rows[r][static_cast<std::size_t>(i + 1)];
  }
  return ScenarioSet::create(std::move(x), std::move(q));
}

std::string scenarios_to_csv(const ScenarioSet& scen) {
  std::ostringstream os;
  os << 'q';
  for (int i = 0; i < scen.nodes(); ++i) os << ",x" << (i + 1);
  os << '\n';
  for (int k = 0; k < scen.size(); ++k) {
    os << fmt_num(scen.q()(k), 17);
    for (int i = 0; i < scen.nodes(); ++i) os << ',' << fmt_num(scen.x()(k, i), 17);
    os << '\n';
  }
  return os.str();
}

ScenarioSet load_scenarios(const std::filesystem::path& path) { return scenarios_from_csv(read_file(path)); }

Matrix cash_flows_from_csv(const std::string& text) {
  auto [header, rows] = parse_csv(text);
  const std::size_t skip = (!header.empty() && header.front() == "q") ? 1 : 0;
  if (header.size() <= skip) parse_error("cash-flow CSV has no x columns");
  if (rows.empty()) parse_error("cash-flow CSV has no rows");
  Matrix x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(header.size() - skip));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = skip; c < header.size(); ++c) {
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c - skip)) = rows[r][c];
    }
  }
  return x;
}

Grouping grouping_from_json(const json& j) {
  if (j.is_object() && j.contains("sizes")) return Grouping::from_sizes(field<std::vector<int>>(j, "sizes"));
  if (j.is_object() && j.contains("assignment")) {
    auto a = field<std::vector<int>>(j, "assignment");
    for (int& g : a) --g;
    return Grouping::from_assignment(std::move(a));
  }
  parse_error("grouping needs \"sizes\" or \"assignment\"");
}

json grouping_to_json(const Grouping& g) {
  std::vector<int> a = g.assignment();
  for (int& v : a) ++v;
  return json{{"assignment", a}};
}

GeneratorConfig generator_from_json(const json& j) {
  GeneratorConfig cfg;
  cfg.group_sizes = field<std::vector<int>>(j, "group_sizes");
  cfg.q_con = matrix_from_json(j.at("q_con"));
  cfg.l_gr = matrix_from_json(j.at("l_gr"));
  if (j.contains("variant")) cfg.variant = variant_from_json(j.at("variant"));
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (!j.contains("cash_flow")) parse_error("missing field 'cash_flow'");
  const json& cf = j.at("cash_flow");
  if (cf.contains("gaussian")) {
    const json& g = cf.at("gaussian");
    cfg.cash_flow = GaussianCashFlow{vector_from_json(g.at("nu")), field<double>(g, "sigma"),
                                     g.value("rho", 0.0)};
  } else if (cf.contains("gamma_copula")) {
    const json& g = cf.at("gamma_copula");
    cfg.cash_flow = GammaCopulaCashFlow{vector_from_json(g.at("kappa")), vector_from_json(g.at("theta")),
                                        g.value("rho", 0.0)};
  } else {
    parse_error("cash_flow must be {\"gaussian\": ...} or {\"gamma_copula\": ...}");
  }
  cfg.validate();
  return cfg;
}

json generator_to_json(const GeneratorConfig& cfg) {
  json cf;
  if (const auto* g = std::get_if<GaussianCashFlow>(&cfg.cash_flow)) {
    cf = {{"gaussian", {{"nu", to_json(g->nu)}, {"sigma", g->sigma}, {"rho", g->rho}}}};
  } else {
    const auto& gc = std::get<GammaCopulaCashFlow>(cfg.cash_flow);
    cf = {{"gamma_copula", {{"kappa", to_json(gc.kappa)}, {"theta", to_json(gc.theta)}, {"rho", gc.rho}}}};
  }
  return json{{"group_sizes", cfg.group_sizes}, {"q_con", to_json(cfg.q_con)}, {"l_gr", to_json(cfg.l_gr)},
              {"variant", variant_to_json(cfg.variant)}, {"seed", cfg.seed}, {"cash_flow", cf}};
}

Vector parse_vector(const std::string& text) {
  const auto cells = split(text, ',');
  if (cells.empty()) parse_error("empty vector");
  Vector v(static_cast<Eigen::Index>(cells.size()));
  for (std::size_t i = 0; i < cells.size(); ++i) v(static_cast<Eigen::Index>(i)) = to_double(cells[i]);
  return v;
}

std::optional<Vector> parse_z_ub(const std::string& text) {
  if (trim(text) == "auto") return std::nullopt;
  return parse_vector(text);
}

RiskSpec spec_from_json(const json& j) {
  RiskSpec spec;
  spec.gamma_p = j.value("gamma_p", spec.gamma_p);
  spec.epsilon = j.value("epsilon", spec.epsilon);
  if (j.contains("z_ub")) {
    const json& z = j.at("z_ub");
    if (z.is_string()) {
      spec.z_ub = parse_z_ub(z.get<std::string>());
    } else {
      spec.z_ub = vector_from_json(z);
    }
  }
  spec.validate();
  return spec;
}

json spec_to_json(const RiskSpec& spec) {
  return json{{"gamma_p", spec.gamma_p}, {"epsilon", spec.epsilon},
              {"z_ub", spec.z_ub ? to_json(*spec.z_ub) : json("auto")}};
}

json clearing_to_json(const ClearingResult& r) {
  json out{{"p", to_json(r.p)}, {"s", to_json(r.s)}};
  if (std::isfinite(r.aggregate)) {
    out["aggregate"] = r.aggregate;
    out["residual"] = r.residual;
  } else {
    out["aggregate"] = nullptr;
    out["defined"] = false;
  }
  return out;
}

json scalarization_to_json(const ScalarizationProblem& prob, const ScalarizationResult& r) {
  json out{{"kind", prob.kind == ScalarizationKind::MinStep ? "z2" : "z1"},
           {"status", std::string(milp::to_string(r.status))},
           {"gamma", prob.gamma},
           {"variables", prob.model.num_variables()},
           {"binaries", prob.model.num_binaries()},
           {"bounds",
            {{"big_m", prob.bounds.big_m}, {"lower", prob.bounds.lower}, {"upper", prob.bounds.upper}}},
           {"nodes", r.nodes},
           {"seconds", r.seconds}};
  if (prob.kind == ScalarizationKind::MinStep) {
    out["anchor"] = to_json(prob.anchor);
  } else {
    out["weights"] = to_json(prob.weights);
  }
  if (r.optimal()) {
    out["value"] = r.value;
    out["z"] = to_json(r.z);
    if (prob.kind == ScalarizationKind::MinStep) out["mu"] = r.mu;
    out["q"] = to_json(prob.scenarios.q());
    out["p"] = to_json(r.p);
    out["s"] = to_json(r.s);
  }
  return out;
}

std::string corners_csv(const ApproximationPair& pair) {
  std::ostringstream os;
  os << "kind";
  for (int g = 0; g < pair.outer.dim(); ++g) os << ",g" << (g + 1);
  os << '\n';
  auto row = [&](const char* kind, const Vector& v) {
    os << kind;
    for (Eigen::Index g = 0; g < v.size(); ++g) os << ',' << fmt_num(v(g));
    os << '\n';
  };
  for (const Vector& y : pair.inner_points) row("inner", y);
  for (const Vector& v : pair.outer.corners) row("outer", v);
  return os.str();
}

std::string polyline_csv(const ApproximationPair& pair) {
  if (pair.outer.dim() != 2) throw Error(ErrorKind::InvalidConfig, "polylines need exactly two groups");
  std::ostringstream os;
  os << "set,order,g1,g2\n";
  auto emit = [&](const char* name, std::vector<Vector> pts) {
    int order = 0;
    for (const Vector& p : staircase(std::move(pts))) {
      os << name << ',' << order++ << ',' << fmt_num(p(0)) << ',' << fmt_num(p(1)) << '\n';
    }
  };
  std::vector<Vector> inner = pair.inner_points;
  inner.push_back(pair.z_ub);
  emit("inner", std::move(inner));
  emit("outer", pair.outer.corners);
  return os.str();
}

json run_metadata(const ApproximationPair& pair) {
  json history = json::array();
  std::vector<double> mus;
  double z2_seconds = 0.0;
  for (const BensonStep& s : pair.history) {
    history.push_back(
        {{"v", to_json(s.v)}, {"mu", s.mu}, {"y", to_json(s.y)}, {"nodes", s.nodes}, {"seconds", s.seconds}});
    mus.push_back(s.mu);
    z2_seconds += s.seconds;
  }
  return json{{"iterations", pair.iterations},
              {"z2_count", pair.z2_count},
              {"mu", mus},
              {"gamma", pair.gamma},
              {"epsilon", pair.epsilon},
              {"z_ideal", to_json(pair.z_ideal)},
              {"z_ub", to_json(pair.z_ub)},
              {"inner_count", pair.inner_points.size()},
              {"outer_count", pair.outer.corners.size()},
              {"certified", pair.certified},
              {"timings",
               {{"ideal_seconds", pair.ideal_seconds},
                {"z2_seconds", z2_seconds},
                {"z2_average_seconds", pair.z2_count > 0 ? z2_seconds / pair.z2_count : 0.0},
                {"total_seconds", pair.total_seconds}}},
              {"history", history}};
}

}  // namespace netrisk::io
