#include "seqrank/serialization.hpp"

#include <cstdio>
#include <stdexcept>

namespace seqrank {

using nlohmann::json;

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols))
    throw std::invalid_argument("matrix JSON has inconsistent shape");
  Eigen::MatrixXd m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[k++].get<double>();
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from_json(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string level_key(double alpha) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", alpha);
  return buf;
}

template <class V>
json level_map(const std::map<double, V>& m) {
  json out = json::object();
  for (const auto& [alpha, v] : m) out[level_key(alpha)] = v;
  return out;
}

}  // namespace

json to_json(const RankerSnapshot& s) {
  return {{"kind", "naive_bayes_ranker"}, {"d", s.d},          {"tau", s.tau},
          {"t", s.steps},                 {"R", s.wins},       {"p", s.posterior},
          {"q", s.likelihood}};
}

RankerSnapshot ranker_snapshot_from_json(const json& j) {
  RankerSnapshot s;
  s.d = j.at("d").get<std::size_t>();
  s.tau = j.at("tau").get<double>();
  s.steps = j.at("t").get<std::size_t>();
  s.wins = j.at("R").get<std::vector<double>>();
  s.posterior = j.at("p").get<std::vector<double>>();
  if (j.contains("q")) s.likelihood = j.at("q").get<std::vector<double>>();
  return s;
}

json to_json(const CwSnapshot& s) {
  return {{"kind", "curds_whey_ewrls"},
          {"d", s.d},
          {"lambda", s.lambda},
          {"tau", s.tau},
          {"stabilisation", to_string(s.stabilisation)},
          {"t", s.steps},
          {"resets", s.resets},
          {"theta", matrix_to_json(s.theta)},
          {"P", matrix_to_json(s.p)},
          {"phi", matrix_to_json(s.phi)},
          {"Q", matrix_to_json(s.q)},
          {"x_prev", vector_to_json(s.x_prev)},
          {"y_prev", vector_to_json(s.y_prev)}};
}

CwSnapshot cw_snapshot_from_json(const json& j) {
  CwSnapshot s;
  s.d = j.at("d").get<std::size_t>();
  s.lambda = j.at("lambda").get<double>();
  s.tau = j.at("tau").get<double>();
  s.stabilisation = parse_stabilisation(j.value("stabilisation", std::string("rescale")));
  s.steps = j.at("t").get<std::size_t>();
  s.resets = j.value("resets", std::size_t{0});
  s.theta = matrix_from_json(j.at("theta"));
  s.p = matrix_from_json(j.at("P"));
  s.phi = matrix_from_json(j.at("phi"));
  s.q = matrix_from_json(j.at("Q"));
  s.x_prev = vector_from_json(j.at("x_prev"));
  s.y_prev = vector_from_json(j.at("y_prev"));
  return s;
}

json to_json(const AdfResult& r) {
  return {{"theta0", r.theta0},
          {"theta1", r.theta1},
          {"t_stat", r.t_stat},
          {"n_obs", r.n_obs},
          {"critical_values", level_map(r.critical_values)},
          {"reject_unit_root", level_map(r.reject_unit_root)}};
}

json to_json(const TTestResult& r) {
  return {{"t_stat", r.t_stat}, {"dof", r.dof},       {"critical_value", r.critical_value},
          {"alpha", r.alpha},   {"sidedness", to_string(r.sidedness)}, {"reject", r.reject}};
}

json to_json(const LeveneResult& r) {
  return {{"w_stat", r.w_stat},
          {"dof_between", r.dof_between},
          {"dof_within", r.dof_within},
          {"critical_value", r.critical_value},
          {"alpha", r.alpha},
          {"reject", r.reject}};
}

json to_json(const StationarityReport& r) {
  json assets = json::array();
  for (const auto& a : r.assets) {
    json months = json::array();
    for (const auto& m : a.months)
      months.push_back({{"year", m.year}, {"month", m.month}, {"count", m.count}, {"mean", m.mean}, {"var", m.var}});
    json tests = json::array();
    for (const auto& t : a.tests) {
      json block = to_json(t.result);
      block["shift"] = t.shift;
      block["month"] = t.month;
      tests.push_back(std::move(block));
    }
    assets.push_back({{"asset", a.asset},
                      {"adf_prices", a.adf_prices ? to_json(*a.adf_prices) : json(nullptr)},
                      {"adf_returns", a.adf_returns ? to_json(*a.adf_returns) : json(nullptr)},
                      {"levene", a.levene ? to_json(*a.levene) : json(nullptr)},
                      {"months", std::move(months)},
                      {"t_tests", std::move(tests)},
                      {"degenerate_tests", a.degenerate_tests},
                      {"notes", a.notes}});
  }
  json shifts = json::array();
  for (const auto& s : r.rejection_by_shift)
    shifts.push_back({{"shift", s.shift}, {"tests", s.tests}, {"rejections", s.rejections}, {"frequency", s.frequency}});
  return {{"options",
           {{"max_shift", r.options.max_shift},
            {"alpha", r.options.alpha},
            {"sidedness", to_string(r.options.sidedness)},
            {"min_month_obs", r.options.min_month_obs}}},
          {"summary",
           {{"price_nonstationary_fraction", r.price_nonstationary_fraction},
            {"return_stationary_fraction", r.return_stationary_fraction},
            {"levene_rejection_fraction", r.levene_rejection_fraction},
            {"skipped_components", r.skipped_components}}},
          {"rejection_by_shift", std::move(shifts)},
          {"assets", std::move(assets)}};
}

json to_json(const BacktestConfig& c) {
  return {{"mode", to_string(c.mode)},
          {"strategy", to_string(c.strategy)},
          {"decile_fraction", c.decile_fraction},
          {"tau", c.tau},
          {"lambda", c.lambda},
          {"stabilisation", to_string(c.stabilisation)},
          {"nbar_input", to_string(c.nbar_input)},
          {"nbar_membership", to_string(c.nbar_membership)},
          {"cost_model", to_string(c.cost_model)}};
}

json to_json(const MetricsBlock& m) {
  return {{"days", m.days},
          {"mean", m.mean},
          {"std", m.std},
          {"min", m.min},
          {"q25", m.q25},
          {"median", m.median},
          {"q75", m.q75},
          {"max", m.max},
          {"sum", m.sum},
          {"cagr", m.cagr},
          {"sharpe", optional_number(m.sharpe)},
          {"prob_positive", optional_number(m.prob_positive)},
          {"max_drawdown", m.max_drawdown},
          {"return_over_maxdd", optional_number(m.return_over_maxdd)},
          {"win_ratio", m.win_ratio},
          {"loss_ratio", m.loss_ratio}};
}

json to_json(const BacktestReport& r) {
  json records = json::array();
  for (const auto& d : r.records)
    records.push_back({{"date", format_iso_date(d.date)},
                       {"gross", d.gross},
                       {"cost", d.cost},
                       {"net", d.net},
                       {"turnover", d.turnover},
                       {"benchmark", d.benchmark},
                       {"n_long", d.n_long},
                       {"n_short", d.n_short}});
  json out = {{"config", to_json(r.config)},
              {"assets", r.assets},
              {"metrics", {{"strategy", to_json(r.strategy)}, {"benchmark", to_json(r.benchmark)}}},
              {"regression_resets", r.regression_resets},
              {"records", std::move(records)}};
  if (!r.sectors.empty()) {
    json sectors = json::array();
    for (const auto& s : r.sectors)
      sectors.push_back({{"sector", s.sector},
                         {"long_count", s.long_count},
                         {"short_count", s.short_count},
                         {"long_share", s.long_share},
                         {"short_share", s.short_share}});
    out["sector_selection"] = std::move(sectors);
  }
  return out;
}

}  // namespace seqrank
