#include "coxclaims/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "coxclaims/errors.hpp"

namespace coxclaims {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw ValidationError("config key '" + key + "': " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path = "") {
  const std::string name = path.empty() ? key : path + "." + key;
  if (!obj.contains(key)) bad(name, "missing");
  return obj.at(key);
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) bad(key, "expected a number");
  return v.get<double>();
}

std::vector<double> numbers(const json& v, const std::string& key) {
  if (!v.is_array()) bad(key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(number(x, key));
  return out;
}

std::vector<std::vector<double>> gamma_rows(const json& v, int g) {
  if (!v.is_array()) bad("gamma", "expected an array");
  std::vector<std::vector<double>> rows;
  if (!v.empty() && v.front().is_array()) {
    for (const auto& r : v) rows.push_back(numbers(r, "gamma"));
  } else {
    const std::vector<double> flat = numbers(v, "gamma");
    if (static_cast<long>(flat.size()) != static_cast<long>(g) * g)
      bad("gamma", "flat form needs g*g = " + std::to_string(g * g) + " entries");
    for (int i = 0; i < g; ++i) rows.emplace_back(flat.begin() + i * g, flat.begin() + (i + 1) * g);
  }
  if (static_cast<int>(rows.size()) != g) bad("gamma", "expected " + std::to_string(g) + " rows");
  for (const auto& r : rows)
    if (static_cast<int>(r.size()) != g) bad("gamma", "every row needs " + std::to_string(g) + " entries");
  return rows;
}

DelayModel parse_delay(const json& v) {
  if (!v.is_object()) bad("delay", "expected an object");
  const json& fam = require(v, "family", "delay");
  if (!fam.is_string()) bad("delay.family", "expected a string");
  const std::string family = fam.get<std::string>();
  static const json empty = json::object();
  const json& params = v.contains("params") ? v.at("params") : empty;
  if (!params.is_object()) bad("delay.params", "expected an object");
  const auto param = [&](const std::string& key) {
    return number(require(params, key, "delay.params"), "delay.params." + key);
  };
  try {
    if (family == "degenerate") return DelayModel::degenerate(param("c"));
    if (family == "exponential") return DelayModel::exponential(param("rate"));
    if (family == "uniform") return DelayModel::uniform(param("b"));
    if (family == "weibull") return DelayModel::weibull(param("shape"), param("scale"));
    if (family == "empirical")
      return DelayModel::empirical(numbers(require(params, "knots", "delay.params"), "delay.params.knots"),
                                   numbers(require(params, "cdf", "delay.params"), "delay.params.cdf"));
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.rfind("config key", 0) == 0) throw;
    bad("delay.params", what);
  }
  bad("delay.family", "unknown family '" + family + "'");
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");

  const json& gv = require(doc, "g");
  if (!gv.is_number_integer() || gv.get<long>() < 1) bad("g", "expected a positive integer");
  const int g = gv.get<int>();

  std::vector<int> shapes;
  const json& sv = require(doc, "shapes");
  if (!sv.is_array()) bad("shapes", "expected an array of integers");
  for (const auto& s : sv) {
    if (!s.is_number_integer()) bad("shapes", "expected an array of integers");
    shapes.push_back(s.get<int>());
  }

  const auto checked = [](const std::string& key, auto&& make) {
    try {
      return make();
    } catch (const ValidationError& e) {
      const std::string what = e.what();
      if (what.rfind("config key", 0) == 0) throw;
      bad(key, what);
    }
  };
  TransitionMatrix chain =
      checked("gamma", [&] { return TransitionMatrix::from_rows(gamma_rows(require(doc, "gamma"), g)); });
  StateDistribution initial =
      checked("pi1", [&] { return StateDistribution::from_vector(numbers(require(doc, "pi1"), "pi1")); });
  const double theta = number(require(doc, "theta"), "theta");
  std::vector<double> grid = numbers(require(doc, "grid"), "grid");
  std::vector<double> exposures = numbers(require(doc, "exposures"), "exposures");
  ModelSpec model(std::move(chain), std::move(initial), std::move(shapes), theta, std::move(grid),
                  std::move(exposures));

  DelayModel delay = doc.contains("delay") ? parse_delay(doc.at("delay")) : DelayModel::degenerate(0.0);

  double valuation = model.grid().back();
  if (doc.contains("valuation")) {
    valuation = number(doc.at("valuation"), "valuation");
    const auto k = model.grid_index(valuation);
    if (!k || *k == 0) bad("valuation", "must be a positive grid point");
    valuation = model.boundary(*k);
  }

  std::optional<std::uint64_t> seed;
  if (doc.contains("seed") && !doc.at("seed").is_null()) {
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0))
      bad("seed", "expected a nonnegative integer");
    seed = s.get<std::uint64_t>();
  }
  return RunConfig{std::move(model), std::move(delay), valuation, seed};
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace coxclaims
