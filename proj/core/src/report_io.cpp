#include "varest/report_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "varest/error.hpp"

namespace varest {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json number_or_null(std::optional<double> value) {
  if (!value || !std::isfinite(*value)) return nullptr;
  return *value;
}

std::string format_number(std::optional<double> value) {
  if (!value || !std::isfinite(*value)) return "";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), *value);
  return std::string(buf.data(), res.ptr);
}

ordered_json deltas_json(const DeltaTable& t) {
  ordered_json j;
  j["d400"] = t.d400;
  j["d040"] = t.d040;
  j["d004"] = t.d004;
  j["d220"] = t.d220;
  j["d202"] = t.d202;
  j["d022"] = t.d022;
  return j;
}

std::string_view design_of(const EstimatorKind& kind, const SimulationConfig& config) {
  if (is_two_phase(kind.tag)) return "two-phase";
  return config.nprime ? "single-phase (second-phase sample)" : "single-phase";
}

}  // namespace

std::string report_to_json(const SimulationReport& report) {
  const SimulationConfig& c = report.config;
  ordered_json root;
  root["schema"] = kReportSchema;

  ordered_json pop;
  pop["N"] = report.population.size;
  pop["Sy2"] = report.population.sy2;
  pop["Sx2"] = report.population.sx2;
  pop["Sz2"] = report.population.sz2;
  pop["deltas"] = deltas_json(report.population.deltas);
  root["population"] = pop;

  ordered_json config;
  config["n"] = c.n;
  config["nprime"] = c.nprime ? ordered_json(*c.nprime) : ordered_json(nullptr);
  config["reps"] = c.reps;
  config["seed"] = c.seed;
  config["weight_policy"] = to_string(c.weight_policy);
  if (c.weight_policy == WeightPolicy::Fixed) config["fixed_weight"] = c.fixed_weight;
  ordered_json names = ordered_json::array();
  for (const auto& kind : c.estimators) names.push_back(to_string(kind));
  config["estimators"] = names;
  root["config"] = config;

  root["reps_completed"] = report.reps_completed;
  root["reps_failed"] = report.reps_failed;
  root["warnings"] = report.warnings;

  ordered_json rows = ordered_json::array();
  for (const EstimatorReport& e : report.estimators) {
    ordered_json row;
    row["estimator"] = to_string(e.kind);
    row["design"] = design_of(e.kind, c);
    row["weight"] = number_or_null(e.weight);
    row["weight_source"] = e.weight ? ordered_json(e.weight_source) : ordered_json(nullptr);
    ordered_json emp;
    emp["mean"] = e.empirical.mean;
    emp["bias"] = e.empirical.bias;
    emp["bias_se"] = e.empirical.bias_se;
    emp["mse"] = e.empirical.mse;
    emp["mse_se"] = e.empirical.mse_se;
    emp["pre"] = number_or_null(e.empirical.pre);
    row["empirical"] = emp;
    if (e.theory) {
      ordered_json th;
      th["bias"] = number_or_null(e.theory->bias);
      th["mse"] = e.theory->mse;
      th["pre"] = number_or_null(e.theory->pre);
      th["formula_id"] = e.theory->formula_id;
      th["valid"] = e.theory->valid;
      row["theory"] = th;
    } else {
      row["theory"] = nullptr;
    }
    row["reps"] = report.reps_completed;
    row["seed"] = c.seed;
    rows.push_back(row);
  }
  root["estimators"] = rows;
  return root.dump(2) + "\n";
}

std::string report_to_csv(const SimulationReport& report) {
  std::ostringstream out;
  out << "estimator,design,weight,weight_source,reps,failed,seed,mean,bias,bias_se,mse,mse_se,"
         "pre,theory_bias,theory_mse,theory_pre,formula_id\n";
  for (const EstimatorReport& e : report.estimators) {
    const auto& t = e.theory;
    out << to_string(e.kind) << ',' << design_of(e.kind, report.config) << ','
        << format_number(e.weight) << ',' << (e.weight ? e.weight_source : "") << ','
        << report.reps_completed << ',' << report.reps_failed << ',' << report.config.seed << ','
        << format_number(e.empirical.mean) << ',' << format_number(e.empirical.bias) << ','
        << format_number(e.empirical.bias_se) << ',' << format_number(e.empirical.mse) << ','
        << format_number(e.empirical.mse_se) << ',' << format_number(e.empirical.pre) << ','
        << (t ? format_number(t->bias) : "") << ',' << (t ? format_number(t->mse) : "") << ','
        << (t ? format_number(t->pre) : "") << ',' << (t ? t->formula_id : "") << '\n';
  }
  return out.str();
}

DeltaTable parse_delta_table_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInputError(std::string("delta table is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInputError("delta table must be a JSON object");
  DeltaTable t;
  const std::array<std::pair<const char*, double*>, 6> fields{{{"d400", &t.d400},
                                                               {"d040", &t.d040},
                                                               {"d004", &t.d004},
                                                               {"d220", &t.d220},
                                                               {"d202", &t.d202},
                                                               {"d022", &t.d022}}};
  for (const auto& [key, slot] : fields) {
    const auto it = j.find(key);
    if (it == j.end()) throw InvalidInputError(std::string("delta table is missing ") + key);
    if (!it->is_number()) throw InvalidInputError(std::string(key) + " must be a number");
    *slot = it->get<double>();
  }
  for (const auto& item : j.items()) {
    bool known = false;
    for (const auto& field : fields) known = known || item.key() == field.first;
    if (!known) throw InvalidInputError("unknown delta table key '" + item.key() + "'");
  }
  require_finite(t);
  return t;
}

DeltaTable load_delta_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_delta_table_json(text);
}

std::string delta_table_to_json(const DeltaTable& table) {
  return deltas_json(table).dump(2) + "\n";
}

}  // namespace varest
