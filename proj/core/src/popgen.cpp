#include "varest/popgen.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>

#include "json.hpp"
#include "varest/error.hpp"
#include "varest/moments.hpp"
#include "varest/random.hpp"

namespace varest {

namespace {

using Matrix3 = std::array<std::array<double, 3>, 3>;

// Lower-triangular L with L L^T = a. Fails on non-positive pivots.
Matrix3 cholesky(const Matrix3& a) {
  Matrix3 l{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = a[i][j];
      for (int k = 0; k < j; ++k) sum -= l[i][k] * l[j][k];
      if (i == j) {
        if (!(sum > 0.0)) {
          throw InvalidSpecError("latent correlation matrix is not positive definite");
        }
        l[i][i] = std::sqrt(sum);
      } else {
        l[i][j] = sum / l[j][j];
      }
    }
  }
  return l;
}

double apply(const Marginal& m, double latent) {
  switch (m.family) {
    case Marginal::Family::Normal: return m.location + m.scale * latent;
    case Marginal::Family::LogNormal: return std::exp(m.location + m.scale * latent);
  }
  return latent;
}

void check_spec(const PopulationSpec& spec) {
  if (spec.size < 2) throw InvalidSpecError("population size must be >= 2");
  for (double rho : {spec.rho_yx, spec.rho_yz, spec.rho_xz}) {
    if (!(rho > -1.0 && rho < 1.0)) throw InvalidSpecError("latent correlations must lie in (-1, 1)");
  }
  for (const Marginal* m : {&spec.y, &spec.x, &spec.z}) {
    if (!(m->scale > 0.0) || !std::isfinite(m->scale) || !std::isfinite(m->location)) {
      throw InvalidSpecError("marginal scale must be finite and > 0");
    }
  }
}

std::string trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                          : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_field(const std::string& field, std::size_t line) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  if (!field.empty() && field.front() == '+') ++begin;
  const auto res = std::from_chars(begin, end, value);
  if (field.empty() || res.ec != std::errc{} || res.ptr != end || !std::isfinite(value)) {
    throw ParseError(line, "non-numeric field '" + field + "'");
  }
  return value;
}

std::string format(double value) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

Marginal marginal_from_json(const nlohmann::json& j, Marginal m) {
  if (!j.is_object()) throw InvalidSpecError("marginal must be a JSON object");
  const std::string family = j.value("family", m.family == Marginal::Family::Normal
                                                    ? std::string("normal")
                                                    : std::string("lognormal"));
  if (family == "normal") {
    m.family = Marginal::Family::Normal;
    m.location = j.value("mu", m.location);
    m.scale = j.value("sigma", m.scale);
  } else if (family == "lognormal") {
    m.family = Marginal::Family::LogNormal;
    m.location = j.value("logMu", m.location);
    m.scale = j.value("logSigma", m.scale);
  } else {
    throw InvalidSpecError("unknown marginal family '" + family + "'");
  }
  return m;
}

nlohmann::ordered_json marginal_to_json(const Marginal& m) {
  nlohmann::ordered_json j;
  if (m.family == Marginal::Family::Normal) {
    j["family"] = "normal";
    j["mu"] = m.location;
    j["sigma"] = m.scale;
  } else {
    j["family"] = "lognormal";
    j["logMu"] = m.location;
    j["logSigma"] = m.scale;
  }
  return j;
}

}  // namespace

Population generate_population(const PopulationSpec& spec) {
  check_spec(spec);
  const Matrix3 corr{{{1.0, spec.rho_yx, spec.rho_yz},
                      {spec.rho_yx, 1.0, spec.rho_xz},
                      {spec.rho_yz, spec.rho_xz, 1.0}}};
  const Matrix3 l = cholesky(corr);
  Rng rng(spec.seed);
  std::vector<double> y(spec.size), x(spec.size), z(spec.size);
  for (std::size_t i = 0; i < spec.size; ++i) {
    const double e0 = rng.normal();
    const double e1 = rng.normal();
    const double e2 = rng.normal();
    y[i] = apply(spec.y, l[0][0] * e0);
    x[i] = apply(spec.x, l[1][0] * e0 + l[1][1] * e1);
    z[i] = apply(spec.z, l[2][0] * e0 + l[2][1] * e1 + l[2][2] * e2);
  }
  return Population(std::move(y), std::move(x), std::move(z));
}

PopulationSpec parse_population_spec_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidSpecError(std::string("population spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidSpecError("population spec must be a JSON object");
  PopulationSpec spec;
  try {
    spec.size = j.value("N", spec.size);
    spec.rho_yx = j.value("rho_yx", spec.rho_yx);
    spec.rho_yz = j.value("rho_yz", spec.rho_yz);
    spec.rho_xz = j.value("rho_xz", spec.rho_xz);
    spec.seed = j.value("seed", spec.seed);
    if (j.contains("y")) spec.y = marginal_from_json(j["y"], spec.y);
    if (j.contains("x")) spec.x = marginal_from_json(j["x"], spec.x);
    if (j.contains("z")) spec.z = marginal_from_json(j["z"], spec.z);
  } catch (const nlohmann::json::type_error& e) {
    throw InvalidSpecError(std::string("population spec has a mistyped field: ") + e.what());
  }
  check_spec(spec);
  return spec;
}

std::string population_spec_to_json(const PopulationSpec& spec) {
  nlohmann::ordered_json j;
  j["N"] = spec.size;
  j["rho_yx"] = spec.rho_yx;
  j["rho_yz"] = spec.rho_yz;
  j["rho_xz"] = spec.rho_xz;
  j["seed"] = spec.seed;
  j["y"] = marginal_to_json(spec.y);
  j["x"] = marginal_to_json(spec.x);
  j["z"] = marginal_to_json(spec.z);
  return j.dump(2) + "\n";
}

NumericTable parse_numeric_csv(std::istream& in) {
  NumericTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split(line);
    if (!have_header) {
      table.header = std::move(fields);
      table.columns.resize(table.header.size());
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw ParseError(line_no, "expected " + std::to_string(table.header.size()) +
                                    " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      table.columns[c].push_back(parse_field(fields[c], line_no));
    }
  }
  if (!have_header) throw InvalidInputError("CSV input is empty");
  return table;
}

NumericTable load_numeric_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path);
  return parse_numeric_csv(in);
}

const std::vector<double>& NumericTable::column(std::string_view name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return columns[c];
  }
  throw InvalidInputError("CSV has no column '" + std::string(name) + "'");
}

Population parse_population_csv(std::istream& in, std::vector<std::string>* warnings) {
  NumericTable table = parse_numeric_csv(in);
  if (table.header != std::vector<std::string>{"y", "x", "z"}) {
    throw ParseError(1, "header must be exactly y,x,z");
  }
  Population pop(std::move(table.columns[0]), std::move(table.columns[1]),
                 std::move(table.columns[2]));
  if (warnings != nullptr) {
    const std::array<std::pair<char, double>, 3> variances{
        {{'y', pop.sy2()}, {'x', pop.sx2()}, {'z', pop.sz2()}}};
    for (const auto& [name, var] : variances) {
      if (!(var > 0.0)) warnings->push_back(std::string("variate ") + name + " has zero variance");
    }
  }
  return pop;
}

Population load_population(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path);
  return parse_population_csv(in, warnings);
}

void write_population_csv(std::ostream& out, const Population& pop) {
  out << "y,x,z\n";
  for (std::size_t i = 0; i < pop.size(); ++i) {
    out << format(pop.y()[i]) << ',' << format(pop.x()[i]) << ',' << format(pop.z()[i]) << '\n';
  }
}

void save_population(const std::string& path, const Population& pop) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot write " + path);
  write_population_csv(out, pop);
  if (!out) throw InvalidInputError("failed writing " + path);
}

}  // namespace varest
