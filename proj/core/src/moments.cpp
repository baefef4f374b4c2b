#include "varest/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "varest/error.hpp"

namespace varest {

namespace {

double mean_of(std::span<const double> values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

// Integer power by repeated multiplication; exponents here are small.
double ipow(double base, int exponent) {
  double result = 1.0;
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

void check_view(const Trivariate& data) {
  if (data.size() == 0) throw InvalidInputError("empty population");
  if (data.x.size() != data.size() || data.z.size() != data.size()) {
    throw InvalidInputError("columns differ in length");
  }
}

void check_orders(int p, int q, int r, const MomentOptions& options) {
  if (p < 0 || q < 0 || r < 0) throw InvalidInputError("moment orders must be non-negative");
  if (p + q + r > options.max_order) {
    throw InvalidInputError("moment order " + std::to_string(p + q + r) + " exceeds cap " +
                            std::to_string(options.max_order));
  }
}

}  // namespace

void require_finite(const DeltaTable& t) {
  const std::array<std::pair<const char*, double>, 6> entries{{{"d400", t.d400},
                                                               {"d040", t.d040},
                                                               {"d004", t.d004},
                                                               {"d220", t.d220},
                                                               {"d202", t.d202},
                                                               {"d022", t.d022}}};
  for (const auto& [name, value] : entries) {
    if (!std::isfinite(value)) {
      throw InvalidInputError(std::string("delta table entry ") + name + " is not finite");
    }
  }
}

std::vector<std::string> delta_table_violations(const DeltaTable& t, double tolerance) {
  std::vector<std::string> out;
  const auto kurtosis = [&](const char* name, double value) {
    if (value < 1.0 - tolerance) out.push_back(std::string(name) + " < 1");
  };
  kurtosis("d400", t.d400);
  kurtosis("d040", t.d040);
  kurtosis("d004", t.d004);
  const auto bound = [&](const char* name, double cross, double a, double b) {
    const double limit = std::sqrt(std::max(0.0, (a - 1.0) * (b - 1.0)));
    if (std::abs(cross - 1.0) > limit + tolerance) {
      out.push_back(std::string("|") + name + " - 1| exceeds correlation bound");
    }
  };
  bound("d220", t.d220, t.d400, t.d040);
  bound("d202", t.d202, t.d400, t.d004);
  bound("d022", t.d022, t.d040, t.d004);
  return out;
}

double central_moment(const Trivariate& data, int p, int q, int r, const MomentOptions& options) {
  check_view(data);
  check_orders(p, q, r, options);
  const double my = mean_of(data.y);
  const double mx = mean_of(data.x);
  const double mz = mean_of(data.z);
  double sum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    sum += ipow(data.y[i] - my, p) * ipow(data.x[i] - mx, q) * ipow(data.z[i] - mz, r);
  }
  return sum / static_cast<double>(data.size());
}

double central_moment(const Population& pop, int p, int q, int r, const MomentOptions& options) {
  return central_moment(pop.view(), p, q, r, options);
}

double delta(const Trivariate& data, int p, int q, int r, const MomentOptions& options) {
  const double numerator = central_moment(data, p, q, r, options);
  double denominator = 1.0;
  const std::array<std::pair<char, int>, 3> parts{{{'y', p}, {'x', q}, {'z', r}}};
  for (const auto& [variate, exponent] : parts) {
    if (exponent == 0) continue;
    const double var = central_moment(data, variate == 'y' ? 2 : 0, variate == 'x' ? 2 : 0,
                                      variate == 'z' ? 2 : 0, options);
    if (!(var > 0.0)) {
      throw DegeneratePopulationError(variate, std::string("variate ") + variate +
                                                   " has zero variance; delta is undefined");
    }
    denominator *= std::pow(var, 0.5 * exponent);
  }
  return numerator / denominator;
}

double delta(const Population& pop, int p, int q, int r, const MomentOptions& options) {
  return delta(pop.view(), p, q, r, options);
}

DeltaTable delta_table(const Trivariate& data) {
  check_view(data);
  const double my = mean_of(data.y);
  const double mx = mean_of(data.x);
  const double mz = mean_of(data.z);
  // Accumulate squared deviations and their products.
  double m200 = 0, m020 = 0, m002 = 0;
  double m400 = 0, m040 = 0, m004 = 0, m220 = 0, m202 = 0, m022 = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double a = (data.y[i] - my) * (data.y[i] - my);
    const double b = (data.x[i] - mx) * (data.x[i] - mx);
    const double c = (data.z[i] - mz) * (data.z[i] - mz);
    m200 += a;
    m020 += b;
    m002 += c;
    m400 += a * a;
    m040 += b * b;
    m004 += c * c;
    m220 += a * b;
    m202 += a * c;
    m022 += b * c;
  }
  const double count = static_cast<double>(data.size());
  m200 /= count;
  m020 /= count;
  m002 /= count;
  if (!(m200 > 0.0)) throw DegeneratePopulationError('y', "variate y has zero variance");
  if (!(m020 > 0.0)) throw DegeneratePopulationError('x', "variate x has zero variance");
  if (!(m002 > 0.0)) throw DegeneratePopulationError('z', "variate z has zero variance");
  DeltaTable t;
  t.d400 = m400 / count / (m200 * m200);
  t.d040 = m040 / count / (m020 * m020);
  t.d004 = m004 / count / (m002 * m002);
  t.d220 = m220 / count / (m200 * m020);
  t.d202 = m202 / count / (m200 * m002);
  t.d022 = m022 / count / (m020 * m002);
  return t;
}

DeltaTable delta_table(const Population& pop) { return delta_table(pop.view()); }

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) {
    throw InvalidInputError("sample variance needs at least 2 values, got " +
                            std::to_string(values.size()));
  }
  const double m = mean_of(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return ss / static_cast<double>(values.size() - 1);
}

}  // namespace varest
