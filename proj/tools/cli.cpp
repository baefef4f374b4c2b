#include "cli.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"
#include "varest/error.hpp"
#include "varest/estimators.hpp"
#include "varest/moments.hpp"
#include "varest/popgen.hpp"
#include "varest/reference.hpp"
#include "varest/report_io.hpp"
#include "varest/simulation.hpp"
#include "varest/theory.hpp"

namespace varest::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

enum class Format { Json, Csv, Text };

// A cell is text, a flag, or an optional number (empty renders as blank/null).
using Cell = std::variant<std::string, std::optional<double>, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string number_text(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return "";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), *v);
  return std::string(buf.data(), res.ptr);
}

std::string cell_text(const Cell& c, bool pretty) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* b = std::get_if<bool>(&c)) {
    if (pretty) return *b ? "yes" : "no";
    return *b ? "true" : "false";
  }
  const auto& v = std::get<std::optional<double>>(c);
  if (!v) return pretty ? "-" : "";
  return pretty ? fmt::format("{:.6g}", *v) : number_text(v);
}

std::string render_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i], false);
    out += '\n';
  }
  return out;
}

std::string render_text(const Table& t) {
  std::vector<std::size_t> width(t.columns.size());
  for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      width[i] = std::max(width[i], cell_text(row[i], true).size());
    }
  }
  std::string out;
  const auto line = [&](const auto& cells, auto&& text_of) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out += fmt::format("{:<{}}", text_of(cells[i]), width[i] + 2);
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  };
  line(t.columns, [](const std::string& s) { return s; });
  for (const auto& row : t.rows) line(row, [](const Cell& c) { return cell_text(c, true); });
  return out;
}

ordered_json rows_json(const Table& t) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : t.rows) {
    ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (const auto* s = std::get_if<std::string>(&row[i])) {
        obj[t.columns[i]] = *s;
      } else if (const auto* b = std::get_if<bool>(&row[i])) {
        obj[t.columns[i]] = *b;
      } else if (const auto& v = std::get<std::optional<double>>(row[i]); v && std::isfinite(*v)) {
        obj[t.columns[i]] = *v;
      } else {
        obj[t.columns[i]] = nullptr;
      }
    }
    rows.push_back(obj);
  }
  return rows;
}

Format parse_format(const std::string& text) {
  if (text == "json") return Format::Json;
  if (text == "csv") return Format::Csv;
  if (text == "text") return Format::Text;
  throw InvalidInputError("unknown format '" + text + "' (expected json, csv or text)");
}

// Writes to --out when given, otherwise to the output stream.
void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw InvalidInputError("cannot write " + out_path);
  file << text;
  if (!file) throw InvalidInputError("failed writing " + out_path);
}

std::string render(Format format, const Table& table, ordered_json doc, const std::string& rows_key) {
  switch (format) {
    case Format::Csv: return render_csv(table);
    case Format::Text: return render_text(table);
    case Format::Json:
      doc[rows_key] = rows_json(table);
      return doc.dump(2) + "\n";
  }
  return {};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// ---------------------------------------------------------------------------

struct SharedOptions {
  std::string input;
  std::string out;
  std::string format;
  std::uint64_t seed = 0;
};

struct MomentsOptions {
  std::string orders = "400,040,004,220,202,022";
};

int cmd_moments(const SharedOptions& shared, const MomentsOptions& opts, std::ostream& out,
                std::ostream& err) {
  if (shared.input.empty()) throw InvalidInputError("moments requires --input");
  std::vector<std::string> warnings;
  const Population pop = load_population(shared.input, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';

  Table table{{"order", "mu", "delta"}, {}};
  std::stringstream list(opts.orders);
  std::string order;
  while (std::getline(list, order, ',')) {
    if (order.empty()) continue;
    if (order.size() != 3 || !std::all_of(order.begin(), order.end(), ::isdigit)) {
      throw InvalidInputError("order '" + order + "' must be three digits pqr");
    }
    const int p = order[0] - '0', q = order[1] - '0', r = order[2] - '0';
    table.rows.push_back({order, central_moment(pop, p, q, r), delta(pop, p, q, r)});
  }
  if (table.rows.empty()) throw InvalidInputError("no moment orders requested");

  ordered_json doc;
  doc["N"] = pop.size();
  doc["input"] = shared.input;
  const Format format = parse_format(shared.format.empty() ? "text" : shared.format);
  if (format == Format::Json) {
    const DeltaTable t = delta_table(pop);
    doc["delta_table"] = ordered_json::parse(delta_table_to_json(t));
  }
  emit(render(format, table, doc, "moments"), shared.out, out);
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct EstimateOptions {
  std::optional<double> sx2;
  std::optional<double> sz2;
  std::string aux_from;
  std::string first_phase;
  std::string estimators = "all";
  std::string deltas;
};

int cmd_estimate(const SharedOptions& shared, const EstimateOptions& opts, std::ostream& out,
                 std::ostream& err) {
  if (shared.input.empty()) throw InvalidInputError("estimate requires --input");
  std::vector<std::string> warnings;
  const Population sample = load_population(shared.input, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';

  std::optional<DeltaTable> known;
  if (!opts.deltas.empty()) known = load_delta_table(opts.deltas);
  const DeltaTable* known_ptr = known ? &*known : nullptr;

  const bool two_phase = !opts.first_phase.empty();
  std::optional<TwoPhaseSample> nested;
  if (two_phase) {
    const NumericTable first = load_numeric_csv(opts.first_phase);
    nested.emplace(std::vector<double>(sample.y().begin(), sample.y().end()),
                   std::vector<double>(sample.x().begin(), sample.x().end()),
                   std::vector<double>(sample.z().begin(), sample.z().end()), first.column("x"),
                   first.column("z"));
  }

  std::optional<AuxKnowledge> aux;
  if (!opts.aux_from.empty()) {
    const Population pop = load_population(opts.aux_from);
    aux = AuxKnowledge{pop.sx2(), pop.sz2()};
  }
  if (opts.sx2 || opts.sz2) {
    if (!opts.sx2 || !opts.sz2) throw InvalidInputError("--sx2 and --sz2 must be given together");
    aux = AuxKnowledge{*opts.sx2, *opts.sz2};
  }

  Table table{{"estimator", "estimate", "weight", "weight_source"}, {}};
  for (const EstimatorKind& kind : parse_estimator_list(opts.estimators, two_phase)) {
    std::optional<double> weight;
    std::string source;
    if (is_combined(kind.tag)) {
      const Trivariate view = nested ? nested->second_phase() : sample.view();
      const ResolvedWeight w = resolve_weight(kind.weight, view, known_ptr);
      weight = w.value;
      source = std::string(to_string(w.source));
    }
    double value = 0.0;
    if (is_two_phase(kind.tag)) {
      if (!nested) throw InvalidDesignError(to_string(kind) + " requires --first-phase");
      value = estimate_two_phase(kind, *nested, known_ptr);
    } else if (kind.tag == Estimator::Unbiased) {
      value = sample_variance(sample.y());
    } else {
      if (!aux) {
        throw InvalidInputError(to_string(kind) + " requires --sx2/--sz2 or --aux-from");
      }
      value = estimate_single_phase(kind, sample.view(), *aux, known_ptr);
    }
    table.rows.push_back({to_string(kind), value, weight, source});
  }

  ordered_json doc;
  doc["n"] = sample.size();
  if (nested) doc["nprime"] = nested->first_x().size();
  emit(render(parse_format(shared.format.empty() ? "text" : shared.format), table, doc, "estimates"),
       shared.out, out);
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct TheoryOptions {
  std::string deltas;
  bool builtin = false;
  std::size_t n = kReferenceSampleSize;
  std::optional<std::size_t> nprime;
  double sy2 = 1.0;
  std::optional<double> alpha;
  bool optimal = false;
  bool ledger = false;
};

int cmd_theory(const SharedOptions& shared, const TheoryOptions& opts, std::ostream& out,
               std::ostream& err) {
  const Format format = parse_format(shared.format.empty() ? "text" : shared.format);
  if (opts.ledger) {
    Table table{{"formula_id", "published", "corrected", "check"}, {}};
    for (const auto& c : formula_corrections()) {
      table.rows.push_back({c.formula_id, c.published, c.corrected, c.check});
    }
    emit(render(format, table, ordered_json::object(), "corrections"), shared.out, out);
    return kSuccess;
  }
  if (opts.builtin == !opts.deltas.empty()) {
    throw InvalidInputError("theory requires exactly one of --deltas or --builtin-reference");
  }
  if (opts.alpha && opts.optimal) throw InvalidInputError("--alpha and --optimal are exclusive");
  const DeltaTable d = opts.builtin ? reference_deltas() : load_delta_table(opts.deltas);
  for (const auto& v : delta_table_violations(d)) err << "warning: moment table: " << v << '\n';
  if (opts.builtin) err << "note: " << kReferenceD022Note << '\n';

  const DesignSizes single{opts.n, std::nullopt};
  const DesignSizes sizes{opts.n, opts.nprime};
  const double base = var_unbiased_theory(d, opts.sy2, single);
  const double weight = opts.alpha ? *opts.alpha : alpha_opt(d);

  Table table{{"estimator", "weight", "bias", "mse", "pre", "formula_id", "valid"}, {}};
  const auto add = [&](Estimator kind, const TheoryResult& r, std::optional<double> w) {
    std::optional<double> p;
    if (r.mse > 0.0 && base > 0.0) p = pre(r.mse, base);
    table.rows.push_back({std::string(name_of(kind)), w, r.bias, r.mse, p, r.formula_id,
                          r.valid});
  };
  if (opts.nprime) {
    add(Estimator::Unbiased, mse_two_phase(Estimator::Unbiased, d, opts.sy2, sizes), std::nullopt);
    add(Estimator::ExpRatioTwoPhase, mse_two_phase(Estimator::ExpRatioTwoPhase, d, opts.sy2, sizes),
        std::nullopt);
    add(Estimator::ExpProductTwoPhase,
        mse_two_phase(Estimator::ExpProductTwoPhase, d, opts.sy2, sizes), std::nullopt);
    add(Estimator::CombinedTwoPhase,
        mse_two_phase(Estimator::CombinedTwoPhase, d, opts.sy2, sizes, weight), weight);
  } else {
    for (Estimator kind : {Estimator::Unbiased, Estimator::IsakiRatio, Estimator::ExpRatio,
                           Estimator::ExpProduct}) {
      add(kind, mse_single_phase(kind, d, opts.sy2, single), std::nullopt);
    }
    add(Estimator::Combined, mse_single_phase(Estimator::Combined, d, opts.sy2, single, weight),
        weight);
  }

  ordered_json doc;
  doc["n"] = opts.n;
  doc["nprime"] = opts.nprime ? ordered_json(*opts.nprime) : ordered_json(nullptr);
  doc["sy2"] = opts.sy2;
  doc["weight_source"] = opts.alpha ? "fixed" : "optimal";
  doc["deltas"] = ordered_json::parse(delta_table_to_json(d));
  if (opts.builtin) doc["note"] = kReferenceD022Note;
  emit(render(format, table, doc, "estimators"), shared.out, out);
  return kSuccess;
}

// ---------------------------------------------------------------------------

int cmd_reproduce_tables(const SharedOptions& shared, std::ostream& out) {
  const Format format = parse_format(shared.format.empty() ? "text" : shared.format);
  Table table{{"table", "estimator", "published", "computed", "deviation", "status"}, {}};
  for (const ReferenceCell& c : reproduce_reference_tables()) {
    table.rows.push_back({c.table, c.estimator, c.published, c.computed, c.relative_deviation,
                          std::string(c.consistent ? "reproduced" : "inconsistent")});
  }
  ordered_json doc;
  doc["n"] = kReferenceSampleSize;
  doc["nprime"] = kReferenceNPrime;
  doc["deltas"] = ordered_json::parse(delta_table_to_json(reference_deltas()));
  doc["note"] = kReferenceD022Note;
  doc["inconsistent_means"] =
      "published value disagrees with the first-order MSE formulas, both as published and as "
      "corrected; computed value is reported unaltered";
  std::string text = render(format, table, doc, "cells");
  if (format == Format::Text) {
    text += fmt::format("\nmoments: {}\ninconsistent: {}\n", kReferenceD022Note,
                        doc["inconsistent_means"].get<std::string>());
  }
  emit(text, shared.out, out);
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct SimulateOptions {
  std::string gen;
  std::size_t n = 0;
  std::optional<std::size_t> nprime;
  std::size_t reps = 10000;
  std::string estimators = "all";
  std::string weight_policy = "optimal";
  double fixed_weight = 1.0;
  unsigned threads = 0;
};

int cmd_simulate(const SharedOptions& shared, const SimulateOptions& opts, std::ostream& out,
                 std::ostream& err) {
  if (shared.input.empty() == opts.gen.empty()) {
    throw InvalidInputError("simulate requires exactly one of --input or --gen");
  }
  std::optional<Population> pop;
  if (!shared.input.empty()) {
    std::vector<std::string> warnings;
    pop = load_population(shared.input, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << '\n';
  } else {
    const PopulationSpec spec =
        opts.gen == "default" ? PopulationSpec{} : parse_population_spec_json(read_file(opts.gen));
    pop = generate_population(spec);
  }

  SimulationConfig config;
  config.n = opts.n;
  config.nprime = opts.nprime;
  config.reps = opts.reps;
  config.seed = shared.seed;
  config.estimators = parse_estimator_list(opts.estimators, opts.nprime.has_value());
  config.weight_policy = parse_weight_policy(opts.weight_policy);
  config.fixed_weight = opts.fixed_weight;
  config.threads = opts.threads;

  const SimulationReport report = run_simulation(*pop, config);
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';

  const Format format = parse_format(shared.format.empty() ? "json" : shared.format);
  std::string summary;
  for (const EstimatorReport& e : report.estimators) {
    summary += fmt::format(
        "{:<16} bias {:>12.5g} (se {:.2g})  mse {:>12.5g}  pre {:>8.2f}  | theory mse {:>12.5g}  "
        "pre {:>8.2f}\n",
        to_string(e.kind), e.empirical.bias, e.empirical.bias_se, e.empirical.mse,
        e.empirical.pre.value_or(NAN), e.theory ? e.theory->mse : NAN,
        e.theory && e.theory->pre ? *e.theory->pre : NAN);
  }
  std::string body;
  switch (format) {
    case Format::Json: body = report_to_json(report); break;
    case Format::Csv: body = report_to_csv(report); break;
    case Format::Text: body = summary; break;
  }
  emit(body, shared.out, out);
  if (!shared.out.empty() && format != Format::Text) out << summary;
  if (report.reps_failed > 0) {
    err << "note: " << report.reps_failed << " degenerate replications skipped\n";
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------

struct GenPopOptions {
  std::string spec;
  std::optional<std::size_t> size;
  std::optional<double> rho_yx, rho_yz, rho_xz;
  std::string marginal;
  bool seed_given = false;
};

int cmd_gen_pop(const SharedOptions& shared, const GenPopOptions& opts, std::ostream& out) {
  PopulationSpec spec = opts.spec.empty() ? PopulationSpec{}
                                          : parse_population_spec_json(read_file(opts.spec));
  if (opts.size) spec.size = *opts.size;
  if (opts.rho_yx) spec.rho_yx = *opts.rho_yx;
  if (opts.rho_yz) spec.rho_yz = *opts.rho_yz;
  if (opts.rho_xz) spec.rho_xz = *opts.rho_xz;
  if (opts.seed_given) spec.seed = shared.seed;
  if (!opts.marginal.empty()) {
    Marginal::Family family;
    if (opts.marginal == "normal") {
      family = Marginal::Family::Normal;
    } else if (opts.marginal == "lognormal") {
      family = Marginal::Family::LogNormal;
    } else {
      throw InvalidInputError("unknown marginal '" + opts.marginal + "'");
    }
    for (Marginal* m : {&spec.y, &spec.x, &spec.z}) m->family = family;
  }
  const Format format = parse_format(shared.format.empty() ? "csv" : shared.format);
  if (format == Format::Json) {
    emit(population_spec_to_json(spec), shared.out, out);
    return kSuccess;
  }
  const Population pop = generate_population(spec);
  std::ostringstream csv;
  write_population_csv(csv, pop);
  emit(csv.str(), shared.out, out);
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variance estimation with two auxiliary variables: estimators, first-order "
               "theory and Monte Carlo validation",
               "varest"};
  app.require_subcommand(1, 1);

  SharedOptions shared;
  const auto add_shared = [&](CLI::App* sub, bool with_input, bool with_seed) {
    if (with_input) sub->add_option("--input", shared.input, "Population/sample CSV (y,x,z)");
    sub->add_option("--out", shared.out, "Write output to this path instead of stdout");
    sub->add_option("--format", shared.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    if (with_seed) sub->add_option("--seed", shared.seed, "64-bit master seed");
  };

  MomentsOptions moments;
  auto* moments_cmd = app.add_subcommand("moments", "Central and standardized moments");
  add_shared(moments_cmd, true, false);
  moments_cmd->add_option("--orders", moments.orders, "Comma-separated pqr orders");

  EstimateOptions estimate;
  auto* estimate_cmd = app.add_subcommand("estimate", "Point estimates of S_y^2 from a sample");
  add_shared(estimate_cmd, true, false);
  estimate_cmd->add_option("--sx2", estimate.sx2, "Known population variance of x");
  estimate_cmd->add_option("--sz2", estimate.sz2, "Known population variance of z");
  estimate_cmd->add_option("--aux-from", estimate.aux_from,
                           "Population CSV supplying the known S_x^2 and S_z^2");
  estimate_cmd->add_option("--first-phase", estimate.first_phase,
                           "First-phase CSV with x and z columns (enables two-phase estimators)");
  estimate_cmd->add_option("--estimators", estimate.estimators, "Estimator list or 'all'");
  estimate_cmd->add_option("--deltas", estimate.deltas,
                           "Known moment table JSON for optimal weights");

  TheoryOptions theory;
  auto* theory_cmd = app.add_subcommand("theory", "First-order bias, MSE and PRE");
  add_shared(theory_cmd, false, false);
  theory_cmd->add_option("--deltas", theory.deltas, "Moment table JSON");
  theory_cmd->add_flag("--builtin-reference,--builtin-s5", theory.builtin,
                       "Use the built-in reference moment table");
  theory_cmd->add_option("--n", theory.n, "Sample size")->check(CLI::PositiveNumber);
  theory_cmd->add_option("--nprime", theory.nprime, "First-phase size (two-phase formulas)");
  theory_cmd->add_option("--sy2", theory.sy2, "Population variance of y")
      ->check(CLI::PositiveNumber);
  theory_cmd->add_option("--alpha", theory.alpha, "Fixed combination weight");
  theory_cmd->add_flag("--optimal", theory.optimal, "Use the MSE-minimizing weight (default)");
  theory_cmd->add_flag("--ledger", theory.ledger, "List corrected formulas and their checks");

  auto* reproduce_cmd =
      app.add_subcommand("reproduce-tables", "Published PRE tables next to recomputed values");
  add_shared(reproduce_cmd, false, false);

  SimulateOptions simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo evaluation against theory");
  add_shared(simulate_cmd, true, true);
  simulate_cmd->add_option("--gen", simulate.gen, "Population spec JSON, or 'default'");
  simulate_cmd->add_option("--n", simulate.n, "Sample size")->required();
  simulate_cmd->add_option("--nprime", simulate.nprime, "First-phase size");
  simulate_cmd->add_option("--reps", simulate.reps, "Replications");
  simulate_cmd->add_option("--estimators", simulate.estimators, "Estimator list or 'all'");
  simulate_cmd->add_option("--weight-policy", simulate.weight_policy,
                           "optimal | plug-in | fixed");
  simulate_cmd->add_option("--fixed-weight", simulate.fixed_weight,
                           "Weight used by --weight-policy fixed");
  simulate_cmd->add_option("--threads", simulate.threads, "Worker threads (0 = all cores)");

  GenPopOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-pop", "Generate a synthetic population CSV");
  add_shared(gen_cmd, false, true);
  gen_cmd->add_option("--spec", gen.spec, "Population spec JSON");
  gen_cmd->add_option("--N", gen.size, "Population size");
  gen_cmd->add_option("--rho-yx", gen.rho_yx, "Latent correlation of y and x");
  gen_cmd->add_option("--rho-yz", gen.rho_yz, "Latent correlation of y and z");
  gen_cmd->add_option("--rho-xz", gen.rho_xz, "Latent correlation of x and z");
  gen_cmd->add_option("--marginal", gen.marginal, "normal | lognormal for all variates");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (*moments_cmd) return cmd_moments(shared, moments, out, err);
    if (*estimate_cmd) return cmd_estimate(shared, estimate, out, err);
    if (*theory_cmd) return cmd_theory(shared, theory, out, err);
    if (*reproduce_cmd) return cmd_reproduce_tables(shared, out);
    if (*simulate_cmd) return cmd_simulate(shared, simulate, out, err);
    if (*gen_cmd) {
      gen.seed_given = gen_cmd->count("--seed") > 0;
      return cmd_gen_pop(shared, gen, out);
    }
  } catch (const DegeneratePopulationError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const DegenerateSampleError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const NoUniqueOptimumError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const SimulationAbortedError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace varest::cli
