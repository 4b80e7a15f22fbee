#pragma once

// JSON and CSV renderings. Rationals are "p/q" strings; with decimal hints
// enabled they become {"exact": "p/q", "decimal": <double>}.

#include <nlohmann/json.hpp>

#include <ostream>
#include <sstream>
#include <string>

#include "flatland/estimators.hpp"
#include "flatland/inference.hpp"
#include "flatland/measure.hpp"
#include "flatland/paradox.hpp"
#include "flatland/simulation.hpp"
#include "flatland/word.hpp"

namespace flatland {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct JsonOptions {
  bool decimal = false;
};

inline Json rational_json(const Rational& r, const JsonOptions& opt) {
  if (!opt.decimal) return to_string(r);
  return Json{{"exact", to_string(r)}, {"decimal", to_double(r)}};
}

inline Json optional_rational_json(const std::optional<Rational>& r, const JsonOptions& opt) {
  return r ? rational_json(*r, opt) : Json(nullptr);
}

inline Json odds_json(const Odds& o, const JsonOptions& opt) {
  return o.infinite ? Json("inf") : rational_json(o.value, opt);
}

// ---------------------------------------------------------------- measures

/// {family, M?, scale?, table?, length_rule?}. The scale is omitted when 1.
/// Throws Error for a custom measure whose length rule is a bare callable.
inline Json measure_to_json(const Measure& mu) {
  Json j;
  j["family"] = to_string(mu.family());
  if (auto m = mu.max_length()) j["M"] = *m;
  if (mu.scale() != 1) j["scale"] = to_string(mu.scale());
  if (const CustomMass* c = mu.custom_data()) {
    Json table = Json::object();
    for (const auto& [w, v] : c->table) table[to_string(w)] = to_string(v);
    j["table"] = std::move(table);
    if (c->length_rule) {
      if (!c->length_table) throw Error("custom length rule has no serializable form");
      Json rule = Json::object();
      for (const auto& [len, v] : *c->length_table) rule[std::to_string(len)] = to_string(v);
      j["length_rule"] = std::move(rule);
    }
  }
  return j;
}

/// Throws ParseError on unknown families, malformed words or rationals.
inline Measure measure_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    throw ParseError("measure document needs a string 'family'");
  const std::string family = j["family"];
  Measure mu = Measure::flat();
  if (family == "flat") {
    mu = Measure::flat();
  } else if (family == "geometric") {
    mu = Measure::geometric();
  } else if (family == "truncated_uniform") {
    if (!j.contains("M") || !j["M"].is_number_unsigned())
      throw ParseError("truncated_uniform needs a nonnegative integer 'M'");
    mu = Measure::truncated_uniform(j["M"].get<std::size_t>());
  } else if (family == "custom") {
    std::map<ReducedWord, Rational> table;
    if (j.contains("table")) {
      if (!j["table"].is_object()) throw ParseError("'table' must be an object");
      for (const auto& [word, value] : j["table"].items()) {
        if (!value.is_string()) throw ParseError("mass of '" + word + "' must be a \"p/q\" string");
        table[parse_word(word)] = parse_rational(value.get<std::string>());
      }
    }
    std::optional<std::map<std::size_t, Rational>> rule;
    if (j.contains("length_rule")) {
      if (!j["length_rule"].is_object()) throw ParseError("'length_rule' must be an object");
      rule.emplace();
      for (const auto& [len, value] : j["length_rule"].items()) {
        if (!value.is_string()) throw ParseError("length rule values must be \"p/q\" strings");
        std::size_t parsed = 0;
        try {
          std::size_t used = 0;
          parsed = std::stoul(len, &used);
          if (used != len.size()) throw std::invalid_argument(len);
        } catch (const std::logic_error&) {
          throw ParseError("length rule key '" + len + "' is not a length");
        }
        (*rule)[parsed] = parse_rational(value.get<std::string>());
      }
    }
    try {
      mu = Measure::custom(std::move(table), std::move(rule));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what());
    }
  } else {
    throw ParseError("unknown measure family '" + family + "'");
  }
  if (j.contains("scale")) {
    if (!j["scale"].is_string()) throw ParseError("'scale' must be a \"p/q\" string");
    const Rational alpha = parse_rational(j["scale"].get<std::string>());
    if (alpha <= 0) throw ParseError("'scale' must be positive");
    mu = mu.scaled(alpha);
  }
  return mu;
}

// ---------------------------------------------------------------- reports

inline Json posterior_json(const Measure& mu, const NeighborhoodPosterior& post,
                           const JsonOptions& opt) {
  Json support = Json::array();
  for (std::size_t i = 0; i < 4; ++i)
    support.push_back({{"theta", to_string(post.support[i])},
                       {"mass", rational_json(post.masses[i], opt)},
                       {"no_annihilation", no_annihilation(post.support[i], post.observation)}});
  const Rational p = post.observation.is_null() ? Rational(0)
                                                : post.mass_of(predecessor(post.observation));
  return Json{{"command", "posterior"},
              {"schema_version", kSchemaVersion},
              {"prior", measure_to_json(mu)},
              {"x", to_string(post.observation)},
              {"support", std::move(support)},
              {"prob_no_annihilation", rational_json(p, opt)},
              {"odds_no_annihilation", odds_json(Odds::from_probability(p), opt)},
              {"marginal", rational_json(marginal(mu, post.observation), opt)}};
}

inline Json finding_json(const NonConglomerabilityFinding& f, const JsonOptions& opt) {
  return Json{{"event", f.event},
              {"threshold", rational_json(f.threshold, opt)},
              {"sup_given_x", rational_json(f.sup_given_x, opt)},
              {"argsup_x", to_string(f.argsup_x)},
              {"inf_given_theta", rational_json(f.inf_given_theta, opt)},
              {"arginf_theta", to_string(f.arginf_theta)},
              {"x_max_length", f.x_max_length},
              {"theta_max_length", f.theta_max_length},
              {"x_probed", f.x_probed},
              {"x_skipped", f.x_skipped},
              {"theta_probed", f.theta_probed},
              {"theta_skipped", f.theta_skipped},
              {"verdict", f.verdict}};
}

inline Json convergence_row_json(const ConvergenceRow& row, const JsonOptions& opt) {
  Json scaled = Json::array();
  for (const auto& [w, v] : row.scaled_masses)
    scaled.push_back({{"theta", to_string(w)}, {"scaled_mass", rational_json(v, opt)}});
  return Json{{"M", row.max_length},
              {"a_M", row.scale.str()},
              {"scaled_masses", std::move(scaled)},
              {"posterior_no_annihilation", optional_rational_json(row.posterior_no_annihilation, opt)},
              {"tail_mass", rational_json(row.tail_mass, opt)}};
}

inline Json domination_json(const DominationReport& d) {
  return Json{{"challenger", d.challenger},
              {"incumbent", d.incumbent},
              {"max_length", d.max_length},
              {"checked", d.checked},
              {"strict", d.strict},
              {"dominated", d.dominated},
              {"strict_everywhere", d.strict_everywhere()},
              {"first_strict", d.first_strict ? Json(to_string(*d.first_strict)) : Json(nullptr)},
              {"first_violation",
               d.first_violation ? Json(to_string(*d.first_violation)) : Json(nullptr)}};
}

inline Json simulation_config_json(const SimulationConfig& c) {
  Json mode = std::visit(
      [](const auto& m) -> Json {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Tosses>) {
          return Json{{"kind", "tosses"}, {"N", m.n}};
        } else if constexpr (std::is_same_v<M, FixedLength>) {
          return Json{{"kind", "fixed_length"}, {"N", m.n}};
        } else {
          return Json{{"kind", "from_prior"}, {"M", m.max_length}};
        }
      },
      c.mode);
  return Json{{"mode", std::move(mode)}, {"trials", c.trials}, {"seed", c.seed}};
}

inline Json simulation_json(const SimulationSummary& s, const JsonOptions& opt) {
  Json events = Json::array();
  for (const auto& e : s.events)
    events.push_back({{"event", e.name},
                      {"count", e.count},
                      {"trials", e.trials},
                      {"frequency", rational_json(e.frequency(), opt)},
                      {"exact", rational_json(e.exact, opt)},
                      {"tolerance", e.tolerance},
                      {"within", e.within}});
  return Json{{"config", simulation_config_json(s.config)},
              {"theta_length_counts", s.theta_length_counts},
              {"x_length_counts", s.x_length_counts},
              {"no_annihilation", s.no_annihilation},
              {"events", std::move(events)},
              {"all_within", s.all_within()}};
}

inline Json conditional_range_json(const ConditionalRange& r, const JsonOptions& opt) {
  return Json{{"max_length", r.max_length},
              {"null", optional_rational_json(r.at_null, opt)},
              {"min", rational_json(r.min, opt)},
              {"max", rational_json(r.max, opt)},
              {"constant", r.constant()}};
}

inline Json report_json(const ParadoxReport& rep, const JsonOptions& opt) {
  Json rr = Json::array();
  for (const auto& [k, v] : rep.rr_lengths) rr.push_back({{"k", k}, {"rr", rational_json(v, opt)}});

  Json pm_rows = Json::array();
  for (const auto& row : rep.pm_table.rows)
    pm_rows.push_back({{"len_x", row.x_length},
                       {"probability", rational_json(row.probability, opt)},
                       {"prob_no_annihilation", optional_rational_json(row.prob_no_annihilation, opt)}});

  Json qv = Json::array();
  for (const auto& row : rep.qvague) qv.push_back(convergence_row_json(row, opt));

  Json dom = Json::array();
  for (const auto& d : rep.domination) dom.push_back(domination_json(d));

  return Json{
      {"command", "paradox-report"},
      {"schema_version", kSchemaVersion},
      {"prior", measure_to_json(rep.prior)},
      {"probe_x", to_string(rep.probe_x)},
      {"given_theta", conditional_range_json(rep.given_theta, opt)},
      {"given_x", conditional_range_json(rep.given_x, opt)},
      {"odds_theta", odds_json(rep.odds_theta, opt)},
      {"odds_x", odds_json(rep.odds_x, opt)},
      {"rr_lengths", std::move(rr)},
      {"factor", optional_rational_json(rep.factor, opt)},
      {"paradox_resolved", rep.paradox_resolved},
      {"resolution",
       {{"prior", rep.resolution.prior},
        {"probe_x", to_string(rep.resolution.probe)},
        {"prob_given_x", rational_json(rep.resolution.prob_given_x, opt)},
        {"odds", odds_json(rep.resolution.odds, opt)},
        {"paradox_resolved", rep.resolution.paradox_resolved}}},
      {"nonconglomerability", finding_json(rep.nonconglomerability, opt)},
      {"pm_table", {{"M", rep.pm_table.max_length}, {"rows", std::move(pm_rows)}}},
      {"joint_identity",
       {{"M", rep.joint_identity.max_length},
        {"theta_side", rational_json(rep.joint_identity.theta_side, opt)},
        {"x_side", rational_json(rep.joint_identity.x_side, opt)},
        {"closed_form", rational_json(rep.joint_identity.closed_form, opt)},
        {"exhaustive", rep.joint_identity.exhaustive},
        {"holds", rep.joint_identity.identity_holds()}}},
      {"length_split",
       {{"M", rep.length_split.max_length},
        {"top_two", rational_json(rep.length_split.top_two, opt)},
        {"interior", rational_json(rep.length_split.interior, opt)},
        {"null", rational_json(rep.length_split.null, opt)}}},
      {"qvague", {{"k", rep.qvague_k}, {"rows", std::move(qv)}}},
      {"domination", std::move(dom)},
      {"empirical", rep.empirical ? simulation_json(*rep.empirical, opt) : Json(nullptr)}};
}

// ---------------------------------------------------------------- CSV

/// theta,length,predecessor,append_a,append_b,append_A,append_B
inline void write_risk_csv(std::ostream& out, std::size_t max_length,
                           std::size_t cap = kDefaultEnumerationCap) {
  std::vector<Estimator> estimators{Estimator::predecessor()};
  for (Letter g : kLetters) estimators.push_back(Estimator::append_letter(g));
  out << "theta,length";
  for (const auto& e : estimators) out << ',' << e.name();
  out << '\n';
  for_each_word_up_to(
      max_length,
      [&](const ReducedWord& theta) {
        out << to_string(theta) << ',' << theta.length();
        for (const auto& e : estimators) out << ',' << to_string(frequentist_risk(e, theta));
        out << '\n';
      },
      cap);
}

/// M,len_x,probability,prob_no_annihilation
inline void write_pm_table_csv(std::ostream& out, const PmTable& table) {
  out << "M,len_x,probability,prob_no_annihilation\n";
  for (const auto& row : table.rows)
    out << table.max_length << ',' << row.x_length << ',' << to_string(row.probability) << ','
        << (row.prob_no_annihilation ? to_string(*row.prob_no_annihilation) : "") << '\n';
}

/// Plot data: M,a_M,tail_mass,tail_mass_decimal,posterior_no_annihilation,
/// posterior_decimal.
inline void write_qvague_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "M,a_M,tail_mass,tail_mass_decimal,posterior_no_annihilation,posterior_decimal\n";
  for (const auto& row : rows) {
    out << row.max_length << ',' << row.scale.str() << ',' << to_string(row.tail_mass) << ','
        << to_double(row.tail_mass) << ',';
    if (row.posterior_no_annihilation)
      out << to_string(*row.posterior_no_annihilation) << ','
          << to_double(*row.posterior_no_annihilation);
    else
      out << ',';
    out << '\n';
  }
}

/// event,count,trials,frequency,exact,tolerance,within
inline void write_simulation_csv(std::ostream& out, const SimulationSummary& s) {
  out << "event,count,trials,frequency,exact,tolerance,within\n";
  for (const auto& e : s.events)
    out << e.name << ',' << e.count << ',' << e.trials << ',' << to_string(e.frequency()) << ','
        << to_string(e.exact) << ',' << e.tolerance << ',' << (e.within ? "true" : "false") << '\n';
}

/// k,rr
inline void write_rr_csv(std::ostream& out, const std::vector<std::pair<std::size_t, Rational>>& rr) {
  out << "k,rr\n";
  for (const auto& [k, v] : rr) out << k << ',' << to_string(v) << '\n';
}

/// challenger,incumbent,max_length,checked,strict,dominated,first_violation
inline void write_domination_csv(std::ostream& out, const std::vector<DominationReport>& reports) {
  out << "challenger,incumbent,max_length,checked,strict,dominated,first_violation\n";
  for (const auto& d : reports)
    out << d.challenger << ',' << d.incumbent << ',' << d.max_length << ',' << d.checked << ','
        << d.strict << ',' << (d.dominated ? "true" : "false") << ','
        << (d.first_violation ? to_string(*d.first_violation) : "") << '\n';
}

/// Flattened "path = value" lines, for the human-readable table format.
inline void write_flat_table(std::ostream& out, const Json& j, const std::string& prefix = "") {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      write_flat_table(out, value, prefix.empty() ? key : prefix + "." + key);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      write_flat_table(out, j[i], prefix + "[" + std::to_string(i) + "]");
  } else {
    out << prefix << " = " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

}  // namespace flatland
