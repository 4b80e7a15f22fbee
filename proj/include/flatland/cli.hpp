#pragma once

// Command-line front end. run() is the whole program minus process plumbing,
// so tests can drive it with in-memory streams.
//
// Exit status: 0 success, 2 usage error (bad flags, unparsable or impossible
// input, bounds over the enumeration cap), 1 internal invariant failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "flatland/errors.hpp"
#include "flatland/serialize.hpp"

namespace flatland::cli {

inline constexpr const char* kEnumCapEnv = "FLATLAND_ENUM_CAP";

enum class Format { json, csv, table };

/// Options shared by every subcommand.
struct CommonOptions {
  std::string prior = "flat";
  std::optional<std::size_t> m;
  std::string prior_file;
  std::string format;
  std::string out_path;
  bool decimal = false;
  std::optional<std::size_t> enum_cap;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

inline std::size_t resolve_cap(const CommonOptions& opts) {
  if (opts.enum_cap) return *opts.enum_cap;
  if (const char* env = std::getenv(kEnumCapEnv)) {
    try {
      std::size_t used = 0;
      const auto v = std::stoul(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::logic_error&) {
    }
    throw UsageError(std::string(kEnumCapEnv) + " must be a nonnegative integer, got '" + env + "'");
  }
  return kDefaultEnumerationCap;
}

inline Measure resolve_prior(const CommonOptions& opts) {
  if (!opts.prior_file.empty()) {
    std::ifstream in(opts.prior_file);
    if (!in) throw UsageError("--prior-file: cannot open '" + opts.prior_file + "'");
    Json doc;
    try {
      doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError("--prior-file: " + std::string(e.what()));
    }
    return measure_from_json(doc);
  }
  if (opts.prior == "flat" || opts.prior == "geometric") {
    if (opts.m) throw UsageError("--m only applies to --prior uniform");
    return opts.prior == "flat" ? Measure::flat() : Measure::geometric();
  }
  if (!opts.m) throw UsageError("--prior uniform requires --m");
  return Measure::truncated_uniform(*opts.m);
}

inline Format resolve_format(const CommonOptions& opts, Format fallback) {
  if (opts.format.empty()) return fallback;
  if (opts.format == "json") return Format::json;
  if (opts.format == "csv") return Format::csv;
  return Format::table;
}

inline Rational parse_threshold(const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const Error& e) {
    throw UsageError(std::string("--a: ") + e.what());
  }
}

/// "lo:hi" inclusive, or a single value.
inline std::vector<std::size_t> parse_range(const std::string& text, const std::string& flag) {
  auto number = [&](const std::string& s) -> std::size_t {
    try {
      std::size_t used = 0;
      const auto v = std::stoul(s, &used);
      if (used == s.size()) return v;
    } catch (const std::logic_error&) {
    }
    throw UsageError(flag + ": '" + text + "' is not a range lo:hi");
  };
  const auto colon = text.find(':');
  const std::size_t lo = number(text.substr(0, colon));
  const std::size_t hi = colon == std::string::npos ? lo : number(text.substr(colon + 1));
  if (hi < lo) throw UsageError(flag + ": empty range '" + text + "'");
  std::vector<std::size_t> out;
  for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

inline ReducedWord parse_word_flag(const std::string& text, const std::string& flag) {
  try {
    return parse_word(text);
  } catch (const ParseError& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

inline void emit_json(std::ostream& out, const Json& j, Format fmt) {
  if (fmt == Format::table) {
    write_flat_table(out, j);
  } else {
    out << j.dump(2) << '\n';
  }
}

inline void add_common(CLI::App* sub, CommonOptions& opts,
                       std::vector<std::string> formats = {"json", "csv", "table"}) {
  auto* prior = sub->add_option("--prior", opts.prior, "Prior family: flat, geometric or uniform")
                    ->check(CLI::IsMember({"flat", "geometric", "uniform"}));
  sub->add_option("--m", opts.m, "Maximum length M for --prior uniform");
  auto* file = sub->add_option("--prior-file", opts.prior_file,
                               "Measure JSON document (family, M, scale, table, length_rule)");
  prior->excludes(file);
  file->excludes(prior);
  sub->add_option("--format", opts.format, "Output format")->check(CLI::IsMember(formats));
  sub->add_option("--out", opts.out_path, "Write output to this file instead of stdout");
  sub->add_flag("--decimal", opts.decimal, "Add decimal hints next to exact rationals");
  sub->add_option("--enum-cap", opts.enum_cap,
                  std::string("Enumeration length cap (overrides ") + kEnumCapEnv + ")");
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact inference and Monte Carlo for the Flatland paradox on the free group F2"};
  app.name("flatland");
  app.require_subcommand(1);

  CommonOptions common;

  // paradox-report
  auto* report_cmd = app.add_subcommand("paradox-report", "Assemble the full paradox report");
  add_common(report_cmd, common, {"json", "table"});
  std::string report_x = "aba";
  std::size_t report_len = 6;
  std::string report_a = "1/2";
  std::size_t report_pm = 3;
  std::string report_mrange = "4:8";
  std::size_t report_k = 2;
  std::size_t report_dom = 8;
  bool report_sim = false;
  std::uint64_t report_trials = 100000;
  std::uint64_t report_seed = 0;
  std::string csv_dir;
  report_cmd->add_option("--x", report_x, "Probe observation (letters a b A B, null e)");
  report_cmd->add_option("--max-len", report_len, "Exhaustive probe length bound");
  report_cmd->add_option("--a", report_a, "Non-conglomerability threshold p/q");
  report_cmd->add_option("--pm-m", report_pm, "M of the truncated uniform prior tables");
  report_cmd->add_option("--m-range", report_mrange, "q-vague M range lo:hi");
  report_cmd->add_option("--k", report_k, "Tail bound k for P_M(len(X) <= k)");
  report_cmd->add_option("--domination-len", report_dom, "Length bound for the risk comparison");
  report_cmd->add_flag("--simulate", report_sim, "Include the Monte Carlo section");
  report_cmd->add_option("--trials", report_trials, "Monte Carlo trials");
  report_cmd->add_option("--seed", report_seed, "Monte Carlo seed");
  report_cmd->add_option("--csv-dir", csv_dir, "Also write every table as CSV into this directory");

  // posterior
  auto* post_cmd = app.add_subcommand("posterior", "Posterior on the neighborhood of x");
  add_common(post_cmd, common);
  std::string post_x;
  post_cmd->add_option("--x", post_x, "Observation")->required();

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo versus exact values");
  add_common(sim_cmd, common);
  std::string sim_mode = "prior";
  std::size_t sim_n = 10;
  std::uint64_t sim_trials = 100000;
  std::uint64_t sim_seed = 0;
  unsigned sim_workers = 0;
  sim_cmd->add_option("--mode", sim_mode, "tosses, fixed or prior")
      ->check(CLI::IsMember({"tosses", "fixed", "prior"}));
  sim_cmd->add_option("--n", sim_n, "Toss count or fixed length N")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--trials", sim_trials, "Number of trials")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim_seed, "64-bit seed");
  sim_cmd->add_option("--workers", sim_workers, "Worker threads (0 = hardware)");

  // conglomerability
  auto* cong_cmd = app.add_subcommand("conglomerability", "Non-conglomerability audit");
  add_common(cong_cmd, common);
  std::string cong_a = "1/2";
  std::size_t cong_len = 10;
  std::optional<std::size_t> cong_xlen;
  cong_cmd->add_option("--a", cong_a, "Threshold p/q in (0, 1)");
  cong_cmd->add_option("--max-len", cong_len, "Probe length bound for theta (and x)");
  cong_cmd->add_option("--x-max-len", cong_xlen, "Separate probe length bound for x");

  // convergence
  auto* conv_cmd = app.add_subcommand("convergence", "q-vague convergence of pi_M to the flat prior");
  add_common(conv_cmd, common);
  std::string conv_x;
  std::string conv_mrange = "3:10";
  std::vector<std::string> conv_thetas;
  std::size_t conv_k = 2;
  conv_cmd->add_option("--x", conv_x, "Fixed observation")->required();
  conv_cmd->add_option("--m-range", conv_mrange, "M range lo:hi");
  conv_cmd->add_option("--theta", conv_thetas, "Probe words for a_M * pi_M (repeatable)");
  conv_cmd->add_option("--k", conv_k, "Tail bound k");

  // risk
  auto* risk_cmd = app.add_subcommand("risk", "Frequentist 0/1 risk of the estimators");
  add_common(risk_cmd, common);
  std::size_t risk_len = 8;
  risk_cmd->add_option("--max-len", risk_len, "Largest theta length");

  std::vector<const char*> argv{"flatland"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "flatland: " << e.what() << '\n';
    return 2;
  }

  try {
    const std::size_t cap = resolve_cap(common);
    const JsonOptions jopt{common.decimal};
    std::ostringstream buffer;

    if (report_cmd->parsed()) {
      ReportConfig cfg;
      cfg.prior = resolve_prior(common);
      cfg.probe_x = parse_word_flag(report_x, "--x");
      cfg.probe_max_length = report_len;
      cfg.threshold = parse_threshold(report_a);
      cfg.pm_max_length = report_pm;
      cfg.qvague_max_lengths = parse_range(report_mrange, "--m-range");
      cfg.tail_k = report_k;
      cfg.domination_max_length = report_dom;
      cfg.cap = cap;
      if (report_sim) cfg.simulation = SimulationConfig{FromPrior{report_pm}, report_trials, report_seed};
      check_cap(std::max({report_len, report_dom, report_pm + 1}), cap);
      const ParadoxReport rep = paradox_report(cfg);
      emit_json(buffer, report_json(rep, jopt), resolve_format(common, Format::json));
      if (!csv_dir.empty()) {
        std::filesystem::create_directories(csv_dir);
        auto open = [&](const char* name) {
          std::ofstream f(std::filesystem::path(csv_dir) / name);
          if (!f) throw UsageError("--csv-dir: cannot write " + std::string(name));
          return f;
        };
        auto pm = open("pm_table.csv");
        write_pm_table_csv(pm, rep.pm_table);
        auto qv = open("qvague.csv");
        write_qvague_csv(qv, rep.qvague);
        auto rr = open("rr_lengths.csv");
        write_rr_csv(rr, rep.rr_lengths);
        auto dom = open("domination.csv");
        write_domination_csv(dom, rep.domination);
        if (rep.empirical) {
          auto emp = open("empirical.csv");
          write_simulation_csv(emp, *rep.empirical);
        }
      }
    } else if (post_cmd->parsed()) {
      const Measure mu = resolve_prior(common);
      const ReducedWord x = parse_word_flag(post_x, "--x");
      const auto post = posterior(mu, x);
      const Format fmt = resolve_format(common, Format::json);
      if (fmt == Format::csv) {
        buffer << "theta,mass,no_annihilation\n";
        for (std::size_t i = 0; i < 4; ++i)
          buffer << to_string(post.support[i]) << ',' << to_string(post.masses[i]) << ','
                 << (no_annihilation(post.support[i], x) ? "true" : "false") << '\n';
      } else {
        emit_json(buffer, posterior_json(mu, post, jopt), fmt);
      }
    } else if (sim_cmd->parsed()) {
      SimulationConfig cfg;
      cfg.trials = sim_trials;
      cfg.seed = sim_seed;
      if (sim_mode == "tosses") {
        cfg.mode = Tosses{sim_n};
      } else if (sim_mode == "fixed") {
        cfg.mode = FixedLength{sim_n};
      } else {
        cfg.mode = FromPrior{common.m.value_or(3)};
      }
      const auto summary = empirical_vs_exact(cfg, sim_workers, cap);
      const Format fmt = resolve_format(common, Format::json);
      if (fmt == Format::csv) {
        write_simulation_csv(buffer, summary);
      } else {
        Json j = simulation_json(summary, jopt);
        j["command"] = "simulate";
        j["schema_version"] = kSchemaVersion;
        emit_json(buffer, j, fmt);
      }
    } else if (cong_cmd->parsed()) {
      const Measure mu = resolve_prior(common);
      const Rational a = parse_threshold(cong_a);
      if (a <= 0 || a >= 1) throw UsageError("--a must lie strictly between 0 and 1");
      const auto finding = audit_nonconglomerability(mu, a, cong_len, cong_xlen, cap);
      const Format fmt = resolve_format(common, Format::json);
      if (fmt == Format::csv) {
        buffer << "threshold,sup_given_x,inf_given_theta,x_max_length,theta_max_length,verdict\n"
               << to_string(finding.threshold) << ',' << to_string(finding.sup_given_x) << ','
               << to_string(finding.inf_given_theta) << ',' << finding.x_max_length << ','
               << finding.theta_max_length << ',' << (finding.verdict ? "true" : "false") << '\n';
      } else {
        Json j = finding_json(finding, jopt);
        j["command"] = "conglomerability";
        j["schema_version"] = kSchemaVersion;
        j["prior"] = measure_to_json(mu);
        emit_json(buffer, j, fmt);
      }
    } else if (conv_cmd->parsed()) {
      const ReducedWord x = parse_word_flag(conv_x, "--x");
      std::vector<ReducedWord> thetas;
      for (const auto& t : conv_thetas) thetas.push_back(parse_word_flag(t, "--theta"));
      if (thetas.empty()) thetas.push_back(x.is_null() ? parse_word("a") : predecessor(x));
      const auto ms = parse_range(conv_mrange, "--m-range");
      const auto rows = qvague_table(ms, thetas, x, conv_k);
      const Format fmt = resolve_format(common, Format::json);
      if (fmt == Format::csv) {
        write_qvague_csv(buffer, rows);
      } else {
        Json jrows = Json::array();
        for (const auto& r : rows) jrows.push_back(convergence_row_json(r, jopt));
        emit_json(buffer,
                  Json{{"command", "convergence"},
                       {"schema_version", kSchemaVersion},
                       {"x", to_string(x)},
                       {"k", conv_k},
                       {"limit_given_x", rational_json(prob_no_annihilation_given_x(Measure::flat(), x), jopt)},
                       {"rows", std::move(jrows)}},
                  fmt);
      }
    } else if (risk_cmd->parsed()) {
      check_cap(risk_len, cap);
      const Format fmt = resolve_format(common, Format::csv);
      if (fmt == Format::csv) {
        write_risk_csv(buffer, risk_len, cap);
      } else {
        Json dom = Json::array();
        for (Letter g : kLetters)
          dom.push_back(domination_json(domination_check(
              Estimator::predecessor(), Estimator::append_letter(g), risk_len, cap)));
        std::ostringstream table;
        write_risk_csv(table, risk_len, cap);
        emit_json(buffer,
                  Json{{"command", "risk"},
                       {"schema_version", kSchemaVersion},
                       {"max_length", risk_len},
                       {"domination", std::move(dom)},
                       {"csv", table.str()}},
                  fmt);
      }
    }

    if (common.out_path.empty()) {
      out << buffer.str();
    } else {
      std::ofstream f(common.out_path);
      if (!f) throw UsageError("--out: cannot write '" + common.out_path + "'");
      f << buffer.str();
    }
    return 0;
  } catch (const InvariantViolation& e) {
    err << "flatland: invariant failure: " << e.what() << '\n';
    return 1;
  } catch (const UsageError& e) {
    err << "flatland: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "flatland: " << e.what() << '\n';
    return 2;
  } catch (const EnumerationCapExceeded& e) {
    err << "flatland: " << e.what() << " (raise with --enum-cap or " << kEnumCapEnv << ")\n";
    return 2;
  } catch (const ZeroPosteriorMass& e) {
    err << "flatland: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "flatland: error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace flatland::cli
