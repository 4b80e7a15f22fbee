#pragma once

// Non-conglomerability audits, q-vague convergence tables and the assembled
// paradox report.

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flatland/errors.hpp"
#include "flatland/estimators.hpp"
#include "flatland/inference.hpp"
#include "flatland/measure.hpp"
#include "flatland/simulation.hpp"
#include "flatland/word.hpp"

namespace flatland {

/// sup_x P(A | x) < a < inf_θ P(A | θ) over bounded probe ranges, for A = "no
/// annihilation".
struct NonConglomerabilityFinding {
  std::string event = "no_annihilation";
  Rational threshold;
  Rational sup_given_x;
  Rational inf_given_theta;
  ReducedWord argsup_x;
  ReducedWord arginf_theta;
  std::size_t x_max_length = 0;
  std::size_t theta_max_length = 0;
  std::size_t x_probed = 0;
  std::size_t x_skipped = 0;  // zero marginal mass: x cannot be observed
  std::size_t theta_probed = 0;
  std::size_t theta_skipped = 0;  // zero prior mass
  bool verdict = false;
};

/// Exhaustive over θ with ℓ(θ) ≤ theta_max_length and x with
/// ℓ(x) ≤ x_max_length (defaulting to the θ bound). Words the prior cannot
/// produce are skipped and counted. `threshold` must lie in (0, 1).
inline NonConglomerabilityFinding audit_nonconglomerability(
    const Measure& mu, const Rational& threshold, std::size_t theta_max_length,
    std::optional<std::size_t> x_max_length = std::nullopt,
    std::size_t cap = kDefaultEnumerationCap) {
  if (threshold <= 0 || threshold >= 1)
    throw Error("threshold must lie strictly between 0 and 1, got " + to_string(threshold));
  NonConglomerabilityFinding f;
  f.threshold = threshold;
  f.theta_max_length = theta_max_length;
  f.x_max_length = x_max_length.value_or(theta_max_length);

  std::optional<Rational> sup;
  for_each_word_up_to(
      f.x_max_length,
      [&](const ReducedWord& x) {
        if (marginal(mu, x) == 0) {
          ++f.x_skipped;
          return;
        }
        ++f.x_probed;
        Rational p = prob_no_annihilation_given_x(mu, x);
        if (!sup || p > *sup) {
          sup = std::move(p);
          f.argsup_x = x;
        }
      },
      cap);

  std::optional<Rational> inf;
  for_each_word_up_to(
      f.theta_max_length,
      [&](const ReducedWord& theta) {
        if (mu.mass(theta) == 0) {
          ++f.theta_skipped;
          return;
        }
        ++f.theta_probed;
        Rational p = prob_no_annihilation_given_theta(theta);
        if (!inf || p < *inf) {
          inf = std::move(p);
          f.arginf_theta = theta;
        }
      },
      cap);

  if (!sup || !inf) throw Error("audit probe range contains no admissible word");
  f.sup_given_x = *sup;
  f.inf_given_theta = *inf;
  f.verdict = f.sup_given_x < threshold && threshold < f.inf_given_theta;
  return f;
}

struct ConvergenceRow {
  std::size_t max_length = 0;
  BigInt scale;  // a_M = 2·3^M − 1
  std::vector<std::pair<ReducedWord, Rational>> scaled_masses;  // a_M·π_M(θ)
  std::optional<Rational> posterior_no_annihilation;  // at the probe x; empty if unobservable
  Rational tail_mass;                                 // P_M(ℓ(X) ≤ k)
};

/// One row per M (sorted ascending). Throws InvariantViolation unless
/// a_M·π_M(θ) = 1 whenever M ≥ ℓ(θ), P_M(no annihilation | x) = 1/4 whenever
/// M ≥ ℓ(x) + 1 and x ≠ 0, and the tail mass strictly decreases between
/// consecutive rows with M ≥ k (below that every x has length ≤ k + 1 and
/// the tail is not yet escaping).
inline std::vector<ConvergenceRow> qvague_table(std::vector<std::size_t> max_lengths,
                                                std::span<const ReducedWord> probe_thetas,
                                                const ReducedWord& probe_x, std::size_t k) {
  std::sort(max_lengths.begin(), max_lengths.end());
  max_lengths.erase(std::unique(max_lengths.begin(), max_lengths.end()), max_lengths.end());
  std::vector<ConvergenceRow> rows;
  for (std::size_t m : max_lengths) {
    const Measure prior = Measure::truncated_uniform(m);
    ConvergenceRow row;
    row.max_length = m;
    row.scale = count_paths_up_to(m);
    for (const auto& theta : probe_thetas) {
      Rational scaled = Rational(row.scale) * prior.mass(theta);
      if (m >= theta.length() && scaled != 1)
        throw InvariantViolation("a_M * pi_M(" + to_string(theta) + ") != 1 at M=" +
                                 std::to_string(m));
      row.scaled_masses.emplace_back(theta, std::move(scaled));
    }
    if (marginal(prior, probe_x) > 0) {
      row.posterior_no_annihilation = prob_no_annihilation_given_x(prior, probe_x);
      if (!probe_x.is_null() && m >= probe_x.length() + 1 &&
          *row.posterior_no_annihilation != Rational(1, 4))
        throw InvariantViolation("posterior no-annihilation at " + to_string(probe_x) +
                                 " is not 1/4 at M=" + std::to_string(m));
    }
    row.tail_mass = length_tail_mass(m, k);
    if (!rows.empty() && rows.back().max_length >= k && row.tail_mass >= rows.back().tail_mass)
      throw InvariantViolation("tail mass P_M(len(X) <= " + std::to_string(k) +
                               ") did not decrease at M=" + std::to_string(m));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Range of P(no annihilation | ·) over non-null words up to a length, plus
/// the value at the null word.
struct ConditionalRange {
  std::size_t max_length = 0;
  std::optional<Rational> at_null;  // empty if the null word cannot be observed
  Rational min;
  Rational max;

  bool constant() const { return min == max; }
};

struct PmTableRow {
  std::size_t x_length = 0;
  Rational probability;                        // P_M(ℓ(X) = x_length)
  std::optional<Rational> prob_no_annihilation;  // empty if unobservable
};

struct PmTable {
  std::size_t max_length = 0;
  std::vector<PmTableRow> rows;
};

struct Resolution {
  std::string prior = "geometric";
  ReducedWord probe;
  Rational prob_given_x;
  Odds odds;
  bool paradox_resolved = false;
};

struct ReportConfig {
  Measure prior = Measure::flat();
  ReducedWord probe_x = parse_word("aba");
  std::size_t probe_max_length = 6;
  Rational threshold{1, 2};
  std::size_t rr_max_k = 9;
  std::size_t pm_max_length = 3;
  std::vector<std::size_t> qvague_max_lengths{4, 5, 6, 7, 8};
  std::vector<ReducedWord> qvague_probe_thetas{parse_word("abab")};
  std::size_t tail_k = 2;
  std::size_t domination_max_length = 8;
  std::optional<SimulationConfig> simulation;
  std::size_t cap = kDefaultEnumerationCap;
};

struct ParadoxReport {
  Measure prior = Measure::flat();
  ReducedWord probe_x;
  ConditionalRange given_theta;
  ConditionalRange given_x;
  Odds odds_theta;
  Odds odds_x;
  std::vector<std::pair<std::size_t, Rational>> rr_lengths;  // k ↦ RR(ℓ=k+1; ℓ=k−1)
  std::optional<Rational> factor;                            // odds_theta / odds_x
  bool paradox_resolved = false;
  Resolution resolution;
  NonConglomerabilityFinding nonconglomerability;
  PmTable pm_table;
  JointNoAnnihilation joint_identity;
  LengthSplit length_split;
  std::vector<ConvergenceRow> qvague;
  std::size_t qvague_k = 0;
  std::vector<DominationReport> domination;
  std::optional<SimulationSummary> empirical;
};

namespace detail {

template <class Prob, class Admissible>
ConditionalRange conditional_range(std::size_t max_length, std::size_t cap, Prob prob,
                                   Admissible admissible) {
  ConditionalRange r;
  r.max_length = max_length;
  const ReducedWord null;
  if (admissible(null)) r.at_null = prob(null);
  std::optional<Rational> lo, hi;
  for (std::size_t len = 1; len <= max_length; ++len) {
    for_each_word(
        len,
        [&](const ReducedWord& w) {
          if (!admissible(w)) return;
          Rational p = prob(w);
          if (!lo || p < *lo) lo = p;
          if (!hi || p > *hi) hi = std::move(p);
        },
        cap);
  }
  r.min = lo.value_or(0);
  r.max = hi.value_or(0);
  return r;
}

}  // namespace detail

inline ParadoxReport paradox_report(const ReportConfig& config) {
  ParadoxReport rep;
  const Measure& mu = config.prior;
  rep.prior = mu;
  rep.probe_x = config.probe_x;
  if (config.probe_x.is_null()) throw Error("report probe x must be non-null");

  rep.given_theta = detail::conditional_range(
      config.probe_max_length, config.cap,
      [](const ReducedWord& t) { return prob_no_annihilation_given_theta(t); },
      [&](const ReducedWord& t) { return mu.mass(t) > 0; });
  rep.given_x = detail::conditional_range(
      config.probe_max_length, config.cap,
      [&](const ReducedWord& x) { return prob_no_annihilation_given_x(mu, x); },
      [&](const ReducedWord& x) { return marginal(mu, x) > 0; });

  rep.odds_theta = odds_no_annihilation(Side::given_theta, mu, config.probe_x);
  rep.odds_x = odds_no_annihilation(Side::given_x, mu, config.probe_x);
  if (!rep.odds_theta.infinite && !rep.odds_x.infinite && rep.odds_x.value != 0)
    rep.factor = rep.odds_theta.value / rep.odds_x.value;

  for (std::size_t k = 2; k <= config.rr_max_k; ++k) {
    const Rational below = length_marginal(mu, k - 1);
    if (below == 0) continue;
    rep.rr_lengths.emplace_back(k, length_marginal(mu, k + 1) / below);
  }

  rep.paradox_resolved = rep.given_x.constant() && rep.given_theta.constant() &&
                         rep.given_x.min == rep.given_theta.min;

  const Measure geometric = Measure::geometric();
  rep.resolution.probe = config.probe_x;
  rep.resolution.prob_given_x = prob_no_annihilation_given_x(geometric, config.probe_x);
  rep.resolution.odds = Odds::from_probability(rep.resolution.prob_given_x);
  rep.resolution.paradox_resolved =
      rep.resolution.prob_given_x == prob_no_annihilation_given_theta(config.probe_x);

  rep.nonconglomerability =
      audit_nonconglomerability(mu, config.threshold, config.probe_max_length, std::nullopt, config.cap);

  const std::size_t m = config.pm_max_length;
  const Measure pm = Measure::truncated_uniform(m);
  rep.pm_table.max_length = m;
  for (const auto& [len, p] : marginal_length_distribution(m)) {
    PmTableRow row{len, p, std::nullopt};
    const ReducedWord rep_x = index_to_word({len, 1});
    if (marginal(pm, rep_x) > 0) row.prob_no_annihilation = prob_no_annihilation_given_x(pm, rep_x);
    rep.pm_table.rows.push_back(std::move(row));
  }
  rep.joint_identity = joint_no_annihilation(m, config.cap);
  rep.length_split = length_split(m);

  rep.qvague_k = config.tail_k;
  rep.qvague = qvague_table(config.qvague_max_lengths, config.qvague_probe_thetas, config.probe_x,
                            config.tail_k);

  for (Letter g : kLetters)
    rep.domination.push_back(domination_check(Estimator::predecessor(), Estimator::append_letter(g),
                                              config.domination_max_length, config.cap));

  if (config.simulation) rep.empirical = empirical_vs_exact(*config.simulation, 0, config.cap);
  return rep;
}

}  // namespace flatland
