#pragma once

// Exact posterior inference on the neighborhood A_x, the "no annihilation"
// event on both conditioning sides, marginals, and the length-level
// restatement of the model.

#include <array>
#include <map>
#include <optional>
#include <string>

#include "flatland/errors.hpp"
#include "flatland/measure.hpp"
#include "flatland/rational.hpp"
#include "flatland/word.hpp"

namespace flatland {

/// π(θ | x) on the four words of A_x. Masses sum to exactly 1.
struct NeighborhoodPosterior {
  ReducedWord observation;
  std::array<ReducedWord, 4> support;
  std::array<Rational, 4> masses;

  /// Zero outside the support.
  Rational mass_of(const ReducedWord& theta) const {
    for (std::size_t i = 0; i < support.size(); ++i)
      if (support[i] == theta) return masses[i];
    return 0;
  }
};

/// π(θ | x) ∝ l(θ; x)·μ(θ). Throws ZeroPosteriorMass when μ puts no mass on
/// A_x, e.g. a truncated-uniform prior and ℓ(x) > M + 1.
inline NeighborhoodPosterior posterior(const Measure& mu, const ReducedWord& x) {
  NeighborhoodPosterior post{x, neighborhood(x), {}};
  Rational total = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    post.masses[i] = likelihood(post.support[i], x) * mu.mass(post.support[i]);
    total += post.masses[i];
  }
  if (total == 0)
    throw ZeroPosteriorMass("observation " + to_string(x) + " has zero marginal mass under the " +
                            to_string(mu.family()) + " prior");
  for (auto& m : post.masses) m /= total;
  return post;
}

/// The event "no annihilation at the supplementary toss": x ∈ A⁺_θ, i.e.
/// θ = x⁻. False whenever x is the null path.
inline bool no_annihilation(const ReducedWord& theta, const ReducedWord& x) noexcept {
  return x.length() == theta.length() + 1 && adjacent(theta, x);
}

/// P(X ∈ A⁺_θ | θ), summed from the likelihood over the extensions of θ.
inline Rational prob_no_annihilation_given_theta(const ReducedWord& theta) {
  Rational p = 0;
  for (const auto& x : extensions(theta)) p += likelihood(theta, x);
  return p;
}

/// P(θ = x⁻ | x) under μ; 0 for the null observation.
inline Rational prob_no_annihilation_given_x(const Measure& mu, const ReducedWord& x) {
  const auto post = posterior(mu, x);
  if (x.is_null()) return 0;
  return post.mass_of(predecessor(x));
}

/// p / (1 − p), with p = 1 reported as infinite odds.
struct Odds {
  Rational value;
  bool infinite = false;

  static Odds from_probability(const Rational& p) {
    if (p == 1) return {0, true};
    return {p / (1 - p), false};
  }

  friend bool operator==(const Odds&, const Odds&) = default;
};

inline std::string to_string(const Odds& odds) {
  return odds.infinite ? std::string("inf") : to_string(odds.value);
}

enum class Side { given_theta, given_x };

/// ODD("no annihilation" | ·) = P(no annihilation) / P(annihilation) on the
/// requested conditioning side. `mu` is ignored when conditioning on θ.
inline Odds odds_no_annihilation(Side side, const Measure& mu, const ReducedWord& w) {
  return Odds::from_probability(side == Side::given_theta ? prob_no_annihilation_given_theta(w)
                                                          : prob_no_annihilation_given_x(mu, w));
}

/// P(ℓ(X) = to | ℓ(θ) = from). The model depends on θ only through ℓ(θ), so
/// the sum runs over the neighborhood of a single representative word.
inline Rational length_transition_probability(std::size_t from, std::size_t to) {
  const ReducedWord theta = index_to_word({from, 1});
  Rational p = 0;
  for (const auto& x : neighborhood(theta))
    if (x.length() == to) p += likelihood(theta, x);
  return p;
}

/// P(ℓ(X) = k+1 | ℓ(θ) = k) / P(ℓ(X) = k−1 | ℓ(θ) = k), for k ≥ 1.
inline Rational length_transition_odds(std::size_t k) {
  if (k < 1) throw Error("length transition odds need k >= 1");
  return length_transition_probability(k, k + 1) / length_transition_probability(k, k - 1);
}

/// π(ℓ(θ) = k−1 | ℓ(x) = k) / π(ℓ(θ) = k+1 | ℓ(x) = k), for k ≥ 1: the
/// length-likelihood ratio times the prior length-marginal ratio.
inline Rational length_posterior_relative_risk(const Measure& mu, std::size_t k) {
  if (k < 1) throw Error("length posterior relative risk needs k >= 1");
  const Rational below = length_marginal(mu, k - 1);
  const Rational above = length_marginal(mu, k + 1);
  if (below == 0 || above == 0)
    throw ZeroDenominator("length marginal vanishes at " + std::to_string(below == 0 ? k - 1 : k + 1));
  return length_transition_probability(k - 1, k) / length_transition_probability(k + 1, k) *
         (below / above);
}

/// p(x) = Σ_θ l(θ; x)·μ(θ). Identically 1 under the flat prior; a
/// probability mass function under a proper prior.
inline Rational marginal(const Measure& mu, const ReducedWord& x) {
  Rational p = 0;
  for (const auto& theta : neighborhood(x)) p += likelihood(theta, x) * mu.mass(theta);
  return p;
}

/// P_M("no annihilation") computed as a sum over θ and as a sum over x.
struct JointNoAnnihilation {
  std::size_t max_length = 0;
  Rational theta_side;
  Rational x_side;
  Rational closed_form;  // 3/4 + (1/4)·π_M(0)
  bool exhaustive = true;

  bool identity_holds() const { return theta_side == x_side && x_side == closed_form; }
};

/// Both sums are exhaustive over words when M + 1 is within `cap`; beyond it
/// each length contributes n_ℓ times the value at one representative word.
/// Throws InvariantViolation if the two sums or the closed form disagree.
inline JointNoAnnihilation joint_no_annihilation(std::size_t max_length,
                                                 std::size_t cap = kDefaultEnumerationCap) {
  const Measure prior = Measure::truncated_uniform(max_length);
  JointNoAnnihilation out;
  out.max_length = max_length;
  out.closed_form = Rational(3, 4) + Rational(1, 4) * prior.mass(ReducedWord{});
  out.exhaustive = max_length + 1 <= cap;

  auto theta_term = [&](const ReducedWord& theta) {
    return prior.mass(theta) * prob_no_annihilation_given_theta(theta);
  };
  auto x_term = [&](const ReducedWord& x) -> Rational {
    const Rational px = marginal(prior, x);
    if (px == 0) return 0;
    return px * prob_no_annihilation_given_x(prior, x);
  };

  if (out.exhaustive) {
    for_each_word_up_to(max_length, [&](const ReducedWord& t) { out.theta_side += theta_term(t); },
                        cap);
    for_each_word_up_to(max_length + 1, [&](const ReducedWord& x) { out.x_side += x_term(x); },
                        cap);
  } else {
    for (std::size_t len = 0; len <= max_length + 1; ++len) {
      const Rational n(count_paths(len));
      const ReducedWord rep = index_to_word({len, 1});
      if (len <= max_length) out.theta_side += n * theta_term(rep);
      out.x_side += n * x_term(rep);
    }
  }
  if (!out.identity_holds())
    throw InvariantViolation("joint no-annihilation sums disagree at M=" +
                             std::to_string(max_length) + ": theta side " +
                             to_string(out.theta_side) + ", x side " + to_string(out.x_side) +
                             ", closed form " + to_string(out.closed_form));
  return out;
}

/// Distribution of ℓ(X) when θ ~ π_M, over ℓ = 0..M+1.
inline std::map<std::size_t, Rational> marginal_length_distribution(std::size_t max_length) {
  const Measure prior = Measure::truncated_uniform(max_length);
  std::map<std::size_t, Rational> dist;
  for (std::size_t len = 0; len <= max_length + 1; ++len) dist[len] = 0;
  for (std::size_t from = 0; from <= max_length; ++from) {
    const Rational weight = length_marginal(prior, from);
    if (from > 0) dist[from - 1] += weight * length_transition_probability(from, from - 1);
    dist[from + 1] += weight * length_transition_probability(from, from + 1);
  }
  return dist;
}

/// P_M(ℓ(X) ≤ k).
inline Rational length_tail_mass(std::size_t max_length, std::size_t k) {
  Rational total = 0;
  for (const auto& [len, p] : marginal_length_distribution(max_length))
    if (len <= k) total += p;
  return total;
}

/// Split of ℓ(X) under π_M into the top two lengths {M, M+1}, the interior
/// 1..M−1 and the null path, from closed forms.
struct LengthSplit {
  std::size_t max_length = 0;
  Rational top_two;   // 4·3^(M−1) / (2·3^M − 1)
  Rational interior;  // 1 − top_two − null
  Rational null;      // 1 / (2·3^M − 1)
};

inline LengthSplit length_split(std::size_t max_length) {
  LengthSplit s;
  s.max_length = max_length;
  if (max_length == 0) {
    s.top_two = 1;
    s.null = 0;
  } else {
    const Rational total(count_paths_up_to(max_length));
    s.top_two = Rational(count_paths(max_length)) / total;
    s.null = 1 / total;
  }
  s.interior = 1 - s.top_two - s.null;
  return s;
}

}  // namespace flatland
