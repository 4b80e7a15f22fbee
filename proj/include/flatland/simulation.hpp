#pragma once

// Seeded Monte Carlo of the die process and comparison of empirical
// frequencies with the exact values from the inference module.
//
// Trials run in fixed-size chunks; chunk c draws from CounterRng(seed).split(c)
// so the counts depend on (config, seed) only, never on the worker count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "flatland/errors.hpp"
#include "flatland/inference.hpp"
#include "flatland/measure.hpp"
#include "flatland/random.hpp"
#include "flatland/word.hpp"

namespace flatland {

/// N tosses with annihilation.
struct Tosses {
  std::size_t n = 1;
};
/// First letter uniform over four, then uniform over the three
/// non-cancelling letters, so ℓ(θ) = N.
struct FixedLength {
  std::size_t n = 1;
};
/// θ ~ π_M by the two-step draw.
struct FromPrior {
  std::size_t max_length = 0;
};

using SimulationMode = std::variant<Tosses, FixedLength, FromPrior>;

struct SimulationConfig {
  SimulationMode mode = FromPrior{3};
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;

  void validate() const {
    if (trials < 1) throw Error("trials must be >= 1");
    if (const auto* t = std::get_if<Tosses>(&mode); t && t->n < 1)
      throw Error("toss count must be >= 1");
    if (const auto* f = std::get_if<FixedLength>(&mode); f && f->n < 1)
      throw Error("fixed length must be >= 1");
  }

  /// Largest ℓ(θ) the mode can produce.
  std::size_t max_theta_length() const {
    return std::visit(
        [](const auto& m) -> std::size_t {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, FromPrior>) {
            return m.max_length;
          } else {
            return m.n;
          }
        },
        mode);
  }
};

inline std::string describe(const SimulationMode& mode) {
  return std::visit(
      [](const auto& m) -> std::string {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Tosses>) {
          return "tosses(" + std::to_string(m.n) + ")";
        } else if constexpr (std::is_same_v<M, FixedLength>) {
          return "fixed_length(" + std::to_string(m.n) + ")";
        } else {
          return "from_prior(" + std::to_string(m.max_length) + ")";
        }
      },
      mode);
}

inline Letter uniform_letter(CounterRng& rng) { return kLetters[rng.uniform_below(4)]; }

inline ReducedWord simulate_theta(const SimulationConfig& config, CounterRng& rng) {
  return std::visit(
      [&](const auto& m) -> ReducedWord {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Tosses>) {
          ReducedWord w;
          for (std::size_t i = 0; i < m.n; ++i) w = append(w, uniform_letter(rng));
          return w;
        } else if constexpr (std::is_same_v<M, FixedLength>) {
          ReducedWord w = extend_unchecked(ReducedWord{}, uniform_letter(rng));
          for (std::size_t i = 1; i < m.n; ++i)
            w = extend_unchecked(w, successors(w.last())[rng.uniform_below(3)]);
          return w;
        } else {
          return sample(Measure::truncated_uniform(m.max_length), rng);
        }
      },
      config.mode);
}

/// The supplementary toss.
inline ReducedWord simulate_x(const ReducedWord& theta, CounterRng& rng) {
  return append(theta, uniform_letter(rng));
}

/// Exact distribution of ℓ(θ) for a mode, indexed by length.
inline std::vector<Rational> theta_length_distribution(const SimulationMode& mode) {
  return std::visit(
      [](const auto& m) -> std::vector<Rational> {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Tosses>) {
          // Length performs a reflected walk: 0 → 1 surely, ℓ → ℓ±1 otherwise.
          std::vector<Rational> dist(m.n + 1, Rational(0));
          dist[0] = 1;
          for (std::size_t step = 0; step < m.n; ++step) {
            std::vector<Rational> next(m.n + 1, Rational(0));
            for (std::size_t len = 0; len <= step; ++len) {
              if (dist[len] == 0) continue;
              next[len + 1] += dist[len] * length_transition_probability(len, len + 1);
              if (len > 0) next[len - 1] += dist[len] * length_transition_probability(len, len - 1);
            }
            dist = std::move(next);
          }
          return dist;
        } else if constexpr (std::is_same_v<M, FixedLength>) {
          std::vector<Rational> dist(m.n + 1, Rational(0));
          dist[m.n] = 1;
          return dist;
        } else {
          const Measure prior = Measure::truncated_uniform(m.max_length);
          std::vector<Rational> dist;
          for (std::size_t len = 0; len <= m.max_length; ++len)
            dist.push_back(length_marginal(prior, len));
          return dist;
        }
      },
      mode);
}

/// One empirical frequency against its exact value.
struct EventCheck {
  std::string name;
  std::uint64_t count = 0;
  std::uint64_t trials = 0;  // conditioning denominator
  Rational exact;
  double tolerance = 0;  // 4·sqrt(p(1−p)/trials)
  bool within = true;

  Rational frequency() const {
    return trials == 0 ? Rational(0) : Rational(count) / Rational(trials);
  }
};

struct SimulationSummary {
  SimulationConfig config;
  std::vector<std::uint64_t> theta_length_counts;
  std::vector<std::uint64_t> x_length_counts;
  std::vector<std::uint64_t> no_annihilation_by_x_length;
  std::uint64_t no_annihilation = 0;
  std::vector<EventCheck> events;

  bool all_within() const {
    return std::all_of(events.begin(), events.end(), [](const EventCheck& e) { return e.within; });
  }
};

inline constexpr double kToleranceSigmas = 4.0;
inline constexpr std::uint64_t kChunkSize = 4096;

/// 4·sqrt(p(1−p)/n). Zero when p ∈ {0, 1}: those frequencies must be exact.
inline double standard_error_bound(const Rational& p, std::uint64_t n) {
  if (n == 0) return 0;
  const double q = to_double(p);
  return kToleranceSigmas * std::sqrt(q * (1 - q) / static_cast<double>(n));
}

inline EventCheck make_check(std::string name, std::uint64_t count, std::uint64_t trials,
                             Rational exact) {
  EventCheck e{std::move(name), count, trials, std::move(exact)};
  e.tolerance = standard_error_bound(e.exact, trials);
  if (trials > 0) {
    if (e.exact == 0 || e.exact == 1) {
      e.within = e.frequency() == e.exact;
    } else {
      e.within = std::abs(to_double(e.frequency() - e.exact)) <= e.tolerance;
    }
  }
  return e;
}

namespace detail {

struct Tally {
  std::vector<std::uint64_t> theta_len;
  std::vector<std::uint64_t> x_len;
  std::vector<std::uint64_t> no_annih_by_x;

  explicit Tally(std::size_t max_theta)
      : theta_len(max_theta + 1), x_len(max_theta + 2), no_annih_by_x(max_theta + 2) {}

  void merge(const Tally& other) {
    for (std::size_t i = 0; i < theta_len.size(); ++i) theta_len[i] += other.theta_len[i];
    for (std::size_t i = 0; i < x_len.size(); ++i) {
      x_len[i] += other.x_len[i];
      no_annih_by_x[i] += other.no_annih_by_x[i];
    }
  }
};

}  // namespace detail

/// Draws (θ, x) pairs and tabulates length histograms and the
/// no-annihilation indicator. `workers` = 0 uses the hardware concurrency.
inline SimulationSummary run_simulation(const SimulationConfig& config, unsigned workers = 0) {
  config.validate();
  const std::size_t max_theta = config.max_theta_length();
  const std::uint64_t chunks = (config.trials + kChunkSize - 1) / kChunkSize;
  std::vector<detail::Tally> tallies(chunks, detail::Tally(max_theta));
  const CounterRng root(config.seed);

  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      CounterRng rng = root.split(c);
      const std::uint64_t begin = c * kChunkSize;
      const std::uint64_t end = std::min(config.trials, begin + kChunkSize);
      detail::Tally& t = tallies[c];
      for (std::uint64_t i = begin; i < end; ++i) {
        const ReducedWord theta = simulate_theta(config, rng);
        const ReducedWord x = simulate_x(theta, rng);
        ++t.theta_len[theta.length()];
        ++t.x_len[x.length()];
        if (no_annihilation(theta, x)) ++t.no_annih_by_x[x.length()];
      }
    }
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  detail::Tally total(max_theta);
  for (const auto& t : tallies) total.merge(t);

  SimulationSummary s;
  s.config = config;
  s.theta_length_counts = std::move(total.theta_len);
  s.x_length_counts = std::move(total.x_len);
  s.no_annihilation_by_x_length = std::move(total.no_annih_by_x);
  for (auto n : s.no_annihilation_by_x_length) s.no_annihilation += n;
  return s;
}

/// Runs the simulation and checks every tabulated frequency against its exact
/// counterpart at 4 standard errors.
///
/// For FromPrior(M) the references are joint_no_annihilation(M) (when M + 1
/// is within `cap`; the closed form otherwise), length_split(M),
/// marginal_length_distribution(M) and the generic posterior
/// P_M(no annihilation | x) per length of x. The other modes use the exact
/// length distribution of θ pushed through the one-toss length transition.
inline SimulationSummary empirical_vs_exact(const SimulationConfig& config, unsigned workers = 0,
                                            std::size_t cap = kDefaultEnumerationCap) {
  SimulationSummary s = run_simulation(config, workers);
  const std::uint64_t n = config.trials;
  const std::vector<Rational> theta_dist = theta_length_distribution(config.mode);
  const std::size_t max_theta = theta_dist.size() - 1;

  std::vector<Rational> x_dist(max_theta + 2, Rational(0));
  std::vector<Rational> x_and_no_annih(max_theta + 2, Rational(0));
  Rational no_annih = 0;
  for (std::size_t len = 0; len <= max_theta; ++len) {
    const Rational up = theta_dist[len] * length_transition_probability(len, len + 1);
    x_dist[len + 1] += up;
    x_and_no_annih[len + 1] += up;
    no_annih += up;
    if (len > 0) x_dist[len - 1] += theta_dist[len] * length_transition_probability(len, len - 1);
  }

  if (const auto* fp = std::get_if<FromPrior>(&config.mode)) {
    const std::size_t m = fp->max_length;
    const Measure prior = Measure::truncated_uniform(m);
    const Rational joint = m + 1 <= cap ? joint_no_annihilation(m, cap).theta_side
                                        : Rational(3, 4) + Rational(1, 4) * prior.mass({});
    if (joint != no_annih) throw InvariantViolation("joint no-annihilation reference mismatch");
    s.events.push_back(make_check("no_annihilation", s.no_annihilation, n, joint));

    const auto exact_x = marginal_length_distribution(m);
    const LengthSplit split = length_split(m);
    const std::uint64_t top = s.x_length_counts[m] + s.x_length_counts[m + 1];
    const std::uint64_t top_no = s.no_annihilation_by_x_length[m] + s.no_annihilation_by_x_length[m + 1];
    std::uint64_t inner = 0, inner_no = 0;
    for (std::size_t len = 1; len + 1 <= m; ++len) {
      inner += s.x_length_counts[len];
      inner_no += s.no_annihilation_by_x_length[len];
    }
    s.events.push_back(make_check("len_x_top_two", top, n, split.top_two));
    s.events.push_back(make_check("len_x_interior", inner, n, split.interior));
    s.events.push_back(make_check("len_x_null", s.x_length_counts[0], n, split.null));
    if (m >= 2)
      s.events.push_back(make_check("no_annihilation|len_x_interior", inner_no, inner,
                                    prob_no_annihilation_given_x(prior, index_to_word({1, 1}))));
    s.events.push_back(make_check("no_annihilation|len_x_top_two", top_no, top,
                                  prob_no_annihilation_given_x(prior, index_to_word({m + 1, 1}))));
    for (const auto& [len, p] : exact_x) {
      if (p != x_dist[len]) throw InvariantViolation("length distribution reference mismatch");
      s.events.push_back(make_check("len_x=" + std::to_string(len), s.x_length_counts[len], n, p));
    }
    for (const auto& [len, p] : exact_x) {
      if (p == 0) continue;
      s.events.push_back(make_check("no_annihilation|len_x=" + std::to_string(len),
                                    s.no_annihilation_by_x_length[len], s.x_length_counts[len],
                                    prob_no_annihilation_given_x(prior, index_to_word({len, 1}))));
    }
    return s;
  }

  s.events.push_back(make_check("no_annihilation", s.no_annihilation, n, no_annih));
  for (std::size_t len = 0; len <= max_theta; ++len)
    s.events.push_back(
        make_check("len_theta=" + std::to_string(len), s.theta_length_counts[len], n, theta_dist[len]));
  for (std::size_t len = 0; len < x_dist.size(); ++len)
    s.events.push_back(make_check("len_x=" + std::to_string(len), s.x_length_counts[len], n, x_dist[len]));
  for (std::size_t len = 0; len < x_dist.size(); ++len) {
    if (x_dist[len] == 0) continue;
    s.events.push_back(make_check("no_annihilation|len_x=" + std::to_string(len),
                                  s.no_annihilation_by_x_length[len], s.x_length_counts[len],
                                  x_and_no_annih[len] / x_dist[len]));
  }
  return s;
}

}  // namespace flatland
