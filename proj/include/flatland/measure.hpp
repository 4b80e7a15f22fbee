#pragma once

// Priors as nonnegative mass functions on words, meaningful only up to a
// positive scalar. The named families are the flat prior, the geometric prior
// 3^(−ℓ) (flat on the length, uniform within a length) and the uniform prior
// on words of length ≤ M.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flatland/errors.hpp"
#include "flatland/random.hpp"
#include "flatland/rational.hpp"
#include "flatland/word.hpp"

namespace flatland {

enum class Family { flat, geometric, truncated_uniform, custom };

enum class Propriety { proper, improper, unknown };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::flat: return "flat";
    case Family::geometric: return "geometric";
    case Family::truncated_uniform: return "truncated_uniform";
    case Family::custom: return "custom";
  }
  return "?";
}

inline std::string to_string(Propriety p) {
  switch (p) {
    case Propriety::proper: return "proper";
    case Propriety::improper: return "improper";
    case Propriety::unknown: return "unknown";
  }
  return "?";
}

/// Explicit per-word masses, with an optional rule giving the mass of every
/// word not listed as a function of its length only. Without a rule, unlisted
/// words have mass zero.
struct CustomMass {
  std::map<ReducedWord, Rational> table;
  std::function<Rational(std::size_t)> length_rule;
  /// Serializable form of length_rule when it came from a finite table
  /// (lengths not listed map to zero).
  std::optional<std::map<std::size_t, Rational>> length_table;
};

class Measure {
 public:
  static Measure flat() { return Measure(Family::flat); }
  static Measure geometric() { return Measure(Family::geometric); }

  static Measure truncated_uniform(std::size_t max_length) {
    Measure m(Family::truncated_uniform);
    m.max_length_ = max_length;
    return m;
  }

  /// Throws Error on a negative mass.
  static Measure from_custom(CustomMass data) {
    for (const auto& [w, v] : data.table)
      if (v < 0) throw Error("negative mass at word " + to_string(w));
    Measure m(Family::custom);
    m.custom_ = std::make_shared<const CustomMass>(std::move(data));
    return m;
  }

  /// Custom measure whose length rule is a finite table.
  static Measure custom(std::map<ReducedWord, Rational> table,
                        std::optional<std::map<std::size_t, Rational>> length_table = {}) {
    CustomMass data;
    data.table = std::move(table);
    if (length_table) {
      for (const auto& [len, v] : *length_table)
        if (v < 0) throw Error("negative mass at length " + std::to_string(len));
      data.length_table = length_table;
      data.length_rule = [lt = *length_table](std::size_t len) {
        auto it = lt.find(len);
        return it == lt.end() ? Rational(0) : it->second;
      };
    }
    return from_custom(std::move(data));
  }

  Family family() const noexcept { return family_; }

  /// M for the truncated-uniform family.
  std::optional<std::size_t> max_length() const {
    if (family_ != Family::truncated_uniform) return std::nullopt;
    return max_length_;
  }

  const Rational& scale() const noexcept { return scale_; }
  const CustomMass* custom_data() const noexcept { return custom_.get(); }

  /// α·μ for α > 0.
  Measure scaled(const Rational& alpha) const {
    if (alpha <= 0) throw Error("scale factor must be positive, got " + to_string(alpha));
    Measure m = *this;
    m.scale_ *= alpha;
    return m;
  }

  /// True when the mass of a word is a function of its length alone.
  bool depends_on_length_only() const noexcept {
    return family_ != Family::custom || custom_->table.empty();
  }

  /// Mass shared by every word of `length`, for the families where that is
  /// well defined; for custom measures, the length rule (zero if absent).
  Rational mass_at_length(std::size_t length) const {
    switch (family_) {
      case Family::flat: return scale_;
      case Family::geometric: return scale_ / Rational(pow3(length));
      case Family::truncated_uniform:
        if (length > max_length_) return 0;
        return scale_ / Rational(count_paths_up_to(max_length_));
      case Family::custom:
        return custom_->length_rule ? scale_ * custom_->length_rule(length) : Rational(0);
    }
    return 0;
  }

  Rational mass(const ReducedWord& w) const {
    if (family_ == Family::custom) {
      auto it = custom_->table.find(w);
      if (it != custom_->table.end()) return scale_ * it->second;
    }
    return mass_at_length(w.length());
  }

  /// Representative of the projective class: improper measures are scaled so
  /// that the null path has mass 1 (when it has positive mass); proper
  /// measures are normalized to total mass 1.
  Measure canonical() const;

 private:
  explicit Measure(Family f) : family_(f) {}

  Family family_;
  std::size_t max_length_ = 0;
  Rational scale_{1};
  std::shared_ptr<const CustomMass> custom_;
};

inline Rational mass(const Measure& mu, const ReducedWord& w) { return mu.mass(w); }

/// π(ℓ(θ) = ℓ): total mass on the words of one length.
inline Rational length_marginal(const Measure& mu, std::size_t length) {
  Rational total = Rational(count_paths(length)) * mu.mass_at_length(length);
  if (!mu.depends_on_length_only()) {
    const Rational base = mu.mass_at_length(length);
    for (const auto& [w, v] : mu.custom_data()->table)
      if (w.length() == length) total += mu.scale() * v - base;
  }
  return total;
}

inline Rational total_mass(const Measure& mu, std::span<const ReducedWord> words) {
  Rational total = 0;
  for (const auto& w : words) total += mu.mass(w);
  return total;
}

/// RR(A; B) = μ(A) / μ(B). Throws ZeroDenominator when μ(B) = 0.
inline Rational risk_ratio(const Measure& mu, std::span<const ReducedWord> a,
                           std::span<const ReducedWord> b) {
  const Rational denom = total_mass(mu, b);
  if (denom == 0) throw ZeroDenominator("risk ratio denominator event has zero prior mass");
  return total_mass(mu, a) / denom;
}

/// True iff some α > 0 makes α·m₁ = m₂ on every probe word. Throws Error on an
/// empty probe or one where neither measure has mass.
inline bool equivalent(const Measure& lhs, const Measure& rhs,
                       std::span<const ReducedWord> probe) {
  if (probe.empty()) throw Error("equivalence probe is empty");
  std::optional<Rational> alpha;
  for (const auto& w : probe) {
    const Rational m1 = lhs.mass(w);
    const Rational m2 = rhs.mass(w);
    if ((m1 == 0) != (m2 == 0)) return false;
    if (m1 == 0) continue;
    if (!alpha) {
      alpha = m2 / m1;
    } else if (*alpha * m1 != m2) {
      return false;
    }
  }
  if (!alpha) throw Error("neither measure has mass on the equivalence probe");
  return true;
}

/// Flat and geometric are improper (the geometric length marginal is 4/3 at
/// every ℓ ≥ 1). Truncated uniform is proper. A custom measure is proper when
/// it is a finite table with positive total; with a length rule its total
/// mass is not decided here.
inline Propriety is_proper(const Measure& mu) {
  switch (mu.family()) {
    case Family::flat:
    case Family::geometric: return Propriety::improper;
    case Family::truncated_uniform: return Propriety::proper;
    case Family::custom: {
      const CustomMass& data = *mu.custom_data();
      if (data.length_rule) return Propriety::unknown;
      for (const auto& [w, v] : data.table)
        if (v > 0) return Propriety::proper;
      return Propriety::improper;  // identically zero: not normalizable
    }
  }
  return Propriety::unknown;
}

inline Measure Measure::canonical() const {
  Measure m = *this;
  if (is_proper(*this) == Propriety::proper) {
    Rational total;
    if (family_ == Family::truncated_uniform) {
      total = Rational(count_paths_up_to(max_length_)) * mass_at_length(0);
    } else {
      for (const auto& [w, v] : custom_->table) total += scale_ * v;
    }
    m.scale_ = scale_ / total;
    return m;
  }
  const Rational at_null = mass(ReducedWord{});
  if (at_null > 0) m.scale_ = scale_ / at_null;
  return m;
}

/// Draw θ from a proper measure.
///
/// Truncated uniform uses the two-step procedure: a length ℓ with
/// probability n_ℓ / (2·3^M − 1), then a rank η uniform on 1..n_ℓ. A finite
/// custom table is sampled exactly by integer weights over a common
/// denominator. Anything else throws ImproperMeasure.
inline ReducedWord sample(const Measure& mu, CounterRng& rng) {
  if (is_proper(mu) != Propriety::proper)
    throw ImproperMeasure("cannot sample from a " + to_string(is_proper(mu)) + " " +
                          to_string(mu.family()) + " measure");

  if (mu.family() == Family::truncated_uniform) {
    const std::size_t max_len = *mu.max_length();
    const BigInt u = rng.uniform_below(count_paths_up_to(max_len));
    std::size_t len = 0;
    while (u >= count_paths_up_to(len)) ++len;
    const BigInt rank = 1 + rng.uniform_below(count_paths(len));
    return index_to_word({len, rank});
  }

  const auto& table = mu.custom_data()->table;
  BigInt common = 1;
  for (const auto& [w, v] : table) {
    const BigInt d = boost::multiprecision::denominator(v);
    common = common / boost::multiprecision::gcd(common, d) * d;
  }
  std::vector<std::pair<const ReducedWord*, BigInt>> weights;
  BigInt total = 0;
  for (const auto& [w, v] : table) {
    const BigInt weight = boost::multiprecision::numerator(v) *
                          (common / boost::multiprecision::denominator(v));
    if (weight == 0) continue;
    total += weight;
    weights.emplace_back(&w, weight);
  }
  BigInt u = rng.uniform_below(total);
  for (const auto& [w, weight] : weights) {
    if (u < weight) return *w;
    u -= weight;
  }
  throw InvariantViolation("weighted draw fell outside the table");
}

}  // namespace flatland
