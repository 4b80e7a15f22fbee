#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "flatland/inference.hpp"
#include "flatland/rational.hpp"
#include "flatland/word.hpp"

namespace flatland {

/// Point estimators of θ from x under 0/1 loss.
///
/// Predecessor is θ̂(x) = x⁻, completed with θ̂(0) = 0. AppendLetter(g) is the
/// equivariant rule x ↦ x·g, reduced: when x ends in g⁻¹ it yields x⁻.
class Estimator {
 public:
  struct Predecessor {};
  struct AppendLetter {
    Letter letter;
  };
  struct Custom {
    std::string name;
    std::function<ReducedWord(const ReducedWord&)> rule;
  };

  static Estimator predecessor() { return Estimator(Predecessor{}); }
  static Estimator append_letter(Letter g) { return Estimator(AppendLetter{g}); }
  static Estimator custom(std::string name, std::function<ReducedWord(const ReducedWord&)> rule) {
    return Estimator(Custom{std::move(name), std::move(rule)});
  }

  ReducedWord operator()(const ReducedWord& x) const {
    return std::visit(
        [&](const auto& kind) -> ReducedWord {
          using K = std::decay_t<decltype(kind)>;
          if constexpr (std::is_same_v<K, Predecessor>) {
            return x.is_null() ? ReducedWord{} : flatland::predecessor(x);
          } else if constexpr (std::is_same_v<K, AppendLetter>) {
            return append(x, kind.letter);
          } else {
            return kind.rule(x);
          }
        },
        kind_);
  }

  std::string name() const {
    return std::visit(
        [](const auto& kind) -> std::string {
          using K = std::decay_t<decltype(kind)>;
          if constexpr (std::is_same_v<K, Predecessor>) {
            return "predecessor";
          } else if constexpr (std::is_same_v<K, AppendLetter>) {
            return std::string("append_") + to_char(kind.letter);
          } else {
            return kind.name;
          }
        },
        kind_);
  }

 private:
  using Kind = std::variant<Predecessor, AppendLetter, Custom>;
  explicit Estimator(Kind kind) : kind_(std::move(kind)) {}

  Kind kind_;
};

inline ReducedWord estimate(const Estimator& e, const ReducedWord& x) { return e(x); }

/// R(θ) = Σ_{x ∈ A_θ} p(x | θ)·1{e(x) ≠ θ}.
inline Rational frequentist_risk(const Estimator& e, const ReducedWord& theta) {
  Rational risk = 0;
  for (const auto& x : neighborhood(theta))
    if (e(x) != theta) risk += likelihood(theta, x);
  return risk;
}

struct DominationReport {
  std::string challenger;  // e₁
  std::string incumbent;   // e₂
  std::size_t max_length = 0;
  std::size_t checked = 0;
  std::size_t strict = 0;  // θ with R₁(θ) < R₂(θ)
  bool dominated = true;   // R₁ ≤ R₂ everywhere probed
  std::optional<ReducedWord> first_strict;
  std::optional<ReducedWord> first_violation;  // R₁(θ) > R₂(θ)

  bool strict_everywhere() const { return strict == checked; }
};

/// Checks R(e₁, θ) ≤ R(e₂, θ) for every θ with ℓ(θ) ≤ max_length.
inline DominationReport domination_check(const Estimator& challenger, const Estimator& incumbent,
                                         std::size_t max_length,
                                         std::size_t cap = kDefaultEnumerationCap) {
  DominationReport report;
  report.challenger = challenger.name();
  report.incumbent = incumbent.name();
  report.max_length = max_length;
  for_each_word_up_to(
      max_length,
      [&](const ReducedWord& theta) {
        ++report.checked;
        const Rational r1 = frequentist_risk(challenger, theta);
        const Rational r2 = frequentist_risk(incumbent, theta);
        if (r1 < r2) {
          ++report.strict;
          if (!report.first_strict) report.first_strict = theta;
        } else if (r1 > r2) {
          report.dominated = false;
          if (!report.first_violation) report.first_violation = theta;
        }
      },
      cap);
  return report;
}

}  // namespace flatland
