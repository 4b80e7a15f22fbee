#pragma once

// Reduced words on the free group over {a, b}: the die-toss paths θ and the
// observations x, together with path counting, canonical enumeration, the
// (length, rank) bijection and the model likelihood.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flatland/errors.hpp"
#include "flatland/rational.hpp"

namespace flatland {

/// Die faces. The underlying values fix the canonical order a < b < a⁻¹ < b⁻¹
/// and make inverse() a rotation by two.
enum class Letter : std::uint8_t { a = 0, b = 1, a_inv = 2, b_inv = 3 };

inline constexpr std::array<Letter, 4> kLetters{Letter::a, Letter::b, Letter::a_inv,
                                                Letter::b_inv};

constexpr Letter inverse(Letter g) noexcept {
  return static_cast<Letter>((static_cast<std::uint8_t>(g) + 2) & 3);
}

constexpr std::size_t letter_index(Letter g) noexcept { return static_cast<std::uint8_t>(g); }

/// "a", "b", "A" (= a⁻¹), "B" (= b⁻¹).
constexpr char to_char(Letter g) noexcept {
  constexpr std::array<char, 4> glyphs{'a', 'b', 'A', 'B'};
  return glyphs[letter_index(g)];
}

constexpr std::optional<Letter> letter_from_char(char c) noexcept {
  switch (c) {
    case 'a': return Letter::a;
    case 'b': return Letter::b;
    case 'A': return Letter::a_inv;
    case 'B': return Letter::b_inv;
    default: return std::nullopt;
  }
}

/// The three letters that may follow `prev` without cancelling, in canonical
/// order.
constexpr std::array<Letter, 3> successors(Letter prev) noexcept {
  std::array<Letter, 3> out{};
  std::size_t n = 0;
  for (Letter g : kLetters)
    if (g != inverse(prev)) out[n++] = g;
  return out;
}

/// A cancellation-free letter sequence. The default value is the null path.
/// Ordering is shortlex, which agrees with the canonical enumeration order
/// inside each length.
class ReducedWord {
 public:
  ReducedWord() = default;

  /// Throws ParseError if `letters` contains an adjacent inverse pair.
  static ReducedWord from_letters(std::span<const Letter> letters) {
    for (std::size_t i = 1; i < letters.size(); ++i) {
      if (letters[i] == inverse(letters[i - 1]))
        throw ParseError("word is not reduced: letters " + std::to_string(i - 1) + " and " +
                         std::to_string(i) + " cancel");
    }
    ReducedWord w;
    w.letters_.assign(letters.begin(), letters.end());
    return w;
  }

  std::size_t length() const noexcept { return letters_.size(); }
  bool is_null() const noexcept { return letters_.empty(); }
  Letter last() const { return letters_.back(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  std::span<const Letter> letters() const noexcept { return letters_; }

  friend bool operator==(const ReducedWord&, const ReducedWord&) = default;

  friend std::strong_ordering operator<=>(const ReducedWord& lhs, const ReducedWord& rhs) {
    if (auto c = lhs.length() <=> rhs.length(); c != 0) return c;
    for (std::size_t i = 0; i < lhs.length(); ++i) {
      if (auto c = letter_index(lhs[i]) <=> letter_index(rhs[i]); c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

 private:
  friend ReducedWord append(const ReducedWord& w, Letter g);
  friend ReducedWord predecessor(const ReducedWord& x);
  friend ReducedWord extend_unchecked(const ReducedWord& w, Letter g);

  std::vector<Letter> letters_;
};

/// w·g with no cancellation check. Callers guarantee g != inverse(last(w)).
inline ReducedWord extend_unchecked(const ReducedWord& w, Letter g) {
  ReducedWord out;
  out.letters_.reserve(w.length() + 1);
  out.letters_ = w.letters_;
  out.letters_.push_back(g);
  return out;
}

/// One toss: annihilates the last letter when g is its inverse, else extends.
inline ReducedWord append(const ReducedWord& w, Letter g) {
  if (!w.is_null() && w.last() == inverse(g)) {
    ReducedWord out = w;
    out.letters_.pop_back();
    return out;
  }
  return extend_unchecked(w, g);
}

/// x⁻, the word with its last letter removed.
inline ReducedWord predecessor(const ReducedWord& x) {
  if (x.is_null()) throw UndefinedOnNull("predecessor of the null path is not defined");
  ReducedWord out = x;
  out.letters_.pop_back();
  return out;
}

/// A⁺_x: the words reached from x by one non-cancelling letter. Three words
/// for x ≠ 0, the four length-1 words for x = 0.
inline std::vector<ReducedWord> extensions(const ReducedWord& x) {
  std::vector<ReducedWord> out;
  out.reserve(4);
  for (Letter g : kLetters) {
    if (!x.is_null() && g == inverse(x.last())) continue;
    out.push_back(extend_unchecked(x, g));
  }
  return out;
}

/// A_x = A⁺_x ∪ {x⁻}; A_0 = A⁺_0. Extensions come first in canonical order,
/// followed by the predecessor when it exists.
inline std::array<ReducedWord, 4> neighborhood(const ReducedWord& x) {
  std::array<ReducedWord, 4> out;
  auto ext = extensions(x);
  std::size_t n = 0;
  for (auto& w : ext) out[n++] = std::move(w);
  if (!x.is_null()) out[n++] = predecessor(x);
  return out;
}

/// True iff u ∈ A_v, equivalently v ∈ A_u: lengths differ by one and the
/// shorter word is a prefix of the longer.
inline bool adjacent(const ReducedWord& u, const ReducedWord& v) noexcept {
  const ReducedWord& shorter = u.length() < v.length() ? u : v;
  const ReducedWord& longer = u.length() < v.length() ? v : u;
  if (longer.length() != shorter.length() + 1) return false;
  for (std::size_t i = 0; i < shorter.length(); ++i)
    if (shorter[i] != longer[i]) return false;
  return true;
}

/// l(θ; x) = p(x | θ) = (1/4)·1{θ ∈ A_x}.
inline Rational likelihood(const ReducedWord& theta, const ReducedWord& x) {
  return adjacent(theta, x) ? Rational(1, 4) : Rational(0);
}

/// n_ℓ: 1 for ℓ = 0, else 4·3^(ℓ−1).
inline BigInt count_paths(std::size_t length) {
  if (length == 0) return 1;
  return 4 * pow3(length - 1);
}

/// Σ_{ℓ ≤ M} n_ℓ = 2·3^M − 1.
inline BigInt count_paths_up_to(std::size_t max_length) { return 2 * pow3(max_length) - 1; }

inline constexpr std::size_t kDefaultEnumerationCap = 14;

inline void check_cap(std::size_t length, std::size_t cap) {
  if (length > cap) throw EnumerationCapExceeded(length, cap);
}

namespace detail {

template <class Visitor>
void visit_words(std::vector<Letter>& prefix, std::size_t remaining, Visitor& visit) {
  if (remaining == 0) {
    visit(ReducedWord::from_letters(prefix));
    return;
  }
  for (Letter g : kLetters) {
    if (!prefix.empty() && g == inverse(prefix.back())) continue;
    prefix.push_back(g);
    visit_words(prefix, remaining - 1, visit);
    prefix.pop_back();
  }
}

}  // namespace detail

/// Calls visit(word) for every reduced word of exactly `length` letters, in
/// canonical order, without materializing the set.
template <class Visitor>
void for_each_word(std::size_t length, Visitor&& visit,
                   std::size_t cap = kDefaultEnumerationCap) {
  check_cap(length, cap);
  std::vector<Letter> prefix;
  prefix.reserve(length);
  detail::visit_words(prefix, length, visit);
}

/// Every word with length ≤ max_length, shortest first.
template <class Visitor>
void for_each_word_up_to(std::size_t max_length, Visitor&& visit,
                         std::size_t cap = kDefaultEnumerationCap) {
  check_cap(max_length, cap);
  for (std::size_t len = 0; len <= max_length; ++len) for_each_word(len, visit, cap);
}

inline std::vector<ReducedWord> enumerate(std::size_t length,
                                          std::size_t cap = kDefaultEnumerationCap) {
  check_cap(length, cap);
  std::vector<ReducedWord> out;
  out.reserve(count_paths(length).convert_to<std::size_t>());
  for_each_word(length, [&](ReducedWord w) { out.push_back(std::move(w)); }, cap);
  return out;
}

/// θ = (ℓ, η) with 1 ≤ η ≤ n_ℓ.
struct PathIndex {
  std::size_t length = 0;
  BigInt rank = 1;

  friend bool operator==(const PathIndex&, const PathIndex&) = default;
};

/// Rank η counts from 1 in canonical enumeration order. After the first
/// letter each position is a base-3 digit over the non-cancelling successors.
inline ReducedWord index_to_word(const PathIndex& idx) {
  if (idx.rank < 1 || idx.rank > count_paths(idx.length))
    throw RankOutOfRange("rank " + idx.rank.str() + " outside 1.." +
                         count_paths(idx.length).str() + " at length " +
                         std::to_string(idx.length));
  if (idx.length == 0) return {};

  BigInt offset = idx.rank - 1;
  BigInt place = pow3(idx.length - 1);
  std::vector<Letter> letters;
  letters.reserve(idx.length);
  letters.push_back(kLetters[(offset / place).convert_to<std::size_t>()]);
  offset %= place;
  for (std::size_t i = 1; i < idx.length; ++i) {
    place /= 3;
    const auto digit = (offset / place).convert_to<std::size_t>();
    offset %= place;
    letters.push_back(successors(letters.back())[digit]);
  }
  return ReducedWord::from_letters(letters);
}

inline PathIndex word_to_index(const ReducedWord& w) {
  if (w.is_null()) return {0, 1};
  BigInt offset = letter_index(w[0]);
  for (std::size_t i = 1; i < w.length(); ++i) {
    const auto succ = successors(w[i - 1]);
    std::size_t digit = 0;
    while (succ[digit] != w[i]) ++digit;
    offset = offset * 3 + digit;
  }
  return {w.length(), offset + 1};
}

/// "e" for the null path, otherwise one glyph per letter.
inline std::string to_string(const ReducedWord& w) {
  if (w.is_null()) return "e";
  std::string out;
  out.reserve(w.length());
  for (Letter g : w.letters()) out.push_back(to_char(g));
  return out;
}

/// Inverse of to_string. Rejects unknown glyphs and non-reduced input.
inline ReducedWord parse_word(std::string_view text) {
  if (text == "e") return {};
  if (text.empty()) throw ParseError("empty word; write 'e' for the null path");
  std::vector<Letter> letters;
  letters.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    auto g = letter_from_char(text[i]);
    if (!g)
      throw ParseError("invalid letter '" + std::string(1, text[i]) + "' at position " +
                       std::to_string(i) + " in '" + std::string(text) +
                       "' (alphabet: a b A B, null path e)");
    if (!letters.empty() && *g == inverse(letters.back()))
      throw ParseError("word '" + std::string(text) + "' is not reduced: '" +
                       std::string(text.substr(i - 1, 2)) + "' at position " +
                       std::to_string(i - 1) + " cancels");
    letters.push_back(*g);
  }
  return ReducedWord::from_letters(letters);
}

}  // namespace flatland
