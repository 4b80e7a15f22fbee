#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "flatland/word.hpp"
#include "oracles.hpp"

using namespace flatland;

namespace {

ReducedWord W(const char* s) { return parse_word(s); }

}  // namespace

TEST(Letter, InverseIsAnInvolution) {
  for (Letter g : kLetters) EXPECT_EQ(inverse(inverse(g)), g);
  EXPECT_EQ(inverse(Letter::a), Letter::a_inv);
  EXPECT_EQ(inverse(Letter::b), Letter::b_inv);
  EXPECT_EQ(inverse(Letter::a_inv), Letter::a);
  EXPECT_EQ(inverse(Letter::b_inv), Letter::b);
}

TEST(Append, NoCancellation) {
  const auto w = append(W("ab"), Letter::a_inv);
  EXPECT_EQ(w, W("abA"));
  EXPECT_EQ(w.length(), 3u);
}

TEST(Append, Cancellation) { EXPECT_EQ(append(W("aba"), Letter::a_inv), W("ab")); }

TEST(Append, FromNull) {
  const auto w = append(ReducedWord{}, Letter::b);
  EXPECT_EQ(w, W("b"));
  EXPECT_EQ(w.length(), 1u);
}

TEST(Predecessor, Examples) {
  EXPECT_EQ(predecessor(W("abaa")), W("aba"));
  EXPECT_EQ(predecessor(W("a")), ReducedWord{});
  EXPECT_THROW(predecessor(ReducedWord{}), UndefinedOnNull);
}

TEST(Extensions, Examples) {
  const auto ext = extensions(W("abaa"));
  EXPECT_EQ(std::set<ReducedWord>(ext.begin(), ext.end()),
            (std::set<ReducedWord>{W("abaaa"), W("abaab"), W("abaaB")}));

  const auto ext0 = extensions(ReducedWord{});
  EXPECT_EQ(ext0, (std::vector<ReducedWord>{W("a"), W("b"), W("A"), W("B")}));

  for (const auto& x : enumerate(4)) EXPECT_EQ(extensions(x).size(), 3u);
}

TEST(Neighborhood, Examples) {
  const auto n = neighborhood(W("a"));
  EXPECT_EQ(std::set<ReducedWord>(n.begin(), n.end()),
            (std::set<ReducedWord>{W("aa"), W("ab"), W("aB"), ReducedWord{}}));
  const auto n0 = neighborhood(ReducedWord{});
  EXPECT_EQ(std::set<ReducedWord>(n0.begin(), n0.end()),
            (std::set<ReducedWord>{W("a"), W("b"), W("A"), W("B")}));
}

TEST(Neighborhood, SymmetricAndOfSizeFour) {
  for (std::size_t len = 0; len <= 5; ++len) {
    for_each_word(len, [](const ReducedWord& x) {
      const auto n = neighborhood(x);
      EXPECT_EQ(std::set<ReducedWord>(n.begin(), n.end()).size(), 4u);
      for (const auto& theta : n) {
        const auto back = neighborhood(theta);
        EXPECT_NE(std::find(back.begin(), back.end(), x), back.end())
            << to_string(x) << " vs " << to_string(theta);
      }
    });
  }
}

TEST(Neighborhood, MatchesOneTossOracle) {
  // A_x = {θ : some face takes θ to x}.
  for (std::size_t len = 0; len <= 4; ++len) {
    for (const auto& x : oracle::reduced_strings(len)) {
      std::set<ReducedWord> expected;
      for (std::size_t tlen = (len == 0 ? 0 : len - 1); tlen <= len + 1; ++tlen)
        for (const auto& theta : oracle::reduced_strings(tlen))
          if (oracle::toss_probability(theta, x) > 0) expected.insert(oracle::word(theta));
      const auto n = neighborhood(oracle::word(x));
      EXPECT_EQ(std::set<ReducedWord>(n.begin(), n.end()), expected) << x;
    }
  }
}

TEST(CountPaths, Examples) {
  EXPECT_EQ(count_paths(0), 1);
  EXPECT_EQ(count_paths(1), 4);
  EXPECT_EQ(count_paths(3), 36);
  EXPECT_EQ(count_paths_up_to(2), 17);
  EXPECT_EQ(count_paths_up_to(0), 1);
}

TEST(CountPaths, MatchesBruteForceEnumeration) {
  for (std::size_t len = 0; len <= 10; ++len)
    EXPECT_EQ(count_paths(len), BigInt(oracle::reduced_strings(len).size())) << len;
}

TEST(CountPaths, UpToMatchesPartialSums) {
  BigInt sum = 0;
  for (std::size_t m = 0; m <= 20; ++m) {
    sum += count_paths(m);
    EXPECT_EQ(count_paths_up_to(m), sum) << m;
  }
  EXPECT_EQ(count_paths_up_to(5), 485);
}

TEST(Enumerate, SmallLengths) {
  EXPECT_EQ(enumerate(0), std::vector<ReducedWord>{ReducedWord{}});
  EXPECT_EQ(enumerate(1), (std::vector<ReducedWord>{W("a"), W("b"), W("A"), W("B")}));
}

TEST(Enumerate, MatchesOracleInCanonicalOrder) {
  for (std::size_t len = 0; len <= 7; ++len) {
    const auto words = enumerate(len);
    const auto expected = oracle::reduced_strings(len);
    ASSERT_EQ(words.size(), expected.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
      EXPECT_EQ(words[i].length(), len);
      EXPECT_EQ(oracle::glyphs(words[i]), expected[i]);
    }
    EXPECT_TRUE(std::is_sorted(words.begin(), words.end()));
  }
}

TEST(Enumerate, RespectsCap) {
  EXPECT_THROW(enumerate(15), EnumerationCapExceeded);
  EXPECT_THROW(enumerate(4, 3), EnumerationCapExceeded);
  EXPECT_EQ(enumerate(3, 3).size(), 36u);
  try {
    enumerate(9, 8);
    FAIL();
  } catch (const EnumerationCapExceeded& e) {
    EXPECT_EQ(e.requested(), 9u);
    EXPECT_EQ(e.cap(), 8u);
  }
}

TEST(PathIndex, Examples) {
  EXPECT_EQ(index_to_word({0, 1}), ReducedWord{});
  EXPECT_EQ(index_to_word({1, 1}), W("a"));
  EXPECT_EQ(index_to_word({1, 4}), W("B"));
  EXPECT_EQ(index_to_word({2, 12}), W("BB"));
  EXPECT_THROW(index_to_word({0, 2}), RankOutOfRange);
  EXPECT_THROW(index_to_word({2, 0}), RankOutOfRange);
  EXPECT_THROW(index_to_word({2, 13}), RankOutOfRange);
}

TEST(PathIndex, RoundTripAgreesWithEnumeration) {
  for (std::size_t len = 0; len <= 8; ++len) {
    BigInt rank = 1;
    for_each_word(len, [&](const ReducedWord& w) {
      const PathIndex idx{len, rank};
      EXPECT_EQ(word_to_index(w), idx);
      EXPECT_EQ(index_to_word(idx), w);
      ++rank;
    });
    EXPECT_EQ(rank - 1, count_paths(len));
  }
}

TEST(PathIndex, LongWordsUseUnboundedRanks) {
  const std::size_t len = 60;
  const PathIndex last{len, count_paths(len)};
  const auto w = index_to_word(last);
  EXPECT_EQ(w.length(), len);
  EXPECT_EQ(word_to_index(w), last);
}

TEST(Likelihood, Examples) {
  EXPECT_EQ(likelihood(W("ab"), W("aba")), Rational(1, 4));
  EXPECT_EQ(likelihood(W("ab"), W("abb")), Rational(1, 4));
  EXPECT_EQ(likelihood(W("ab"), W("abab")), 0);
  EXPECT_EQ(likelihood(W("ab"), W("ba")), 0);
  EXPECT_EQ(likelihood(ReducedWord{}, W("A")), Rational(1, 4));
}

TEST(Likelihood, RowsSumToOne) {
  for_each_word_up_to(8, [](const ReducedWord& theta) {
    Rational total = 0;
    for (const auto& x : neighborhood(theta)) total += likelihood(theta, x);
    EXPECT_EQ(total, 1) << to_string(theta);
  });
}

TEST(Likelihood, MatchesTossProcess) {
  for (std::size_t lt = 0; lt <= 3; ++lt)
    for (const auto& theta : oracle::reduced_strings(lt))
      for (std::size_t lx = 0; lx <= 4; ++lx)
        for (const auto& x : oracle::reduced_strings(lx)) {
          EXPECT_EQ(likelihood(oracle::word(theta), oracle::word(x)),
                    oracle::toss_probability(theta, x));
          EXPECT_EQ(likelihood(oracle::word(theta), oracle::word(x)),
                    likelihood(oracle::word(x), oracle::word(theta)));
        }
}

TEST(AppendProperty, RandomStreamsStayReducedAndStepByOne) {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> face(0, 3);
  ReducedWord w;
  for (int i = 0; i < 10000; ++i) {
    const Letter g = kLetters[face(rng)];
    const bool cancels = !w.is_null() && w.last() == inverse(g);
    const ReducedWord next = append(w, g);
    ASSERT_EQ(next.length(), cancels ? w.length() - 1 : w.length() + 1);
    if (!cancels) ASSERT_EQ(predecessor(next), w);
    w = next;
    const auto letters = w.letters();
    for (std::size_t j = 1; j < letters.size(); ++j)
      ASSERT_NE(letters[j], inverse(letters[j - 1]));
  }
}

TEST(Text, RoundTripAndDiagnostics) {
  for_each_word_up_to(4, [](const ReducedWord& w) { EXPECT_EQ(parse_word(to_string(w)), w); });
  EXPECT_EQ(to_string(ReducedWord{}), "e");
  EXPECT_THROW(parse_word("aA"), ParseError);
  EXPECT_THROW(parse_word("abx"), ParseError);
  EXPECT_THROW(parse_word(""), ParseError);
  try {
    parse_word("abBa");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("not reduced"), std::string::npos);
  }
  const Letter bad[] = {Letter::a, Letter::a_inv};
  EXPECT_THROW(ReducedWord::from_letters(bad), ParseError);
}

TEST(Ordering, ShortlexMatchesRank) {
  const auto words = enumerate(3);
  for (std::size_t i = 1; i < words.size(); ++i) {
    EXPECT_LT(words[i - 1], words[i]);
    EXPECT_LT(word_to_index(words[i - 1]).rank, word_to_index(words[i]).rank);
  }
  EXPECT_LT(W("BB"), W("aaa"));
}
