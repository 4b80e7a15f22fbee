#include <gtest/gtest.h>

#include <random>
#include <set>

#include "flatland/inference.hpp"
#include "oracles.hpp"

using namespace flatland;

namespace {

ReducedWord W(const char* s) { return parse_word(s); }

std::vector<Measure> priors() {
  return {Measure::flat(), Measure::geometric(), Measure::truncated_uniform(3),
          Measure::custom({{W("ab"), Rational(5)}, {W("a"), Rational(1, 7)}},
                          std::map<std::size_t, Rational>{{0, Rational(1)}, {1, Rational(2)},
                                                          {2, Rational(1, 3)}, {3, Rational(1)},
                                                          {4, Rational(1)}, {5, Rational(2)},
                                                          {6, Rational(1)}})};
}

}  // namespace

TEST(Posterior, FlatIsUniformOnTheNeighborhood) {
  const auto post = posterior(Measure::flat(), W("aba"));
  const std::set<ReducedWord> support(post.support.begin(), post.support.end());
  EXPECT_EQ(support, (std::set<ReducedWord>{W("ab"), W("abaa"), W("abab"), W("abaB")}));
  for (const auto& m : post.masses) EXPECT_EQ(m, Rational(1, 4));
}

TEST(Posterior, GeometricFavorsThePredecessor) {
  for (const char* x : {"ab", "abA", "BBaBa", "abababab"}) {
    const auto post = posterior(Measure::geometric(), W(x));
    EXPECT_EQ(post.mass_of(predecessor(W(x))), Rational(3, 4)) << x;
    for (const auto& e : extensions(W(x))) EXPECT_EQ(post.mass_of(e), Rational(1, 12)) << x;
  }
}

TEST(Posterior, TruncatedUniformAtTheEdge) {
  const auto post = posterior(Measure::truncated_uniform(3), W("abab"));
  EXPECT_EQ(post.mass_of(W("aba")), 1);
  EXPECT_THROW(posterior(Measure::truncated_uniform(2), W("abab")), ZeroPosteriorMass);
  EXPECT_THROW(posterior(Measure::truncated_uniform(0), ReducedWord{}), ZeroPosteriorMass);
}

TEST(Posterior, MatchesBruteForceBayes) {
  for (const auto& mu : priors()) {
    for (std::size_t len = 0; len <= 4; ++len) {
      for (const auto& x : oracle::reduced_strings(len)) {
        if (marginal(mu, oracle::word(x)) == 0) continue;
        const auto expected = oracle::posterior(mu, x);
        const auto post = posterior(mu, oracle::word(x));
        Rational total = 0;
        for (std::size_t i = 0; i < 4; ++i) {
          total += post.masses[i];
          auto it = expected.find(oracle::glyphs(post.support[i]));
          EXPECT_EQ(post.masses[i], it == expected.end() ? Rational(0) : it->second) << x;
        }
        EXPECT_EQ(total, 1);
      }
    }
  }
}

TEST(Posterior, ScaleInvariant) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> num(1, 50), den(1, 50);
  for (const auto& mu : priors()) {
    for (int trial = 0; trial < 20; ++trial) {
      const Rational alpha(num(rng), den(rng));
      const auto x = index_to_word({static_cast<std::size_t>(1 + trial % 5), 1 + trial % 4});
      if (marginal(mu, x) == 0) continue;
      const auto a = posterior(mu, x);
      const auto b = posterior(mu.scaled(alpha), x);
      EXPECT_EQ(a.masses, b.masses);
    }
  }
}

TEST(NoAnnihilation, GivenTheta) {
  EXPECT_EQ(prob_no_annihilation_given_theta(W("abab")), Rational(3, 4));
  EXPECT_EQ(prob_no_annihilation_given_theta(ReducedWord{}), 1);
  for_each_word_up_to(8, [](const ReducedWord& t) {
    EXPECT_EQ(prob_no_annihilation_given_theta(t),
              Rational(static_cast<int>(extensions(t).size()), 4));
  });
}

TEST(NoAnnihilation, GivenXFlat) {
  EXPECT_EQ(prob_no_annihilation_given_x(Measure::flat(), W("abA")), Rational(1, 4));
  EXPECT_EQ(prob_no_annihilation_given_x(Measure::flat(), ReducedWord{}), 0);
}

TEST(NoAnnihilation, GivenXTruncatedUniform) {
  for (std::size_t m = 2; m <= 5; ++m) {
    const Measure pm = Measure::truncated_uniform(m);
    EXPECT_EQ(prob_no_annihilation_given_x(pm, ReducedWord{}), 0);
    for (std::size_t len = 1; len <= m + 1; ++len) {
      const Rational expected = len >= m ? Rational(1) : Rational(1, 4);
      for_each_word(len, [&](const ReducedWord& x) {
        EXPECT_EQ(prob_no_annihilation_given_x(pm, x), expected) << m << " " << to_string(x);
      });
    }
  }
}

TEST(NoAnnihilation, GivenXGeometricIncludingLengthOne) {
  for_each_word_up_to(6, [](const ReducedWord& x) {
    if (x.is_null()) return;
    EXPECT_EQ(prob_no_annihilation_given_x(Measure::geometric(), x), Rational(3, 4));
  });
  // Length one: A_x = {xg, xg', xg'', 0} with masses 1/9 each and 1.
  const auto post = posterior(Measure::geometric(), W("b"));
  EXPECT_EQ(post.mass_of(ReducedWord{}), Rational(3, 4));
}

TEST(NoAnnihilation, EventCharacterizationsAgree) {
  for_each_word_up_to(5, [](const ReducedWord& theta) {
    for (const auto& x : neighborhood(theta)) {
      const bool event = no_annihilation(theta, x);
      EXPECT_EQ(event, x.length() == theta.length() + 1);
      const auto ext = extensions(theta);
      EXPECT_EQ(event, std::find(ext.begin(), ext.end(), x) != ext.end());
      EXPECT_EQ(event, !x.is_null() && predecessor(x) == theta);
    }
  });
  EXPECT_FALSE(no_annihilation(W("a"), ReducedWord{}));
}

TEST(Odds, BothSides) {
  const Measure flat = Measure::flat();
  EXPECT_EQ(odds_no_annihilation(Side::given_theta, flat, W("ab")), (Odds{3, false}));
  EXPECT_EQ(odds_no_annihilation(Side::given_x, flat, W("ab")), (Odds{Rational(1, 3), false}));
  EXPECT_EQ(odds_no_annihilation(Side::given_x, Measure::geometric(), W("abab")), (Odds{3, false}));
  EXPECT_TRUE(odds_no_annihilation(Side::given_theta, flat, ReducedWord{}).infinite);
  EXPECT_EQ(odds_no_annihilation(Side::given_x, flat, ReducedWord{}), (Odds{0, false}));
  EXPECT_TRUE(odds_no_annihilation(Side::given_x, Measure::truncated_uniform(3), W("aaa")).infinite);
  EXPECT_EQ(to_string(Odds{0, true}), "inf");
}

TEST(LengthTransition, OddsAreThree) {
  EXPECT_EQ(length_transition_odds(1), 3);
  EXPECT_EQ(length_transition_odds(5), 3);
  EXPECT_THROW(length_transition_odds(0), Error);
}

TEST(LengthTransition, MatchesBruteForceOverAllTheta) {
  for (std::size_t k = 1; k <= 7; ++k) {
    Rational up = 0, down = 0;
    for (const auto& theta : oracle::reduced_strings(k)) {
      for (char g : oracle::kGlyphs) {
        const auto x = oracle::reduce(theta + g);
        if (x.size() == k + 1) up += Rational(1, 4);
        if (x.size() + 1 == k) down += Rational(1, 4);
      }
    }
    EXPECT_EQ(length_transition_odds(k), up / down) << k;
  }
}

TEST(LengthPosteriorRelativeRisk, Priors) {
  EXPECT_EQ(length_posterior_relative_risk(Measure::flat(), 4), Rational(1, 3));
  EXPECT_EQ(length_posterior_relative_risk(Measure::geometric(), 4), 3);
  for (std::size_t k = 1; k <= 9; ++k) {
    EXPECT_EQ(length_posterior_relative_risk(Measure::flat(), k), Rational(1, 3)) << k;
    EXPECT_EQ(length_posterior_relative_risk(Measure::geometric(), k), 3) << k;
  }
  for (std::size_t m = 3; m <= 6; ++m)
    for (std::size_t k = 1; k + 1 <= m; ++k)
      EXPECT_EQ(length_posterior_relative_risk(Measure::truncated_uniform(m), k), Rational(1, 3));
  EXPECT_THROW(length_posterior_relative_risk(Measure::truncated_uniform(3), 3), ZeroDenominator);
}

TEST(LengthPosteriorRelativeRisk, AgreesWithWordLevelPosterior) {
  // Under a length-only prior, π(ℓ(θ)=k−1 | x) / π(ℓ(θ)=k+1 | x) is the same
  // for every x of length k and equals the length-level ratio.
  for (const auto& mu : {Measure::flat(), Measure::geometric()}) {
    for (std::size_t k = 1; k <= 5; ++k) {
      const ReducedWord x = index_to_word({k, 1});
      const auto post = posterior(mu, x);
      Rational below = 0, above = 0;
      for (std::size_t i = 0; i < 4; ++i)
        (post.support[i].length() < k ? below : above) += post.masses[i];
      EXPECT_EQ(below / above, length_posterior_relative_risk(mu, k));
    }
  }
}

TEST(Marginal, FlatIsIdenticallyOne) {
  for_each_word_up_to(6, [](const ReducedWord& x) { EXPECT_EQ(marginal(Measure::flat(), x), 1); });
}

TEST(Marginal, TruncatedUniformIsAProbability) {
  for (std::size_t m = 0; m <= 6; ++m) {
    Rational total = 0;
    for_each_word_up_to(m + 1, [&](const ReducedWord& x) { total += marginal(Measure::truncated_uniform(m), x); });
    EXPECT_EQ(total, 1) << m;
  }
  EXPECT_EQ(marginal(Measure::truncated_uniform(2), W("aba")), Rational(1, 68));
}

TEST(JointNoAnnihilation, Values) {
  const auto j3 = joint_no_annihilation(3);
  EXPECT_EQ(j3.theta_side, Rational(40, 53));
  EXPECT_EQ(j3.x_side, Rational(40, 53));
  EXPECT_TRUE(j3.exhaustive);
  EXPECT_EQ(joint_no_annihilation(0).theta_side, 1);
  for (std::size_t m = 0; m <= 6; ++m) {
    const auto j = joint_no_annihilation(m);
    EXPECT_TRUE(j.identity_holds());
    EXPECT_EQ(j.closed_form, Rational(3, 4) + Rational(1, 4) / Rational(count_paths_up_to(m)));
  }
}

TEST(JointNoAnnihilation, GroupedSumsBeyondTheCap) {
  const auto grouped = joint_no_annihilation(5, 3);
  EXPECT_FALSE(grouped.exhaustive);
  EXPECT_EQ(grouped.theta_side, joint_no_annihilation(5).theta_side);
  const auto big = joint_no_annihilation(40);
  EXPECT_TRUE(big.identity_holds());
}

TEST(MarginalLengthDistribution, MThree) {
  const auto d = marginal_length_distribution(3);
  EXPECT_EQ(d.at(3) + d.at(4), Rational(36, 53));
  EXPECT_EQ(d.at(1) + d.at(2), Rational(16, 53));
  EXPECT_EQ(d.at(0), Rational(1, 53));
  EXPECT_EQ(length_tail_mass(3, 2), Rational(17, 53));
}

TEST(MarginalLengthDistribution, MatchesBruteForce) {
  for (std::size_t m = 0; m <= 5; ++m) {
    const auto expected = oracle::x_length_distribution(m);
    const auto d = marginal_length_distribution(m);
    for (const auto& [len, p] : d) {
      auto it = expected.find(len);
      EXPECT_EQ(p, it == expected.end() ? Rational(0) : it->second) << m << " " << len;
    }
  }
}

TEST(LengthSplit, ClosedFormAgreesAndConverges) {
  for (std::size_t m = 1; m <= 6; ++m) {
    const auto s = length_split(m);
    const auto d = marginal_length_distribution(m);
    EXPECT_EQ(s.top_two, d.at(m) + d.at(m + 1));
    EXPECT_EQ(s.null, d.at(0));
    EXPECT_EQ(s.top_two + s.interior + s.null, 1);
  }
  const auto s14 = length_split(14);
  EXPECT_LE(std::abs(to_double(s14.top_two) - 2.0 / 3.0), 1e-6);
  EXPECT_LE(std::abs(to_double(s14.interior) - 1.0 / 3.0), 1e-6);
  EXPECT_EQ(length_split(0).top_two, 1);
}

TEST(ParadoxPair, FactorOfNineAccounting) {
  const Measure flat = Measure::flat();
  for (std::size_t k = 2; k <= 6; ++k) {
    const ReducedWord w = index_to_word({k, 3});
    const Rational ratio = odds_no_annihilation(Side::given_theta, flat, w).value /
                           odds_no_annihilation(Side::given_x, flat, w).value;
    EXPECT_EQ(ratio, 9);
    EXPECT_EQ(ratio, length_marginal(flat, k + 1) / length_marginal(flat, k - 1));
  }
}
