// Prints the two sides of the paradox and the geometric-prior resolution.

#include <iostream>

#include "flatland/flatland.hpp"

int main() {
  using namespace flatland;

  const ReducedWord x = parse_word("abA");
  const ReducedWord theta = predecessor(x);

  std::cout << "P(no annihilation | theta=" << to_string(theta)
            << ") = " << to_string(prob_no_annihilation_given_theta(theta)) << '\n';

  for (const Measure& prior : {Measure::flat(), Measure::geometric()}) {
    const auto post = posterior(prior, x);
    std::cout << to_string(prior.family()) << " prior, x=" << to_string(x) << ":\n";
    for (std::size_t i = 0; i < 4; ++i)
      std::cout << "  pi(" << to_string(post.support[i]) << " | x) = " << to_string(post.masses[i])
                << '\n';
    std::cout << "  P(no annihilation | x) = " << to_string(prob_no_annihilation_given_x(prior, x))
              << '\n';
  }

  const auto joint = joint_no_annihilation(4);
  std::cout << "pi_4: sum over theta = " << to_string(joint.theta_side)
            << ", sum over x = " << to_string(joint.x_side) << '\n';
}
