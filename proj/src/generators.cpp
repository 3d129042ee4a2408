#include "cdyn/generators.hpp"

#include <algorithm>
#include <numeric>

#include "cdyn/error.hpp"

namespace cdyn {

SystemSpec random_table(Rng& rng, std::size_t n, int k) {
  if (n == 0 || k < 1) {
    throw Error(ErrorCode::InvalidSpec, "random table needs n >= 1 and k >= 1");
  }
  std::uniform_int_distribution<int> pick_branch(1, k);
  std::vector<Int> states(n);
  std::vector<Branch> branch(n);
  std::vector<Int> image(n);
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i) {
    states[i] = static_cast<unsigned long>(i + 1);
    branch[i] = pick_branch(rng);
    members[static_cast<std::size_t>(branch[i] - 1)].push_back(i);
  }
  std::vector<std::size_t> pool(n);
  for (const auto& group : members) {
    std::iota(pool.begin(), pool.end(), std::size_t{1});
    std::shuffle(pool.begin(), pool.end(), rng);
    for (std::size_t j = 0; j < group.size(); ++j) {
      image[group[j]] = static_cast<unsigned long>(pool[j]);
    }
  }
  return SystemSpec::table(k, states, branch, image);
}

std::pair<DynamicalSystem, Morphism> relabeled_copy(const DynamicalSystem& sys, const std::map<Int, Int>& relabel) {
  std::vector<Int> states;
  std::vector<Branch> branch;
  std::vector<Int> image;
  for (const auto& x : sys.states()) {
    states.push_back(relabel.at(x));
    branch.push_back(sys.branch_of(x));
    image.push_back(relabel.at(sys.apply(x)));
  }
  DynamicalSystem copy = make_system(SystemSpec::table(sys.k(), states, branch, image));
  Morphism phi = Morphism::table(sys, copy, relabel);
  return {std::move(copy), std::move(phi)};
}

std::map<Int, Int> random_relabeling(Rng& rng, const DynamicalSystem& sys, const Int& offset) {
  const auto& states = sys.states();
  std::vector<std::size_t> perm(states.size());
  std::iota(perm.begin(), perm.end(), std::size_t{1});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::map<Int, Int> out;
  for (std::size_t i = 0; i < states.size(); ++i) {
    out.emplace(states[i], offset + static_cast<unsigned long>(perm[i]));
  }
  return out;
}

std::pair<DynamicalSystem, Morphism> doubled_with_fold(const DynamicalSystem& sys) {
  const auto& base = sys.states();
  const Int shift = base.back() - base.front() + 1;
  std::vector<Int> states;
  std::vector<Branch> branch;
  std::vector<Int> image;
  std::map<Int, Int> fold;
  for (const Int& copy : {Int(0), shift}) {
    for (const auto& x : base) {
      states.push_back(x + copy);
      branch.push_back(sys.branch_of(x));
      image.push_back(sys.apply(x) + copy);
      fold.emplace(x + copy, x);
    }
  }
  DynamicalSystem doubled = make_system(SystemSpec::table(sys.k(), states, branch, image));
  Morphism phi = Morphism::table(doubled, sys, std::move(fold));
  return {std::move(doubled), std::move(phi)};
}

}  // namespace cdyn
