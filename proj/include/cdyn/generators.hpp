#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "cdyn/morphisms.hpp"
#include "cdyn/system.hpp"

namespace cdyn {

using Rng = std::mt19937_64;

/// Random finite table on states 1..n: branches drawn uniformly, images drawn
/// without replacement inside each branch so every branch is injective.
SystemSpec random_table(Rng& rng, std::size_t n, int k);

/// Copy of a finite system with states renamed by `relabel` (old -> new), and
/// the isomorphism carrying the original onto the copy.
std::pair<DynamicalSystem, Morphism> relabeled_copy(const DynamicalSystem& sys, const std::map<Int, Int>& relabel);

/// Uniformly random bijection of the state set onto offset+1 .. offset+n.
std::map<Int, Int> random_relabeling(Rng& rng, const DynamicalSystem& sys, const Int& offset = 0);

/// Two copies of a finite system side by side (second copy shifted past the
/// original states) and the fold back onto the original.
std::pair<DynamicalSystem, Morphism> doubled_with_fold(const DynamicalSystem& sys);

}  // namespace cdyn
