#pragma once

#include <cstddef>
#include <vector>

#include "cdyn/coding.hpp"
#include "cdyn/orbits.hpp"
#include "cdyn/words.hpp"

/// Straightforward single-threaded versions of the parallel kernels. They share
/// no code with the fast paths beyond the system primitives and exist to
/// cross-check them in tests and benchmarks.
namespace cdyn::reference {

/// Solves the rational fixed-point equation of every word up to max_len.
std::vector<CycleEntry> enumerate_cycles(const DynamicalSystem& sys, std::size_t max_len);

/// Calls distinguishing_prefix_length on every pair.
TucReport verify_tuc_window(const DynamicalSystem& sys, const Window& window, std::size_t cap);

/// Breadth-first components of the re-entry graph.
MinimalityReport minimality_probe(const DynamicalSystem& sys, const Window& window, std::size_t budget);

UniquenessReport check_uniqueness(const DynamicalSystem& sys, std::size_t max_len);

ConvergenceReport convergence_scan(const DynamicalSystem& sys, unsigned long n, const Int& target, std::size_t cap);

}  // namespace cdyn::reference
