#pragma once

// Reference towers and trees used by the tests, the CLI and the benchmarks.

#include <cstddef>

#include "tafkit/ampliation.hpp"
#include "tafkit/tower.hpp"

namespace tafkit::corpus {

// T_3 -> T_9 -> ... under the 3^infinity block embedding.
Tower tuhf();
// T_n with the stationary standard rule of multiplicity m.
Tower standard(std::size_t n, std::size_t m);
// T_n with the stationary refinement rule of multiplicity l.
Tower refinement(std::size_t n, std::size_t l);
// T_n under the nest rule.
Tower nest(std::size_t n);
// Stored levels T_n, T_n (+) T_n, ... with 2^k blocks at level k; no rule.
Tower doubling(std::size_t n, std::size_t levels);

// 1 -> 2, 1 -> 3.
OutForest lambda();
// 1 -> 2 -> ... -> n.
OutForest chain(std::size_t n);
// Base tree with the stationary multiplicity l.
TreeRefinementSpec stationary(OutForest base, std::size_t l);

}  // namespace tafkit::corpus
