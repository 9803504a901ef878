#pragma once

#include <set>
#include <vector>

#include "vcsp/model.hpp"

namespace vcsp {

struct CrispConstraint {
  std::vector<int> scope;        // sorted, distinct variables
  std::set<std::size_t> tuples;  // allowed tuples, encoded over the scope
};

struct CrispNetwork {
  int num_vars = 0;
  int domain_size = 0;
  std::vector<CrispConstraint> constraints;
};

struct MinimalityResult {
  bool empty = false;      // some constraint pruned to the empty set
  CrispNetwork network;    // the (k,l)-minimal network when non-empty
  int sweeps = 0;
};

// Fixpoint pruning towards (k,l)-minimality: every scope of size <= l is
// present (absent scopes start as full D^S), and every constraint of scope
// size <= k agrees exactly with the projections of its superset scopes.
// Equivalent to the input network: solution sets are unchanged.
MinimalityResult establish_minimality(const CrispNetwork& network, int k, int l,
                                      std::size_t cap = 1'000'000);

// Verifies both defining conditions exactly.
bool is_minimal(const CrispNetwork& network, int k, int l);

// Exhaustive solution set (d^n <= cap).
std::vector<Assignment> network_solutions(const CrispNetwork& network,
                                          std::size_t cap = 1'000'000);

// Feasibility network of a crisp instance; scopes with repeated variables
// collapse onto their variable sets.
CrispNetwork network_from_instance(const Instance& instance);

}  // namespace vcsp
