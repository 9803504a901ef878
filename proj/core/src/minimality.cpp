#include "vcsp/minimality.hpp"

#include <algorithm>
#include <map>

namespace vcsp {

namespace {

// Positions of the child scope inside the parent scope; empty when not a
// subset. Both scopes sorted.
std::optional<std::vector<int>> subset_positions(const std::vector<int>& child,
                                                 const std::vector<int>& parent) {
  std::vector<int> pos;
  std::size_t pi = 0;
  for (int v : child) {
    while (pi < parent.size() && parent[pi] < v) ++pi;
    if (pi == parent.size() || parent[pi] != v) return std::nullopt;
    pos.push_back(static_cast<int>(pi));
  }
  return pos;
}

std::size_t project_tuple(std::size_t parent_index, int d, int parent_arity,
                          const std::vector<int>& positions) {
  Tuple t = decode_tuple(parent_index, d, parent_arity);
  std::size_t idx = 0;
  for (int p : positions) idx = idx * static_cast<std::size_t>(d) + static_cast<std::size_t>(t[static_cast<std::size_t>(p)]);
  return idx;
}

void enumerate_subsets(int n, int max_size, std::vector<std::vector<int>>& out) {
  // All nonempty subsets of {0..n-1} with size <= max_size, by size then
  // lexicographic order.
  std::vector<int> current;
  for (int size = 1; size <= std::min(max_size, n); ++size) {
    current.assign(static_cast<std::size_t>(size), 0);
    for (int i = 0; i < size; ++i) current[static_cast<std::size_t>(i)] = i;
    for (;;) {
      out.push_back(current);
      int i = size - 1;
      while (i >= 0 && current[static_cast<std::size_t>(i)] == n - size + i) --i;
      if (i < 0) break;
      ++current[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < size; ++j)
        current[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

}  // namespace

MinimalityResult establish_minimality(const CrispNetwork& network, int k, int l,
                                      std::size_t cap) {
  if (k < 1 || k > l) throw StructuralError("require 1 <= k <= l");
  int d = network.domain_size;
  int n = network.num_vars;
  if (d < 1 || n < 1) throw StructuralError("network needs variables and a domain");

  MinimalityResult result;
  CrispNetwork& net = result.network;
  net.num_vars = n;
  net.domain_size = d;
  net.constraints = network.constraints;
  for (const CrispConstraint& c : net.constraints) {
    if (c.scope.empty()) throw StructuralError("empty constraint scope");
    for (std::size_t i = 0; i + 1 < c.scope.size(); ++i)
      if (c.scope[i] >= c.scope[i + 1])
        throw StructuralError("constraint scopes must be sorted and distinct");
    if (c.scope.front() < 0 || c.scope.back() >= n)
      throw StructuralError("scope variable out of range");
  }

  // Scope padding: absent scopes of size <= l start as full D^S.
  std::set<std::vector<int>> present;
  for (const CrispConstraint& c : net.constraints)
    if (static_cast<int>(c.scope.size()) <= l) present.insert(c.scope);
  std::vector<std::vector<int>> subsets;
  enumerate_subsets(n, l, subsets);
  std::size_t total = 0;
  for (const std::vector<int>& s : subsets) {
    if (present.count(s)) continue;
    CrispConstraint c;
    c.scope = s;
    std::size_t sz = table_size(d, static_cast<int>(s.size()));
    total += sz;
    if (total > cap) throw ResourceError("scope padding exceeds the cap");
    for (std::size_t t = 0; t < sz; ++t) c.tuples.insert(t);
    net.constraints.push_back(std::move(c));
  }

  // Precompute the (parent, child) pairs with |child| <= k.
  struct Pair {
    int i, j;
    std::vector<int> positions;
  };
  std::vector<Pair> pairs;
  int q = static_cast<int>(net.constraints.size());
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      if (i == j) continue;
      if (static_cast<int>(net.constraints[j].scope.size()) > k) continue;
      auto pos = subset_positions(net.constraints[j].scope, net.constraints[i].scope);
      if (pos) pairs.push_back({i, j, std::move(*pos)});
    }

  bool changed = true;
  while (changed) {
    changed = false;
    ++result.sweeps;
    for (const Pair& p : pairs) {
      CrispConstraint& parent = net.constraints[static_cast<std::size_t>(p.i)];
      CrispConstraint& child = net.constraints[static_cast<std::size_t>(p.j)];
      int pa = static_cast<int>(parent.scope.size());
      // Projection of the parent.
      std::set<std::size_t> projected;
      for (std::size_t s : parent.tuples)
        projected.insert(project_tuple(s, d, pa, p.positions));
      // Tighten the child to the projection.
      for (auto it = child.tuples.begin(); it != child.tuples.end();) {
        if (!projected.count(*it)) {
          it = child.tuples.erase(it);
          changed = true;
        } else {
          ++it;
        }
      }
      // Drop parent tuples whose projection left the child.
      for (auto it = parent.tuples.begin(); it != parent.tuples.end();) {
        if (!child.tuples.count(project_tuple(*it, d, pa, p.positions))) {
          it = parent.tuples.erase(it);
          changed = true;
        } else {
          ++it;
        }
      }
    }
  }

  for (const CrispConstraint& c : net.constraints)
    if (c.tuples.empty()) {
      result.empty = true;
      break;
    }
  return result;
}

bool is_minimal(const CrispNetwork& network, int k, int l) {
  if (k < 1 || k > l) throw StructuralError("require 1 <= k <= l");
  int d = network.domain_size;
  std::set<std::vector<int>> scopes;
  for (const CrispConstraint& c : network.constraints) scopes.insert(c.scope);
  std::vector<std::vector<int>> subsets;
  enumerate_subsets(network.num_vars, l, subsets);
  for (const std::vector<int>& s : subsets)
    if (!scopes.count(s)) return false;

  int q = static_cast<int>(network.constraints.size());
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) {
      if (i == j) continue;
      const CrispConstraint& parent = network.constraints[static_cast<std::size_t>(i)];
      const CrispConstraint& child = network.constraints[static_cast<std::size_t>(j)];
      if (static_cast<int>(child.scope.size()) > k) continue;
      auto pos = subset_positions(child.scope, parent.scope);
      if (!pos) continue;
      std::set<std::size_t> projected;
      for (std::size_t s : parent.tuples)
        projected.insert(project_tuple(s, d, static_cast<int>(parent.scope.size()), *pos));
      if (projected != child.tuples) return false;
    }
  return true;
}

std::vector<Assignment> network_solutions(const CrispNetwork& network, std::size_t cap) {
  std::size_t count = table_size(network.domain_size, network.num_vars);
  if (count > cap) throw ResourceError("network too large for exhaustive solutions");
  std::vector<Assignment> out;
  for (std::size_t i = 0; i < count; ++i) {
    Assignment a = decode_tuple(i, network.domain_size, network.num_vars);
    bool ok = true;
    for (const CrispConstraint& c : network.constraints) {
      std::size_t idx = 0;
      for (int v : c.scope)
        idx = idx * static_cast<std::size_t>(network.domain_size) +
              static_cast<std::size_t>(a[static_cast<std::size_t>(v)]);
      if (!c.tuples.count(idx)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(std::move(a));
  }
  return out;
}

CrispNetwork network_from_instance(const Instance& instance) {
  CrispNetwork net;
  net.num_vars = instance.num_vars();
  net.domain_size = instance.language().domain_size();
  int d = net.domain_size;
  for (const Constraint& c : instance.constraints()) {
    const WeightedRelation& rel = instance.language().at(c.relation);
    if (!rel.is_crisp())
      throw StructuralError("network_from_instance requires crisp relations");
    // Collapse the ordered scope onto its sorted variable set.
    std::vector<int> scope = c.scope;
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
    std::map<int, int> position;
    for (std::size_t i = 0; i < scope.size(); ++i) position[scope[i]] = static_cast<int>(i);

    CrispConstraint cc;
    cc.scope = scope;
    std::size_t sz = table_size(d, static_cast<int>(scope.size()));
    for (std::size_t t = 0; t < sz; ++t) {
      Tuple set_tuple = decode_tuple(t, d, static_cast<int>(scope.size()));
      Tuple orig(c.scope.size());
      for (std::size_t p = 0; p < c.scope.size(); ++p)
        orig[p] = set_tuple[static_cast<std::size_t>(position[c.scope[p]])];
      if (rel.value(orig).is_finite()) cc.tuples.insert(t);
    }
    net.constraints.push_back(std::move(cc));
  }
  return net;
}

}  // namespace vcsp
