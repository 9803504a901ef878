#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vcsp/errors.hpp"
#include "vcsp/rational.hpp"

namespace vcsp {

using Label = int;
using Tuple = std::vector<Label>;
using Assignment = std::vector<Label>;

// Finite label set {0, ..., size-1}. Input files require size >= 2 (the
// standing assumption for languages); core computation may shrink a domain
// down to a single label, so the carrier itself only requires size >= 1.
class Domain {
 public:
  explicit Domain(int size) : size_(size) {
    if (size < 1) throw StructuralError("domain size must be >= 1");
  }
  int size() const { return size_; }
  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  int size_;
};

// d^m with overflow check.
std::size_t table_size(int d, int m);
std::size_t encode_tuple(std::span<const Label> t, int d);
Tuple decode_tuple(std::size_t index, int d, int m);

// Total map D^m -> Q u {+inf}. Dense storage up to kDenseCap entries,
// sparse (explicit entries over a default value) above that.
class WeightedRelation {
 public:
  static constexpr std::size_t kDenseCap = 1'000'000;

  WeightedRelation(std::string name, int domain_size, int arity,
                   std::vector<ExtRational> dense_table);
  WeightedRelation(std::string name, int domain_size, int arity, ExtRational default_value,
                   std::map<std::size_t, ExtRational> entries);

  static WeightedRelation constant(std::string name, int domain_size, int arity,
                                   ExtRational value);
  // Crisp unary relation {(label)}.
  static WeightedRelation unary_singleton(std::string name, int domain_size, Label label);

  const std::string& name() const { return name_; }
  int arity() const { return arity_; }
  int domain_size() const { return d_; }
  std::size_t size() const { return size_; }
  bool dense() const { return dense_; }
  const ExtRational& default_value() const { return default_; }
  const std::map<std::size_t, ExtRational>& sparse_entries() const { return sparse_; }

  const ExtRational& value_at(std::size_t index) const;
  const ExtRational& value(std::span<const Label> t) const;

  bool is_crisp() const;
  bool is_finite_valued() const;

  // Minimum over the whole table (+inf when feas is empty).
  ExtRational min_value() const;
  std::optional<Rational> min_finite_value() const;
  std::optional<Rational> max_finite_value() const;

  // Indices with finite value / with minimal value. Require iteration over
  // the full table; throw ResourceError beyond the iteration cap.
  std::vector<std::size_t> feasible_indices() const;
  std::vector<std::size_t> optimal_indices() const;

  // Crisp relation with value 0 exactly on feas(phi).
  WeightedRelation feas_relation() const;
  // Crisp relation with value 0 exactly on opt(phi).
  WeightedRelation opt_relation() const;

  // Restriction onto a label subset (sorted, distinct); labels are reindexed
  // to 0..|keep|-1.
  WeightedRelation restricted(const std::vector<Label>& keep, std::string new_name) const;

  WeightedRelation renamed(std::string new_name) const;

  // Table identity (name ignored).
  bool same_table(const WeightedRelation& o) const;

 private:
  void check_iterable() const;

  std::string name_;
  int d_;
  int arity_;
  std::size_t size_;
  bool dense_;
  std::vector<ExtRational> table_;
  ExtRational default_;
  std::map<std::size_t, ExtRational> sparse_;
};

// Named finite set of weighted relations over one domain.
class Language {
 public:
  explicit Language(int domain_size);

  void add(WeightedRelation rel);
  bool has(const std::string& name) const { return rels_.count(name) > 0; }
  const WeightedRelation& at(const std::string& name) const;
  const std::map<std::string, WeightedRelation>& relations() const { return rels_; }
  int domain_size() const { return d_; }
  bool is_crisp() const;

 private:
  int d_;
  std::map<std::string, WeightedRelation> rels_;
};

struct Constraint {
  std::string relation;
  std::vector<int> scope;  // 0-based variable indices
};

// Objective function: a sum of valued constraints over n variables.
// Multiplicities are repeated constraint entries; constraint order is kept.
class Instance {
 public:
  Instance(std::shared_ptr<const Language> language, int num_vars,
           std::vector<Constraint> constraints);

  int num_vars() const { return num_vars_; }
  const Language& language() const { return *language_; }
  const std::shared_ptr<const Language>& language_ptr() const { return language_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

  const std::string& language_path() const { return language_path_; }
  void set_language_path(std::string p) { language_path_ = std::move(p); }

 private:
  std::shared_ptr<const Language> language_;
  int num_vars_;
  std::vector<Constraint> constraints_;
  std::string language_path_;
};

// Exact objective value; +inf if any constraint is violated.
ExtRational eval(const Instance& instance, const Assignment& a);

// Crisp n-ary relation holding exactly the optimal assignments; the empty
// relation signals an unsatisfiable instance. Exhaustive: d^n <= cap.
WeightedRelation opt_relation(const Instance& instance, std::size_t cap = 1'000'000);

}  // namespace vcsp
