#include "vcsp/model.hpp"

#include <algorithm>
#include <limits>

namespace vcsp {

std::size_t table_size(int d, int m) {
  if (d < 1 || m < 0) throw StructuralError("bad table dimensions");
  std::size_t r = 1;
  for (int i = 0; i < m; ++i) {
    if (r > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(d))
      throw ResourceError("table size d^m overflows");
    r *= static_cast<std::size_t>(d);
  }
  return r;
}

std::size_t encode_tuple(std::span<const Label> t, int d) {
  std::size_t idx = 0;
  for (Label l : t) {
    if (l < 0 || l >= d) throw StructuralError("label out of range");
    idx = idx * static_cast<std::size_t>(d) + static_cast<std::size_t>(l);
  }
  return idx;
}

Tuple decode_tuple(std::size_t index, int d, int m) {
  Tuple t(static_cast<std::size_t>(m));
  for (int i = m - 1; i >= 0; --i) {
    t[static_cast<std::size_t>(i)] = static_cast<Label>(index % static_cast<std::size_t>(d));
    index /= static_cast<std::size_t>(d);
  }
  return t;
}

WeightedRelation::WeightedRelation(std::string name, int domain_size, int arity,
                                   std::vector<ExtRational> dense_table)
    : name_(std::move(name)),
      d_(domain_size),
      arity_(arity),
      size_(table_size(domain_size, arity)),
      dense_(true),
      table_(std::move(dense_table)) {
  if (arity_ < 1) throw StructuralError("relation arity must be >= 1");
  if (table_.size() != size_)
    throw StructuralError("dense table for '" + name_ + "' has wrong size");
  if (size_ > kDenseCap)
    throw ResourceError("dense table for '" + name_ + "' exceeds the dense cap");
}

WeightedRelation::WeightedRelation(std::string name, int domain_size, int arity,
                                   ExtRational default_value,
                                   std::map<std::size_t, ExtRational> entries)
    : name_(std::move(name)),
      d_(domain_size),
      arity_(arity),
      size_(table_size(domain_size, arity)),
      dense_(false),
      default_(std::move(default_value)),
      sparse_(std::move(entries)) {
  if (arity_ < 1) throw StructuralError("relation arity must be >= 1");
  for (const auto& [idx, v] : sparse_)
    if (idx >= size_) throw StructuralError("sparse entry index out of range in '" + name_ + "'");
  if (size_ <= kDenseCap) {
    // Normalise small relations to dense storage.
    std::vector<ExtRational> table(size_, default_);
    for (const auto& [idx, v] : sparse_) table[idx] = v;
    table_ = std::move(table);
    sparse_.clear();
    dense_ = true;
  }
}

WeightedRelation WeightedRelation::constant(std::string name, int domain_size, int arity,
                                            ExtRational value) {
  std::size_t n = table_size(domain_size, arity);
  if (n <= kDenseCap)
    return WeightedRelation(std::move(name), domain_size, arity,
                            std::vector<ExtRational>(n, value));
  return WeightedRelation(std::move(name), domain_size, arity, value, {});
}

WeightedRelation WeightedRelation::unary_singleton(std::string name, int domain_size,
                                                   Label label) {
  if (label < 0 || label >= domain_size) throw StructuralError("singleton label out of range");
  std::vector<ExtRational> table(static_cast<std::size_t>(domain_size),
                                 ExtRational::infinity());
  table[static_cast<std::size_t>(label)] = ExtRational(0);
  return WeightedRelation(std::move(name), domain_size, 1, std::move(table));
}

const ExtRational& WeightedRelation::value_at(std::size_t index) const {
  if (index >= size_) throw StructuralError("tuple index out of range");
  if (dense_) return table_[index];
  auto it = sparse_.find(index);
  return it == sparse_.end() ? default_ : it->second;
}

const ExtRational& WeightedRelation::value(std::span<const Label> t) const {
  if (static_cast<int>(t.size()) != arity_)
    throw StructuralError("tuple arity mismatch for '" + name_ + "'");
  return value_at(encode_tuple(t, d_));
}

void WeightedRelation::check_iterable() const {
  if (size_ > kDenseCap)
    throw ResourceError("relation '" + name_ + "' is too large to enumerate");
}

bool WeightedRelation::is_crisp() const {
  check_iterable();
  for (std::size_t i = 0; i < size_; ++i) {
    const ExtRational& v = value_at(i);
    if (v.is_finite() && v != ExtRational(0)) return false;
  }
  return true;
}

bool WeightedRelation::is_finite_valued() const {
  check_iterable();
  for (std::size_t i = 0; i < size_; ++i)
    if (value_at(i).is_infinite()) return false;
  return true;
}

ExtRational WeightedRelation::min_value() const {
  check_iterable();
  ExtRational best = ExtRational::infinity();
  for (std::size_t i = 0; i < size_; ++i)
    if (value_at(i) < best) best = value_at(i);
  return best;
}

std::optional<Rational> WeightedRelation::min_finite_value() const {
  ExtRational m = min_value();
  if (m.is_infinite()) return std::nullopt;
  return m.finite();
}

std::optional<Rational> WeightedRelation::max_finite_value() const {
  check_iterable();
  std::optional<Rational> best;
  for (std::size_t i = 0; i < size_; ++i) {
    const ExtRational& v = value_at(i);
    if (v.is_infinite()) continue;
    if (!best || v.finite() > *best) best = v.finite();
  }
  return best;
}

std::vector<std::size_t> WeightedRelation::feasible_indices() const {
  check_iterable();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size_; ++i)
    if (value_at(i).is_finite()) out.push_back(i);
  return out;
}

std::vector<std::size_t> WeightedRelation::optimal_indices() const {
  ExtRational m = min_value();
  std::vector<std::size_t> out;
  if (m.is_infinite()) return out;
  for (std::size_t i = 0; i < size_; ++i)
    if (value_at(i) == m) out.push_back(i);
  return out;
}

WeightedRelation WeightedRelation::feas_relation() const {
  check_iterable();
  std::vector<ExtRational> table(size_);
  for (std::size_t i = 0; i < size_; ++i)
    table[i] = value_at(i).is_finite() ? ExtRational(0) : ExtRational::infinity();
  return WeightedRelation(name_ + "_feas", d_, arity_, std::move(table));
}

WeightedRelation WeightedRelation::opt_relation() const {
  ExtRational m = min_value();
  std::vector<ExtRational> table(size_, ExtRational::infinity());
  if (m.is_finite())
    for (std::size_t i = 0; i < size_; ++i)
      if (value_at(i) == m) table[i] = ExtRational(0);
  return WeightedRelation(name_ + "_opt", d_, arity_, std::move(table));
}

WeightedRelation WeightedRelation::restricted(const std::vector<Label>& keep,
                                              std::string new_name) const {
  if (keep.empty()) throw StructuralError("cannot restrict to an empty label set");
  for (std::size_t i = 0; i + 1 < keep.size(); ++i)
    if (keep[i] >= keep[i + 1]) throw StructuralError("label subset must be sorted and distinct");
  if (keep.front() < 0 || keep.back() >= d_)
    throw StructuralError("label subset out of range");
  int nd = static_cast<int>(keep.size());
  std::size_t nsize = table_size(nd, arity_);
  if (nsize > kDenseCap) throw ResourceError("restricted relation too large");
  std::vector<ExtRational> table(nsize);
  Tuple orig(static_cast<std::size_t>(arity_));
  for (std::size_t i = 0; i < nsize; ++i) {
    Tuple t = decode_tuple(i, nd, arity_);
    for (int j = 0; j < arity_; ++j)
      orig[static_cast<std::size_t>(j)] = keep[static_cast<std::size_t>(t[static_cast<std::size_t>(j)])];
    table[i] = value(orig);
  }
  return WeightedRelation(std::move(new_name), nd, arity_, std::move(table));
}

WeightedRelation WeightedRelation::renamed(std::string new_name) const {
  WeightedRelation r = *this;
  r.name_ = std::move(new_name);
  return r;
}

bool WeightedRelation::same_table(const WeightedRelation& o) const {
  if (d_ != o.d_ || arity_ != o.arity_) return false;
  if (size_ <= kDenseCap) {
    for (std::size_t i = 0; i < size_; ++i)
      if (!(value_at(i) == o.value_at(i))) return false;
    return true;
  }
  if (!(default_ == o.default_)) return false;
  return sparse_ == o.sparse_ ? true : false;
}

Language::Language(int domain_size) : d_(domain_size) {
  if (domain_size < 1) throw StructuralError("domain size must be >= 1");
}

void Language::add(WeightedRelation rel) {
  if (rel.domain_size() != d_)
    throw StructuralError("relation '" + rel.name() + "' has a different domain size");
  auto [it, inserted] = rels_.emplace(rel.name(), std::move(rel));
  if (!inserted) throw StructuralError("duplicate relation name '" + it->first + "'");
}

const WeightedRelation& Language::at(const std::string& name) const {
  auto it = rels_.find(name);
  if (it == rels_.end()) throw StructuralError("unknown relation name '" + name + "'");
  return it->second;
}

bool Language::is_crisp() const {
  for (const auto& [name, rel] : rels_)
    if (!rel.is_crisp()) return false;
  return true;
}

Instance::Instance(std::shared_ptr<const Language> language, int num_vars,
                   std::vector<Constraint> constraints)
    : language_(std::move(language)), num_vars_(num_vars), constraints_(std::move(constraints)) {
  if (!language_) throw StructuralError("instance requires a language");
  if (num_vars_ < 0) throw StructuralError("negative variable count");
  for (const Constraint& c : constraints_) {
    const WeightedRelation& rel = language_->at(c.relation);
    if (static_cast<int>(c.scope.size()) != rel.arity())
      throw StructuralError("scope length does not match arity of '" + c.relation + "'");
    for (int v : c.scope)
      if (v < 0 || v >= num_vars_)
        throw StructuralError("scope variable out of range in '" + c.relation + "'");
  }
}

ExtRational eval(const Instance& instance, const Assignment& a) {
  if (static_cast<int>(a.size()) != instance.num_vars())
    throw StructuralError("assignment must be total on the instance variables");
  int d = instance.language().domain_size();
  for (Label l : a)
    if (l < 0 || l >= d) throw StructuralError("assignment label out of range");
  ExtRational total(0);
  Tuple t;
  for (const Constraint& c : instance.constraints()) {
    t.clear();
    for (int v : c.scope) t.push_back(a[static_cast<std::size_t>(v)]);
    total += instance.language().at(c.relation).value(t);
    if (total.is_infinite()) return total;
  }
  return total;
}

WeightedRelation opt_relation(const Instance& instance, std::size_t cap) {
  int n = instance.num_vars();
  int d = instance.language().domain_size();
  if (n < 1) throw StructuralError("opt_relation requires at least one variable");
  std::size_t count = table_size(d, n);
  if (count > cap) throw ResourceError("instance too large for exhaustive optimality relation");
  ExtRational best = ExtRational::infinity();
  std::vector<ExtRational> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    Assignment a = decode_tuple(i, d, n);
    values[i] = eval(instance, a);
    if (values[i] < best) best = values[i];
  }
  std::vector<ExtRational> table(count, ExtRational::infinity());
  if (best.is_finite())
    for (std::size_t i = 0; i < count; ++i)
      if (values[i] == best) table[i] = ExtRational(0);
  return WeightedRelation("opt", d, n, std::move(table));
}

}  // namespace vcsp
