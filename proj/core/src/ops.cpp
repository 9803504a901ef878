#include "vcsp/ops.hpp"

#include <algorithm>
#include <map>

namespace vcsp {

Operation::Operation(std::string name, int domain_size, int arity, std::vector<Label> table)
    : name_(std::move(name)), d_(domain_size), k_(arity), table_(std::move(table)) {
  if (d_ < 1) throw StructuralError("operation domain size must be >= 1");
  if (k_ < 1) throw StructuralError("operation arity must be >= 1");
  if (table_.size() != table_size(d_, k_))
    throw StructuralError("operation table for '" + name_ + "' has wrong size");
  for (Label l : table_)
    if (l < 0 || l >= d_) throw StructuralError("operation value out of range in '" + name_ + "'");
}

Operation Operation::projection(int domain_size, int arity, int coordinate) {
  if (coordinate < 1 || coordinate > arity) throw StructuralError("projection coordinate out of range");
  std::size_t n = table_size(domain_size, arity);
  std::vector<Label> table(n);
  for (std::size_t i = 0; i < n; ++i) {
    Tuple t = decode_tuple(i, domain_size, arity);
    table[i] = t[static_cast<std::size_t>(coordinate - 1)];
  }
  return Operation("proj" + std::to_string(arity) + "_" + std::to_string(coordinate),
                   domain_size, arity, std::move(table));
}

Label Operation::apply(std::span<const Label> args) const {
  if (static_cast<int>(args.size()) != k_)
    throw StructuralError("operation argument count mismatch");
  return table_[encode_tuple(args, d_)];
}

Tuple Operation::apply_tuples(std::span<const Tuple> tuples) const {
  if (static_cast<int>(tuples.size()) != k_)
    throw StructuralError("operation tuple count mismatch");
  std::size_t m = tuples[0].size();
  for (const Tuple& t : tuples)
    if (t.size() != m) throw StructuralError("tuples of different lengths");
  Tuple out(m);
  Tuple args(static_cast<std::size_t>(k_));
  for (std::size_t j = 0; j < m; ++j) {
    for (int i = 0; i < k_; ++i) args[static_cast<std::size_t>(i)] = tuples[static_cast<std::size_t>(i)][j];
    out[j] = apply(args);
  }
  return out;
}

bool Operation::is_idempotent() const {
  Tuple args(static_cast<std::size_t>(k_));
  for (Label x = 0; x < d_; ++x) {
    std::fill(args.begin(), args.end(), x);
    if (apply(args) != x) return false;
  }
  return true;
}

bool Operation::is_conservative() const {
  std::size_t n = table_size(d_, k_);
  for (std::size_t i = 0; i < n; ++i) {
    Tuple t = decode_tuple(i, d_, k_);
    if (std::find(t.begin(), t.end(), table_[i]) == t.end()) return false;
  }
  return true;
}

bool Operation::is_commutative() const {
  if (k_ != 2) return false;
  for (Label x = 0; x < d_; ++x)
    for (Label y = 0; y < d_; ++y) {
      Label a[2] = {x, y}, b[2] = {y, x};
      if (apply(a) != apply(b)) return false;
    }
  return true;
}

std::optional<int> Operation::projection_coordinate() const {
  for (int c = 1; c <= k_; ++c)
    if (*this == projection(d_, k_, c)) return c;
  return std::nullopt;
}

bool Operation::is_majority() const {
  if (k_ != 3 || !is_idempotent()) return false;
  for (Label x = 0; x < d_; ++x)
    for (Label y = 0; y < d_; ++y) {
      Label p[3][3] = {{y, x, x}, {x, y, x}, {x, x, y}};
      for (auto& args : p)
        if (apply(args) != x) return false;
    }
  return true;
}

bool Operation::is_minority() const {
  if (k_ != 3 || !is_idempotent()) return false;
  for (Label x = 0; x < d_; ++x)
    for (Label y = 0; y < d_; ++y) {
      Label p[3][3] = {{y, x, x}, {x, y, x}, {x, x, y}};
      for (auto& args : p)
        if (apply(args) != y) return false;
    }
  return true;
}

bool Operation::is_wnu() const {
  if (k_ < 2 || !is_idempotent()) return false;
  Tuple args(static_cast<std::size_t>(k_));
  for (Label x = 0; x < d_; ++x)
    for (Label y = 0; y < d_; ++y) {
      std::fill(args.begin(), args.end(), x);
      args[0] = y;
      Label first = apply(args);
      for (int pos = 1; pos < k_; ++pos) {
        std::fill(args.begin(), args.end(), x);
        args[static_cast<std::size_t>(pos)] = y;
        if (apply(args) != first) return false;
      }
    }
  return true;
}

Operation compose(const Operation& f, const std::vector<Operation>& gs) {
  if (static_cast<int>(gs.size()) != f.arity())
    throw StructuralError("composition needs arity(f) inner operations");
  int d = f.domain_size();
  int l = gs.empty() ? 0 : gs[0].arity();
  for (const Operation& g : gs) {
    if (g.domain_size() != d) throw StructuralError("composition domain mismatch");
    if (g.arity() != l) throw StructuralError("inner operations must share one arity");
  }
  std::size_t n = table_size(d, l);
  std::vector<Label> table(n);
  Tuple inner(gs.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < gs.size(); ++j) inner[j] = gs[j].apply_index(i);
    table[i] = f.apply(inner);
  }
  return Operation(f.name() + "_comp", d, l, std::move(table));
}

namespace {

// Iterate all |feas|^k index vectors; returns false (with the vector) on the
// first closure violation.
bool feas_closed_under(const Operation& f, const WeightedRelation& phi,
                       const std::vector<std::size_t>& feas, std::size_t work_cap,
                       std::vector<std::size_t>* witness) {
  int k = f.arity();
  int m = phi.arity();
  int d = phi.domain_size();
  std::size_t combos = 1;
  for (int i = 0; i < k; ++i) {
    if (feas.empty()) return true;
    if (combos > work_cap / feas.size() + 1) throw ResourceError("polymorphism check too large");
    combos *= feas.size();
  }
  if (combos * static_cast<std::size_t>(m) > work_cap)
    throw ResourceError("polymorphism check too large");
  std::vector<Tuple> decoded;
  decoded.reserve(feas.size());
  for (std::size_t idx : feas) decoded.push_back(decode_tuple(idx, d, m));
  std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
  Tuple args(static_cast<std::size_t>(k));
  for (std::size_t c = 0; c < combos; ++c) {
    std::size_t image = 0;
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < k; ++i)
        args[static_cast<std::size_t>(i)] = decoded[pick[static_cast<std::size_t>(i)]][static_cast<std::size_t>(j)];
      image = image * static_cast<std::size_t>(d) + static_cast<std::size_t>(f.apply(args));
    }
    if (phi.value_at(image).is_infinite()) {
      if (witness) {
        witness->clear();
        for (std::size_t p : pick) witness->push_back(feas[p]);
      }
      return false;
    }
    for (int i = k - 1; i >= 0; --i) {
      if (++pick[static_cast<std::size_t>(i)] < feas.size()) break;
      pick[static_cast<std::size_t>(i)] = 0;
    }
  }
  return true;
}

}  // namespace

bool is_polymorphism(const Operation& f, const WeightedRelation& phi, std::size_t work_cap) {
  if (f.domain_size() != phi.domain_size())
    throw StructuralError("operation and relation domain mismatch");
  return feas_closed_under(f, phi, phi.feasible_indices(), work_cap, nullptr);
}

bool is_polymorphism(const Operation& f, const Language& gamma, std::size_t work_cap) {
  for (const auto& [name, phi] : gamma.relations())
    if (!is_polymorphism(f, phi, work_cap)) return false;
  return true;
}

FractionalOperation::FractionalOperation(int domain_size, int arity,
                                         std::vector<std::pair<Operation, Rational>> weights)
    : d_(domain_size), k_(arity) {
  std::map<Operation, Rational> merged;
  for (auto& [op, w] : weights) {
    if (op.domain_size() != d_) throw StructuralError("fractional operation domain mismatch");
    if (op.arity() != k_) throw StructuralError("all support operations must have the same arity");
    if (w <= 0) throw StructuralError("fractional operation weights must be positive");
    merged[op] += w;
  }
  Rational total(0);
  for (auto& [op, w] : merged) {
    total += w;
    weights_.emplace_back(op, w);
  }
  if (total != 1) throw StructuralError("fractional operation weights must sum to 1");
}

FractionalOperation FractionalOperation::uniform_projections(int domain_size, int arity) {
  std::vector<std::pair<Operation, Rational>> w;
  w.reserve(static_cast<std::size_t>(arity));
  for (int i = 1; i <= arity; ++i) {
    Rational r(1, arity);
    r.canonicalize();
    w.emplace_back(Operation::projection(domain_size, arity, i), r);
  }
  return FractionalOperation(domain_size, arity, std::move(w));
}

Rational FractionalOperation::weight_of(const Operation& op) const {
  for (const auto& [o, w] : weights_)
    if (o == op) return w;
  return Rational(0);
}

namespace {

FpolCheck check_fpol_relation(const FractionalOperation& omega, const WeightedRelation& phi,
                              std::size_t work_cap) {
  int k = omega.arity();
  int m = phi.arity();
  int d = phi.domain_size();
  std::vector<std::size_t> feas = phi.feasible_indices();
  if (feas.empty()) return FpolCheck{true, std::nullopt};
  std::size_t combos = 1;
  for (int i = 0; i < k; ++i) {
    if (combos > work_cap / feas.size() + 1)
      throw ResourceError("fractional polymorphism check too large");
    combos *= feas.size();
  }
  std::vector<Tuple> decoded;
  decoded.reserve(feas.size());
  for (std::size_t idx : feas) decoded.push_back(decode_tuple(idx, d, m));

  std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
  Tuple args(static_cast<std::size_t>(k));
  for (std::size_t c = 0; c < combos; ++c) {
    Rational rhs(0);
    for (std::size_t p : pick) rhs += phi.value_at(feas[p]).finite();
    rhs /= k;

    Rational lhs(0);
    bool infeasible_image = false;
    for (const auto& [f, w] : omega.weights()) {
      std::size_t image = 0;
      for (int j = 0; j < m; ++j) {
        for (int i = 0; i < k; ++i)
          args[static_cast<std::size_t>(i)] =
              decoded[pick[static_cast<std::size_t>(i)]][static_cast<std::size_t>(j)];
        image = image * static_cast<std::size_t>(d) + static_cast<std::size_t>(f.apply(args));
      }
      const ExtRational& v = phi.value_at(image);
      if (v.is_infinite()) {
        infeasible_image = true;
        break;
      }
      lhs += w * v.finite();
    }
    if (infeasible_image || lhs > rhs) {
      FpolViolation viol;
      viol.relation = phi.name();
      viol.infeasible_image = infeasible_image;
      for (std::size_t p : pick) viol.tuples.push_back(decoded[p]);
      return FpolCheck{false, std::move(viol)};
    }
    for (int i = k - 1; i >= 0; --i) {
      if (++pick[static_cast<std::size_t>(i)] < feas.size()) break;
      pick[static_cast<std::size_t>(i)] = 0;
    }
  }
  return FpolCheck{true, std::nullopt};
}

}  // namespace

FpolCheck is_fractional_polymorphism(const FractionalOperation& omega,
                                     const WeightedRelation& phi, std::size_t work_cap) {
  if (omega.domain_size() != phi.domain_size())
    throw StructuralError("fractional operation and relation domain mismatch");
  return check_fpol_relation(omega, phi, work_cap);
}

FpolCheck is_fractional_polymorphism(const FractionalOperation& omega, const Language& gamma,
                                     std::size_t work_cap) {
  for (const auto& [name, phi] : gamma.relations()) {
    FpolCheck c = is_fractional_polymorphism(omega, phi, work_cap);
    if (!c.ok) return c;
  }
  return FpolCheck{true, std::nullopt};
}

std::vector<Operation> enumerate_operations(int d, int k, std::size_t max_ops) {
  std::size_t entries = table_size(d, k);
  // Count d^entries with overflow/cap control.
  std::size_t count = 1;
  for (std::size_t i = 0; i < entries; ++i) {
    if (count > max_ops / static_cast<std::size_t>(d) + 1)
      throw ResourceError("operation space d^(d^k) exceeds the enumeration cap");
    count *= static_cast<std::size_t>(d);
  }
  if (count > max_ops) throw ResourceError("operation space d^(d^k) exceeds the enumeration cap");
  std::vector<Operation> out;
  out.reserve(count);
  std::vector<Label> table(entries, 0);
  for (std::size_t c = 0; c < count; ++c) {
    out.emplace_back("op" + std::to_string(c), d, k, table);
    for (std::size_t i = entries; i-- > 0;) {
      if (++table[i] < d) break;
      table[i] = 0;
    }
  }
  return out;
}

}  // namespace vcsp
