#include "vcsp/io.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "vcsp/errors.hpp"

namespace vcsp {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

ExtRational parse_value(const std::string& text, int line) {
  if (text == "inf") return ExtRational::infinity();
  try {
    return ExtRational(parse_rational(text));
  } catch (const StructuralError& e) {
    throw ParseError(line, e.what());
  }
}

Label parse_label(const std::string& text, int d, int line) {
  for (char ch : text)
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw ParseError(line, "malformed label '" + text + "'");
  long v = std::stol(text);
  if (v < 0 || v >= d) throw ParseError(line, "label out of range: " + text);
  return static_cast<Label>(v);
}

// Deterministic default for serialization: the most frequent table value,
// ties broken towards the smaller value (with inf greatest).
ExtRational pick_default(const WeightedRelation& rel) {
  if (!rel.dense()) return rel.default_value();
  std::map<std::string, std::pair<ExtRational, std::size_t>> counts;
  for (std::size_t i = 0; i < rel.size(); ++i) {
    const ExtRational& v = rel.value_at(i);
    auto [it, fresh] = counts.emplace(v.str(), std::make_pair(v, 0u));
    ++it->second.second;
  }
  const ExtRational* best = nullptr;
  std::size_t best_count = 0;
  for (const auto& [key, entry] : counts) {
    const auto& [v, c] = entry;
    if (!best || c > best_count || (c == best_count && v < *best)) {
      best = &v;
      best_count = c;
    }
  }
  return *best;
}

struct LineReader {
  std::istream& in;
  int line_no = 0;
  std::vector<std::string> pending;
  bool has_pending = false;

  bool next(std::vector<std::string>& out) {
    if (has_pending) {
      out = pending;
      has_pending = false;
      return true;
    }
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      std::vector<std::string> toks = tokenize(line);
      if (toks.empty()) continue;
      out = std::move(toks);
      return true;
    }
    return false;
  }

  void push_back(std::vector<std::string> toks) {
    pending = std::move(toks);
    has_pending = true;
  }
};

}  // namespace

Language parse_language(std::istream& in) {
  LineReader r{in};
  std::vector<std::string> toks;
  if (!r.next(toks) || toks[0] != "domain" || toks.size() != 2)
    throw ParseError(r.line_no == 0 ? 1 : r.line_no, "expected 'domain <d>' header");
  int d = 0;
  try {
    d = std::stoi(toks[1]);
  } catch (...) {
    throw ParseError(r.line_no, "malformed domain size");
  }
  if (d < 2) throw ParseError(r.line_no, "domain size must be at least two");

  Language lang(d);
  while (r.next(toks)) {
    if (toks[0] != "relation" || toks.size() != 3)
      throw ParseError(r.line_no, "expected 'relation <name> <arity>'");
    std::string name = toks[1];
    int arity = 0;
    try {
      arity = std::stoi(toks[2]);
    } catch (...) {
      throw ParseError(r.line_no, "malformed arity");
    }
    if (arity < 1) throw ParseError(r.line_no, "arity must be >= 1");
    std::size_t size;
    try {
      size = table_size(d, arity);
    } catch (const ResourceError& e) {
      throw ParseError(r.line_no, e.what());
    }

    if (!r.next(toks) || toks[0] != "default" || toks.size() != 2)
      throw ParseError(r.line_no, "expected 'default <val>' after relation header");
    ExtRational def = parse_value(toks[1], r.line_no);

    std::map<std::size_t, ExtRational> entries;
    while (r.next(toks)) {
      if (toks[0] == "relation") {
        r.push_back(std::move(toks));
        break;
      }
      if (toks.size() != static_cast<std::size_t>(arity) + 2 ||
          toks[toks.size() - 2] != ":")
        throw ParseError(r.line_no, "expected '<l_1> ... <l_" + std::to_string(arity) +
                                        "> : <val>' tuple line");
      Tuple t(static_cast<std::size_t>(arity));
      for (int i = 0; i < arity; ++i) t[static_cast<std::size_t>(i)] = parse_label(toks[static_cast<std::size_t>(i)], d, r.line_no);
      ExtRational v = parse_value(toks.back(), r.line_no);
      std::size_t idx = encode_tuple(t, d);
      if (!entries.emplace(idx, v).second)
        throw ParseError(r.line_no, "duplicate tuple in relation '" + name + "'");
    }
    try {
      if (size <= WeightedRelation::kDenseCap) {
        std::vector<ExtRational> table(size, def);
        for (const auto& [idx, v] : entries) table[idx] = v;
        lang.add(WeightedRelation(name, d, arity, std::move(table)));
      } else {
        lang.add(WeightedRelation(name, d, arity, def, std::move(entries)));
      }
    } catch (const StructuralError& e) {
      throw ParseError(r.line_no, e.what());
    }
  }
  return lang;
}

Language parse_language_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open language file '" + path + "'");
  return parse_language(in);
}

void serialize_language(const Language& lang, std::ostream& out) {
  out << "domain " << lang.domain_size() << "\n";
  for (const auto& [name, rel] : lang.relations()) {
    out << "relation " << name << " " << rel.arity() << "\n";
    ExtRational def = pick_default(rel);
    out << "default " << def.str() << "\n";
    if (rel.dense()) {
      for (std::size_t i = 0; i < rel.size(); ++i) {
        const ExtRational& v = rel.value_at(i);
        if (v == def) continue;
        Tuple t = decode_tuple(i, rel.domain_size(), rel.arity());
        for (std::size_t j = 0; j < t.size(); ++j) out << t[j] << " ";
        out << ": " << v.str() << "\n";
      }
    } else {
      for (const auto& [idx, v] : rel.sparse_entries()) {
        if (v == def) continue;
        Tuple t = decode_tuple(idx, rel.domain_size(), rel.arity());
        for (std::size_t j = 0; j < t.size(); ++j) out << t[j] << " ";
        out << ": " << v.str() << "\n";
      }
    }
  }
}

std::string serialize_language(const Language& lang) {
  std::ostringstream oss;
  serialize_language(lang, oss);
  return oss.str();
}

Instance parse_instance(std::istream& in, std::shared_ptr<const Language> language,
                        std::string language_path) {
  LineReader r{in};
  std::vector<std::string> toks;
  if (!r.next(toks)) throw ParseError(1, "empty instance file");
  if (toks[0] == "language") {
    if (toks.size() != 2) throw ParseError(r.line_no, "expected 'language <path>'");
    if (!language)
      throw ParseError(r.line_no, "instance stream parsing requires a pre-loaded language");
    if (language_path.empty()) language_path = toks[1];
    if (!r.next(toks)) throw ParseError(r.line_no + 1, "expected 'vars <n>'");
  }
  if (!language) throw StructuralError("instance requires a language");
  if (toks[0] != "vars" || toks.size() != 2)
    throw ParseError(r.line_no, "expected 'vars <n>'");
  int n = 0;
  try {
    n = std::stoi(toks[1]);
  } catch (...) {
    throw ParseError(r.line_no, "malformed variable count");
  }
  if (n < 0) throw ParseError(r.line_no, "negative variable count");

  std::vector<Constraint> constraints;
  while (r.next(toks)) {
    if (toks[0] != "constraint" || toks.size() < 3)
      throw ParseError(r.line_no, "expected 'constraint <name> x<i_1> ...'");
    Constraint c;
    c.relation = toks[1];
    if (!language->has(c.relation))
      throw ParseError(r.line_no, "unknown relation name '" + c.relation + "'");
    const WeightedRelation& rel = language->at(c.relation);
    if (static_cast<int>(toks.size()) - 2 != rel.arity())
      throw ParseError(r.line_no, "scope length does not match arity of '" + c.relation + "'");
    for (std::size_t i = 2; i < toks.size(); ++i) {
      const std::string& v = toks[i];
      if (v.size() < 2 || v[0] != 'x')
        throw ParseError(r.line_no, "malformed variable '" + v + "'");
      int idx = 0;
      try {
        idx = std::stoi(v.substr(1));
      } catch (...) {
        throw ParseError(r.line_no, "malformed variable '" + v + "'");
      }
      if (idx < 1 || idx > n)
        throw ParseError(r.line_no, "variable out of range: " + v);
      c.scope.push_back(idx - 1);
    }
    constraints.push_back(std::move(c));
  }
  Instance inst(std::move(language), n, std::move(constraints));
  inst.set_language_path(std::move(language_path));
  return inst;
}

Instance parse_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open instance file '" + path + "'");
  // Peek the language path, then parse the body with the loaded language.
  std::string first;
  std::getline(in, first);
  std::vector<std::string> toks = tokenize(first);
  if (toks.size() != 2 || toks[0] != "language")
    throw ParseError(1, "expected 'language <path>' header");
  std::filesystem::path lang_path(toks[1]);
  if (lang_path.is_relative())
    lang_path = std::filesystem::path(path).parent_path() / lang_path;
  auto language = std::make_shared<Language>(parse_language_file(lang_path.string()));
  Instance inst = parse_instance(in, std::move(language), toks[1]);
  return inst;
}

void serialize_instance(const Instance& instance, std::ostream& out) {
  if (!instance.language_path().empty())
    out << "language " << instance.language_path() << "\n";
  out << "vars " << instance.num_vars() << "\n";
  for (const Constraint& c : instance.constraints()) {
    out << "constraint " << c.relation;
    for (int v : c.scope) out << " x" << (v + 1);
    out << "\n";
  }
}

std::string serialize_instance(const Instance& instance) {
  std::ostringstream oss;
  serialize_instance(instance, oss);
  return oss.str();
}

OperationFile parse_operations(std::istream& in) {
  LineReader r{in};
  std::vector<std::string> toks;
  if (!r.next(toks) || toks[0] != "domain" || toks.size() != 2)
    throw ParseError(r.line_no == 0 ? 1 : r.line_no, "expected 'domain <d>' header");
  OperationFile file;
  try {
    file.domain_size = std::stoi(toks[1]);
  } catch (...) {
    throw ParseError(r.line_no, "malformed domain size");
  }
  if (file.domain_size < 1) throw ParseError(r.line_no, "domain size must be >= 1");
  int d = file.domain_size;

  struct PendingFpol {
    int arity;
    std::vector<std::pair<Rational, std::string>> weights;
    int line;
  };
  std::vector<PendingFpol> pending;

  while (r.next(toks)) {
    if (toks[0] == "op") {
      if (toks.size() != 3) throw ParseError(r.line_no, "expected 'op <name> <arity>'");
      std::string name = toks[1];
      int arity = 0;
      try {
        arity = std::stoi(toks[2]);
      } catch (...) {
        throw ParseError(r.line_no, "malformed arity");
      }
      if (arity < 1) throw ParseError(r.line_no, "arity must be >= 1");
      std::size_t size = table_size(d, arity);
      std::vector<Label> table(size, -1);
      std::size_t seen = 0;
      while (seen < size) {
        if (!r.next(toks))
          throw ParseError(r.line_no, "operation '" + name + "' table is incomplete");
        if (toks.size() != static_cast<std::size_t>(arity) + 2 || toks[toks.size() - 2] != ":")
          throw ParseError(r.line_no, "expected '<args> : <result>' line");
        Tuple t(static_cast<std::size_t>(arity));
        for (int i = 0; i < arity; ++i) t[static_cast<std::size_t>(i)] = parse_label(toks[static_cast<std::size_t>(i)], d, r.line_no);
        Label res = parse_label(toks.back(), d, r.line_no);
        std::size_t idx = encode_tuple(t, d);
        if (table[idx] != -1) throw ParseError(r.line_no, "duplicate entry in op '" + name + "'");
        table[idx] = res;
        ++seen;
      }
      for (const Operation& existing : file.ops)
        if (existing.name() == name)
          throw ParseError(r.line_no, "duplicate op name '" + name + "'");
      file.ops.emplace_back(name, d, arity, std::move(table));
    } else if (toks[0] == "fpol") {
      if (toks.size() != 2) throw ParseError(r.line_no, "expected 'fpol <arity>'");
      PendingFpol p;
      p.line = r.line_no;
      try {
        p.arity = std::stoi(toks[1]);
      } catch (...) {
        throw ParseError(r.line_no, "malformed arity");
      }
      while (r.next(toks)) {
        if (toks[0] != "weight") {
          r.push_back(std::move(toks));
          break;
        }
        if (toks.size() != 4 || toks[2] != "op")
          throw ParseError(r.line_no, "expected 'weight <p/q> op <name>'");
        Rational w;
        try {
          w = parse_rational(toks[1]);
        } catch (const StructuralError& e) {
          throw ParseError(r.line_no, e.what());
        }
        p.weights.emplace_back(w, toks[3]);
      }
      if (p.weights.empty()) throw ParseError(p.line, "fpol block has no weight lines");
      pending.push_back(std::move(p));
    } else {
      throw ParseError(r.line_no, "expected 'op' or 'fpol' block");
    }
  }

  for (const PendingFpol& p : pending) {
    std::vector<std::pair<Operation, Rational>> weights;
    for (const auto& [w, name] : p.weights) {
      const Operation* found = nullptr;
      for (const Operation& op : file.ops)
        if (op.name() == name) found = &op;
      if (!found) throw ParseError(p.line, "fpol references unknown op '" + name + "'");
      if (found->arity() != p.arity)
        throw ParseError(p.line, "fpol arity does not match op '" + name + "'");
      weights.emplace_back(*found, w);
    }
    try {
      file.fpols.emplace_back(d, p.arity, std::move(weights));
    } catch (const StructuralError& e) {
      throw ParseError(p.line, e.what());
    }
  }
  return file;
}

OperationFile parse_operations_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open operation file '" + path + "'");
  return parse_operations(in);
}

void serialize_operation(const Operation& op, std::ostream& out) {
  out << "op " << op.name() << " " << op.arity() << "\n";
  for (std::size_t i = 0; i < op.table().size(); ++i) {
    Tuple t = decode_tuple(i, op.domain_size(), op.arity());
    for (std::size_t j = 0; j < t.size(); ++j) out << t[j] << " ";
    out << ": " << op.table()[i] << "\n";
  }
}

void serialize_fractional(const FractionalOperation& omega, std::ostream& out, bool with_ops) {
  out << "fpol " << omega.arity() << "\n";
  for (const auto& [op, w] : omega.weights())
    out << "weight " << rational_to_string(w) << " op " << op.name() << "\n";
  if (with_ops)
    for (const auto& [op, w] : omega.weights()) serialize_operation(op, out);
}

std::uint64_t fingerprint(const Language& lang) {
  std::string s = serialize_language(lang);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace vcsp
