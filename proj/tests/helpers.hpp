#pragma once

#include <memory>
#include <vector>

#include "vcsp/model.hpp"
#include "vcsp/ops.hpp"

namespace vcsp::testing {

// phi_xor(x,y) = 1 if x = y, 0 otherwise (the Min-UnCut edge relation).
inline WeightedRelation make_xor(const std::string& name = "phi_xor") {
  return WeightedRelation(name, 2, 2,
                          {ExtRational(1), ExtRational(0), ExtRational(0), ExtRational(1)});
}

// phi_cut(x,y) = 0 if x = y, 1 otherwise (submodular).
inline WeightedRelation make_cut(const std::string& name = "phi_cut") {
  return WeightedRelation(name, 2, 2,
                          {ExtRational(0), ExtRational(1), ExtRational(1), ExtRational(0)});
}

// Crisp disequality over the Boolean domain.
inline WeightedRelation make_neq(const std::string& name = "neq") {
  return WeightedRelation(name, 2, 2,
                          {ExtRational::infinity(), ExtRational(0), ExtRational(0),
                           ExtRational::infinity()});
}

inline Operation bool_min() { return Operation("min", 2, 2, {0, 0, 0, 1}); }
inline Operation bool_max() { return Operation("max", 2, 2, {0, 1, 1, 1}); }
inline Operation bool_majority() {
  return Operation("maj", 2, 3, {0, 0, 0, 1, 0, 1, 1, 1});
}
inline Operation bool_minority() {
  return Operation("mnr", 2, 3, {0, 1, 1, 0, 1, 0, 0, 1});
}

inline std::shared_ptr<Language> lang_of(std::vector<WeightedRelation> rels) {
  auto lang = std::make_shared<Language>(rels.at(0).domain_size());
  for (WeightedRelation& r : rels) lang->add(std::move(r));
  return lang;
}

// Min-UnCut triangle: three phi_xor edges.
inline Instance triangle_xor() {
  auto lang = lang_of({make_xor()});
  std::vector<Constraint> cs = {{"phi_xor", {0, 1}}, {"phi_xor", {1, 2}}, {"phi_xor", {0, 2}}};
  return Instance(lang, 3, cs);
}

}  // namespace vcsp::testing
