#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "vcsp/model.hpp"
#include "vcsp/ops.hpp"

namespace vcsp {

// Language file:
//   domain <d>
//   relation <name> <arity>
//   default <val>
//   <l_1> ... <l_m> : <val>
// with val one of: integer, p/q, inf. Unlisted tuples take the block's
// default. Input domains must have size >= 2.
Language parse_language(std::istream& in);
Language parse_language_file(const std::string& path);
void serialize_language(const Language& lang, std::ostream& out);
std::string serialize_language(const Language& lang);

// Instance file:
//   language <path>
//   vars <n>
//   constraint <name> x<i_1> ... x<i_m>
// Variables are 1-based in files; repeated lines encode multiplicity.
// The language path is resolved relative to the instance file.
Instance parse_instance_file(const std::string& path);
Instance parse_instance(std::istream& in, std::shared_ptr<const Language> language,
                        std::string language_path = "");
void serialize_instance(const Instance& instance, std::ostream& out);
std::string serialize_instance(const Instance& instance);

// Operation file:
//   domain <d>
//   op <name> <arity>
//   <args> : <result>       (all d^k entries required)
// optionally followed by / interleaved with fractional operations:
//   fpol <arity>
//   weight <p/q> op <name>
struct OperationFile {
  int domain_size = 0;
  std::vector<Operation> ops;
  std::vector<FractionalOperation> fpols;
};
OperationFile parse_operations(std::istream& in);
OperationFile parse_operations_file(const std::string& path);
void serialize_operation(const Operation& op, std::ostream& out);
void serialize_fractional(const FractionalOperation& omega, std::ostream& out,
                          bool with_ops = true);

// FNV-1a over the canonical serialization.
std::uint64_t fingerprint(const Language& lang);

}  // namespace vcsp
