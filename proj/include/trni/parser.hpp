#pragma once

#include "trni/policy.hpp"
#include "trni/syntax.hpp"
#include "trni/typecheck.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace trni {

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceLoc loc, const std::string& message);
  SourceLoc loc;
};

struct ParsedProgram {
  TermPtr term;
  std::map<Path, SourceLoc> locations;  // subterm path -> where it starts

  /// Location of the deepest recorded prefix of `path`.
  SourceLoc locate(const Path& path) const;
};

ParsedProgram parse_program_with_locations(const std::string& text);
TermPtr parse_program(const std::string& text);
TypePtr parse_type(const std::string& text);

/// Parses policy text. Structural problems throw ParseError; lattice problems
/// throw PolicyError; everything else is left to validate_policy.
Policy parse_policy(const std::string& text);

}  // namespace trni
