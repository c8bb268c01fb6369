#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace difftaylor {

// Exit codes shared by the subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitMathDomain = 3;

// Expands the element described by a problem document and returns the
// series JSON. Throws ValidationError (or MissingSymbolError) on a bad
// document and MathDomainError when the morphism is undefined for the ring.
std::string expand_problem(const nlohmann::json& problem, std::optional<unsigned> trunc_override = {});

struct GoldenResult {
  std::string name;
  std::string expected;
  std::string actual;

  bool passed() const { return expected == actual; }
};

// Recomputes each built-in golden example and compares serialized output
// byte for byte.
std::vector<GoldenResult> run_selftest();

// Entry point of the command-line tool.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace difftaylor
