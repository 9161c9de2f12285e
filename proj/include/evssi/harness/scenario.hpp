// Copyright 2026 The evssi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "evssi/harness/world.hpp"

namespace evssi::harness {

// A scenario is a small line-oriented script: directives configure the
// world, `actor` lines populate it, `step` lines drive the protocol and
// `assert` lines check properties of the resulting trace. The grammar is
// documented in the README next to the shipped .scn files.
//
// Malformed lines and references to actors that were never declared are
// script errors (the CLI exits 2); a failed assertion is a result, not an
// error (the CLI exits 1).

class ScriptError : public std::runtime_error {
 public:
  ScriptError(size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  size_t line() const { return line_; }

 private:
  size_t line_;
};

struct ScriptLine {
  size_t number = 0;                // 1-based source line
  std::string text;                 // the trimmed source text
  std::vector<std::string> tokens;  // whitespace-split fields
};

struct Script {
  std::vector<ScriptLine> lines;
};

// Parses and shape-checks the script: every line must be a known clause
// with well-formed fields. Cross-references (does that EV exist?) are
// checked when the script runs.
Script parse_script(const std::string& text);

struct AssertionResult {
  size_t line = 0;
  std::string clause;  // the assert as written
  bool pass = false;
  std::string detail;  // what was measured, and against what
};

struct ScenarioOutcome {
  std::unique_ptr<World> world;  // final state, for trace/ledger export
  std::vector<AssertionResult> assertions;

  bool passed() const {
    for (const AssertionResult& a : assertions) {
      if (!a.pass) return false;
    }
    return true;
  }
};

ScenarioOutcome run_script(const Script& script);

// Convenience: parse + run in one call.
ScenarioOutcome run_scenario(const std::string& text);
ScenarioOutcome run_scenario_file(const std::string& path);

}  // namespace evssi::harness
