// Copyright 2026 The purelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// A small scripting language for circuits:
//
//   prep psi : A = plus            # preparation of system A
//   prep phi : B * C = bell
//   eff  bell : A * B = bell
//   box  flip : C -> C = bitflip(0.25)
//   run  tele = psi * phi . bell * flip
//
// Declarations bind a name to a payload: a builtin (optionally with numeric
// arguments), file("payload.json") or kraus("kraus.json"). The source may be
// omitted when the caller supplies the payload. A run composes declared boxes:
// '*' puts boxes side by side, '.' feeds one stage into the next. System names
// are nominal; they resolve to caller-supplied labels or the model's atom.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "purelab/circuit.hpp"
#include "purelab/errors.hpp"

namespace purelab::dsl {

/// Source location (1-based). Locations are not part of AST identity.
struct SourcePos {
    int line = 0;
    int col = 0;
    friend bool operator==(const SourcePos &, const SourcePos &) { return true; }
};

class DslError : public Error {
   public:
    DslError(const std::string &category, const std::string &message, SourcePos pos);
    SourcePos pos;
    std::string detail;
};

class LexError : public DslError {
   public:
    LexError(const std::string &message, SourcePos pos) : DslError("lexical error", message, pos) {}
};

class SyntaxError : public DslError {
   public:
    SyntaxError(const std::string &message, SourcePos pos) : DslError("syntax error", message, pos) {}
};

class TypeError : public DslError {
   public:
    TypeError(const std::string &message, SourcePos pos) : DslError("type error", message, pos) {}
};

struct SysExpr {
    std::vector<std::string> parts;
    SourcePos pos;
    friend bool operator==(const SysExpr &, const SysExpr &) = default;
};

struct SourceSpec {
    enum class Kind { File, Kraus, Builtin };
    Kind kind = Kind::Builtin;
    std::string value;  ///< path or builtin name
    std::vector<double> args;
    SourcePos pos;
    friend bool operator==(const SourceSpec &, const SourceSpec &) = default;
};

struct Decl {
    BoxKind kind = BoxKind::Map;
    std::string name;
    SysExpr first;                  ///< the system, or the input of an arrow type
    std::optional<SysExpr> second;  ///< output of an arrow type
    std::optional<SourceSpec> source;
    SourcePos pos;
    friend bool operator==(const Decl &, const Decl &) = default;
};

struct Term {
    std::string name;
    SourcePos pos;
    friend bool operator==(const Term &, const Term &) = default;
};

struct Run {
    std::string name;
    std::vector<std::vector<Term>> stages;  ///< parallel terms per stage
    SourcePos pos;
    friend bool operator==(const Run &, const Run &) = default;
};

using Statement = std::variant<Decl, Run>;

struct Script {
    std::vector<Statement> statements;
    friend bool operator==(const Script &, const Script &) = default;
};

Script parse_script(const std::string &text);
/// Canonical text: one statement per line, single spaces around operators.
std::string print_script(const Script &script);

struct Environment {
    ModelPtr model;
    std::map<std::string, SystemLabel> systems;   ///< nominal system -> label
    std::map<std::string, LinearMap> payloads;    ///< declarations without a source
    std::string base_dir = ".";                   ///< for file(...) and kraus(...)
};

struct Program {
    ModelPtr model;
    std::map<std::string, LinearMap> boxes;
    std::vector<std::string> run_names;
    std::map<std::string, Circuit> runs;

    const Circuit &run(const std::string &name) const;
};

/// Resolves declarations and type-checks every run.
Program build_program(const Script &script, const Environment &env);

/// Names accepted as builtin sources.
std::vector<std::string> builtin_names();

}  // namespace purelab::dsl
