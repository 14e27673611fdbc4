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


#include "purelab/dsl.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>

#include "purelab/serialize.hpp"
#include "purelab/standard.hpp"

namespace purelab::dsl {

DslError::DslError(const std::string &category, const std::string &message, SourcePos where)
    : Error(category + " at " + std::to_string(where.line) + ":" + std::to_string(where.col) + ": " + message),
      pos(where),
      detail(message) {}

namespace {

// -- lexer ----------------------------------------------------------------------------

enum class Tok { Ident, Number, String, Colon, Equals, Arrow, Star, Dot, LParen, RParen, Comma, Semi, End };

const char *tok_name(Tok t) {
    switch (t) {
        case Tok::Ident:
            return "identifier";
        case Tok::Number:
            return "number";
        case Tok::String:
            return "string";
        case Tok::Colon:
            return "':'";
        case Tok::Equals:
            return "'='";
        case Tok::Arrow:
            return "'->'";
        case Tok::Star:
            return "'*'";
        case Tok::Dot:
            return "'.'";
        case Tok::LParen:
            return "'('";
        case Tok::RParen:
            return "')'";
        case Tok::Comma:
            return "','";
        case Tok::Semi:
            return "';'";
        case Tok::End:
            return "end of input";
    }
    return "token";
}

struct Token {
    Tok kind;
    std::string text;
    double number = 0.0;
    SourcePos pos;
};

std::vector<Token> lex(const std::string &src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        const SourcePos here{line, col};
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            out.push_back({Tok::Ident, src.substr(i, j - i), 0.0, here});
            advance(j - i);
            continue;
        }
        const bool starts_number = std::isdigit(static_cast<unsigned char>(c)) ||
                                   ((c == '-' || c == '+' || c == '.') && i + 1 < src.size() &&
                                    (std::isdigit(static_cast<unsigned char>(src[i + 1])) || src[i + 1] == '.'));
        if (starts_number && !(c == '.' && !out.empty() && out.back().kind == Tok::Ident)) {
            double value = 0.0;
            const char *begin = src.data() + i + (c == '+' ? 1 : 0);
            auto [ptr, ec] = std::from_chars(begin, src.data() + src.size(), value);
            if (ec != std::errc()) throw LexError("malformed number", here);
            const size_t len = static_cast<size_t>(ptr - (src.data() + i));
            out.push_back({Tok::Number, src.substr(i, len), value, here});
            advance(len);
            continue;
        }
        if (c == '"') {
            std::string text;
            advance(1);
            bool closed = false;
            while (i < src.size()) {
                if (src[i] == '"') {
                    closed = true;
                    advance(1);
                    break;
                }
                if (src[i] == '\n') break;
                if (src[i] == '\\') {
                    if (i + 1 >= src.size() || (src[i + 1] != '"' && src[i + 1] != '\\')) {
                        throw LexError("unknown escape sequence", {line, col});
                    }
                    advance(1);
                }
                text.push_back(src[i]);
                advance(1);
            }
            if (!closed) throw LexError("unterminated string", here);
            out.push_back({Tok::String, text, 0.0, here});
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
            out.push_back({Tok::Arrow, "->", 0.0, here});
            advance(2);
            continue;
        }
        Tok kind;
        switch (c) {
            case ':':
                kind = Tok::Colon;
                break;
            case '=':
                kind = Tok::Equals;
                break;
            case '*':
                kind = Tok::Star;
                break;
            case '.':
                kind = Tok::Dot;
                break;
            case '(':
                kind = Tok::LParen;
                break;
            case ')':
                kind = Tok::RParen;
                break;
            case ',':
                kind = Tok::Comma;
                break;
            case ';':
                kind = Tok::Semi;
                break;
            default:
                throw LexError(std::string("unexpected character '") + c + "'", here);
        }
        out.push_back({kind, std::string(1, c), 0.0, here});
        advance(1);
    }
    out.push_back({Tok::End, "", 0.0, {line, col}});
    return out;
}

// -- parser ---------------------------------------------------------------------------

const std::set<std::string> kKeywords = {"prep", "box", "eff", "run", "file", "kraus"};

class Parser {
   public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Script script() {
        Script s;
        while (peek().kind != Tok::End) {
            if (peek().kind == Tok::Semi) {
                next();
                continue;
            }
            s.statements.push_back(statement());
        }
        if (s.statements.empty()) throw SyntaxError("empty script", peek().pos);
        return s;
    }

   private:
    const Token &peek() const { return toks_[at_]; }
    const Token &next() { return toks_[at_++]; }

    const Token &expect(Tok kind, const char *context) {
        if (peek().kind != kind) {
            throw SyntaxError(std::string("expected ") + tok_name(kind) + " " + context + ", found " + describe(peek()),
                              peek().pos);
        }
        return next();
    }

    static std::string describe(const Token &t) {
        if (t.kind == Tok::End) return "end of input";
        return "'" + t.text + "'";
    }

    std::string name(const char *context) {
        const Token &t = expect(Tok::Ident, context);
        if (kKeywords.count(t.text)) throw SyntaxError("'" + t.text + "' is a reserved word", t.pos);
        return t.text;
    }

    Statement statement() {
        const Token &kw = peek();
        if (kw.kind != Tok::Ident) throw SyntaxError("expected a declaration or 'run', found " + describe(kw), kw.pos);
        if (kw.text == "run") return run();
        if (kw.text == "prep" || kw.text == "box" || kw.text == "eff") return decl();
        throw SyntaxError("expected 'prep', 'box', 'eff' or 'run', found '" + kw.text + "'", kw.pos);
    }

    SysExpr sys() {
        SysExpr s;
        s.pos = peek().pos;
        s.parts.push_back(name("in a system type"));
        while (peek().kind == Tok::Star) {
            next();
            s.parts.push_back(name("after '*' in a system type"));
        }
        return s;
    }

    Decl decl() {
        Decl d;
        const Token &kw = next();
        d.pos = kw.pos;
        d.kind = kw.text == "prep" ? BoxKind::Prep : kw.text == "eff" ? BoxKind::Effect : BoxKind::Map;
        d.name = name("after the declaration keyword");
        expect(Tok::Colon, "after the declared name");
        d.first = sys();
        if (peek().kind == Tok::Arrow) {
            next();
            d.second = sys();
        }
        if (peek().kind == Tok::Equals) {
            next();
            d.source = source();
        }
        return d;
    }

    SourceSpec source() {
        SourceSpec s;
        const Token &t = expect(Tok::Ident, "as a payload source");
        s.pos = t.pos;
        if (t.text == "file" || t.text == "kraus") {
            s.kind = t.text == "file" ? SourceSpec::Kind::File : SourceSpec::Kind::Kraus;
            expect(Tok::LParen, "after the source kind");
            s.value = expect(Tok::String, "as the payload path").text;
            expect(Tok::RParen, "after the payload path");
            return s;
        }
        if (kKeywords.count(t.text)) throw SyntaxError("'" + t.text + "' is a reserved word", t.pos);
        s.kind = SourceSpec::Kind::Builtin;
        s.value = t.text;
        if (peek().kind == Tok::LParen) {
            next();
            if (peek().kind != Tok::RParen) {
                s.args.push_back(expect(Tok::Number, "as a builtin argument").number);
                while (peek().kind == Tok::Comma) {
                    next();
                    s.args.push_back(expect(Tok::Number, "as a builtin argument").number);
                }
            }
            expect(Tok::RParen, "to close the argument list");
        }
        return s;
    }

    Run run() {
        Run r;
        r.pos = next().pos;
        r.name = name("after 'run'");
        expect(Tok::Equals, "after the run name");
        r.stages.push_back(stage());
        while (peek().kind == Tok::Dot) {
            next();
            r.stages.push_back(stage());
        }
        return r;
    }

    std::vector<Term> stage() {
        std::vector<Term> terms;
        auto term = [&]() {
            const SourcePos p = peek().pos;
            terms.push_back({name("in a pipeline"), p});
        };
        term();
        while (peek().kind == Tok::Star) {
            next();
            term();
        }
        return terms;
    }

    std::vector<Token> toks_;
    size_t at_ = 0;
};

// -- printer --------------------------------------------------------------------------

std::string number_text(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string quote(const std::string &s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out + "\"";
}

std::string sys_text(const SysExpr &s) {
    std::string out;
    for (size_t i = 0; i < s.parts.size(); ++i) out += (i ? " * " : "") + s.parts[i];
    return out;
}

// -- builtins -------------------------------------------------------------------------

struct BuiltinContext {
    const TheoryModel &model;
    BoxKind kind;
    SystemLabel in;
    SystemLabel out;
    const std::vector<double> &args;
    SourcePos pos;
    std::string name;
};

using Builtin = std::function<LinearMap(const BuiltinContext &)>;

void want_args(const BuiltinContext &c, size_t n) {
    if (c.args.size() != n) {
        throw TypeError("builtin '" + c.name + "' takes " + std::to_string(n) + " argument(s), got " +
                            std::to_string(c.args.size()),
                        c.pos);
    }
}

void want_kind(const BuiltinContext &c, BoxKind kind) {
    if (c.kind != kind) {
        throw TypeError("builtin '" + c.name + "' cannot be used in a '" + to_string(c.kind) + "' declaration", c.pos);
    }
}

int index_arg(const BuiltinContext &c, double v) {
    if (v < 0 || std::floor(v) != v) throw TypeError("builtin '" + c.name + "' expects a non-negative integer", c.pos);
    return static_cast<int>(v);
}

void want_endo(const BuiltinContext &c) {
    if (c.in != c.out) throw TypeError("builtin '" + c.name + "' needs matching input and output types", c.pos);
}

const HilbertModel &want_hilbert(const BuiltinContext &c) {
    const auto *h = dynamic_cast<const HilbertModel *>(&c.model);
    if (!h) throw TypeError("builtin '" + c.name + "' is not available in the " + to_string(c.model.id()) + " model", c.pos);
    return *h;
}

CVec plus_minus(const BuiltinContext &c, double sign) {
    if (c.kind == BoxKind::Prep ? c.out.hilbert_dim() != 2 : c.in.hilbert_dim() != 2) {
        throw TypeError("builtin '" + c.name + "' needs a two-level system", c.pos);
    }
    CVec v(2);
    v << 1.0, sign;
    return v / std::sqrt(2.0);
}

LinearMap state_or_effect(const BuiltinContext &c, const StateVec &v) {
    if (c.kind == BoxKind::Prep) return c.model.prepare(v);
    return c.model.observe({v.system, v.coords});
}

SystemLabel object_system(const BuiltinContext &c) { return c.kind == BoxKind::Prep ? c.out : c.in; }

const std::map<std::string, Builtin> &builtins() {
    static const std::map<std::string, Builtin> table = [] {
        std::map<std::string, Builtin> t;
        auto basis = [](int k) {
            return [k](const BuiltinContext &c) {
                if (c.kind == BoxKind::Map) want_kind(c, BoxKind::Prep);
                want_args(c, 0);
                return state_or_effect(c, standard::basis_state(c.model, object_system(c), k));
            };
        };
        t["zero"] = basis(0);
        t["one"] = basis(1);
        t["basis"] = [](const BuiltinContext &c) {
            if (c.kind == BoxKind::Map) want_kind(c, BoxKind::Prep);
            want_args(c, 1);
            const int k = index_arg(c, c.args[0]);
            if (k >= object_system(c).hilbert_dim()) throw TypeError("basis index out of range", c.pos);
            return state_or_effect(c, standard::basis_state(c.model, object_system(c), k));
        };
        auto pm = [](double sign) {
            return [sign](const BuiltinContext &c) {
                if (c.kind == BoxKind::Map) want_kind(c, BoxKind::Prep);
                want_args(c, 0);
                const auto &h = want_hilbert(c);
                return state_or_effect(c, h.pure_state(object_system(c), plus_minus(c, sign)));
            };
        };
        t["plus"] = pm(1.0);
        t["minus"] = pm(-1.0);
        t["mixed"] = [](const BuiltinContext &c) {
            want_kind(c, BoxKind::Prep);
            want_args(c, 0);
            return c.model.prepare({c.out, c.model.invariant_state(c.out)});
        };
        t["unit"] = [](const BuiltinContext &c) {
            want_kind(c, BoxKind::Effect);
            want_args(c, 0);
            return c.model.discard(c.in);
        };
        t["bell"] = [](const BuiltinContext &c) {
            if (c.kind == BoxKind::Map) want_kind(c, BoxKind::Prep);
            want_args(c, 0);
            const SystemLabel s = object_system(c);
            if (s.factors.size() != 2 || s.factors[0] != s.factors[1]) {
                throw TypeError("builtin 'bell' needs a pair of equal systems", c.pos);
            }
            if (c.kind == BoxKind::Prep) return c.model.prepare(standard::max_correlated_state(c.model, s));
            return c.model.observe(standard::max_correlated_effect(c.model, s));
        };
        t["random"] = [](const BuiltinContext &c) {
            want_args(c, 1);
            Rng rng(static_cast<uint64_t>(index_arg(c, c.args[0])));
            if (c.kind == BoxKind::Prep) return c.model.prepare({c.out, c.model.random_pure_state(c.out, rng)});
            if (c.kind == BoxKind::Map) {
                LinearMap m = c.model.random_channel(c.in, c.out, rng);
                return m;
            }
            want_kind(c, BoxKind::Prep);
            return LinearMap{};
        };
        t["random_mixed"] = [](const BuiltinContext &c) {
            want_kind(c, BoxKind::Prep);
            want_args(c, 1);
            Rng rng(static_cast<uint64_t>(index_arg(c, c.args[0])));
            return c.model.prepare({c.out, c.model.random_state(c.out, rng)});
        };
        t["random_unitary"] = [](const BuiltinContext &c) {
            want_kind(c, BoxKind::Map);
            want_args(c, 1);
            want_endo(c);
            Rng rng(static_cast<uint64_t>(index_arg(c, c.args[0])));
            return c.model.random_reversible(c.in, rng);
        };
        t["id"] = [](const BuiltinContext &c) {
            want_kind(c, BoxKind::Map);
            want_args(c, 0);
            want_endo(c);
            return c.model.identity(c.in);
        };
        auto gate = [](std::function<CMat()> make, int qubits) {
            return [make, qubits](const BuiltinContext &c) {
                want_kind(c, BoxKind::Map);
                want_args(c, 0);
                want_endo(c);
                if (c.in.hilbert_dim() != (1 << qubits)) {
                    throw TypeError("builtin '" + c.name + "' acts on " + std::to_string(qubits) + " qubit(s)", c.pos);
                }
                if (c.model.id() == TheoryId::Classical && c.name == "X") {
                    return standard::bit_flip(c.model, c.in, 1.0);
                }
                const auto &h = want_hilbert(c);
                CMat u = make();
                if (h.is_real() && u.imag().cwiseAbs().maxCoeff() > 0.0) {
                    throw TypeError("builtin '" + c.name + "' is not a real operator", c.pos);
                }
                return standard::unitary_channel(c.model, c.in, u);
            };
        };
        t["X"] = gate([] { return standard::pauli('X'); }, 1);
        t["Y"] = gate([] { return standard::pauli('Y'); }, 1);
        t["Z"] = gate([] { return standard::pauli('Z'); }, 1);
        t["H"] = gate([] { return standard::hadamard(); }, 1);
        t["cnot"] = gate([] { return standard::cnot(); }, 2);
        auto noisy = [](std::function<LinearMap(const TheoryModel &, const SystemLabel &, double)> make) {
            return [make](const BuiltinContext &c) {
                want_kind(c, BoxKind::Map);
                want_args(c, 1);
                want_endo(c);
                try {
                    return make(c.model, c.in, c.args[0]);
                } catch (const Error &e) {
                    throw TypeError("builtin '" + c.name + "': " + e.what(), c.pos);
                }
            };
        };
        t["bitflip"] = noisy(standard::bit_flip);
        t["phaseflip"] = noisy(standard::phase_flip);
        t["depolarize"] = noisy(standard::depolarizing);
        t["amp_damp"] = noisy(standard::amplitude_damping);
        t["dephase"] = [](const BuiltinContext &c) {
            want_kind(c, BoxKind::Map);
            want_args(c, 0);
            want_endo(c);
            return standard::dephasing(c.model, c.in);
        };
        t["swap"] = [](const BuiltinContext &c) {
            want_kind(c, BoxKind::Map);
            want_args(c, 0);
            if (c.in.factors.size() != 2) throw TypeError("builtin 'swap' needs a pair of systems", c.pos);
            return standard::swap(c.model, c.model.system({c.in.factors[0]}), c.model.system({c.in.factors[1]}));
        };
        return t;
    }();
    return table;
}

}  // namespace

std::vector<std::string> builtin_names() {
    std::vector<std::string> out;
    for (const auto &[name, fn] : builtins()) out.push_back(name);
    return out;
}

Script parse_script(const std::string &text) { return Parser(lex(text)).script(); }

std::string print_script(const Script &script) {
    std::ostringstream out;
    for (const auto &st : script.statements) {
        if (const auto *d = std::get_if<Decl>(&st)) {
            out << (d->kind == BoxKind::Prep ? "prep" : d->kind == BoxKind::Effect ? "eff" : "box") << " " << d->name
                << " : " << sys_text(d->first);
            if (d->second) out << " -> " << sys_text(*d->second);
            if (d->source) {
                out << " = ";
                const auto &s = *d->source;
                switch (s.kind) {
                    case SourceSpec::Kind::File:
                        out << "file(" << quote(s.value) << ")";
                        break;
                    case SourceSpec::Kind::Kraus:
                        out << "kraus(" << quote(s.value) << ")";
                        break;
                    case SourceSpec::Kind::Builtin:
                        out << s.value;
                        if (!s.args.empty()) {
                            out << "(";
                            for (size_t i = 0; i < s.args.size(); ++i) out << (i ? ", " : "") << number_text(s.args[i]);
                            out << ")";
                        }
                        break;
                }
            }
        } else {
            const auto &r = std::get<Run>(st);
            out << "run " << r.name << " =";
            for (size_t k = 0; k < r.stages.size(); ++k) {
                out << (k ? " . " : " ");
                for (size_t i = 0; i < r.stages[k].size(); ++i) out << (i ? " * " : "") << r.stages[k][i].name;
            }
        }
        out << "\n";
    }
    return out.str();
}

const Circuit &Program::run(const std::string &name) const {
    auto it = runs.find(name);
    if (it == runs.end()) throw ContractViolation("no run named '" + name + "'");
    return it->second;
}

namespace {

SystemLabel resolve(const SysExpr &s, const Environment &env) {
    SystemLabel out = env.model->trivial();
    for (const auto &p : s.parts) {
        auto it = env.systems.find(p);
        out = env.model->compose(out, it != env.systems.end() ? it->second : env.model->atom());
    }
    return out;
}

LinearMap load_source(const Decl &d, const SystemLabel &in, const SystemLabel &out, const Environment &env) {
    if (!d.source) {
        auto it = env.payloads.find(d.name);
        if (it == env.payloads.end()) throw TypeError("no payload supplied for '" + d.name + "'", d.pos);
        return it->second;
    }
    const SourceSpec &s = *d.source;
    if (s.kind == SourceSpec::Kind::Builtin) {
        auto it = builtins().find(s.value);
        if (it == builtins().end()) throw TypeError("unknown builtin '" + s.value + "'", s.pos);
        return it->second(BuiltinContext{*env.model, d.kind, in, out, s.args, s.pos, s.value});
    }
    std::filesystem::path path(s.value);
    if (path.is_relative()) path = std::filesystem::path(env.base_dir) / path;
    Payload p = load_payload_file(path.string());
    if (s.kind == SourceSpec::Kind::Kraus && p.kind != PayloadKind::Kraus) {
        throw TypeError("kraus(...) source '" + s.value + "' holds a " + to_string(p.kind) + " payload", s.pos);
    }
    try {
        return payload_to_map(p, *env.model);
    } catch (const ContractViolation &e) {
        throw TypeError(e.what(), s.pos);
    }
}

}  // namespace

Program build_program(const Script &script, const Environment &env) {
    if (!env.model) throw ContractViolation("build_program: no model");
    Program prog;
    prog.model = env.model;
    for (const auto &st : script.statements) {
        if (const auto *d = std::get_if<Decl>(&st)) {
            if (prog.boxes.count(d->name)) throw TypeError("'" + d->name + "' is declared twice", d->pos);
            SystemLabel in = env.model->trivial();
            SystemLabel out = env.model->trivial();
            switch (d->kind) {
                case BoxKind::Prep:
                    if (d->second) throw TypeError("a preparation has a single output type", d->second->pos);
                    out = resolve(d->first, env);
                    break;
                case BoxKind::Effect:
                    if (d->second) throw TypeError("an effect has a single input type", d->second->pos);
                    in = resolve(d->first, env);
                    break;
                case BoxKind::Map:
                    in = resolve(d->first, env);
                    out = d->second ? resolve(*d->second, env) : in;
                    break;
            }
            LinearMap m = load_source(*d, in, out, env);
            if (m.input != in || m.output != out) {
                throw TypeError("'" + d->name + "' is declared " + in.describe() + " -> " + out.describe() +
                                    " but its payload is " + m.input.describe() + " -> " + m.output.describe(),
                                d->pos);
            }
            prog.boxes.emplace(d->name, std::move(m));
            continue;
        }
        const auto &r = std::get<Run>(st);
        if (prog.runs.count(r.name)) throw TypeError("run '" + r.name + "' is defined twice", r.pos);
        std::optional<Circuit> acc;
        for (const auto &stage : r.stages) {
            std::optional<Circuit> layer;
            for (const auto &t : stage) {
                auto it = prog.boxes.find(t.name);
                if (it == prog.boxes.end()) throw TypeError("'" + t.name + "' is not declared", t.pos);
                Circuit c = Circuit::single(env.model, t.name, it->second);
                layer = layer ? compose_par(*layer, c) : c;
            }
            if (!acc) {
                acc = std::move(layer);
                continue;
            }
            try {
                acc = compose_seq(*acc, *layer);
            } catch (const WiringError &e) {
                throw TypeError(std::string("stage does not fit: ") + acc->output_type().describe() + " feeds " +
                                    layer->input_type().describe(),
                                stage.front().pos);
            }
        }
        prog.run_names.push_back(r.name);
        prog.runs.emplace(r.name, std::move(*acc));
    }
    return prog;
}

}  // namespace purelab::dsl
