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


#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "purelab/axioms.hpp"
#include "purelab/choi.hpp"
#include "purelab/dilation.hpp"
#include "purelab/dsl.hpp"
#include "purelab/error_correction.hpp"
#include "purelab/errors.hpp"
#include "purelab/metrology.hpp"
#include "purelab/protocols.hpp"
#include "purelab/serialize.hpp"
#include "purelab/standard.hpp"

namespace purelab::cli {
namespace {

using json = nlohmann::ordered_json;

/// Bad input discovered after parsing (missing file, wrong theory for a command).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -- logging ---------------------------------------------------------------------------

enum class Level { Error = 0, Info = 1, Debug = 2 };

Level log_level() {
    const char *v = std::getenv("PURELAB_LOG");
    if (v == nullptr) return Level::Error;
    const std::string s(v);
    if (s == "debug") return Level::Debug;
    if (s == "info") return Level::Info;
    return Level::Error;
}

class Log {
   public:
    explicit Log(std::ostream &err) : err_(err), level_(log_level()) {}
    void info(const std::string &msg) const { emit(Level::Info, "info", msg); }
    void debug(const std::string &msg) const { emit(Level::Debug, "debug", msg); }
    void error(const std::string &msg) const { emit(Level::Error, "error", msg); }

   private:
    void emit(Level l, const char *tag, const std::string &msg) const {
        if (static_cast<int>(l) <= static_cast<int>(level_)) err_ << "[" << tag << "] " << msg << "\n";
    }
    std::ostream &err_;
    Level level_;
};

// -- helpers ---------------------------------------------------------------------------

json to_json(const RVec &v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

json to_json(const RMat &m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(RVec(m.row(i).transpose())));
    return rows;
}

json to_json(const SystemLabel &s) { return json{{"theory", to_string(s.theory)}, {"dims", s.factors}}; }

ModelPtr model_for(const RunConfig &cfg) {
    if (cfg.theory == "all") throw UsageError("--theory all is only accepted by 'axioms'");
    return make_model(theory_from_string(cfg.theory), cfg.dims.at(0));
}

// Resolves a builtin name such as "plus" or "depolarize(0.1)" through the circuit language.
LinearMap builtin(const ModelPtr &m, const std::string &decl, const std::string &name) {
    dsl::Environment env{m, {}, {}, "."};
    const dsl::Program p = dsl::build_program(dsl::parse_script(decl + " x : A = " + name), env);
    return p.boxes.at("x");
}

StateVec builtin_state(const ModelPtr &m, const std::string &name) {
    const LinearMap prep = builtin(m, "prep", name);
    return {prep.output, prep.matrix.col(0)};
}

double worst(const std::vector<double> &v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); }

// Every member of `expected` must be present in `actual`; numbers compare within tol.
void subset_match(const json &expected, const json &actual, const std::string &path, double tol,
                  std::vector<std::string> &mismatches) {
    if (expected.is_object()) {
        if (!actual.is_object()) {
            mismatches.push_back(path + ": expected an object");
            return;
        }
        for (const auto &[k, v] : expected.items()) {
            if (!actual.contains(k)) {
                mismatches.push_back(path + "/" + k + ": missing");
                continue;
            }
            subset_match(v, actual.at(k), path + "/" + k, tol, mismatches);
        }
    } else if (expected.is_array()) {
        if (!actual.is_array() || actual.size() != expected.size()) {
            mismatches.push_back(path + ": array size differs");
            return;
        }
        for (size_t i = 0; i < expected.size(); ++i) {
            subset_match(expected[i], actual[i], path + "/" + std::to_string(i), tol, mismatches);
        }
    } else if (expected.is_number() && actual.is_number()) {
        const double e = expected.get<double>();
        const double a = actual.get<double>();
        if (std::abs(e - a) > tol * std::max(1.0, std::abs(e))) {
            mismatches.push_back(path + ": expected " + expected.dump() + ", got " + actual.dump());
        }
    } else if (expected != actual) {
        mismatches.push_back(path + ": expected " + expected.dump() + ", got " + actual.dump());
    }
}

void flatten(const json &j, const std::string &prefix, std::vector<std::pair<std::string, std::string>> &rows) {
    if (j.is_object()) {
        for (const auto &[k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, rows);
    } else if (j.is_array() && !j.empty() && (j[0].is_object() || j[0].is_array())) {
        for (size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", rows);
    } else {
        rows.emplace_back(prefix, j.dump());
    }
}

std::string markdown(const json &j) {
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(j, "", rows);
    std::ostringstream os;
    os << "| key | value |\n|---|---|\n";
    for (const auto &[k, v] : rows) os << "| " << k << " | " << v << " |\n";
    return os.str();
}

/// Result of one subcommand: the report, whether its internal checks passed, and
/// an optional Markdown rendering.
struct Outcome {
    json report;
    bool ok = true;
    std::string md;
};

// -- subcommands -----------------------------------------------------------------------

const std::map<std::string, std::map<std::string, std::string>> &expected_verdicts() {
    static const std::map<std::string, std::map<std::string, std::string>> v = {
        {"quantum",
         {{"causality", "holds"},
          {"local_discriminability", "holds"},
          {"max_distinguishable", "holds"},
          {"no_cloning", "holds"},
          {"no_info_without_disturbance", "holds"},
          {"purification", "holds"}}},
        {"classical",
         {{"causality", "holds"},
          {"local_discriminability", "holds"},
          {"max_distinguishable", "fails"},
          {"no_cloning", "cloneable"},
          {"no_info_without_disturbance", "holds"},
          {"purification", "fails"}}},
        {"real-quantum",
         {{"causality", "holds"},
          {"local_discriminability", "fails"},
          {"max_distinguishable", "holds"},
          {"no_cloning", "holds"},
          {"no_info_without_disturbance", "holds"},
          {"purification", "holds"}}},
    };
    return v;
}

Outcome cmd_axioms(const RunConfig &cfg, const Log &log) {
    std::vector<TheoryId> theories;
    if (cfg.theory == "all") {
        theories = {TheoryId::Quantum, TheoryId::Classical, TheoryId::RealQuantum};
    } else {
        theories = {theory_from_string(cfg.theory)};
    }
    log.info("running the axiom battery on " + std::to_string(theories.size()) + " theory model(s)");
    const auto reports = run_battery(theories, cfg.dims, cfg.seed, cfg.samples);
    Outcome o;
    o.report = json::parse(report_json(reports));
    json verdicts = json::object();
    json witnesses = json::object();
    json expect = json::object();
    for (const auto &rep : reports) {
        const std::string name = to_string(rep.theory);
        for (const auto &c : rep.checks) verdicts[name][c.id] = c.label;
        const auto &ld = rep.check("local_discriminability");
        witnesses[name] = {{"d_ab", static_cast<int>(ld.numbers.at("d_ab"))},
                           {"product", static_cast<int>(ld.numbers.at("product"))}};
        for (const auto &[id, label] : expected_verdicts().at(name)) expect["verdicts"][name][id] = label;
    }
    o.report["verdicts"] = verdicts;
    o.report["witnesses"] = witnesses;
    o.md = report_markdown(reports);
    // without --expect the known verdict matrix is the expectation
    if (cfg.expect.empty()) {
        std::vector<std::string> miss;
        subset_match(expect, o.report, "", 0.0, miss);
        o.ok = miss.empty();
        for (const auto &m : miss) log.error("unexpected verdict " + m);
    }
    return o;
}

Outcome cmd_eval(const RunConfig &cfg, const Log &log) {
    std::ifstream in(cfg.script);
    if (!in) throw UsageError("cannot read file '" + cfg.script + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    // a "# theory <name>" header selects the model unless --theory was given
    RunConfig local = cfg;
    if (!cfg.theory_explicit) {
        std::istringstream header(text);
        for (std::string line; std::getline(header, line);) {
            std::istringstream ls(line);
            std::string hash, word, name;
            if (ls >> hash >> word >> name && hash == "#" && word == "theory") {
                local.theory = name;
                break;
            }
        }
    }
    const ModelPtr m = model_for(local);
    dsl::Environment env{m, {}, {}, std::filesystem::path(cfg.script).parent_path().string()};
    if (env.base_dir.empty()) env.base_dir = ".";
    const dsl::Program p = dsl::build_program(dsl::parse_script(text), env);

    // "# expect <run> <value>" comments assert scalar results
    std::map<std::string, double> expected;
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);) {
        std::istringstream ls(line);
        std::string hash, word, name;
        double value = 0.0;
        if (ls >> hash >> word >> name >> value && hash == "#" && word == "expect") expected[name] = value;
    }

    Outcome o;
    json runs = json::object();
    for (const auto &name : p.run_names) {
        log.debug("evaluating run " + name);
        const Evaluation ev = p.run(name).evaluate();
        json r;
        if (const auto *d = std::get_if<double>(&ev)) {
            r = {{"kind", "probability"}, {"value", *d}};
        } else if (const auto *s = std::get_if<StateVec>(&ev)) {
            r = {{"kind", "state"}, {"system", to_json(s->system)}, {"coords", to_json(s->coords)}};
        } else if (const auto *e = std::get_if<EffectVec>(&ev)) {
            r = {{"kind", "effect"}, {"system", to_json(e->system)}, {"coords", to_json(e->coords)}};
        } else {
            const auto &mp = std::get<LinearMap>(ev);
            r = {{"kind", "map"}, {"input", to_json(mp.input)}, {"output", to_json(mp.output)}, {"matrix", to_json(mp.matrix)}};
        }
        if (auto it = expected.find(name); it != expected.end()) {
            const auto *d = std::get_if<double>(&ev);
            const bool match = d != nullptr && std::abs(*d - it->second) <= cfg.tol;
            r["expected"] = it->second;
            r["matches"] = match;
            o.ok = o.ok && match;
        }
        runs[name] = r;
    }
    o.report = {{"command", "eval"}, {"script", cfg.script}, {"theory", local.theory}, {"runs", runs}};
    return o;
}

Outcome cmd_norm(const RunConfig &cfg, const Log &log) {
    const ModelPtr m = model_for(cfg);
    Outcome o;
    if (cfg.kind == "state") {
        const std::string an = cfg.a.empty() ? "zero" : cfg.a;
        const std::string bn = cfg.b.empty() ? "plus" : cfg.b;
        const StateVec x = builtin_state(m, an);
        const StateVec y = builtin_state(m, bn);
        const double n = state_norm(*m, x.system, x.coords - y.coords);
        o.report = {{"command", "norm"}, {"kind", "state"}, {"a", an}, {"b", bn}, {"norm", n}};
        o.ok = n >= -cfg.tol && n <= 2.0 + cfg.tol;
        return o;
    }
    const std::string an = cfg.a.empty() ? "id" : cfg.a;
    const std::string bn = cfg.b.empty() ? "depolarize(0.1)" : cfg.b;
    const LinearMap x = builtin(m, "box", an);
    const LinearMap y = builtin(m, "box", bn);
    LinearMap delta{x.input, x.output, x.matrix - y.matrix, MapTag::Unconstrained, std::nullopt};
    NormBudget budget;
    budget.restarts = cfg.restarts;
    budget.seed = cfg.seed;
    log.info("seesaw with " + std::to_string(cfg.restarts) + " restarts");
    const TransformationNorm t = transformation_norm(*m, delta, budget);
    const double replay = lifted_output_norm(*m, delta, t.certificate);
    o.report = {{"command", "norm"},        {"kind", "channel"},          {"a", an},
                {"b", bn},                  {"lower_bound", t.lower_bound}, {"certificate_replay", replay},
                {"restarts", cfg.restarts}, {"best_start", t.best_start}};
    o.ok = std::abs(replay - t.lower_bound) <= 1e-8;
    return o;
}

Outcome cmd_discriminate(const RunConfig &cfg, const Log &) {
    const ModelPtr m = model_for(cfg);
    const std::string an = cfg.a.empty() ? "zero" : cfg.a;
    const std::string bn = cfg.b.empty() ? "plus" : cfg.b;
    const StateVec x = builtin_state(m, an);
    const StateVec y = builtin_state(m, bn);
    if (cfg.prior < 0.0 || cfg.prior > 1.0) throw UsageError("--prior must lie in [0, 1]");
    const DiscriminationResult r = discriminate(*m, x, y, cfg.prior, 1.0 - cfg.prior);
    Outcome o;
    o.report = {{"command", "discriminate"}, {"a", an},          {"b", bn},
                {"prior", cfg.prior},        {"p_success", r.p_success}, {"effect_a", to_json(r.a0.coords)},
                {"effect_b", to_json(r.a1.coords)}};
    o.ok = r.p_success >= std::max(cfg.prior, 1.0 - cfg.prior) - cfg.tol && r.p_success <= 1.0 + cfg.tol;
    return o;
}

Outcome cmd_choi(const RunConfig &cfg, const Log &) {
    const ModelPtr m = model_for(cfg);
    const LinearMap c = builtin(m, "box", cfg.channel);
    const FaithfulPair fp = faithful_pair(*m, c.input);
    const ChoiState r = store(*m, c, fp);
    const LinearMap back = retrieve(*m, r, fp);
    const double residual = (back.matrix - c.matrix).cwiseAbs().maxCoeff();
    const EbResult eb = is_entanglement_breaking(*m, c);
    Outcome o;
    o.report = {{"command", "choi"},
                {"channel", cfg.channel},
                {"teleportation_probability", fp.probability},
                {"roundtrip_residual", residual},
                {"entanglement_breaking", to_string(eb.verdict)},
                {"min_partial_transpose_eigenvalue", eb.min_partial_transpose_eigenvalue},
                {"choi_state", json::parse(dump_payload(choi_payload(r, fp)))}};
    o.ok = residual < 1e-10;
    return o;
}

Outcome cmd_teleport(const RunConfig &cfg, const Log &log) {
    const ModelPtr m = model_for(cfg);
    const SystemLabel a = m->atom();
    const FaithfulPair fp = faithful_pair(*m, a);
    const SwapResult s = entanglement_swap(*m, fp.psi);
    const double bound = 1.0 / a.coord_dim;
    Outcome o;
    o.report = {{"command", "teleport"},
                {"theory", cfg.theory},
                {"dim", a.hilbert_dim()},
                {"probability", fp.probability},
                {"bound", bound},
                {"swap_probability", s.probability},
                {"swap_residual", s.residual}};
    o.ok = fp.probability <= bound + 1e-12 && s.residual < 1e-10;
    if (m->id() == TheoryId::Quantum) {
        const TeleportationRun run = deterministic_teleport(*m, a);
        log.info("deterministic run with " + std::to_string(run.effects.size()) + " outcomes");
        o.report["deterministic"] = {{"outcomes", run.effects.size()},
                                     {"probabilities", run.probabilities},
                                     {"residuals", run.residuals},
                                     {"effects_atomic", run.effects_atomic},
                                     {"normalization_residual", run.normalization_residual},
                                     {"marginal_residual", run.marginal_residual},
                                     {"twirl_residual", run.twirl_residual}};
        o.ok = o.ok && worst(run.residuals) < 1e-10 && run.effects_atomic && run.marginal_residual < 1e-10 &&
               run.twirl_residual < 1e-10;
    } else {
        o.report["deterministic"] = "unsupported";
    }
    return o;
}

Outcome cmd_twirl(const RunConfig &cfg, const Log &) {
    const ModelPtr m = model_for(cfg);
    const TwirlTest t = pauli_twirl(*m, m->atom());
    Outcome o;
    o.report = {{"command", "twirl"},
                {"dim", m->atom().hilbert_dim()},
                {"outcomes", t.unitaries.size()},
                {"probabilities", t.probabilities},
                {"residual", t.residual}};
    o.ok = t.residual < 1e-12;
    return o;
}

json correction_json(const CorrectionResult &r) {
    json j = {{"correctable", r.correctable},
              {"kl_residual", r.kl_residual},
              {"witness", {r.witness.first, r.witness.second}},
              {"factorized", r.factorized},
              {"factorization_residual", r.factorization_residual}};
    if (r.recovery) {
        j["end_to_end_residual"] = r.end_to_end_residual;
        j["recovers_upon_input"] = r.recovers_upon_input;
    }
    return j;
}

Outcome cmd_ec(const RunConfig &cfg, const Log &) {
    Outcome o;
    o.report = {{"command", "ec"}, {"code", cfg.code}};
    if (cfg.code == "real-counterexample") {
        const CounterexampleReport r = real_deletion_counterexample();
        o.report["channel_marginal_residual"] = r.channel_marginal_residual;
        o.report["complement_marginal_residual"] = r.complement_marginal_residual;
        o.report["channel_deletion"] = r.channel_deletion;
        o.report["complement_deletion"] = r.complement_deletion;
        o.report["channel_correctable"] = r.channel_correctable;
        o.report["converse_fails"] = r.converse_fails;
        o.ok = r.channel_marginal_residual < 1e-12 && r.complement_marginal_residual < 1e-12;
        return o;
    }
    const ModelPtr m = quantum_model(2);
    const auto &h = require_hilbert(*m, "ec");
    const SystemLabel a = m->atom();
    if (cfg.code == "bitflip3") {
        const SystemLabel s = m->system({2, 2, 2});
        std::vector<CMat> k{std::sqrt(0.7) * CMat::Identity(8, 8)};
        for (int q = 0; q < 3; ++q) {
            CMat x = CMat::Identity(1, 1);
            for (int f = 0; f < 3; ++f) x = linalg::kron(x, f == q ? standard::pauli('X') : standard::pauli('I'));
            k.push_back(std::sqrt(0.1) * x);
        }
        CMat p = CMat::Zero(8, 8);
        p(0, 0) = 1.0;
        p(7, 7) = 1.0;
        const LinearMap c = h.map_from_kraus(s, s, k);
        const CodeSpec spec = code_for_projector(*m, c, p);
        const CorrectionResult r = is_correctable(*m, spec);
        o.report["result"] = correction_json(r);
        const ComplementarityReport cr = complementarity_check(*m, c, spec.rho);
        o.report["complement_deletion"] = cr.complement_deletion;
        o.ok = r.correctable && r.end_to_end_residual < 1e-8 && r.factorization_residual < 1e-8 && cr.forward_holds &&
               cr.converse_holds;
    } else if (cfg.code == "depolarizing") {
        const StateVec chi{a, m->invariant_state(a)};
        const CorrectionResult r = is_correctable(*m, code_for_state(*m, standard::depolarizing(*m, a, 1.0), chi));
        o.report["result"] = correction_json(r);
        o.ok = !r.correctable && !r.factorized;
    } else if (cfg.code == "amplitude-damping" || cfg.code == "pauli") {
        LinearMap c;
        if (cfg.code == "pauli") {
            c = h.map_from_kraus(a, a,
                                 {std::sqrt(0.5) * standard::pauli('I'), std::sqrt(0.2) * standard::pauli('X'),
                                  std::sqrt(0.2) * standard::pauli('Y'), std::sqrt(0.1) * standard::pauli('Z')});
        } else {
            c = standard::amplitude_damping(*m, a, 0.3);
        }
        Rng rng(cfg.seed);
        const OneWayResult r = one_way_correct(*m, c, {a, m->invariant_state(a)}, rng);
        o.report["one_way"] = {{"verdict", to_string(r.verdict)},
                               {"probabilities", r.probabilities},
                               {"residual", r.residual},
                               {"attempts", r.attempts}};
        o.ok = r.verdict != OneWayVerdict::Inconclusive;
    } else {
        throw UsageError("unknown --code '" + cfg.code + "'");
    }
    return o;
}

Outcome cmd_comb(const RunConfig &cfg, const Log &) {
    const ModelPtr m = model_for(cfg);
    const int d = m->atom().hilbert_dim();
    Rng rng(cfg.seed);
    LinearMap c;
    if (cfg.comb_case == "random") {
        c = random_two_step_comb(*m, d, cfg.memory, rng);
    } else if (cfg.comb_case == "product") {
        c = m->tensor(m->random_channel(m->atom(), m->atom(), rng), m->random_channel(m->atom(), m->atom(), rng));
    } else if (cfg.comb_case == "swap") {
        c = standard::swap(*m, m->atom(), m->atom());
    } else {
        throw UsageError("unknown --case '" + cfg.comb_case + "'");
    }
    const CausalOrder order = check_causal_order(*m, c, 1, 1, cfg.tol);
    Outcome o;
    o.report = {{"command", "comb"}, {"case", cfg.comb_case}, {"ordered", order.ordered}, {"order_residual", order.residual}};
    if (order.ordered) {
        const CombDecomposition comb = comb_decompose(*m, c, {1, 1}, {1, 1}, cfg.tol);
        o.report["memory_dims"] = comb.memory_dims;
        o.report["recomposition_residual"] = comb.residual;
        o.ok = comb.residual < 1e-8;
    } else {
        o.ok = cfg.comb_case == "swap";
    }
    return o;
}

Outcome cmd_dilate(const RunConfig &cfg, const Log &) {
    const ModelPtr m = model_for(cfg);
    const LinearMap c = builtin(m, "box", cfg.channel);
    const Dilation d = stinespring(*m, c, cfg.env);
    const ReversibleForm rf = reversible_form(*m, d);
    const Dilation wider = stinespring(*m, c, d.environment.hilbert_dim() + 1);
    const Connection conn = connect_dilations(*m, d, wider);
    const CMat u = rf.unitary;
    const double unitarity = linalg::max_abs(u.adjoint() * u - CMat::Identity(u.cols(), u.cols()));
    Outcome o;
    o.report = {{"command", "dilate"},
                {"channel", cfg.channel},
                {"environment_dim", d.environment.hilbert_dim()},
                {"isometry_residual", d.isometry_residual},
                {"unitary_residual", unitarity},
                {"padded_environment_dim", rf.padded_environment.hilbert_dim()},
                {"connection_residual", conn.residual}};
    o.ok = d.isometry_residual < 1e-10 && unitarity < 1e-10 && conn.residual < 1e-8;
    return o;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    RunConfig cfg;
    CLI::App app{"purelab: operational-probabilistic theory toolkit"};
    app.require_subcommand(1);
    app.add_option("--theory", cfg.theory, "classical | quantum | real-quantum | all")
        ->check(CLI::IsMember({"classical", "quantum", "real-quantum", "all"}));
    app.add_option("--dim", cfg.dims, "system dimension, or two dimensions N,M")->delimiter(',')->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--tol", cfg.tol, "tolerance")->check(CLI::PositiveNumber);
    app.add_option("--format", cfg.format, "json | md")->check(CLI::IsMember({"json", "md"}));
    app.add_option("--out", cfg.out, "write the report to this path");
    app.add_option("--expect", cfg.expect, "golden JSON the report must contain");

    auto sub = [&](const std::string &name, const std::string &help, const std::string &example) {
        CLI::App *s = app.add_subcommand(name, help);
        s->fallthrough();
        s->footer("example: purelab " + example);
        return s;
    };
    CLI::App *axioms = sub("axioms", "run the axiom battery", "axioms --theory all --dim 2");
    axioms->add_option("--samples", cfg.samples, "random samples per check")->check(CLI::PositiveNumber);
    CLI::App *eval = sub("eval", "evaluate every run of a circuit script", "eval tests/data/scripts/teleport.circ");
    eval->add_option("script", cfg.script, "script path")->required();
    CLI::App *norm = sub("norm", "operational norm of a difference of builtins", "norm --kind channel --a id --b 'depolarize(0.1)'");
    norm->add_option("--kind", cfg.kind, "state | channel")->check(CLI::IsMember({"state", "channel"}));
    norm->add_option("--a", cfg.a, "first builtin");
    norm->add_option("--b", cfg.b, "second builtin");
    norm->add_option("--restarts", cfg.restarts, "seesaw starts")->check(CLI::PositiveNumber);
    CLI::App *disc = sub("discriminate", "optimal two-state discrimination", "discriminate --a zero --b plus --prior 0.5");
    disc->add_option("--a", cfg.a, "first state builtin");
    disc->add_option("--b", cfg.b, "second state builtin");
    disc->add_option("--prior", cfg.prior, "prior of the first state");
    CLI::App *choi = sub("choi", "store and retrieve a channel through its Choi state", "choi --channel 'amp_damp(0.3)'");
    choi->add_option("--channel", cfg.channel, "channel builtin");
    sub("teleport", "probabilistic and deterministic teleportation", "teleport --theory quantum --dim 3");
    sub("twirl", "finite Weyl twirl", "twirl --dim 3");
    CLI::App *ec = sub("ec", "error-correction checks", "ec --code bitflip3");
    ec->add_option("--code", cfg.code, "bitflip3 | depolarizing | pauli | amplitude-damping | real-counterexample");
    CLI::App *comb = sub("comb", "causal order and comb decomposition", "comb --case swap");
    comb->add_option("--case", cfg.comb_case, "random | product | swap");
    comb->add_option("--memory", cfg.memory, "memory dimension of the random comb")->check(CLI::PositiveNumber);
    CLI::App *dilate = sub("dilate", "Stinespring dilation and its reversible form", "dilate --channel 'depolarize(0.5)'");
    dilate->add_option("--channel", cfg.channel, "channel builtin");
    dilate->add_option("--env", cfg.env, "minimum environment dimension");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
        return static_cast<int>(Exit::Usage);
    }
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.theory_explicit = app.count("--theory") > 0;
    if (cfg.dims.empty() || cfg.dims.size() > 2) {
        err << "usage error: --dim takes one or two values\n";
        return static_cast<int>(Exit::Usage);
    }

    const Log log(err);
    Outcome o;
    try {
        log.info("command " + cfg.command);
        if (cfg.command == "axioms") o = cmd_axioms(cfg, log);
        else if (cfg.command == "eval") o = cmd_eval(cfg, log);
        else if (cfg.command == "norm") o = cmd_norm(cfg, log);
        else if (cfg.command == "discriminate") o = cmd_discriminate(cfg, log);
        else if (cfg.command == "choi") o = cmd_choi(cfg, log);
        else if (cfg.command == "teleport") o = cmd_teleport(cfg, log);
        else if (cfg.command == "twirl") o = cmd_twirl(cfg, log);
        else if (cfg.command == "ec") o = cmd_ec(cfg, log);
        else if (cfg.command == "comb") o = cmd_comb(cfg, log);
        else o = cmd_dilate(cfg, log);
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return static_cast<int>(Exit::Usage);
    } catch (const dsl::DslError &e) {
        err << e.what() << "\n";
        return static_cast<int>(Exit::Usage);
    } catch (const Unsupported &e) {
        err << "unsupported: " << e.what() << "\n";
        return static_cast<int>(Exit::Usage);
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(Exit::Usage);
    }

    if (!cfg.expect.empty()) {
        std::ifstream in(cfg.expect);
        if (!in) {
            err << "usage error: cannot read file '" << cfg.expect << "'\n";
            return static_cast<int>(Exit::Usage);
        }
        json golden;
        try {
            golden = json::parse(in);
        } catch (const json::exception &e) {
            err << "usage error: " << cfg.expect << ": " << e.what() << "\n";
            return static_cast<int>(Exit::Usage);
        }
        std::vector<std::string> miss;
        subset_match(golden, o.report, "", cfg.tol, miss);
        for (const auto &msg : miss) err << "mismatch " << msg << "\n";
        o.ok = o.ok && miss.empty();
    }
    o.report["ok"] = o.ok;

    const std::string text = cfg.format == "json" ? o.report.dump(2) + "\n" : (o.md.empty() ? markdown(o.report) : o.md);
    if (cfg.out.empty()) {
        out << text;
    } else {
        std::ofstream f(cfg.out);
        if (!f) {
            err << "usage error: cannot write '" << cfg.out << "'\n";
            return static_cast<int>(Exit::Usage);
        }
        f << text;
    }
    return static_cast<int>(o.ok ? Exit::Ok : Exit::CheckFailed);
}

}  // namespace purelab::cli
