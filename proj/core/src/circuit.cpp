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


#include "purelab/circuit.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "purelab/errors.hpp"

namespace purelab {

std::string to_string(BoxKind kind) {
    switch (kind) {
        case BoxKind::Prep:
            return "prep";
        case BoxKind::Map:
            return "map";
        case BoxKind::Effect:
            return "effect";
    }
    return "unknown";
}

namespace {

MapTag weaker(MapTag a, MapTag b) { return static_cast<int>(a) < static_cast<int>(b) ? a : b; }

LinearMap sum_maps(const std::vector<const LinearMap *> &parts) {
    LinearMap out = *parts.front();
    out.tag = MapTag::Transformation;
    bool all_kraus = out.kraus.has_value();
    for (size_t i = 1; i < parts.size(); ++i) {
        out.matrix += parts[i]->matrix;
        if (all_kraus && parts[i]->kraus) {
            out.kraus->insert(out.kraus->end(), parts[i]->kraus->begin(), parts[i]->kraus->end());
        } else {
            all_kraus = false;
        }
    }
    if (!all_kraus) out.kraus.reset();
    return out;
}

std::vector<int> split_factors(const SystemLabel &s) { return s.factors; }

}  // namespace

// -- Circuit ------------------------------------------------------------------------

Circuit::Circuit(ModelPtr model) : model_(std::move(model)) {
    if (!model_) throw ContractViolation("Circuit: null model");
}

Circuit Circuit::single(ModelPtr model, const std::string &name, const LinearMap &payload) {
    Circuit c(std::move(model));
    std::vector<int> in;
    for (int f : split_factors(payload.input)) in.push_back(c.add_input(c.model_->system({f})));
    c.add_box(name, std::make_shared<const LinearMap>(payload), in);
    return c;
}

Circuit Circuit::identity(ModelPtr model, const SystemLabel &s) {
    Circuit c(std::move(model));
    for (int f : s.factors) c.add_input(c.model_->system({f}));
    return c;
}

const Wire &Circuit::wire(int id) const {
    if (id < 0 || static_cast<size_t>(id) >= wires_.size()) throw ContractViolation("Circuit: unknown wire");
    return wires_[id];
}

int Circuit::add_input(const SystemLabel &type) {
    if (type.theory != model_->id()) throw ContractViolation("Circuit: wire type from another theory");
    const int id = static_cast<int>(wires_.size());
    wires_.push_back({id, type, -1, -1});
    inputs_.push_back(id);
    outputs_.push_back(id);
    return id;
}

std::vector<int> Circuit::add_box(const std::string &name, std::shared_ptr<const LinearMap> payload,
                                  const std::vector<int> &inputs) {
    if (!payload) throw ContractViolation("Circuit: box '" + name + "' has no payload");
    const int box_id = static_cast<int>(boxes_.size());
    SystemLabel in = model_->trivial();
    std::vector<int> bad;
    for (int w : inputs) {
        if (w < 0 || static_cast<size_t>(w) >= wires_.size()) throw ContractViolation("Circuit: unknown wire");
        if (wires_[w].consumer != -1) bad.push_back(w);
        in = model_->compose(in, wires_[w].type);
    }
    if (!bad.empty()) throw WiringError("box '" + name + "': wire already consumed", bad);
    if (in != payload->input) {
        throw WiringError("box '" + name + "' expects " + payload->input.describe() + " but is fed " + in.describe(),
                          inputs);
    }
    Box b;
    b.id = box_id;
    b.name = name;
    b.kind = payload->input.is_trivial() ? BoxKind::Prep
             : payload->output.is_trivial() ? BoxKind::Effect
                                             : BoxKind::Map;
    b.payload = std::move(payload);
    b.inputs = inputs;
    for (int w : inputs) {
        wires_[w].consumer = box_id;
        std::erase(outputs_, w);
    }
    for (int f : split_factors(b.payload->output)) {
        const int id = static_cast<int>(wires_.size());
        wires_.push_back({id, model_->system({f}), box_id, -1});
        b.outputs.push_back(id);
        outputs_.push_back(id);
    }
    boxes_.push_back(std::move(b));
    return boxes_.back().outputs;
}

void Circuit::mark_output(int wire) {
    auto it = std::find(outputs_.begin(), outputs_.end(), wire);
    if (it == outputs_.end()) throw ContractViolation("Circuit: wire is not an open output");
    outputs_.erase(it);
    outputs_.push_back(wire);
}

SystemLabel Circuit::input_type() const {
    SystemLabel s = model_->trivial();
    for (int w : inputs_) s = model_->compose(s, wires_[w].type);
    return s;
}

SystemLabel Circuit::output_type() const {
    SystemLabel s = model_->trivial();
    for (int w : outputs_) s = model_->compose(s, wires_[w].type);
    return s;
}

LinearMap Circuit::evaluate_map(const std::vector<int> &order) const {
    std::vector<int> seq = order;
    if (seq.empty()) {
        seq.resize(boxes_.size());
        std::iota(seq.begin(), seq.end(), 0);
    }
    if (seq.size() != boxes_.size()) throw ContractViolation("evaluate: order must list every box once");

    const SystemLabel in = input_type();
    SystemLabel sys = in;
    RMat coords = RMat::Identity(in.coord_dim, in.coord_dim);
    std::vector<int> live = inputs_;
    std::vector<bool> done(boxes_.size(), false);
    MapTag tag = MapTag::Reversible;

    auto factor_offset = [&](int wire) {
        int off = 0;
        for (int w : live) {
            if (w == wire) return off;
            off += static_cast<int>(wires_[w].type.factors.size());
        }
        return -1;
    };

    for (int id : seq) {
        if (id < 0 || static_cast<size_t>(id) >= boxes_.size() || done[id]) {
            throw ContractViolation("evaluate: order must list every box once");
        }
        const Box &b = boxes_[id];
        std::vector<int> positions;
        for (int w : b.inputs) {
            const int off = factor_offset(w);
            if (off < 0) throw ContractViolation("evaluate: order is not topological at box '" + b.name + "'");
            for (size_t k = 0; k < wires_[w].type.factors.size(); ++k) positions.push_back(off + static_cast<int>(k));
        }
        Applied r = model_->apply(sys, coords, *b.payload, positions);
        sys = r.system;
        coords = std::move(r.coords);
        std::vector<int> next = b.outputs;
        for (int w : live) {
            if (std::find(b.inputs.begin(), b.inputs.end(), w) == b.inputs.end()) next.push_back(w);
        }
        live = std::move(next);
        tag = weaker(tag, b.payload->tag);
        done[id] = true;
    }

    std::vector<int> perm;
    for (int w : outputs_) {
        const int off = factor_offset(w);
        for (size_t k = 0; k < wires_[w].type.factors.size(); ++k) perm.push_back(off + static_cast<int>(k));
    }
    LinearMap out;
    out.input = in;
    out.output = output_type();
    out.matrix = model_->permute(sys, coords, perm);
    out.tag = tag;
    return out;
}

Evaluation Circuit::evaluate(const std::vector<int> &order) const {
    LinearMap m = evaluate_map(order);
    const bool closed_in = m.input.is_trivial();
    const bool closed_out = m.output.is_trivial();
    if (closed_in && closed_out) return m.matrix(0, 0);
    if (closed_in) return StateVec{m.output, m.matrix.col(0)};
    if (closed_out) return EffectVec{m.input, m.matrix.row(0).transpose()};
    return m;
}

namespace {

// Re-adds the boxes of `src` to `dst`, translating wire ids through `wire_map`.
void replay(Circuit &dst, const Circuit &src, std::map<int, int> &wire_map) {
    for (const Box &b : src.boxes()) {
        std::vector<int> in;
        for (int w : b.inputs) in.push_back(wire_map.at(w));
        auto out = dst.add_box(b.name, b.payload, in);
        for (size_t k = 0; k < out.size(); ++k) wire_map[b.outputs[k]] = out[k];
    }
}

void check_same_theory(const Circuit &a, const Circuit &b) {
    if (a.model().id() != b.model().id()) throw ContractViolation("circuits belong to different theories");
}

}  // namespace

Circuit compose_seq(const Circuit &c1, const Circuit &c2) {
    check_same_theory(c1, c2);
    std::vector<int> bad;
    const auto &outs = c1.outputs();
    const auto &ins = c2.inputs();
    if (outs.size() != ins.size()) {
        bad.insert(bad.end(), outs.begin(), outs.end());
        throw WiringError("sequential composition: " + std::to_string(outs.size()) + " open outputs feed " +
                              std::to_string(ins.size()) + " open inputs",
                          bad);
    }
    for (size_t k = 0; k < outs.size(); ++k) {
        if (c1.wire(outs[k]).type != c2.wire(ins[k]).type) {
            bad.push_back(outs[k]);
            bad.push_back(ins[k]);
        }
    }
    if (!bad.empty()) throw WiringError("sequential composition: wire types do not match", bad);

    Circuit out(c1.model_ptr());
    std::map<int, int> m1, m2;
    for (int w : c1.inputs()) m1[w] = out.add_input(c1.wire(w).type);
    replay(out, c1, m1);
    for (size_t k = 0; k < ins.size(); ++k) m2[ins[k]] = m1.at(outs[k]);
    replay(out, c2, m2);
    for (int w : c2.outputs()) out.mark_output(m2.at(w));
    return out;
}

Circuit compose_par(const Circuit &c1, const Circuit &c2) {
    check_same_theory(c1, c2);
    Circuit out(c1.model_ptr());
    std::map<int, int> m1, m2;
    for (int w : c1.inputs()) m1[w] = out.add_input(c1.wire(w).type);
    for (int w : c2.inputs()) m2[w] = out.add_input(c2.wire(w).type);
    replay(out, c1, m1);
    replay(out, c2, m2);
    for (int w : c1.outputs()) out.mark_output(m1.at(w));
    for (int w : c2.outputs()) out.mark_output(m2.at(w));
    return out;
}

// -- Test ------------------------------------------------------------------------------

Test::Test(const TheoryModel &model, std::vector<std::string> outcomes, std::vector<LinearMap> branches, double tol)
    : outcomes_(std::move(outcomes)), branches_(std::move(branches)) {
    if (branches_.empty()) throw ContractViolation("Test: no branches");
    if (outcomes_.size() != branches_.size()) throw ContractViolation("Test: one outcome label per branch required");
    input_ = branches_.front().input;
    output_ = branches_.front().output;
    for (const auto &b : branches_) {
        if (b.input != input_ || b.output != output_) throw ContractViolation("Test: branches differ in type");
    }
    for (size_t i = 0; i < outcomes_.size(); ++i) {
        for (size_t j = i + 1; j < outcomes_.size(); ++j) {
            if (outcomes_[i] == outcomes_[j]) throw ContractViolation("Test: duplicate outcome '" + outcomes_[i] + "'");
        }
    }
    RVec pulled = RVec::Zero(input_.coord_dim);
    const RVec eb = model.deterministic_effect(output_);
    for (const auto &b : branches_) pulled += b.matrix.transpose() * eb;
    const double residual = (pulled - model.deterministic_effect(input_)).cwiseAbs().maxCoeff();
    if (residual > tol) {
        throw ContractViolation("Test: branches are not normalized (residual " + std::to_string(residual) + ")");
    }
}

const LinearMap &Test::branch(const std::string &outcome) const {
    for (size_t i = 0; i < outcomes_.size(); ++i) {
        if (outcomes_[i] == outcome) return branches_[i];
    }
    throw ContractViolation("Test: unknown outcome '" + outcome + "'");
}

LinearMap Test::channel(const TheoryModel &) const {
    std::vector<const LinearMap *> all;
    for (const auto &b : branches_) all.push_back(&b);
    LinearMap m = sum_maps(all);
    m.tag = MapTag::Channel;
    return m;
}

Test Test::coarse_grain(const TheoryModel &model, const std::vector<std::vector<int>> &groups,
                        std::vector<std::string> labels) const {
    if (groups.size() != labels.size()) throw ContractViolation("coarse_grain: one label per group required");
    std::vector<int> seen(branches_.size(), 0);
    std::vector<LinearMap> merged;
    for (const auto &g : groups) {
        if (g.empty()) throw ContractViolation("coarse_grain: empty group");
        std::vector<const LinearMap *> parts;
        for (int i : g) {
            if (i < 0 || static_cast<size_t>(i) >= branches_.size()) throw ContractViolation("coarse_grain: bad index");
            ++seen[i];
            parts.push_back(&branches_[i]);
        }
        merged.push_back(sum_maps(parts));
    }
    for (int s : seen) {
        if (s != 1) throw ContractViolation("coarse_grain: groups must partition the outcomes");
    }
    return Test(model, std::move(labels), std::move(merged));
}

Test sequence(const TheoryModel &model, const Test &first, const Test &second) {
    std::vector<std::string> labels;
    std::vector<LinearMap> branches;
    for (size_t i = 0; i < first.size(); ++i) {
        for (size_t j = 0; j < second.size(); ++j) {
            labels.push_back(first.outcomes()[i] + "," + second.outcomes()[j]);
            branches.push_back(model.compose_seq(second.branches()[j], first.branches()[i]));
        }
    }
    return Test(model, std::move(labels), std::move(branches));
}

Test parallel(const TheoryModel &model, const Test &a, const Test &b) {
    std::vector<std::string> labels;
    std::vector<LinearMap> branches;
    for (size_t i = 0; i < a.size(); ++i) {
        for (size_t j = 0; j < b.size(); ++j) {
            labels.push_back(a.outcomes()[i] + "," + b.outcomes()[j]);
            branches.push_back(model.tensor(a.branches()[i], b.branches()[j]));
        }
    }
    return Test(model, std::move(labels), std::move(branches));
}

Test conditioned(const TheoryModel &model, const Test &first, const std::vector<Test> &then) {
    if (then.size() != first.size()) throw ContractViolation("conditioned: one follow-up test per outcome required");
    for (const auto &t : then) {
        if (t.input() != first.output()) throw ContractViolation("conditioned: follow-up input does not match");
        if (t.output() != then.front().output()) {
            throw ContractViolation("conditioned: outcome-dependent output systems (direct sums) are not supported");
        }
    }
    std::vector<std::string> labels;
    std::vector<LinearMap> branches;
    for (size_t i = 0; i < first.size(); ++i) {
        for (size_t j = 0; j < then[i].size(); ++j) {
            labels.push_back(first.outcomes()[i] + "," + then[i].outcomes()[j]);
            branches.push_back(model.compose_seq(then[i].branches()[j], first.branches()[i]));
        }
    }
    return Test(model, std::move(labels), std::move(branches));
}

}  // namespace purelab
