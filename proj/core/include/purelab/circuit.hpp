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

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "purelab/theory.hpp"

namespace purelab {

enum class BoxKind { Prep, Map, Effect };

std::string to_string(BoxKind kind);

/// A typed wire. `producer`/`consumer` are box ids, or -1 for an open end.
struct Wire {
    int id = 0;
    SystemLabel type;
    int producer = -1;
    int consumer = -1;
};

struct Box {
    int id = 0;
    std::string name;
    BoxKind kind = BoxKind::Map;
    std::shared_ptr<const LinearMap> payload;
    std::vector<int> inputs;
    std::vector<int> outputs;
};

/// What evaluating a circuit produces, by the shape of its open ends.
using Evaluation = std::variant<double, StateVec, EffectVec, LinearMap>;

/// A directed acyclic network of boxes joined by typed wires.
///
/// Boxes are appended in a valid order, so the DAG property holds by construction.
/// A box output of composite type is split into one wire per atomic factor.
class Circuit {
   public:
    explicit Circuit(ModelPtr model);

    /// A circuit holding a single box whose ends are all open.
    static Circuit single(ModelPtr model, const std::string &name, const LinearMap &payload);
    static Circuit identity(ModelPtr model, const SystemLabel &s);

    int add_input(const SystemLabel &type);
    /// Appends a box consuming `inputs` (whose types must compose to the payload input).
    std::vector<int> add_box(const std::string &name, std::shared_ptr<const LinearMap> payload,
                             const std::vector<int> &inputs);
    void mark_output(int wire);

    const TheoryModel &model() const { return *model_; }
    const ModelPtr &model_ptr() const { return model_; }
    const std::vector<Box> &boxes() const { return boxes_; }
    const std::vector<Wire> &wires() const { return wires_; }
    const std::vector<int> &inputs() const { return inputs_; }
    const std::vector<int> &outputs() const { return outputs_; }
    const Wire &wire(int id) const;

    SystemLabel input_type() const;
    SystemLabel output_type() const;

    /// Contracts the network box by box. `order` (box ids) must be topological;
    /// by default boxes are taken in insertion order.
    Evaluation evaluate(const std::vector<int> &order = {}) const;
    /// The induced map from the open inputs to the open outputs.
    LinearMap evaluate_map(const std::vector<int> &order = {}) const;

   private:
    ModelPtr model_;
    std::vector<Wire> wires_;
    std::vector<Box> boxes_;
    std::vector<int> inputs_;
    std::vector<int> outputs_;
};

/// c1 then c2: c1's open outputs feed c2's open inputs, position by position.
/// Mismatched types raise WiringError listing the offending wire ids.
Circuit compose_seq(const Circuit &c1, const Circuit &c2);
Circuit compose_par(const Circuit &c1, const Circuit &c2);

/// A test: a family of events sharing input and output systems, indexed by outcome.
class Test {
   public:
    /// Checks normalization: the branches sum to a channel within `tol`.
    Test(const TheoryModel &model, std::vector<std::string> outcomes, std::vector<LinearMap> branches,
         double tol = 1e-9);

    const SystemLabel &input() const { return input_; }
    const SystemLabel &output() const { return output_; }
    const std::vector<std::string> &outcomes() const { return outcomes_; }
    const std::vector<LinearMap> &branches() const { return branches_; }
    size_t size() const { return branches_.size(); }
    const LinearMap &branch(const std::string &outcome) const;

    /// Sum of all branches.
    LinearMap channel(const TheoryModel &model) const;
    /// Merges outcome groups: branch k of the result is the sum over groups[k].
    Test coarse_grain(const TheoryModel &model, const std::vector<std::vector<int>> &groups,
                      std::vector<std::string> labels) const;

   private:
    SystemLabel input_;
    SystemLabel output_;
    std::vector<std::string> outcomes_;
    std::vector<LinearMap> branches_;
};

/// first then second, with joint outcomes "i,j".
Test sequence(const TheoryModel &model, const Test &first, const Test &second);
/// Tensor product of tests, with joint outcomes "i,j".
Test parallel(const TheoryModel &model, const Test &a, const Test &b);
/// Runs `first`, then the test `then[i]` selected by its outcome i. All follow-up
/// tests must share one output system; outcome-dependent output types are rejected.
Test conditioned(const TheoryModel &model, const Test &first, const std::vector<Test> &then);

}  // namespace purelab
