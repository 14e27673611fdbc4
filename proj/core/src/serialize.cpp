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


#include "purelab/serialize.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "purelab/errors.hpp"

namespace purelab {

using nlohmann::json;

namespace {

json system_json(const SystemLabel &s) { return {{"theory", to_string(s.theory)}, {"dims", s.factors}}; }

SystemLabel system_from(const json &j) {
    if (!j.is_object() || !j.contains("theory") || !j.contains("dims")) {
        throw ContractViolation("payload: system needs 'theory' and 'dims'");
    }
    const TheoryId id = theory_from_string(j.at("theory").get<std::string>());
    auto dims = j.at("dims").get<std::vector<int>>();
    return make_model(id, 2)->system(std::move(dims));
}

json real_matrix_json(const RMat &m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

json complex_matrix_json(const CMat &m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

cplx complex_from(const json &j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    throw ContractViolation("payload: complex entries must be numbers or [re, im]");
}

CMat complex_matrix_from(const json &j) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw ContractViolation("payload: expected a matrix");
    CMat m(j.size(), j[0].size());
    for (size_t i = 0; i < j.size(); ++i) {
        if (j[i].size() != j[0].size()) throw ContractViolation("payload: ragged matrix");
        for (size_t k = 0; k < j[i].size(); ++k) m(i, k) = complex_from(j[i][k]);
    }
    return m;
}

RMat real_matrix_from(const json &j) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw ContractViolation("payload: expected a matrix");
    RMat m(j.size(), j[0].size());
    for (size_t i = 0; i < j.size(); ++i) {
        if (j[i].size() != j[0].size()) throw ContractViolation("payload: ragged matrix");
        for (size_t k = 0; k < j[i].size(); ++k) m(i, k) = j[i][k].get<double>();
    }
    return m;
}

// States and effects may be given as coordinates or, in matrix-backed models, as
// an operator (nested rows); the latter is converted to coordinates.
RVec coords_from(const json &data, const SystemLabel &s) {
    if (data.is_array() && !data.empty() && data[0].is_array()) {
        auto model = make_model(s.theory, 2);
        const auto &h = require_hilbert(*model, "operator-valued payload data");
        CMat op = complex_matrix_from(data);
        if (op.rows() != s.hilbert_dim() || op.cols() != s.hilbert_dim()) {
            throw ContractViolation("payload: operator size does not match system");
        }
        return h.from_matrix(s, op);
    }
    auto v = data.get<std::vector<double>>();
    if (static_cast<int>(v.size()) != s.coord_dim) {
        throw ContractViolation("payload: expected " + std::to_string(s.coord_dim) + " coordinates for " +
                                s.describe());
    }
    return Eigen::Map<RVec>(v.data(), v.size());
}

}  // namespace

std::string to_string(PayloadKind kind) {
    switch (kind) {
        case PayloadKind::State:
            return "state";
        case PayloadKind::Effect:
            return "effect";
        case PayloadKind::Map:
            return "map";
        case PayloadKind::Kraus:
            return "kraus";
    }
    return "unknown";
}

Payload parse_payload(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception &e) {
        throw ContractViolation(std::string("payload: invalid JSON: ") + e.what());
    }
    try {
        if (!j.is_object()) throw ContractViolation("payload: top level must be an object");
        Payload p;
        const std::string kind = j.at("kind").get<std::string>();
        p.system = system_from(j.at("system"));
        const json &data = j.at("data");
        if (kind == "state" || kind == "effect") {
            p.kind = kind == "state" ? PayloadKind::State : PayloadKind::Effect;
            p.coords = coords_from(data, p.system);
        } else if (kind == "map") {
            p.kind = PayloadKind::Map;
            p.output_system = system_from(j.at("output_system"));
            p.matrix = real_matrix_from(data);
            if (p.matrix.rows() != p.output_system.coord_dim || p.matrix.cols() != p.system.coord_dim) {
                throw ContractViolation("payload: map matrix shape does not match its systems");
            }
        } else if (kind == "kraus") {
            p.kind = PayloadKind::Kraus;
            p.output_system = j.contains("output_system") ? system_from(j.at("output_system")) : p.system;
            if (!data.is_array() || data.empty()) throw ContractViolation("payload: empty Kraus list");
            for (const auto &k : data) {
                CMat m = complex_matrix_from(k);
                if (m.rows() != p.output_system.hilbert_dim() || m.cols() != p.system.hilbert_dim()) {
                    throw ContractViolation("payload: Kraus operator shape does not match its systems");
                }
                p.kraus.push_back(std::move(m));
            }
        } else {
            throw ContractViolation("payload: unknown kind '" + kind + "'");
        }
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.key() != "system" && it.key() != "kind" && it.key() != "data" && it.key() != "output_system") {
                p.metadata[it.key()] = it.value().dump();
            }
        }
        return p;
    } catch (const json::exception &e) {
        throw ContractViolation(std::string("payload: ") + e.what());
    }
}

std::string dump_payload(const Payload &p, int indent) {
    json j;
    j["system"] = system_json(p.system);
    j["kind"] = to_string(p.kind);
    switch (p.kind) {
        case PayloadKind::State:
        case PayloadKind::Effect:
            j["data"] = std::vector<double>(p.coords.data(), p.coords.data() + p.coords.size());
            break;
        case PayloadKind::Map:
            j["output_system"] = system_json(p.output_system);
            j["data"] = real_matrix_json(p.matrix);
            break;
        case PayloadKind::Kraus: {
            j["output_system"] = system_json(p.output_system);
            json list = json::array();
            for (const auto &k : p.kraus) list.push_back(complex_matrix_json(k));
            j["data"] = std::move(list);
            break;
        }
    }
    for (const auto &[key, value] : p.metadata) j[key] = json::parse(value);
    return j.dump(indent);
}

Payload payload_of(const StateVec &s) {
    Payload p;
    p.kind = PayloadKind::State;
    p.system = s.system;
    p.coords = s.coords;
    return p;
}

Payload payload_of(const EffectVec &a) {
    Payload p;
    p.kind = PayloadKind::Effect;
    p.system = a.system;
    p.coords = a.coords;
    return p;
}

Payload payload_of(const LinearMap &m) {
    Payload p;
    p.kind = PayloadKind::Map;
    p.system = m.input;
    p.output_system = m.output;
    p.matrix = m.matrix;
    return p;
}

Payload kraus_payload(const SystemLabel &in, const SystemLabel &out, const std::vector<CMat> &kraus) {
    Payload p;
    p.kind = PayloadKind::Kraus;
    p.system = in;
    p.output_system = out;
    p.kraus = kraus;
    return p;
}

LinearMap payload_to_map(const Payload &p, const TheoryModel &model) {
    if (p.system.theory != model.id()) {
        throw ContractViolation("payload belongs to the " + to_string(p.system.theory) + " model, not " +
                                to_string(model.id()));
    }
    switch (p.kind) {
        case PayloadKind::State:
            return model.prepare({p.system, p.coords});
        case PayloadKind::Effect:
            return model.observe({p.system, p.coords});
        case PayloadKind::Map:
            return {p.system, p.output_system, p.matrix, MapTag::Unconstrained, std::nullopt};
        case PayloadKind::Kraus: {
            const auto &h = require_hilbert(model, "Kraus payloads");
            LinearMap m = h.map_from_kraus(p.system, p.output_system, p.kraus, MapTag::Transformation);
            if (check_channel(m, model, 1e-9).verdict == ChannelClass::Channel) m.tag = MapTag::Channel;
            return m;
        }
    }
    throw ContractViolation("payload: unknown kind");
}

Payload load_payload_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ContractViolation("cannot open payload file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_payload(buf.str());
}

void save_payload_file(const Payload &p, const std::string &path) {
    std::ofstream out(path);
    if (!out) throw ContractViolation("cannot write payload file '" + path + "'");
    out << dump_payload(p, 2) << "\n";
}

}  // namespace purelab
