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


#include "purelab/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "purelab/dilation.hpp"
#include "purelab/errors.hpp"
#include "purelab/metrology.hpp"

namespace purelab {
namespace {

constexpr double kTol = 1e-9;

CheckResult make(const std::string &id, bool holds, const std::string &fail_label = "fails") {
    CheckResult r;
    r.id = id;
    r.verdict = holds ? Verdict::Holds : Verdict::Fails;
    r.label = holds ? "holds" : fail_label;
    return r;
}

LinearMap scaled_identity(const TheoryModel &model, const SystemLabel &a, double w) {
    LinearMap m = model.identity(a);
    m.matrix *= w;
    if (m.kraus) {
        for (auto &k : *m.kraus) k *= std::sqrt(w);
    }
    m.tag = MapTag::Transformation;
    return m;
}

double cosine_distance(const RMat &x, const RMat &y) {
    const double nx = x.norm();
    const double ny = y.norm();
    if (nx == 0.0 || ny == 0.0) return 0.0;  // the zero branch is a multiple of anything
    return 1.0 - std::abs((x.array() * y.array()).sum()) / (nx * ny);
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds:
            return "holds";
        case Verdict::Fails:
            return "fails";
        case Verdict::Unsupported:
            return "unsupported";
    }
    return "unknown";
}

const CheckResult &AxiomReport::check(const std::string &id) const {
    for (const auto &c : checks) {
        if (c.id == id) return c;
    }
    throw ContractViolation("AxiomReport: no check named " + id);
}

CheckResult check_causality(const TheoryModel &model, const SystemLabel &a) {
    const auto states = model.spanning_states(a);
    RMat s(static_cast<Eigen::Index>(states.size()), a.coord_dim);
    for (size_t k = 0; k < states.size(); ++k) s.row(static_cast<Eigen::Index>(k)) = states[k].transpose();
    Eigen::FullPivLU<RMat> lu(s);
    lu.setThreshold(kTol);
    const int rank = static_cast<int>(lu.rank());
    const RVec x = s.completeOrthogonalDecomposition().solve(RVec::Ones(s.rows()));
    const double fit = (s * x - RVec::Ones(s.rows())).cwiseAbs().maxCoeff();
    const double gap = (x - model.deterministic_effect(a)).cwiseAbs().maxCoeff();
    const int null_dim = a.coord_dim - rank;
    CheckResult r = make("causality", null_dim == 0 && fit < kTol && gap < kTol);
    r.numbers = {{"coord_dim", a.coord_dim},
                 {"spanning_states", static_cast<double>(states.size())},
                 {"rank", rank},
                 {"null_dim", null_dim},
                 {"effect_residual", gap}};
    return r;
}

CheckResult check_local_discriminability(const TheoryModel &model, const SystemLabel &a, const SystemLabel &b) {
    const int dab = model.compose(a, b).coord_dim;
    CheckResult r = make("local_discriminability", dab == a.coord_dim * b.coord_dim);
    r.numbers = {{"d_ab", dab}, {"d_a", a.coord_dim}, {"d_b", b.coord_dim}, {"product", a.coord_dim * b.coord_dim}};
    return r;
}

CheckResult check_purification(const TheoryModel &model, const SystemLabel &a, int samples, Rng &rng) {
    if (samples < 1) throw ContractViolation("check_purification: need at least one sample");
    const auto *h = dynamic_cast<const HilbertModel *>(&model);
    if (h == nullptr) {
        // every pure state of AA is a vertex, and its marginal is a vertex again
        const SystemLabel aa = model.compose(a, a);
        int mixed_marginals = 0;
        for (int k = 0; k < aa.coord_dim; ++k) {
            const RVec v = RVec::Unit(aa.coord_dim, k);
            if (!model.is_pure(a, model.marginal(aa, v, std::vector<int>{0}))) ++mixed_marginals;
        }
        CheckResult r = make("purification", false);
        r.numbers = {{"pure_composite_states", aa.coord_dim}, {"mixed_marginals", mixed_marginals}};
        r.notes = {{"witness", "pure composite states are products, whose marginals are pure"}};
        return r;
    }
    const int d = a.hilbert_dim();
    double marginal_residual = 0.0;
    double connect_residual = 0.0;
    double unitarity_residual = 0.0;
    int impure = 0;
    for (int s = 0; s < samples; ++s) {
        const StateVec rho{a, model.random_state(a, rng)};
        const Purification p = purify(model, rho, d);
        if (!model.is_pure(p.pure.system, p.pure.coords)) ++impure;
        marginal_residual = std::max(
            marginal_residual,
            (model.marginal(p.pure.system, p.pure.coords, std::vector<int>{0}) - rho.coords).cwiseAbs().maxCoeff());
        // an independent purification: (sqrt(rho) (x) I) sum_r |r r>
        CVec other = linalg::psd_sqrt(h->to_matrix(a, rho.coords)).reshaped<Eigen::RowMajor>();
        if (h->is_real()) other = other.real().cast<cplx>();
        const LinearMap prep = model.prepare(rho);
        const Dilation d1 = dilation_from_kraus(model, prep, linalg::kraus_from_isometry(p.psi, d, d));
        const Dilation d2 = dilation_from_kraus(model, prep, linalg::kraus_from_isometry(other, d, d));
        const Connection c = connect_dilations(model, d1, d2);
        connect_residual = std::max(connect_residual, c.residual);
        unitarity_residual =
            std::max(unitarity_residual, linalg::max_abs(c.w.adjoint() * c.w - CMat::Identity(c.w.cols(), c.w.cols())));
    }
    const bool ok = impure == 0 && marginal_residual < 1e-8 && connect_residual < 1e-8 && unitarity_residual < 1e-8;
    CheckResult r = make("purification", ok);
    r.numbers = {{"samples", samples},
                 {"impure", impure},
                 {"marginal_residual", marginal_residual},
                 {"connection_residual", connect_residual},
                 {"unitarity_residual", unitarity_residual}};
    return r;
}

CheckResult check_no_cloning(const TheoryModel &model, const SystemLabel &a, const std::vector<StateVec> &states) {
    if (states.empty()) throw ContractViolation("check_no_cloning: empty state set");
    double worst = 1.0;
    int wi = -1, wj = -1;
    for (size_t i = 0; i < states.size(); ++i) {
        for (size_t j = i + 1; j < states.size(); ++j) {
            const double p = discriminate(model, states[i], states[j], 0.5, 0.5).p_success;
            if (p < worst) {
                worst = p;
                wi = static_cast<int>(i);
                wj = static_cast<int>(j);
            }
        }
    }
    // a perfectly distinguishable set is cloned by measuring and re-preparing
    CheckResult r = make("no_cloning", worst < 1.0 - kTol, "cloneable");
    r.numbers = {{"states", static_cast<double>(states.size())}, {"min_pair_success", worst}};
    if (wi >= 0) {
        r.numbers["pair_i"] = wi;
        r.numbers["pair_j"] = wj;
    }
    r.notes = {{"system", a.describe()}};
    return r;
}

CheckResult check_no_cloning(const TheoryModel &model, const SystemLabel &a) {
    std::vector<StateVec> pure;
    for (const RVec &x : model.spanning_states(a)) {
        if (model.is_pure(a, x)) pure.push_back({a, x});
    }
    return check_no_cloning(model, a, pure);
}

CheckResult check_max_distinguishable(const TheoryModel &model, const SystemLabel &a, int budget, Rng &rng) {
    int found = 0;
    double overlap = 0.0;
    if (const auto *h = dynamic_cast<const HilbertModel *>(&model)) {
        const int d = a.hilbert_dim();
        std::vector<CVec> kept;
        for (int step = 0; step < budget; ++step) {
            CMat q = CMat::Identity(d, d);
            for (const auto &v : kept) q -= linalg::ket_bra(v, v);
            if (linalg::numerical_rank(q) == 0) break;
            CVec v = q * linalg::random_pure(d, rng, h->is_real());
            if (v.norm() < 1e-6) continue;
            v.normalize();
            for (const auto &u : kept) overlap = std::max(overlap, std::abs(u.dot(v)));
            kept.push_back(v);
        }
        found = static_cast<int>(kept.size());
    } else {
        // point masses with disjoint supports, drawn in random order
        std::vector<bool> used(static_cast<size_t>(a.coord_dim), false);
        std::uniform_int_distribution<int> pick(0, a.coord_dim - 1);
        for (int step = 0; step < budget && found < a.coord_dim; ++step) {
            const int k = pick(rng);
            if (used[static_cast<size_t>(k)]) continue;
            used[static_cast<size_t>(k)] = true;
            ++found;
        }
    }
    CheckResult r = make("max_distinguishable", found < a.coord_dim);
    r.numbers = {{"found", found}, {"bound", a.coord_dim}, {"max_overlap", overlap}};
    return r;
}

CheckResult check_no_info_without_disturbance(const TheoryModel &model, const SystemLabel &a,
                                              const std::vector<LinearMap> &instrument) {
    const RMat id = model.identity(a).matrix;
    RMat total = RMat::Zero(id.rows(), id.cols());
    for (const auto &m : instrument) {
        if (m.input != a || m.output != a) throw ContractViolation("check_no_info_without_disturbance: branch is not on A");
        total += m.matrix;
    }
    const double gap = (total - id).cwiseAbs().maxCoeff();
    if (gap > kTol) {
        throw DisturbingInstrument("check_no_info_without_disturbance: instrument does not sum to the identity (residual " +
                                       std::to_string(gap) + ")",
                                   gap);
    }
    const RVec chi = model.invariant_state(a);
    const RVec e = model.deterministic_effect(a);
    double worst = 0.0;
    int witness = -1;
    CheckResult r;
    for (size_t i = 0; i < instrument.size(); ++i) {
        const double c = cosine_distance(instrument[i].matrix, id);
        if (c > worst) {
            worst = c;
            witness = static_cast<int>(i);
        }
        r.numbers["p" + std::to_string(i)] = e.dot(instrument[i](chi));
    }
    const CheckResult base = make("no_info_without_disturbance", worst < 1e-8);
    r.id = base.id;
    r.verdict = base.verdict;
    r.label = base.label;
    r.numbers["max_cosine_distance"] = worst;
    if (witness >= 0 && worst >= 1e-8) r.numbers["informative_branch"] = witness;
    return r;
}

AxiomReport run_battery(TheoryId theory, const std::vector<int> &dims, uint64_t seed, int samples) {
    if (dims.empty() || dims.size() > 2) throw ContractViolation("run_battery: give one or two dimensions");
    const int d1 = dims[0];
    const int d2 = dims.size() > 1 ? dims[1] : dims[0];
    const ModelPtr model = make_model(theory, d1);
    const SystemLabel a = model->atom(d1);
    const SystemLabel b = model->atom(d2);
    Rng rng(seed);
    AxiomReport rep;
    rep.theory = theory;
    rep.dims = {d1, d2};
    rep.seed = seed;
    rep.samples = samples;
    rep.checks.push_back(check_causality(*model, a));
    rep.checks.push_back(check_local_discriminability(*model, a, b));
    rep.checks.push_back(check_purification(*model, a, samples, rng));
    rep.checks.push_back(check_no_cloning(*model, a));
    rep.checks.push_back(check_max_distinguishable(*model, a, samples, rng));
    rep.checks.push_back(check_no_info_without_disturbance(
        *model, a, {scaled_identity(*model, a, 0.3), scaled_identity(*model, a, 0.7)}));
    std::sort(rep.checks.begin(), rep.checks.end(), [](const auto &x, const auto &y) { return x.id < y.id; });
    return rep;
}

std::vector<AxiomReport> run_battery(const std::vector<TheoryId> &theories, const std::vector<int> &dims,
                                     uint64_t seed, int samples) {
    std::vector<AxiomReport> out;
    for (TheoryId t : theories) out.push_back(run_battery(t, dims, seed, samples));
    return out;
}

std::string report_json(const std::vector<AxiomReport> &reports) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto &rep : reports) {
        nlohmann::ordered_json j;
        j["theory"] = to_string(rep.theory);
        j["dims"] = rep.dims;
        j["seed"] = rep.seed;
        j["samples"] = rep.samples;
        nlohmann::ordered_json checks = nlohmann::ordered_json::array();
        for (const auto &c : rep.checks) {
            nlohmann::ordered_json cj;
            cj["id"] = c.id;
            cj["verdict"] = to_string(c.verdict);
            cj["label"] = c.label;
            cj["numbers"] = c.numbers;
            if (!c.notes.empty()) cj["notes"] = c.notes;
            checks.push_back(std::move(cj));
        }
        j["checks"] = std::move(checks);
        arr.push_back(std::move(j));
    }
    nlohmann::ordered_json root;
    root["axioms"] = std::move(arr);
    return root.dump(2) + "\n";
}

std::string report_markdown(const std::vector<AxiomReport> &reports) {
    std::ostringstream os;
    if (reports.empty()) return "";
    os << "| theory | dims |";
    for (const auto &c : reports[0].checks) os << " " << c.id << " |";
    os << "\n|---|---|";
    for (size_t k = 0; k < reports[0].checks.size(); ++k) os << "---|";
    os << "\n";
    for (const auto &rep : reports) {
        os << "| " << to_string(rep.theory) << " | " << rep.dims[0] << "x" << rep.dims[1] << " |";
        for (const auto &c : rep.checks) {
            os << " " << c.label;
            if (c.id == "local_discriminability") {
                os << " (" << c.numbers.at("d_ab") << (c.verdict == Verdict::Holds ? " = " : " != ")
                   << c.numbers.at("product") << ")";
            } else if (c.id == "max_distinguishable") {
                os << " (" << c.numbers.at("found") << " of " << c.numbers.at("bound") << ")";
            }
            os << " |";
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace purelab
