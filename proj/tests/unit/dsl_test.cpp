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


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "purelab/dsl.hpp"
#include "purelab/serialize.hpp"
#include "purelab/standard.hpp"

namespace purelab::dsl {
namespace {

std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

TEST(DslParse, ThreeBoxChain) {
    Script s = parse_script("prep r:A; box C:A->B; eff a:B");
    ASSERT_EQ(s.statements.size(), 3u);
    const auto &c = std::get<Decl>(s.statements[1]);
    EXPECT_EQ(c.kind, BoxKind::Map);
    EXPECT_EQ(c.first.parts, std::vector<std::string>{"A"});
    ASSERT_TRUE(c.second.has_value());
    EXPECT_EQ(c.second->parts, std::vector<std::string>{"B"});
    EXPECT_FALSE(c.source.has_value());
}

TEST(DslParse, MalformedWireTypeReportsPosition) {
    try {
        parse_script("prep r : A\nbox C : A -> * B\n");
        FAIL() << "expected a syntax error";
    } catch (const SyntaxError &e) {
        EXPECT_EQ(e.pos.line, 2);
        EXPECT_EQ(e.pos.col, 14);
    }
}

TEST(DslParse, ErrorCategoriesAreDistinct) {
    EXPECT_THROW(parse_script("prep r : A = file(\"x.json)"), LexError);
    EXPECT_THROW(parse_script("prep r : A $"), LexError);
    EXPECT_THROW(parse_script("prep : A"), SyntaxError);
    EXPECT_THROW(parse_script("run = a . b"), SyntaxError);
    EXPECT_THROW(parse_script(""), SyntaxError);
    auto q = quantum_model(2);
    Environment env{q, {}, {}, "."};
    EXPECT_THROW(build_program(parse_script("prep r : A = zero\nrun p = r . s"), env), TypeError);
    EXPECT_THROW(build_program(parse_script("prep r : A = zero\neff a : A * A = unit\nrun p = r . a"), env), TypeError);
    EXPECT_THROW(build_program(parse_script("box c : A -> A = nonsense"), env), TypeError);
    EXPECT_THROW(build_program(parse_script("box c : A = bitflip"), env), TypeError);
    EXPECT_THROW(build_program(parse_script("prep r : A -> A = zero"), env), TypeError);
}

TEST(DslParse, LexErrorPosition) {
    try {
        parse_script("prep r : A = zero\n  ? ");
        FAIL();
    } catch (const LexError &e) {
        EXPECT_EQ(e.pos.line, 2);
        EXPECT_EQ(e.pos.col, 3);
        EXPECT_NE(std::string(e.what()).find("2:3"), std::string::npos);
    }
}

TEST(DslPrint, TeleportationRoundTrip) {
    const std::string text = read_file(std::filesystem::path(PURELAB_TEST_DATA) / "scripts" / "teleport.circ");
    Script s = parse_script(text);
    int boxes = 0;
    for (const auto &st : s.statements) boxes += std::holds_alternative<Decl>(st);
    EXPECT_EQ(boxes, 6);
    const std::string canonical = print_script(s);
    EXPECT_EQ(parse_script(canonical), s);
    EXPECT_EQ(print_script(parse_script(canonical)), canonical);
}

TEST(DslPrint, ArgumentsRoundTripExactly) {
    Script s = parse_script("box c : A = depolarize(0.1)\nbox d : A = bitflip(1e-3)");
    Script again = parse_script(print_script(s));
    EXPECT_EQ(std::get<Decl>(again.statements[0]).source->args[0], 0.1);
    EXPECT_EQ(std::get<Decl>(again.statements[1]).source->args[0], 1e-3);
}

TEST(DslBuild, ExternalPayloadsAndFiles) {
    auto q = quantum_model(2);
    auto a = q->atom();
    const auto dir = std::filesystem::temp_directory_path() / "purelab_dsl_test";
    std::filesystem::create_directories(dir);
    save_payload_file(kraus_payload(a, a, standard::amplitude_damping_kraus(0.4)), (dir / "damp.json").string());
    save_payload_file(payload_of(standard::basis_state(*q, a, 1)), (dir / "one.json").string());
    Environment env{q, {}, {}, dir.string()};
    env.payloads.emplace("ground", q->observe(standard::basis_effect(*q, a, 0)));
    Program p = build_program(parse_script("prep r : A = file(\"one.json\")\n"
                                           "box d : A = kraus(\"damp.json\")\n"
                                           "eff ground : A\n"
                                           "run decay = r . d . ground\n"),
                              env);
    EXPECT_NEAR(std::get<double>(p.run("decay").evaluate()), 0.4, 1e-14);
    EXPECT_THROW(build_program(parse_script("box d : A = kraus(\"one.json\")"), env), TypeError);
    std::filesystem::remove_all(dir);
}

TEST(DslBuild, SystemBindings) {
    auto q = quantum_model(2);
    Environment env{q, {{"Q", q->atom(3)}}, {}, "."};
    Program p = build_program(parse_script("prep r : Q = basis(2)\neff a : Q = basis(2)\nrun x = r . a"), env);
    EXPECT_NEAR(std::get<double>(p.run("x").evaluate()), 1.0, 1e-14);
}

// Every script in the corpus parses, round-trips and evaluates to the values in
// its "# expect <run> <value>" comments.
TEST(DslCorpus, ScriptsEvaluateToExpectedValues) {
    int count = 0;
    for (const auto &entry : std::filesystem::directory_iterator(std::filesystem::path(PURELAB_TEST_DATA) / "scripts")) {
        if (entry.path().extension() != ".circ") continue;
        ++count;
        SCOPED_TRACE(entry.path().filename().string());
        const std::string text = read_file(entry.path());
        Script s = parse_script(text);
        EXPECT_EQ(parse_script(print_script(s)), s);
        TheoryId theory = TheoryId::Quantum;
        std::vector<std::pair<std::string, double>> expected;
        std::istringstream lines(text);
        for (std::string line; std::getline(lines, line);) {
            std::istringstream words(line);
            std::string hash, key;
            words >> hash >> key;
            if (hash != "#") continue;
            if (key == "theory") {
                std::string name;
                words >> name;
                theory = theory_from_string(name);
            } else if (key == "expect") {
                std::string run;
                double value;
                words >> run >> value;
                expected.emplace_back(run, value);
            }
        }
        ASSERT_FALSE(expected.empty());
        Program p = build_program(s, {make_model(theory, 2), {}, {}, entry.path().parent_path().string()});
        for (const auto &[run, value] : expected) {
            EXPECT_NEAR(std::get<double>(p.run(run).evaluate()), value, 1e-12) << run;
        }
    }
    EXPECT_EQ(count, 10);
}

}  // namespace
}  // namespace purelab::dsl
