#include <doctest.h>

#include "dnets/hamming.hpp"
#include "dnets/net.hpp"
#include "dnets/structure.hpp"
#include "f5_example.hpp"

using namespace dnets;

TEST_CASE("architecture validation") {
    SUBCASE("the reference three-layer net validates") {
        CHECK(validate_architecture(f5::build_net().architecture()).empty());
    }

    SUBCASE("edges may only join consecutive layers") {
        Architecture arch;
        arch.layers = {{"a"}, {"b"}, {"c"}};
        arch.edges = {{"a", "b"}, {"b", "c"}, {"a", "c"}};
        const auto violations = validate_architecture(arch);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].find("non-consecutive") != std::string::npos);
        CHECK(violations[0].find("(a,c)") != std::string::npos);
    }

    SUBCASE("non-final vertices need outgoing edges") {
        Architecture arch;
        arch.layers = {{"a"}, {"b", "dead"}, {"c"}};
        arch.edges = {{"a", "b"}, {"a", "dead"}, {"b", "c"}};
        const auto violations = validate_architecture(arch);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].find("zero outdegree") != std::string::npos);
        CHECK(violations[0].find("dead") != std::string::npos);
    }

    SUBCASE("empty layers, duplicate vertices, unknown endpoints, duplicate edges") {
        Architecture arch;
        arch.layers = {{"a"}, {}};
        CHECK(!validate_architecture(arch).empty());

        Architecture dup;
        dup.layers = {{"a"}, {"a"}};
        dup.edges = {{"a", "a"}};
        bool found = false;
        for (const auto& v : validate_architecture(dup))
            found |= v.find("more than one position") != std::string::npos;
        CHECK(found);

        Architecture dangling;
        dangling.layers = {{"a"}, {"b"}};
        dangling.edges = {{"a", "b"}, {"a", "ghost"}};
        found = false;
        for (const auto& v : validate_architecture(dangling))
            found |= v.find("ghost") != std::string::npos;
        CHECK(found);

        Architecture doubled;
        doubled.layers = {{"a"}, {"b"}};
        doubled.edges = {{"a", "b"}, {"a", "b"}};
        found = false;
        for (const auto& v : validate_architecture(doubled))
            found |= v.find("duplicate edge") != std::string::npos;
        CHECK(found);
    }
}

TEST_CASE("the reference net matches its closed form on all 125 inputs") {
    const NeuralNet net = f5::build_net();
    CHECK(net.evaluate({1, 0, 0}) == std::vector<Value>{4, 2});
    for (Value x1 = 0; x1 < 5; ++x1)
        for (Value x2 = 0; x2 < 5; ++x2)
            for (Value x3 = 0; x3 < 5; ++x3) {
                const auto expected = f5::closed_form(x1, x2, x3);
                const auto got = net.evaluate({x1, x2, x3});
                REQUIRE(got.size() == 2);
                CHECK(got[0] == expected[0]);
                CHECK(got[1] == expected[1]);
            }
}

TEST_CASE("a single-layer net is the identity") {
    Architecture arch;
    arch.layers = {{"x", "y"}};
    const NeuralNet net(arch, Universe::table(7), {});
    CHECK(net.evaluate({3, 5}) == std::vector<Value>{3, 5});
    CHECK(net.evaluate({0, 6}) == std::vector<Value>{0, 6});
}

TEST_CASE("a nullary output coordinate ignores the input") {
    const Universe u5 = Universe::table(5);
    Architecture arch;
    arch.layers = {{"x"}, {"y1", "y2"}};
    arch.edges = {{"x", "y1"}};
    std::map<std::string, Operation> act;
    act.emplace("y1", project(1, 1, u5));
    act.emplace("y2", constant_operation(u5, 3));
    const NeuralNet net(arch, u5, std::move(act));
    for (Value x = 0; x < 5; ++x) CHECK(net.evaluate({x}) == std::vector<Value>{x, 3});
}

TEST_CASE("evaluation errors") {
    const NeuralNet net = f5::build_net();
    CHECK_THROWS_AS(net.evaluate({1, 2}), ParameterError);

    Architecture bad;
    bad.layers = {{"a"}, {"b"}};
    bad.edges = {};
    CHECK_THROWS_AS(NeuralNet(bad, Universe::table(5), {}), ParameterError);
}

TEST_CASE("activation replacement is functional") {
    const NeuralNet net = f5::build_net();
    const Universe u5 = Universe::table(5);

    SUBCASE("replacing the nullary constant changes only its term") {
        const NeuralNet patched = net.with_activation("v_2_4", constant_operation(u5, 0));
        for (Value x1 = 0; x1 < 5; ++x1)
            for (Value x2 = 0; x2 < 5; ++x2)
                for (Value x3 = 0; x3 < 5; ++x3) {
                    const long long t = static_cast<long long>(x1) - x2 + x3;
                    const auto got = patched.evaluate({x1, x2, x3});
                    CHECK(got[0] == f5::closed_form(x1, x2, x3)[0]);
                    CHECK(got[1] == f5::mod5(t * (-static_cast<long long>(x3))));
                    // the original net is untouched
                    CHECK(net.evaluate({x1, x2, x3})[1] == f5::closed_form(x1, x2, x3)[1]);
                }
    }

    SUBCASE("replacing an activation with itself changes nothing") {
        const NeuralNet same = net.with_activation("v_2_1", linear_mod_p_operation(5, {-1}));
        for (Value x = 0; x < 5; ++x) {
            CHECK(same.evaluate({x, 1, 2}) == net.evaluate({x, 1, 2}));
        }
    }

    SUBCASE("contract violations") {
        CHECK_THROWS_AS(net.with_activation("v_1_1", project(1, 1, u5)), ParameterError);
        CHECK_THROWS_AS(net.with_activation("v_2_1", linear_mod_p_operation(5, {1, 1})),
                        ParameterError);
        CHECK_THROWS_AS(net.with_activation("v_2_1", project(1, 1, Universe::table(3))),
                        ParameterError);
        CHECK_THROWS_AS(net.with_activation("nope", project(1, 1, u5)), ParameterError);
    }
}

TEST_CASE("net serialization round-trips") {
    const NeuralNet net = f5::build_net();
    const nlohmann::json doc = net.to_json();
    const NeuralNet back = NeuralNet::from_json(doc);

    CHECK(back.to_json().at("layers") == doc.at("layers"));
    CHECK(back.to_json().at("edges") == doc.at("edges"));
    for (Value x1 = 0; x1 < 5; ++x1)
        for (Value x2 = 0; x2 < 5; ++x2)
            for (Value x3 = 0; x3 < 5; ++x3)
                CHECK(back.evaluate({x1, x2, x3}) == net.evaluate({x1, x2, x3}));
}

TEST_CASE("net deserialization reports the fault") {
    const nlohmann::json good = f5::build_net().to_json();

    SUBCASE("empty layer") {
        nlohmann::json doc = good;
        doc["layers"].push_back(nlohmann::json::array());
        CHECK_THROWS_AS(NeuralNet::from_json(doc), IoError);
    }
    SUBCASE("unknown operation family is named") {
        nlohmann::json doc = good;
        doc["activations"]["v_2_1"]["family"] = "warp";
        try {
            NeuralNet::from_json(doc);
            FAIL("expected IoError");
        } catch (const IoError& e) {
            CHECK(std::string(e.what()).find("warp") != std::string::npos);
        }
    }
    SUBCASE("dangling edge endpoint") {
        nlohmann::json doc = good;
        doc["edges"].push_back({"v_1_1", "v_9_9"});
        CHECK_THROWS_AS(NeuralNet::from_json(doc), IoError);
    }
    SUBCASE("arity mismatch between indegree and activation") {
        nlohmann::json doc = good;
        doc["activations"]["v_2_1"] = linear_mod_p_operation(5, {1, 1}).to_json();
        CHECK_THROWS_AS(NeuralNet::from_json(doc), IoError);
    }
    SUBCASE("missing activation") {
        nlohmann::json doc = good;
        doc["activations"].erase("v_2_1");
        CHECK_THROWS_AS(NeuralNet::from_json(doc), IoError);
    }
}

TEST_CASE("updates are layer-local: untouched chains keep their outputs") {
    const Universe u3 = Universe::table(3);
    Architecture arch;
    arch.layers = {{"x1", "x2"}, {"h1", "h2"}, {"y1", "y2"}};
    arch.edges = {{"x1", "h1"}, {"x2", "h2"}, {"h1", "y1"}, {"h2", "y2"}};
    std::map<std::string, Operation> act;
    act.emplace("h1", project(1, 1, u3));
    act.emplace("h2", project(1, 1, u3));
    act.emplace("y1", project(1, 1, u3));
    act.emplace("y2", project(1, 1, u3));
    const NeuralNet net(arch, u3, std::move(act));

    const Operation negate = table_operation(u3, 1, {2, 1, 0});
    const NeuralNet patched = net.with_activation("h1", negate);
    for (Value a = 0; a < 3; ++a)
        for (Value b = 0; b < 3; ++b) {
            CHECK(patched.evaluate({a, b})[1] == net.evaluate({a, b})[1]);
            CHECK(patched.evaluate({a, b})[0] == negate({a}));
        }
}

TEST_CASE("polymorphic activations give polymorphic output coordinates") {
    const Structure ham2 = hamming_structure(2);
    const Universe u = Universe::images(2);
    const auto basis = standard_basis(2);

    Architecture arch;
    arch.layers = {{"a", "b"}, {"m", "c"}, {"out"}};
    arch.edges = {{"a", "m"}, {"b", "m"}, {"b", "c"}, {"m", "out"}, {"c", "out"}};
    std::map<std::string, Operation> act;
    act.emplace("m", multilinear_indicator(basis[1], {basis[0], basis[3]}));
    act.emplace("c", dihedral_endo(Dihedral::r, 2));
    act.emplace("out", multilinear_indicator(basis[2], {basis[1], basis[2]}));
    const NeuralNet net(arch, u, std::move(act));

    for (const auto& id : net.non_input_vertices())
        REQUIRE(is_polymorphism(net.activation(id), ham2, CheckMode::exhaustive()).verdict);
    for (int j = 0; j < net.output_size(); ++j) {
        const auto witness = is_polymorphism(net.output_coordinate_op(j), ham2,
                                             CheckMode::exhaustive());
        CHECK(witness.verdict);
    }
}
