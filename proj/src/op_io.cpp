// Descriptor -> Operation dispatch for every serializable family.

#include "dnets/dominion.hpp"
#include "dnets/hamming.hpp"
#include "dnets/operation.hpp"
#include "detail.hpp"

namespace dnets {

using nlohmann::json;

namespace {

Operation parse(const json& doc);

Operation parse_projection(const json& params, const Universe& universe, int arity) {
    const int n = params.at("n").get<int>();
    const int k = params.at("k").get<int>();
    if (n != arity) throw IoError("projection descriptor: arity and n disagree");
    if (params.contains("k_zero_based") && params.at("k_zero_based").get<int>() != k - 1)
        throw IoError("projection descriptor: the two index conventions disagree");
    return project(n, k, universe);
}

Operation parse_twist(const json& params, int arity) {
    const Operation core = parse(params.at("core"));
    if (core.arity() != arity) throw IoError("twist descriptor: core arity mismatch");
    std::vector<std::vector<Operation>> pre;
    for (const auto& chain_doc : params.at("pre")) {
        std::vector<Operation> chain;
        for (const auto& desc : chain_doc) chain.push_back(parse(desc));
        pre.push_back(std::move(chain));
    }
    std::vector<Operation> post;
    for (const auto& desc : params.at("post")) post.push_back(parse(desc));
    return twist_operation(core, std::move(pre), std::move(post));
}

Operation parse_dominion(const json& params) {
    const int k = params.at("k").get<int>();
    const int n = params.at("n").get<int>();
    const int label_count = params.at("label_count").get<int>();
    Dominion D(k, n, label_count, params.at("labels").get<std::vector<int>>());
    LabelAssignment alpha;
    for (const auto& img : params.at("alpha")) alpha.push_back(detail::image_from_json(img));
    return dominion_polymorphism(D, alpha);
}

Operation parse(const json& doc) {
    const auto family = doc.at("family").get<std::string>();
    const int arity = doc.at("arity").get<int>();
    const Universe universe = Universe::from_json(doc.at("universe"));
    const json& params = doc.at("params");

    if (family == "projection") return parse_projection(params, universe, arity);
    if (family == "table")
        return table_operation(universe, arity, params.at("values").get<std::vector<Value>>());
    if (family == "constant") {
        if (universe.kind() == Universe::Kind::images)
            return constant_operation(universe,
                                      detail::image_from_json(params.at("value")).bits());
        return constant_operation(universe, params.at("value").get<Value>());
    }
    if (family == "linear_mod_p")
        return linear_mod_p_operation(params.at("p").get<int>(),
                                      params.at("coeffs").get<std::vector<int>>());
    if (family == "compose") {
        const Operation outer = parse(params.at("outer"));
        std::vector<Operation> inner;
        for (const auto& desc : params.at("inner")) inner.push_back(parse(desc));
        return compose(outer, inner);
    }
    if (family == "dihedral")
        return dihedral_endo(dihedral_from_name(params.at("sigma").get<std::string>()),
                             params.at("n").get<int>());
    if (family == "swap") return swap_endo(detail::image_from_json(params.at("mask")));
    if (family == "blank") return blank_endo(detail::image_from_json(params.at("mask")));
    if (family == "indicator") {
        const BinaryImage b = detail::image_from_json(params.at("b"));
        std::vector<BinaryImage> c;
        for (const auto& img : params.at("c")) c.push_back(detail::image_from_json(img));
        return multilinear_indicator(b, c);
    }
    if (family == "twist") return parse_twist(params, arity);
    if (family == "dominion") return parse_dominion(params);
    if (family == "bitwise_and") return bitwise_and_operation(universe.side(), arity);

    throw IoError("unknown operation family '" + family + "'");
}

void check_declared_shape(const Operation& op, const json& doc) {
    if (op.arity() != doc.at("arity").get<int>())
        throw IoError("descriptor for family '" + op.family() +
                      "' declares the wrong arity");
    if (!(op.universe() == Universe::from_json(doc.at("universe"))))
        throw IoError("descriptor for family '" + op.family() +
                      "' declares the wrong universe");
}

}  // namespace

Operation Operation::from_json(const json& doc) {
    try {
        Operation op = parse(doc);
        check_declared_shape(op, doc);
        return op;
    } catch (const json::exception& e) {
        throw IoError(std::string("operation descriptor: ") + e.what());
    } catch (const ParameterError& e) {
        throw IoError(std::string("operation descriptor: ") + e.what());
    }
}

}  // namespace dnets
