#include "dnets/operation.hpp"

#include <algorithm>
#include <optional>
#include <utility>

#include "dnets/rng.hpp"
#include "detail.hpp"

namespace dnets {

using nlohmann::json;

Operation Operation::make(int arity, Universe universe, json descriptor,
                          std::function<Value(std::span<const Value>)> eval) {
    if (arity < 0) throw ParameterError("operation arity must be nonnegative");
    auto impl = std::make_shared<Impl>(
        Impl{arity, universe, std::move(descriptor), std::move(eval)});
    return Operation(std::move(impl));
}

Value Operation::apply(std::span<const Value> args) const {
    if (!impl_) throw ParameterError("applying an empty operation");
    if (static_cast<int>(args.size()) != impl_->arity)
        throw ParameterError("operation '" + family() + "' has arity " +
                             std::to_string(impl_->arity) + ", got " +
                             std::to_string(args.size()) + " arguments");
    return impl_->eval(args);
}

Operation project(int n, int k, const Universe& universe) {
    if (n < 1) throw ParameterError("projection arity must be positive");
    if (k < 1 || k > n)
        throw ParameterError("projection index k=" + std::to_string(k) +
                             " outside [1," + std::to_string(n) + "]");
    // pi_{n,k} is 1-indexed; descriptors carry both conventions.
    json params = {{"n", n}, {"k", k}, {"k_zero_based", k - 1}};
    const int index = k - 1;
    return Operation::make(n, universe, detail::make_descriptor("projection", n, universe, params),
                           [index](std::span<const Value> args) { return args[index]; });
}

Operation compose(const Operation& f, std::span<const Operation> gs) {
    if (!f.valid()) throw ParameterError("compose: empty outer operation");
    if (static_cast<int>(gs.size()) != f.arity())
        throw ParameterError("compose: outer arity " + std::to_string(f.arity()) +
                             " != inner count " + std::to_string(gs.size()));
    if (gs.empty())
        throw ParameterError("compose: nullary outer operation leaves the arity undetermined");
    const int inner_arity = gs.front().arity();
    json inner_descs = json::array();
    for (const auto& g : gs) {
        if (!g.valid()) throw ParameterError("compose: empty inner operation");
        if (g.arity() != inner_arity)
            throw ParameterError("compose: inner operations disagree on arity");
        if (!(g.universe() == f.universe()))
            throw ParameterError("compose: universe mismatch between outer and inner operations");
        inner_descs.push_back(g.to_json());
    }
    json params = {{"outer", f.to_json()}, {"inner", std::move(inner_descs)}};
    std::vector<Operation> inner(gs.begin(), gs.end());
    Operation outer = f;
    return Operation::make(
        inner_arity, f.universe(),
        detail::make_descriptor("compose", inner_arity, f.universe(), std::move(params)),
        [outer, inner = std::move(inner)](std::span<const Value> args) {
            std::vector<Value> mid(inner.size());
            for (std::size_t i = 0; i < inner.size(); ++i) mid[i] = inner[i].apply(args);
            return outer.apply(mid);
        });
}

Operation compose(const Operation& f, const std::vector<Operation>& gs) {
    return compose(f, std::span<const Operation>(gs));
}

Operation table_operation(const Universe& universe, int arity, std::vector<Value> values) {
    if (universe.kind() != Universe::Kind::table)
        throw ParameterError("table operations require a table universe");
    const auto m = universe.cardinality();
    if (m > kTableUniverseCeiling)
        throw ParameterError("table backing is reserved for universes of at most " +
                             std::to_string(kTableUniverseCeiling) + " elements");
    const std::uint64_t entries = detail::checked_pow(m, arity, kTableEntryCeiling);
    if (entries > kTableEntryCeiling)
        throw ParameterError("table with " + std::to_string(m) + "^" + std::to_string(arity) +
                             " entries exceeds the storage ceiling");
    if (values.size() != entries)
        throw ParameterError("table has " + std::to_string(values.size()) +
                             " entries, expected " + std::to_string(entries));
    for (Value v : values)
        if (!universe.contains(v))
            throw ParameterError("table entry " + std::to_string(v) + " outside the universe");
    json params = {{"values", values}};
    auto shared = std::make_shared<const std::vector<Value>>(std::move(values));
    return Operation::make(
        arity, universe,
        detail::make_descriptor("table", arity, universe, std::move(params)),
        [shared, m](std::span<const Value> args) {
            std::uint64_t index = 0;
            for (Value a : args) index = index * m + a;
            return (*shared)[index];
        });
}

Operation table_operation_from(const Universe& universe, int arity,
                               const std::function<Value(std::span<const Value>)>& fn) {
    std::vector<Value> values;
    detail::for_each_tuple(arity, universe.cardinality(),
                           [&](std::span<const Value> t) { values.push_back(fn(t)); });
    return table_operation(universe, arity, std::move(values));
}

Operation constant_operation(const Universe& universe, Value value) {
    if (!universe.contains(value))
        throw ParameterError("constant " + std::to_string(value) + " outside the universe");
    json encoded;
    if (universe.kind() == Universe::Kind::images)
        encoded = detail::image_to_json(BinaryImage(universe.side(), value));
    else
        encoded = value;
    return Operation::make(0, universe,
                           detail::make_descriptor("constant", 0, universe, {{"value", encoded}}),
                           [value](std::span<const Value>) { return value; });
}

Operation linear_mod_p_operation(int p, std::vector<int> coeffs) {
    if (p < 2) throw ParameterError("linear form modulus must be at least 2");
    const Universe universe = Universe::table(p);
    std::vector<Value> normalized;
    normalized.reserve(coeffs.size());
    for (int c : coeffs) {
        int r = c % p;
        if (r < 0) r += p;
        normalized.push_back(static_cast<Value>(r));
    }
    const int arity = static_cast<int>(normalized.size());
    json params = {{"p", p}, {"coeffs", normalized}};
    return Operation::make(
        arity, universe,
        detail::make_descriptor("linear_mod_p", arity, universe, std::move(params)),
        [normalized, p](std::span<const Value> args) {
            std::uint64_t acc = 0;
            for (std::size_t i = 0; i < normalized.size(); ++i)
                acc += normalized[i] * args[i] % p;
            return static_cast<Value>(acc % p);
        });
}

bool is_identity_endo(const Operation& op) {
    if (!op.valid() || op.arity() != 1) return false;
    const std::string family = op.family();
    if (family == "projection") return true;  // arity 1 forces pi_{1,1}
    if (family == "dihedral") return op.params().at("sigma").get<std::string>() == "e";
    if (family == "swap" || family == "blank") {
        const BinaryImage mask = detail::image_from_json(op.params().at("mask"));
        return family == "swap" ? mask.bits() == 0
                                : mask.weight() == mask.side() * mask.side();
    }
    return false;
}

// Implemented in hamming.cpp against the fixed D4 table.
std::string compose_dihedral_names(const std::string& sigma, const std::string& tau);

namespace {

// Merge adjacent same-family endomorphisms and drop identities. Chains apply
// left to right: h then g collapses to the single endomorphism g o h.
std::vector<Operation> simplify_chain(std::vector<Operation> chain) {
    std::vector<Operation> out;
    auto fuse = [](const Operation& first, const Operation& second) -> std::optional<Operation> {
        if (first.family() != second.family()) return std::nullopt;
        const std::string family = first.family();
        nlohmann::json desc = first.to_json();
        if (family == "dihedral") {
            // "first then second" composes left to right.
            desc["params"]["sigma"] = compose_dihedral_names(
                first.params().at("sigma").get<std::string>(),
                second.params().at("sigma").get<std::string>());
        } else if (family == "swap" || family == "blank") {
            const BinaryImage a = detail::image_from_json(first.params().at("mask"));
            const BinaryImage b = detail::image_from_json(second.params().at("mask"));
            if (a.side() != b.side()) return std::nullopt;
            const BinaryImage merged(
                a.side(), family == "swap" ? (a.bits() ^ b.bits()) : (a.bits() & b.bits()));
            desc["params"]["mask"] = detail::image_to_json(merged);
        } else {
            return std::nullopt;
        }
        return Operation::from_json(desc);
    };
    for (auto& op : chain) {
        if (is_identity_endo(op)) continue;
        if (!out.empty()) {
            if (auto merged = fuse(out.back(), op)) {
                out.pop_back();
                if (!is_identity_endo(*merged)) out.push_back(std::move(*merged));
                continue;
            }
        }
        out.push_back(std::move(op));
    }
    return out;
}

}  // namespace

Operation twist_operation(const Operation& core, std::vector<std::vector<Operation>> pre,
                          std::vector<Operation> post) {
    if (!core.valid()) throw ParameterError("twist: empty core operation");
    if (static_cast<int>(pre.size()) != core.arity())
        throw ParameterError("twist: need one pre-chain per argument");
    const Universe& universe = core.universe();
    auto check_endo = [&universe](const Operation& h) {
        if (h.arity() != 1) throw ParameterError("twist: chain members must be unary");
        if (!(h.universe() == universe)) throw ParameterError("twist: universe mismatch");
    };
    for (const auto& chain : pre)
        for (const auto& h : chain) check_endo(h);
    for (const auto& h : post) check_endo(h);

    Operation base = core;
    // Flatten a twist of a twist: outer pre runs before inner pre, inner post
    // before outer post.
    if (core.family() == "twist") {
        const json& p = core.params();
        base = Operation::from_json(p.at("core"));
        std::vector<std::vector<Operation>> merged_pre(pre.size());
        for (std::size_t i = 0; i < pre.size(); ++i) {
            merged_pre[i] = std::move(pre[i]);
            for (const auto& desc : p.at("pre").at(i))
                merged_pre[i].push_back(Operation::from_json(desc));
        }
        std::vector<Operation> merged_post;
        for (const auto& desc : p.at("post")) merged_post.push_back(Operation::from_json(desc));
        for (auto& h : post) merged_post.push_back(std::move(h));
        pre = std::move(merged_pre);
        post = std::move(merged_post);
    }

    for (auto& chain : pre) chain = simplify_chain(std::move(chain));
    post = simplify_chain(std::move(post));

    const bool trivial =
        post.empty() &&
        std::all_of(pre.begin(), pre.end(), [](const auto& chain) { return chain.empty(); });
    if (trivial) return base;

    json pre_doc = json::array();
    for (const auto& chain : pre) {
        json chain_doc = json::array();
        for (const auto& h : chain) chain_doc.push_back(h.to_json());
        pre_doc.push_back(std::move(chain_doc));
    }
    json post_doc = json::array();
    for (const auto& h : post) post_doc.push_back(h.to_json());
    json params = {{"core", base.to_json()}, {"pre", std::move(pre_doc)},
                   {"post", std::move(post_doc)}};

    return Operation::make(
        base.arity(), universe,
        detail::make_descriptor("twist", base.arity(), universe, std::move(params)),
        [base, pre = std::move(pre), post = std::move(post)](std::span<const Value> args) {
            std::vector<Value> twisted(args.begin(), args.end());
            for (std::size_t i = 0; i < pre.size(); ++i)
                for (const auto& h : pre[i]) twisted[i] = h.apply({&twisted[i], 1});
            Value out = base.apply(twisted);
            for (const auto& h : post) out = h.apply({&out, 1});
            return out;
        });
}

bool extensionally_equal(const Operation& a, const Operation& b, std::uint64_t ceiling,
                         int samples, std::uint64_t seed) {
    if (a.arity() != b.arity() || !(a.universe() == b.universe())) return false;
    const std::uint64_t card = a.universe().cardinality();
    const std::uint64_t space = detail::checked_pow(card, a.arity(), ceiling);
    bool equal = true;
    if (space <= ceiling) {
        detail::for_each_tuple(a.arity(), card, [&](std::span<const Value> t) {
            if (equal && a.apply(t) != b.apply(t)) equal = false;
        });
        return equal;
    }
    Rng rng(seed, stream_id("extensional-equality"));
    std::vector<Value> args(a.arity());
    for (int i = 0; i < samples; ++i) {
        for (auto& v : args) v = rng.below(card);
        if (a.apply(args) != b.apply(args)) return false;
    }
    return true;
}

void check_total(const Operation& op, std::uint64_t ceiling, int samples, std::uint64_t seed) {
    const std::uint64_t card = op.universe().cardinality();
    auto probe = [&](std::span<const Value> args) {
        const Value out = op.apply(args);
        if (!op.universe().contains(out))
            throw ParameterError("operation '" + op.family() + "' left the universe: value " +
                                 std::to_string(out));
    };
    const std::uint64_t space = detail::checked_pow(card, op.arity(), ceiling);
    if (space <= ceiling) {
        detail::for_each_tuple(op.arity(), card, probe);
        return;
    }
    Rng rng(seed, stream_id("totality"));
    std::vector<Value> args(op.arity());
    for (int i = 0; i < samples; ++i) {
        for (auto& v : args) v = rng.below(card);
        probe(args);
    }
}

}  // namespace dnets
