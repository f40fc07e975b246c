#include "dnets/structure.hpp"

#include <algorithm>

#include "detail.hpp"

namespace dnets {

Structure::Structure(Universe universe, std::vector<Relation> relations,
                     std::vector<std::pair<std::string, Operation>> operations)
    : universe_(universe), relations_(std::move(relations)), operations_(std::move(operations)) {
    for (const auto& rel : relations_) {
        if (rel.arity < 1) throw ParameterError("relation '" + rel.name + "' needs arity >= 1");
        if (!rel.contains)
            throw ParameterError("relation '" + rel.name + "' needs a membership predicate");
        if (rel.for_each && !rel.tuple_count)
            throw ParameterError("relation '" + rel.name + "' enumerates without a tuple count");
    }
    for (const auto& [name, op] : operations_)
        if (!(op.universe() == universe_))
            throw ParameterError("operation '" + name + "' lives on a different universe");
}

const Relation& Structure::relation(const std::string& name) const {
    for (const auto& rel : relations_)
        if (rel.name == name) return rel;
    throw ParameterError("no relation named '" + name + "'");
}

std::vector<Value> enumerate_universe(const Universe& u, std::uint64_t ceiling) {
    const std::uint64_t card = u.cardinality();
    if (card > ceiling)
        throw EnumerationLimitError("universe " + u.describe() + " has " + std::to_string(card) +
                                    " elements, above the ceiling of " + std::to_string(ceiling));
    std::vector<Value> all(card);
    for (std::uint64_t i = 0; i < card; ++i) all[i] = i;
    return all;
}

namespace {

// Materialize a relation's tuples, honoring the ceiling.
std::vector<std::vector<Value>> materialize(const Universe& universe, const Relation& rel,
                                            std::uint64_t ceiling) {
    std::vector<std::vector<Value>> tuples;
    if (rel.for_each) {
        if (*rel.tuple_count > ceiling)
            throw EnumerationLimitError("relation '" + rel.name + "' has " +
                                        std::to_string(*rel.tuple_count) +
                                        " tuples, above the ceiling of " + std::to_string(ceiling) +
                                        "; use a sampled check");
        tuples.reserve(*rel.tuple_count);
        rel.for_each([&](std::span<const Value> t) {
            tuples.emplace_back(t.begin(), t.end());
        });
        return tuples;
    }
    const std::uint64_t space = detail::checked_pow(universe.cardinality(), rel.arity, ceiling);
    if (space > ceiling)
        throw EnumerationLimitError("relation '" + rel.name +
                                    "' cannot be materialized: the search space exceeds " +
                                    std::to_string(ceiling) + "; use a sampled check");
    detail::for_each_tuple(rel.arity, universe.cardinality(), [&](std::span<const Value> t) {
        if (rel.contains(t)) tuples.emplace_back(t.begin(), t.end());
    });
    return tuples;
}

std::vector<Value> sample_relation_tuple(const Universe& universe, const Relation& rel, Rng& rng) {
    if (rel.sample) return rel.sample(rng);
    // Rejection fallback for small predicates without a dedicated sampler.
    std::vector<Value> t(rel.arity);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        for (auto& v : t) v = rng.below(universe.cardinality());
        if (rel.contains(t)) return t;
    }
    throw ParameterError("relation '" + rel.name +
                         "' has no sampler and rejection sampling found no tuple");
}

HomWitness relation_violation(const Relation& rel, std::vector<std::vector<Value>> args,
                              std::vector<Value> outputs, bool sampled, std::string detail_text) {
    HomWitness witness;
    witness.verdict = false;
    witness.sampled = sampled;
    witness.counterexample = Counterexample{rel.name, std::move(args), std::move(outputs),
                                            std::move(detail_text)};
    return witness;
}

}  // namespace

std::vector<std::vector<Value>> Structure::relation_tuples(const std::string& name,
                                                           std::uint64_t ceiling) const {
    return materialize(universe_, relation(name), ceiling);
}

HomWitness is_homomorphism(const std::function<Value(Value)>& h, const Structure& A,
                           const Structure& B, const CheckMode& mode) {
    // Signature match: same relation and operation names with equal arities.
    auto signature_error = [](const std::string& what) {
        throw ParameterError("signature mismatch: " + what);
    };
    if (A.relations().size() != B.relations().size()) signature_error("relation counts differ");
    for (const auto& rel : A.relations()) {
        const auto it =
            std::find_if(B.relations().begin(), B.relations().end(),
                         [&](const Relation& r) { return r.name == rel.name; });
        if (it == B.relations().end()) signature_error("relation '" + rel.name + "' missing in B");
        if (it->arity != rel.arity) signature_error("relation '" + rel.name + "' arity differs");
    }
    if (A.operations().size() != B.operations().size()) signature_error("operation counts differ");
    for (const auto& [name, op] : A.operations()) {
        const auto it = std::find_if(B.operations().begin(), B.operations().end(),
                                     [&](const auto& p) { return p.first == name; });
        if (it == B.operations().end()) signature_error("operation '" + name + "' missing in B");
        if (it->second.arity() != op.arity()) signature_error("operation '" + name +
                                                              "' arity differs");
    }

    const bool sampled = mode.kind == CheckMode::Kind::sampled;
    HomWitness witness;
    witness.sampled = sampled;

    // Relation preservation.
    for (const auto& rel : A.relations()) {
        const Relation& image_rel = B.relation(rel.name);
        auto check_tuple = [&](std::span<const Value> t) -> bool {
            std::vector<Value> mapped(t.size());
            for (std::size_t i = 0; i < t.size(); ++i) mapped[i] = h(t[i]);
            if (image_rel.contains(mapped)) return true;
            witness = relation_violation(rel, {std::vector<Value>(t.begin(), t.end())},
                                         std::move(mapped), sampled,
                                         "tuple in A's relation maps outside B's");
            return false;
        };
        if (!sampled) {
            const auto tuples = materialize(A.universe(), rel, mode.ceiling);
            for (const auto& t : tuples)
                if (!check_tuple(t)) return witness;
        } else {
            Rng rng(mode.seed, stream_id("is_homomorphism:" + rel.name));
            for (std::uint64_t i = 0; i < mode.budget; ++i)
                if (!check_tuple(sample_relation_tuple(A.universe(), rel, rng))) return witness;
        }
    }

    // Basic operations must commute with h.
    for (const auto& [name, fA] : A.operations()) {
        const auto it = std::find_if(B.operations().begin(), B.operations().end(),
                                     [&](const auto& p) { return p.first == name; });
        const Operation& fB = it->second;
        auto check_args = [&](std::span<const Value> args) -> bool {
            std::vector<Value> mapped(args.size());
            for (std::size_t i = 0; i < args.size(); ++i) mapped[i] = h(args[i]);
            const Value lhs = h(fA.apply(args));
            const Value rhs = fB.apply(mapped);
            if (lhs == rhs) return true;
            witness.verdict = false;
            witness.counterexample =
                Counterexample{name, {std::vector<Value>(args.begin(), args.end())},
                               {lhs, rhs}, "h(f_A(args)) != f_B(h(args))"};
            return false;
        };
        if (!sampled) {
            const std::uint64_t space =
                detail::checked_pow(A.universe().cardinality(), fA.arity(), mode.ceiling);
            if (space > mode.ceiling)
                throw EnumerationLimitError("operation '" + name +
                                            "' argument space exceeds the exhaustive ceiling");
            bool ok = true;
            detail::for_each_tuple(fA.arity(), A.universe().cardinality(),
                                   [&](std::span<const Value> args) {
                                       if (ok) ok = check_args(args);
                                   });
            if (!ok) return witness;
        } else {
            Rng rng(mode.seed, stream_id("is_homomorphism.op:" + name));
            std::vector<Value> args(fA.arity());
            for (std::uint64_t i = 0; i < mode.budget; ++i) {
                for (auto& v : args) v = rng.below(A.universe().cardinality());
                if (!check_args(args)) return witness;
            }
        }
    }
    return witness;
}

HomWitness is_polymorphism(const Operation& f, const Structure& A, const CheckMode& mode) {
    if (!(f.universe() == A.universe()))
        throw ParameterError("is_polymorphism: operation universe " + f.universe().describe() +
                             " differs from structure universe " + A.universe().describe());
    const int n = f.arity();
    const bool sampled = mode.kind == CheckMode::Kind::sampled;
    HomWitness witness;
    witness.sampled = sampled;

    for (const auto& rel : A.relations()) {
        const int r = rel.arity;
        // Columns are tuples of the relation; f maps the rows.
        auto check_columns = [&](const std::vector<std::vector<Value>>& columns) -> bool {
            std::vector<Value> row(n);
            std::vector<Value> out(r);
            for (int row_idx = 0; row_idx < r; ++row_idx) {
                for (int col = 0; col < n; ++col) row[col] = columns[col][row_idx];
                out[row_idx] = f.apply(row);
            }
            if (rel.contains(out)) return true;
            witness = relation_violation(rel, columns, std::move(out), sampled,
                                         "componentwise-related arguments map outside the relation");
            return false;
        };

        if (!sampled) {
            if (n == 0) {
                // A nullary polymorphism is a constant whose diagonal tuple
                // lies in every relation; no argument tuples are needed.
                if (!check_columns({})) return witness;
                continue;
            }
            const std::uint64_t tuple_count =
                rel.tuple_count ? *rel.tuple_count
                                : detail::checked_pow(A.universe().cardinality(), r, mode.ceiling);
            const std::uint64_t combos = detail::checked_pow(tuple_count, n, mode.ceiling);
            if (combos > mode.ceiling)
                throw EnumerationLimitError(
                    "exhaustive polymorphism check over relation '" + rel.name + "' needs ~" +
                    std::to_string(tuple_count) + "^" + std::to_string(n) +
                    " combinations, above the ceiling of " + std::to_string(mode.ceiling) +
                    "; use a sampled check");
            const auto tuples = materialize(A.universe(), rel, mode.ceiling);
            if (tuples.empty()) continue;
            std::vector<std::size_t> index(n, 0);
            std::vector<std::vector<Value>> columns(n);
            for (;;) {
                for (int col = 0; col < n; ++col) columns[col] = tuples[index[col]];
                if (!check_columns(columns)) return witness;
                int pos = n - 1;
                while (pos >= 0 && ++index[pos] == tuples.size()) index[pos--] = 0;
                if (pos < 0) break;
            }
        } else {
            Rng rng(mode.seed, stream_id("is_polymorphism:" + rel.name));
            std::vector<std::vector<Value>> columns(n);
            for (std::uint64_t i = 0; i < mode.budget; ++i) {
                for (int col = 0; col < n; ++col)
                    columns[col] = sample_relation_tuple(A.universe(), rel, rng);
                if (!check_columns(columns)) return witness;
            }
        }
    }
    return witness;
}

bool power_adjacent(const Structure& A, std::span<const Value> u, std::span<const Value> v) {
    if (u.size() != v.size()) throw ParameterError("power_adjacent: tuple lengths differ");
    for (Value x : u)
        if (!A.universe().contains(x)) throw ParameterError("power_adjacent: u leaves the universe");
    for (Value x : v)
        if (!A.universe().contains(x)) throw ParameterError("power_adjacent: v leaves the universe");
    for (const auto& rel : A.relations()) {
        if (rel.arity != 2) continue;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const Value pair[2] = {u[i], v[i]};
            if (!rel.contains(std::span<const Value>(pair, 2))) return false;
        }
    }
    return true;
}

bool recheck_polymorphism_counterexample(const Operation& f, const Structure& A,
                                         const Counterexample& ce) {
    const Relation& rel = A.relation(ce.where);
    const int n = f.arity();
    const int r = rel.arity;
    if (static_cast<int>(ce.args.size()) != n) return false;
    for (const auto& column : ce.args)
        if (static_cast<int>(column.size()) != r || !rel.contains(column)) return false;
    std::vector<Value> row(n);
    std::vector<Value> out(r);
    for (int row_idx = 0; row_idx < r; ++row_idx) {
        for (int col = 0; col < n; ++col) row[col] = ce.args[col][row_idx];
        out[row_idx] = f.apply(row);
    }
    return out == ce.outputs && !rel.contains(out);
}

}  // namespace dnets
