#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dnets/operation.hpp"
#include "dnets/rng.hpp"
#include "dnets/universe.hpp"

namespace dnets {

// A named relation, held as a decidable predicate. Tuple sets on image
// universes are far too large to store, so enumeration and sampling are
// optional capabilities a relation may provide.
struct Relation {
    std::string name;
    int arity = 2;
    std::function<bool(std::span<const Value>)> contains;

    // Visit every tuple of the relation (optional; used by exhaustive checks).
    std::function<void(const std::function<void(std::span<const Value>)>&)> for_each;
    // Number of tuples for_each would visit (required with for_each).
    std::optional<std::uint64_t> tuple_count;
    // Draw a uniform random tuple of the relation (optional; sampled checks).
    std::function<std::vector<Value>(Rng&)> sample;
};

// Finite universe plus named relations and (possibly empty) basic operations.
class Structure {
  public:
    Structure(Universe universe, std::vector<Relation> relations,
              std::vector<std::pair<std::string, Operation>> operations = {});

    const Universe& universe() const { return universe_; }
    const std::vector<Relation>& relations() const { return relations_; }
    const std::vector<std::pair<std::string, Operation>>& operations() const {
        return operations_;
    }

    const Relation& relation(const std::string& name) const;

    // Materialize a relation's tuple set. Refused above the ceiling (the
    // Hamming edge set at n=3 already exceeds the default).
    std::vector<std::vector<Value>> relation_tuples(const std::string& name,
                                                    std::uint64_t ceiling = 1024) const;

  private:
    Universe universe_;
    std::vector<Relation> relations_;
    std::vector<std::pair<std::string, Operation>> operations_;
};

// A concrete, re-checkable violation witness.
struct Counterexample {
    std::string where;                     // violated relation or operation name
    std::vector<std::vector<Value>> args;  // offending argument tuples
    std::vector<Value> outputs;            // mapped/evaluated values not in the relation
    std::string detail;
};

// Oracle verdict. A sampled verdict of true means "no counterexample found
// within budget" and is never a proof.
struct HomWitness {
    bool verdict = true;
    bool sampled = false;
    std::optional<Counterexample> counterexample;
};

struct CheckMode {
    enum class Kind { exhaustive, sampled };
    Kind kind = Kind::exhaustive;
    std::uint64_t ceiling = kDefaultExhaustiveCeiling;
    std::uint64_t budget = 10000;
    std::uint64_t seed = 0;

    static CheckMode exhaustive(std::uint64_t ceiling = kDefaultExhaustiveCeiling) {
        return {Kind::exhaustive, ceiling, 0, 0};
    }
    static CheckMode sampled(std::uint64_t budget, std::uint64_t seed) {
        return {Kind::sampled, 0, budget, seed};
    }

    static constexpr std::uint64_t kDefaultExhaustiveCeiling = 100000000;
};

// Does h map A into B preserving every relation and commuting with every
// basic operation? A and B must share a signature.
HomWitness is_homomorphism(const std::function<Value(Value)>& h, const Structure& A,
                           const Structure& B, const CheckMode& mode);

// Is f a homomorphism A^n -> A? For every relation theta of arity r and every
// choice of f.arity() tuples from theta, the row-wise images must again form
// a tuple of theta. Exhaustive mode refuses enumerations over the ceiling.
HomWitness is_polymorphism(const Operation& f, const Structure& A, const CheckMode& mode);

// Componentwise relatedness of two k-tuples under every binary relation of A
// (the direct-power edge predicate, evaluated lazily).
bool power_adjacent(const Structure& A, std::span<const Value> u, std::span<const Value> v);

// Re-evaluate a counterexample against the structure and operation it came
// from; true when it still witnesses a genuine violation.
bool recheck_polymorphism_counterexample(const Operation& f, const Structure& A,
                                         const Counterexample& ce);

// List every universe element (refused above the ceiling).
std::vector<Value> enumerate_universe(const Universe& u, std::uint64_t ceiling = 1 << 16);

}  // namespace dnets
