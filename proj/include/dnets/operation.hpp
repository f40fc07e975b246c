#pragma once

#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dnets/universe.hpp"

namespace dnets {

class Rng;

// An n-ary operation on a finite universe. Immutable, cheap to copy, safe to
// evaluate concurrently. Every operation carries a serializable descriptor
// naming its family and parameters; table backing is reserved for small
// universes, everything else is a parameterized closed form.
class Operation {
  public:
    Operation() = default;

    static Operation make(int arity, Universe universe, nlohmann::json descriptor,
                          std::function<Value(std::span<const Value>)> eval);

    bool valid() const { return impl_ != nullptr; }
    int arity() const { return impl_->arity; }
    const Universe& universe() const { return impl_->universe; }

    Value apply(std::span<const Value> args) const;
    Value operator()(std::initializer_list<Value> args) const {
        return apply(std::span<const Value>(args.begin(), args.size()));
    }

    std::string family() const { return impl_->descriptor.at("family").get<std::string>(); }
    const nlohmann::json& params() const { return impl_->descriptor.at("params"); }

    // The full descriptor document:
    // { "family": ..., "arity": ..., "universe": {...}, "params": {...} }
    const nlohmann::json& to_json() const { return impl_->descriptor; }
    static Operation from_json(const nlohmann::json& doc);

  private:
    struct Impl {
        int arity;
        Universe universe;
        nlohmann::json descriptor;
        std::function<Value(std::span<const Value>)> eval;
    };

    explicit Operation(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    std::shared_ptr<const Impl> impl_;
};

// The (n,k)-projection, 1-indexed in k as in pi_{n,k}.
Operation project(int n, int k, const Universe& universe);

// Generalized composite f[g_1,...,g_k]: all g_i share one arity and f's
// universe; the result applies the g_i and then f.
Operation compose(const Operation& f, std::span<const Operation> gs);
Operation compose(const Operation& f, const std::vector<Operation>& gs);

// Explicit lookup table, lexicographic over argument tuples with the first
// argument slowest. Table universes only, and only below the size ceiling.
Operation table_operation(const Universe& universe, int arity, std::vector<Value> values);
Operation table_operation_from(const Universe& universe, int arity,
                               const std::function<Value(std::span<const Value>)>& fn);

// Nullary constant.
Operation constant_operation(const Universe& universe, Value value);

// Linear form over F_p: x -> sum_i coeffs[i]*x_i mod p, on table(p).
Operation linear_mod_p_operation(int p, std::vector<int> coeffs);

// h_post o core[h_pre...], with per-argument chains of unary endomorphisms
// applied in list order before core and after it. Chains are simplified
// (identities dropped, adjacent same-family endomorphisms merged) and a twist
// of a twist is flattened, so an all-identity twist returns core itself.
Operation twist_operation(const Operation& core, std::vector<std::vector<Operation>> pre,
                          std::vector<Operation> post);

// True when op is a descriptor-recognizable identity endomorphism
// (projection pi_{1,1}, dihedral e, swap by 0, blank by all-ones).
bool is_identity_endo(const Operation& op);

// Extensional equality, exhaustive when the argument space is within ceiling,
// otherwise on `samples` seeded draws.
bool extensionally_equal(const Operation& a, const Operation& b, std::uint64_t ceiling = 4096,
                         int samples = 128, std::uint64_t seed = 0);

// Spot-check totality: every evaluated output lies in the universe.
// Exhaustive below the ceiling, sampled otherwise. Throws on violation.
void check_total(const Operation& op, std::uint64_t ceiling = 4096, int samples = 128,
                 std::uint64_t seed = 0);

// Ceiling for explicit table storage (elements of universe^arity).
inline constexpr std::uint64_t kTableEntryCeiling = 1u << 20;
inline constexpr int kTableUniverseCeiling = 4096;

}  // namespace dnets
