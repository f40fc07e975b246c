#include "dnets/learn.hpp"

#include <algorithm>
#include <set>

#include "detail.hpp"

namespace dnets {

LossFunction loss_zero_one() {
    return {"zero_one", [](std::span<const Value> predicted, std::span<const Value> target) {
                if (predicted.size() != target.size())
                    throw ParameterError("zero_one loss: tuple lengths differ");
                return std::equal(predicted.begin(), predicted.end(), target.begin()) ? 0.0 : 1.0;
            }};
}

LossFunction loss_hamming(int n) {
    if (n < 1 || n > kMaxImageSide) throw ParameterError("loss_hamming: bad image side");
    const double pixels = static_cast<double>(n) * n;
    return {"hamming", [pixels](std::span<const Value> predicted, std::span<const Value> target) {
                if (predicted.size() != target.size())
                    throw ParameterError("hamming loss: tuple lengths differ");
                if (predicted.empty()) throw ParameterError("hamming loss: empty tuples");
                double total = 0.0;
                for (std::size_t i = 0; i < predicted.size(); ++i)
                    total += hamming_distance_bits(predicted[i], target[i]);
                return total / (pixels * static_cast<double>(predicted.size()));
            }};
}

double empirical_loss(const NeuralNet& net, const TrainingSet& T, const LossFunction& loss) {
    if (T.empty()) throw ParameterError("empirical_loss: empty training set");
    double total = 0.0;
    for (const auto& [input, target] : T) total += loss.eval(net.evaluate(input), target);
    return total / static_cast<double>(T.size());
}

std::pair<NeuralNet, StepReport> learn_step_at(const NeuralNet& net, const std::string& vertex,
                                               const NeighborFunction& eta,
                                               const LossFunction& loss, const TrainingSet& T,
                                               Rng& rng) {
    const Operation& current = net.activation(vertex);
    const std::vector<Operation> candidates = eta.enumerate(current, rng);
    if (candidates.empty())
        throw Error("neighbor function contract violation: eta(g) is empty at '" + vertex + "'");

    StepReport report;
    report.vertex = vertex;
    report.loss_before = empirical_loss(net, T, loss);
    report.candidate_losses.reserve(candidates.size());

    double best_loss = report.loss_before;
    int best_index = -1;  // keep the incumbent on ties
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const Operation& g = candidates[i];
        if (g.arity() != current.arity())
            throw Error("neighbor function contract violation: neighbor of arity " +
                        std::to_string(g.arity()) + " offered for arity " +
                        std::to_string(current.arity()) + " at '" + vertex + "'");
        if (!(g.universe() == net.universe()))
            throw Error("neighbor function contract violation: universe mismatch at '" + vertex +
                        "'");
        const double candidate_loss = empirical_loss(net.with_activation(vertex, g), T, loss);
        report.candidate_losses.push_back(candidate_loss);
        if (candidate_loss < best_loss) {
            best_loss = candidate_loss;
            best_index = static_cast<int>(i);
        }
    }

    report.chosen_index = best_index;
    report.loss_after = best_loss;
    if (best_index < 0) return {net, std::move(report)};
    return {net.with_activation(vertex, candidates[best_index]), std::move(report)};
}

std::pair<NeuralNet, StepReport> learn_step(const NeuralNet& net, const NeighborFunction& eta,
                                            const LossFunction& loss, const TrainingSet& T,
                                            Rng& rng) {
    const auto& vertices = net.non_input_vertices();
    if (vertices.empty()) throw ParameterError("learn_step: single-layer net has no trainable vertex");
    const auto& vertex = vertices[rng.below(vertices.size())];
    return learn_step_at(net, vertex, eta, loss, T, rng);
}

TrainResult train(const NeuralNet& net, const NeighborFunction& eta, const LossFunction& loss,
                  const TrainingSet& T, const TrainerConfig& config) {
    Rng rng(config.seed, stream_id("train"));
    TrainResult result{net, {}, empirical_loss(net, T, loss), 0.0};
    result.final_loss = result.initial_loss;
    std::uint64_t stale = 0;
    for (std::uint64_t step = 1; step <= config.max_iterations; ++step) {
        auto [next, report] = learn_step(result.net, eta, loss, T, rng);
        result.net = std::move(next);
        result.final_loss = report.loss_after;
        result.trace.push_back({step, report.vertex, report.loss_before, report.loss_after,
                                report.candidate_losses.size()});
        stale = (report.loss_after < report.loss_before) ? 0 : stale + 1;
        if (config.patience > 0 && stale >= config.patience) break;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Neighbor function families
// ---------------------------------------------------------------------------

NeighborFunction neighbor_singleton() {
    return {"singleton", [](const Operation& g, Rng&) { return std::vector<Operation>{g}; }};
}

NeighborFunction neighbor_full(const Universe& universe, std::uint64_t max_ops) {
    if (universe.kind() != Universe::Kind::table)
        throw ParameterError("neighbor_full requires a table universe");
    return {"op(A)", [universe, max_ops](const Operation& g, Rng&) {
                const std::uint64_t m = universe.cardinality();
                const int n = g.arity();
                const std::uint64_t entries = detail::checked_pow(m, n, kTableEntryCeiling);
                if (entries > kTableEntryCeiling)
                    throw EnumerationLimitError("neighbor_full: table space too large");
                const std::uint64_t count = detail::checked_pow(m, int(entries), max_ops);
                if (count > max_ops)
                    throw EnumerationLimitError(
                        "neighbor_full: " + std::to_string(m) + "^(" + std::to_string(m) + "^" +
                        std::to_string(n) + ") operations exceed the ceiling of " +
                        std::to_string(max_ops));
                std::vector<Operation> ops;
                ops.reserve(count);
                std::vector<Value> table(entries, 0);
                for (;;) {
                    ops.push_back(table_operation(universe, n, table));
                    std::size_t pos = table.size();
                    while (pos > 0 && ++table[pos - 1] == m) {
                        table[pos - 1] = 0;
                        --pos;
                    }
                    if (pos == 0) break;
                }
                return ops;
            }};
}

NeighborFunction neighbor_linear_mod_p(int p) {
    if (p < 2) throw ParameterError("neighbor_linear_mod_p: modulus must be >= 2");
    return {"poly(Z/" + std::to_string(p) + "Z)", [p](const Operation& g, Rng&) {
                if (g.family() != "linear_mod_p" || g.params().at("p").get<int>() != p)
                    throw Error(
                        "neighbor function contract violation: expected a linear form mod " +
                        std::to_string(p) + ", got family '" + g.family() + "'");
                const auto coeffs = g.params().at("coeffs").get<std::vector<int>>();
                const int n = static_cast<int>(coeffs.size());
                std::vector<Operation> neighbors;
                std::set<std::vector<int>> seen;
                std::vector<int> offset(n, -1);
                for (;;) {
                    std::vector<int> shifted(n);
                    for (int i = 0; i < n; ++i) shifted[i] = ((coeffs[i] + offset[i]) % p + p) % p;
                    if (seen.insert(shifted).second)
                        neighbors.push_back(linear_mod_p_operation(p, shifted));
                    int pos = n - 1;
                    while (pos >= 0 && ++offset[pos] == 2) offset[pos--] = -1;
                    if (pos < 0) break;
                }
                return neighbors;
            }};
}

NeighborFunction neighbor_twist(std::vector<Operation> H, std::vector<Operation> G,
                                std::size_t sample_bound) {
    if (H.empty()) throw ParameterError("neighbor_twist: H must be nonempty");
    std::size_t identity_index = H.size();
    for (std::size_t i = 0; i < H.size(); ++i) {
        if (H[i].arity() != 1)
            throw ParameterError("neighbor_twist: H must contain unary endomorphisms");
        if (identity_index == H.size() && is_identity_endo(H[i])) identity_index = i;
    }
    if (identity_index == H.size())
        throw ParameterError(
            "neighbor_twist: H must contain the identity endomorphism (g in eta(g) fails "
            "without it)");
    if (sample_bound < 1) throw ParameterError("neighbor_twist: sample bound must be positive");

    auto h_shared = std::make_shared<const std::vector<Operation>>(std::move(H));
    auto g_shared = std::make_shared<const std::vector<Operation>>(std::move(G));

    return {"poly(ham)", [h_shared, g_shared, identity_index, sample_bound](const Operation& g,
                                                                            Rng& rng) {
                const auto& H = *h_shared;
                const int n = g.arity();
                std::vector<Operation> out;
                std::set<std::string> seen;
                auto add = [&](const Operation& op) {
                    if (seen.insert(op.to_json().dump()).second) out.push_back(op);
                };
                auto twist_of = [&](const std::vector<std::size_t>& pick) {
                    std::vector<std::vector<Operation>> pre(n);
                    for (int i = 0; i < n; ++i) pre[i] = {H[pick[i]]};
                    std::vector<Operation> post = {H[pick[n]]};
                    return twist_operation(g, std::move(pre), std::move(post));
                };

                const std::uint64_t total =
                    detail::checked_pow(H.size(), n + 1, sample_bound);
                if (total <= sample_bound) {
                    std::vector<std::size_t> pick(n + 1, 0);
                    for (;;) {
                        add(twist_of(pick));
                        int pos = n;
                        while (pos >= 0 && ++pick[pos] == H.size()) pick[pos--] = 0;
                        if (pos < 0) break;
                    }
                } else {
                    // Sampled neighborhood; the all-identity tuple is pinned
                    // so that g itself stays a candidate.
                    add(twist_of(std::vector<std::size_t>(n + 1, identity_index)));
                    std::vector<std::size_t> pick(n + 1);
                    for (std::size_t draw = 1; draw < sample_bound; ++draw) {
                        for (auto& p : pick) p = rng.below(H.size());
                        add(twist_of(pick));
                    }
                }
                for (const auto& extra : *g_shared)
                    if (extra.arity() == n) add(extra);
                return out;
            }};
}

}  // namespace dnets
