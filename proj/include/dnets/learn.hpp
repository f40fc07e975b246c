#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dnets/net.hpp"
#include "dnets/operation.hpp"
#include "dnets/rng.hpp"

namespace dnets {

// Nonnegative loss over output tuples with l(y,y) = 0.
struct LossFunction {
    std::string name;
    std::function<double(std::span<const Value>, std::span<const Value>)> eval;
};

LossFunction loss_zero_one();
// Mean pixel disagreement: sum_j d(yhat_j, y_j) / (n^2 * tuple length), in [0,1].
LossFunction loss_hamming(int n);

using TrainingPair = std::pair<std::vector<Value>, std::vector<Value>>;
using TrainingSet = std::vector<TrainingPair>;

double empirical_loss(const NeuralNet& net, const TrainingSet& T, const LossFunction& loss);

// eta: maps an activation to a finite same-arity candidate set containing it.
// Enumeration draws any sampling decisions from the caller's rng so training
// stays reproducible end to end.
struct NeighborFunction {
    std::string clone_tag;
    std::function<std::vector<Operation>(const Operation& g, Rng& rng)> enumerate;
};

struct StepReport {
    std::string vertex;
    double loss_before = 0.0;
    double loss_after = 0.0;
    std::vector<double> candidate_losses;
    // Index into the candidate list, or -1 when the incumbent was kept.
    int chosen_index = -1;
};

// One iteration: pick a uniformly random non-input vertex, score every
// neighbor of its activation by mean loss over T, and install an argmin.
// Ties keep the current activation, then prefer the first enumerated.
std::pair<NeuralNet, StepReport> learn_step(const NeuralNet& net, const NeighborFunction& eta,
                                            const LossFunction& loss, const TrainingSet& T,
                                            Rng& rng);

// Same, with the updated vertex forced (test harnesses, reachability checks).
std::pair<NeuralNet, StepReport> learn_step_at(const NeuralNet& net, const std::string& vertex,
                                               const NeighborFunction& eta,
                                               const LossFunction& loss, const TrainingSet& T,
                                               Rng& rng);

struct TrainerConfig {
    std::uint64_t max_iterations = 100;
    // Stop after this many consecutive steps without strict improvement;
    // 0 disables early stopping.
    std::uint64_t patience = 0;
    std::uint64_t seed = 0;
};

struct TraceRow {
    std::uint64_t step;
    std::string vertex;
    double loss_before;
    double loss_after;
    std::size_t candidates;
};

struct TrainResult {
    NeuralNet net;
    std::vector<TraceRow> trace;
    double initial_loss;
    double final_loss;
};

TrainResult train(const NeuralNet& net, const NeighborFunction& eta, const LossFunction& loss,
                  const TrainingSet& T, const TrainerConfig& config);

// eta(g) = all operations of g's arity on a table universe. Refused when the
// operation count m^(m^n) exceeds max_ops.
NeighborFunction neighbor_full(const Universe& universe, std::uint64_t max_ops = 65536);

// Linear forms over F_p with each coefficient perturbed by {-1,0,1} mod p;
// at most 3^n distinct neighbors, always containing g.
NeighborFunction neighbor_linear_mod_p(int p);

// eta(g) = { h_post o g[h_1..h_n] : h_i in H } plus the members of G with
// g's arity. H must contain the identity; when |H|^(n+1) exceeds
// sample_bound the twists are sampled with the all-identity tuple pinned, so
// g stays in eta(g).
NeighborFunction neighbor_twist(std::vector<Operation> H, std::vector<Operation> G,
                                std::size_t sample_bound = 64);

// eta(g) = {g}; no-op search space, useful as a determinism control.
NeighborFunction neighbor_singleton();

}  // namespace dnets
