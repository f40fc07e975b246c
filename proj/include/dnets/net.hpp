#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dnets/operation.hpp"
#include "dnets/universe.hpp"

namespace dnets {

// Layered DAG. Layer lists are the vertex orderings; edges may only join
// consecutive layers.
struct Architecture {
    std::vector<std::vector<std::string>> layers;
    std::vector<std::pair<std::string, std::string>> edges;

    int layer_count() const { return static_cast<int>(layers.size()); }
};

// All violated architecture conditions, each naming the offending vertex or
// edge. Empty result means the architecture is valid.
std::vector<std::string> validate_architecture(const Architecture& arch);

// A discrete neural net: architecture + universe + an activation of arity
// indegree(v) at every non-input vertex. Immutable; with_activation returns
// a modified copy sharing unchanged parts.
class NeuralNet {
  public:
    NeuralNet(Architecture arch, Universe universe, std::map<std::string, Operation> activations);

    const Architecture& architecture() const { return plan_->arch; }
    const Universe& universe() const { return universe_; }

    int input_size() const { return static_cast<int>(plan_->arch.layers.front().size()); }
    int output_size() const { return static_cast<int>(plan_->arch.layers.back().size()); }

    // Non-input vertex ids, layer 2 upward, in layer order.
    const std::vector<std::string>& non_input_vertices() const { return plan_->non_input; }

    int indegree(const std::string& vertex) const;
    const Operation& activation(const std::string& vertex) const;
    const std::map<std::string, Operation>& activations() const { return activations_; }

    // The represented function: layer-by-layer sweep, each layer's value
    // vector computed once. A single-layer net is the identity.
    std::vector<Value> evaluate(std::span<const Value> input) const;
    std::vector<Value> evaluate(std::initializer_list<Value> input) const {
        return evaluate(std::span<const Value>(input.begin(), input.size()));
    }

    NeuralNet with_activation(const std::string& vertex, Operation op) const;

    // Output coordinate j as a standalone |V_1|-ary operation (for
    // polymorphism checks of the represented function).
    Operation output_coordinate_op(int j) const;

    nlohmann::json to_json() const;
    static NeuralNet from_json(const nlohmann::json& doc);

  private:
    struct Plan {
        Architecture arch;
        // in_sources[i][j] = positions in layer i-1 feeding vertex j of layer
        // i, in the order <=_{i-1} (i >= 1, 0-indexed layers).
        std::vector<std::vector<std::vector<int>>> in_sources;
        std::vector<std::string> non_input;
        std::map<std::string, std::pair<int, int>> position;  // id -> (layer, index)
    };

    NeuralNet(std::shared_ptr<const Plan> plan, Universe universe,
              std::map<std::string, Operation> activations);

    void build_flat();

    std::shared_ptr<const Plan> plan_;
    Universe universe_;
    std::map<std::string, Operation> activations_;
    // activations_ indexed by (layer, position) for the evaluation sweep
    std::vector<std::vector<Operation>> flat_;
};

// Conventional vertex id "v_<layer>_<position>", both 1-based.
std::string vertex_id(int layer, int position);

// Fully connected layered architecture with the given layer widths and
// conventional vertex ids.
Architecture dense_architecture(const std::vector<int>& widths);

// Single chain x -> h -> ... -> y of unary vertices, `layers` layers total.
Architecture chain_architecture(int layers);

}  // namespace dnets
