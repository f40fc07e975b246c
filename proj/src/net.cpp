#include "dnets/net.hpp"

#include <algorithm>
#include <set>

#include "detail.hpp"

namespace dnets {

using nlohmann::json;

std::string vertex_id(int layer, int position) {
    return "v_" + std::to_string(layer) + "_" + std::to_string(position);
}

Architecture dense_architecture(const std::vector<int>& widths) {
    Architecture arch;
    for (std::size_t i = 0; i < widths.size(); ++i) {
        if (widths[i] < 1) throw ParameterError("dense_architecture: layer widths must be >= 1");
        std::vector<std::string> layer;
        for (int j = 1; j <= widths[i]; ++j) layer.push_back(vertex_id(int(i) + 1, j));
        arch.layers.push_back(std::move(layer));
    }
    for (std::size_t i = 0; i + 1 < widths.size(); ++i)
        for (const auto& from : arch.layers[i])
            for (const auto& to : arch.layers[i + 1]) arch.edges.emplace_back(from, to);
    return arch;
}

Architecture chain_architecture(int layers) {
    if (layers < 1) throw ParameterError("chain_architecture: need at least one layer");
    return dense_architecture(std::vector<int>(layers, 1));
}

std::vector<std::string> validate_architecture(const Architecture& arch) {
    std::vector<std::string> violations;
    if (arch.layers.empty()) {
        violations.push_back("net has no layers");
        return violations;
    }

    std::map<std::string, std::pair<int, int>> position;
    for (int i = 0; i < arch.layer_count(); ++i) {
        if (arch.layers[i].empty())
            violations.push_back("layer " + std::to_string(i + 1) + " is empty");
        for (int j = 0; j < static_cast<int>(arch.layers[i].size()); ++j) {
            const auto& id = arch.layers[i][j];
            if (!position.emplace(id, std::make_pair(i, j)).second)
                violations.push_back("vertex '" + id + "' appears in more than one position");
        }
    }

    std::set<std::pair<std::string, std::string>> seen_edges;
    std::map<std::string, int> outdegree;
    for (const auto& [from, to] : arch.edges) {
        const auto from_it = position.find(from);
        const auto to_it = position.find(to);
        if (from_it == position.end() || to_it == position.end()) {
            violations.push_back("edge (" + from + "," + to + ") references an unknown vertex");
            continue;
        }
        if (!seen_edges.emplace(from, to).second)
            violations.push_back("duplicate edge (" + from + "," + to + ")");
        if (to_it->second.first != from_it->second.first + 1)
            violations.push_back("non-consecutive edge (" + from + "," + to + "): layer " +
                                 std::to_string(from_it->second.first + 1) + " to layer " +
                                 std::to_string(to_it->second.first + 1));
        ++outdegree[from];
    }

    for (int i = 0; i + 1 < arch.layer_count(); ++i)
        for (const auto& id : arch.layers[i])
            if (outdegree[id] == 0)
                violations.push_back("zero outdegree at non-final vertex '" + id + "'");

    return violations;
}

NeuralNet::NeuralNet(Architecture arch, Universe universe,
                     std::map<std::string, Operation> activations)
    : universe_(universe), activations_(std::move(activations)) {
    const auto violations = validate_architecture(arch);
    if (!violations.empty()) {
        std::string message = "invalid architecture:";
        for (const auto& v : violations) message += "\n  - " + v;
        throw ParameterError(message);
    }

    auto plan = std::make_shared<Plan>();
    plan->arch = std::move(arch);
    const auto& layers = plan->arch.layers;
    for (int i = 0; i < static_cast<int>(layers.size()); ++i)
        for (int j = 0; j < static_cast<int>(layers[i].size()); ++j)
            plan->position[layers[i][j]] = {i, j};

    plan->in_sources.resize(layers.size());
    for (std::size_t i = 1; i < layers.size(); ++i)
        plan->in_sources[i].resize(layers[i].size());
    for (const auto& [from, to] : plan->arch.edges) {
        const auto [fi, fj] = plan->position.at(from);
        const auto [ti, tj] = plan->position.at(to);
        plan->in_sources[ti][tj].push_back(fj);
    }
    // In-neighbors are consumed in the order <=_{i-1}.
    for (auto& layer : plan->in_sources)
        for (auto& sources : layer) std::sort(sources.begin(), sources.end());

    for (std::size_t i = 1; i < layers.size(); ++i)
        for (const auto& id : layers[i]) plan->non_input.push_back(id);

    plan_ = std::move(plan);

    // Activation map checks: exactly the non-input vertices, arity matching
    // indegree, one shared universe.
    for (const auto& id : plan_->non_input) {
        const auto it = activations_.find(id);
        if (it == activations_.end())
            throw ParameterError("vertex '" + id + "' has no activation");
        const Operation& op = it->second;
        if (!op.valid()) throw ParameterError("vertex '" + id + "' has an empty activation");
        if (op.arity() != indegree(id))
            throw ParameterError("vertex '" + id + "' has indegree " +
                                 std::to_string(indegree(id)) + " but its activation has arity " +
                                 std::to_string(op.arity()));
        if (!(op.universe() == universe_))
            throw ParameterError("activation at '" + id + "' lives on " +
                                 op.universe().describe() + ", net universe is " +
                                 universe_.describe());
    }
    for (const auto& [id, op] : activations_)
        if (!plan_->position.count(id) || plan_->position.at(id).first == 0)
            throw ParameterError("activation assigned to input or unknown vertex '" + id + "'");

    build_flat();
}

NeuralNet::NeuralNet(std::shared_ptr<const Plan> plan, Universe universe,
                     std::map<std::string, Operation> activations)
    : plan_(std::move(plan)), universe_(universe), activations_(std::move(activations)) {
    build_flat();
}

void NeuralNet::build_flat() {
    const auto& layers = plan_->arch.layers;
    flat_.assign(layers.size(), {});
    for (std::size_t i = 1; i < layers.size(); ++i) {
        flat_[i].reserve(layers[i].size());
        for (const auto& id : layers[i]) flat_[i].push_back(activations_.at(id));
    }
}

int NeuralNet::indegree(const std::string& vertex) const {
    const auto it = plan_->position.find(vertex);
    if (it == plan_->position.end()) throw ParameterError("unknown vertex '" + vertex + "'");
    const auto [layer, index] = it->second;
    if (layer == 0) return 0;
    return static_cast<int>(plan_->in_sources[layer][index].size());
}

const Operation& NeuralNet::activation(const std::string& vertex) const {
    const auto it = activations_.find(vertex);
    if (it == activations_.end())
        throw ParameterError("vertex '" + vertex + "' carries no activation");
    return it->second;
}

std::vector<Value> NeuralNet::evaluate(std::span<const Value> input) const {
    const auto& layers = plan_->arch.layers;
    if (input.size() != layers.front().size())
        throw ParameterError("evaluate: expected " + std::to_string(layers.front().size()) +
                             " inputs, got " + std::to_string(input.size()));
    std::vector<Value> current(input.begin(), input.end());
    std::vector<Value> next;
    std::vector<Value> args;
    for (std::size_t i = 1; i < layers.size(); ++i) {
        next.resize(layers[i].size());
        for (std::size_t j = 0; j < layers[i].size(); ++j) {
            const auto& sources = plan_->in_sources[i][j];
            args.resize(sources.size());
            for (std::size_t a = 0; a < sources.size(); ++a) args[a] = current[sources[a]];
            next[j] = flat_[i][j].apply(args);
        }
        current.swap(next);
    }
    return current;
}

NeuralNet NeuralNet::with_activation(const std::string& vertex, Operation op) const {
    const auto it = plan_->position.find(vertex);
    if (it == plan_->position.end()) throw ParameterError("unknown vertex '" + vertex + "'");
    if (it->second.first == 0)
        throw ParameterError("input vertex '" + vertex + "' cannot carry an activation");
    if (!op.valid()) throw ParameterError("with_activation: empty operation");
    if (op.arity() != indegree(vertex))
        throw ParameterError("activation arity " + std::to_string(op.arity()) +
                             " != indegree " + std::to_string(indegree(vertex)) + " at '" +
                             vertex + "'");
    if (!(op.universe() == universe_))
        throw ParameterError("with_activation: universe mismatch at '" + vertex + "'");
    auto activations = activations_;
    activations.insert_or_assign(vertex, std::move(op));
    return NeuralNet(plan_, universe_, std::move(activations));
}

Operation NeuralNet::output_coordinate_op(int j) const {
    if (j < 0 || j >= output_size())
        throw ParameterError("output coordinate " + std::to_string(j) + " out of range");
    NeuralNet self = *this;
    json params = {{"coordinate", j}};
    return Operation::make(
        input_size(), universe_,
        detail::make_descriptor("net_output", input_size(), universe_, std::move(params)),
        [self, j](std::span<const Value> args) { return self.evaluate(args)[j]; });
}

json NeuralNet::to_json() const {
    json layers_doc = json::array();
    for (const auto& layer : plan_->arch.layers) layers_doc.push_back(layer);
    json edges_doc = json::array();
    for (const auto& [from, to] : plan_->arch.edges) edges_doc.push_back({from, to});
    json activations_doc = json::object();
    for (const auto& [id, op] : activations_) activations_doc[id] = op.to_json();
    return {{"universe", universe_.to_json()},
            {"layers", std::move(layers_doc)},
            {"edges", std::move(edges_doc)},
            {"activations", std::move(activations_doc)}};
}

NeuralNet NeuralNet::from_json(const json& doc) {
    Architecture arch;
    try {
        const Universe universe = Universe::from_json(doc.at("universe"));
        for (const auto& layer : doc.at("layers"))
            arch.layers.push_back(layer.get<std::vector<std::string>>());
        for (const auto& edge : doc.at("edges")) {
            if (!edge.is_array() || edge.size() != 2)
                throw IoError("net document: edges must be [from,to] pairs");
            arch.edges.emplace_back(edge.at(0).get<std::string>(),
                                    edge.at(1).get<std::string>());
        }
        std::map<std::string, Operation> activations;
        for (const auto& [id, desc] : doc.at("activations").items())
            activations.emplace(id, Operation::from_json(desc));
        return NeuralNet(std::move(arch), universe, std::move(activations));
    } catch (const json::exception& e) {
        throw IoError(std::string("net document: ") + e.what());
    } catch (const ParameterError& e) {
        throw IoError(std::string("net document: ") + e.what());
    }
}

}  // namespace dnets
