#include "dnets/experiment.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "dnets/dominion.hpp"
#include "dnets/hamming.hpp"
#include "dnets/pbm.hpp"
#include "dnets/structure.hpp"
#include "detail.hpp"

namespace dnets {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string resolve(const std::string& path, const std::string& base) {
    fs::path p(path);
    if (p.is_absolute() || base.empty()) return p.string();
    return (fs::path(base) / p).lexically_normal().string();
}

std::string format_double(double v) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.12g", v);
    return buffer;
}

std::string format_loss(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.6f", v);
    return buffer;
}

std::string padded(int value) {
    char buffer[16];
    std::snprintf(buffer, sizeof buffer, "%04d", value);
    return buffer;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) parts.push_back(item);
    return parts;
}

}  // namespace

// ---------------------------------------------------------------------------
// Datasets
// ---------------------------------------------------------------------------

Operation task_operation(const TaskParams& params) {
    const int n = params.n;
    if (params.task == "rot90") return dihedral_endo(Dihedral::r, n);
    if (params.task == "reflect") return dihedral_endo(Dihedral::s, n);
    if (params.task == "mask") return blank_endo(BinaryImage::from_rows(params.mask));
    if (params.task == "twist-composite")
        return compose(dihedral_endo(dihedral_from_name(params.sigma), n),
                       {swap_endo(BinaryImage::from_rows(params.mask))});
    throw ParameterError("unknown task '" + params.task +
                         "' (expected rot90|reflect|mask|twist-composite)");
}

TaskParams generate_dataset(const DatasetSpec& spec) {
    if (spec.count < 1) throw ParameterError("gen-dataset: count must be >= 1");
    const Universe universe = Universe::images(spec.n);

    TaskParams params;
    params.task = spec.task;
    params.n = spec.n;
    Rng param_rng(spec.seed, stream_id(streams::kDatasetParams));
    if (spec.task == "mask" || spec.task == "twist-composite")
        params.mask = BinaryImage(spec.n, param_rng.below(universe.cardinality())).rows();
    if (spec.task == "twist-composite")
        params.sigma = dihedral_name(kDihedralElements[param_rng.below(8)]);
    const Operation truth = task_operation(params);  // validates the task name

    fs::create_directories(spec.out_dir);
    std::ofstream manifest(fs::path(spec.out_dir) / "manifest.tsv");
    if (!manifest) throw IoError("cannot write manifest under '" + spec.out_dir + "'");

    Rng input_rng(spec.seed, stream_id(streams::kDatasetInputs));
    for (int i = 0; i < spec.count; ++i) {
        const Value input = input_rng.below(universe.cardinality());
        const Value target = truth.apply({&input, 1});
        const std::string input_name = "input_" + padded(i) + ".pbm";
        const std::string target_name = "target_" + padded(i) + ".pbm";
        write_pbm_file((fs::path(spec.out_dir) / input_name).string(),
                       BinaryImage(spec.n, input));
        write_pbm_file((fs::path(spec.out_dir) / target_name).string(),
                       BinaryImage(spec.n, target));
        manifest << input_name << '\t' << target_name << '\n';
    }

    json record = {{"task", spec.task}, {"n", spec.n}, {"count", spec.count},
                   {"seed", spec.seed}};
    if (!params.mask.empty()) record["mask"] = params.mask;
    if (!params.sigma.empty()) record["sigma"] = params.sigma;
    std::ofstream task_file(fs::path(spec.out_dir) / "task.json");
    task_file << record.dump(2) << '\n';
    return params;
}

TrainingSet load_dataset(const std::string& manifest_path, int expected_n) {
    std::ifstream in(manifest_path);
    if (!in) throw IoError("cannot open dataset manifest '" + manifest_path + "'");
    const std::string dir = fs::path(manifest_path).parent_path().string();

    auto load_tuple = [&](const std::string& field) {
        std::vector<Value> tuple;
        for (const auto& path : split(field, ',')) {
            const BinaryImage img = read_pbm_file(resolve(path, dir));
            if (expected_n > 0 && img.side() != expected_n)
                throw ParameterError("dataset image '" + path + "' has side " +
                                     std::to_string(img.side()) + ", expected " +
                                     std::to_string(expected_n));
            tuple.push_back(img.bits());
        }
        return tuple;
    };

    TrainingSet pairs;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split(line, '\t');
        if (fields.size() != 2)
            throw IoError("manifest line is not `input-path \\t target-path`: '" + line + "'");
        pairs.emplace_back(load_tuple(fields[0]), load_tuple(fields[1]));
    }
    if (pairs.empty()) throw ParameterError("dataset '" + manifest_path + "' is empty");
    return pairs;
}

int dataset_side(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw IoError("cannot open dataset manifest '" + manifest_path + "'");
    const std::string dir = fs::path(manifest_path).parent_path().string();
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split(line, '\t');
        if (fields.empty() || fields[0].empty()) break;
        return read_pbm_file(resolve(split(fields[0], ',').front(), dir)).side();
    }
    throw IoError("dataset manifest '" + manifest_path + "' has no rows");
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw IoError("config '" + path + "': " + e.what());
    }
    return from_json(std::move(doc), fs::path(path).parent_path().string());
}

ExperimentConfig ExperimentConfig::from_json(json doc, std::string dir) {
    if (!doc.is_object()) throw ParameterError("experiment config must be a JSON object");
    return ExperimentConfig{std::move(doc), std::move(dir)};
}

// ---------------------------------------------------------------------------
// Pools of clone members (H for twists, G for higher-arity moves, init)
// ---------------------------------------------------------------------------

namespace {

Operation make_dominion_member(int k, int n, int labels, std::uint64_t seed) {
    // Dense label mixes rarely embed in a tree, so step the label count down
    // until a seed produces an acyclic minc. Two labels always embed.
    for (int l = labels; l >= 1; --l) {
        for (int attempt = 0; attempt < 8; ++attempt) {
            std::uint64_t derived = seed + l;
            for (int i = 0; i <= attempt; ++i) Rng::splitmix64(derived);
            const Dominion D = generate_dominion(k, n, l, derived);
            if (const auto tree = embed_in_tree(minc(D)))
                return dominion_polymorphism(D, tree_walk_homomorphism(*tree, n, derived));
        }
    }
    // unreachable: a single label yields an edgeless minc
    throw Error("make_dominion_member: no tree-embeddable dominion found");
}

struct TwistPools {
    std::vector<Operation> H;
    std::vector<Operation> G;
};

// Draw the endomorphism set and the per-arity polymorphism pool named by the
// "h"/"g" blocks of a neighbor or init spec.
TwistPools build_pools(const json& spec, int n, const std::set<int>& arities,
                       std::uint64_t seed) {
    const json h = spec.value("h", json::object());
    HFamilySpec h_spec;
    h_spec.dihedral = h.value("dihedral", true);
    h_spec.swap_masks = h.value("swap_masks", 2);
    h_spec.blank_masks = h.value("blank_masks", 2);
    h_spec.seed = seed;

    TwistPools pools;
    pools.H = build_H(n, h_spec);

    const json g = spec.value("g", json::object());
    const int indicators = g.value("indicators", 4);
    const int dominions = g.value("dominions", 2);
    const int dominion_labels = g.value("dominion_labels", 4);
    const auto basis = standard_basis(n);
    const Universe universe = Universe::images(n);
    for (int arity : arities) {
        if (arity < 1) continue;
        Rng rng(seed, stream_id("pool.g." + std::to_string(arity)));
        for (int i = 0; i < indicators; ++i) {
            const BinaryImage b = basis[rng.below(basis.size())];
            std::vector<BinaryImage> c;
            for (int j = 0; j < arity; ++j)
                c.push_back(BinaryImage(n, rng.below(universe.cardinality())));
            pools.G.push_back(multilinear_indicator(b, c));
        }
        for (int i = 0; i < dominions; ++i)
            pools.G.push_back(make_dominion_member(arity, n, dominion_labels, rng.next()));
    }
    return pools;
}

NeighborFunction build_neighbor(const json& spec, const Universe& universe,
                                const std::set<int>& arities, std::uint64_t seed) {
    const std::string family = spec.value("family", "twist");
    if (family == "singleton") return neighbor_singleton();
    if (family == "full") return neighbor_full(universe, spec.value("max_ops", 65536));
    if (family == "linear_mod_p") {
        if (!spec.contains("p")) throw ParameterError("neighbor linear_mod_p: missing \"p\"");
        return neighbor_linear_mod_p(spec.at("p").get<int>());
    }
    if (family == "twist") {
        if (universe.kind() != Universe::Kind::images)
            throw ParameterError("neighbor twist: requires an image universe");
        auto pools = build_pools(spec, universe.side(), arities, seed);
        return neighbor_twist(std::move(pools.H), std::move(pools.G),
                              spec.value("sample_bound", std::size_t{64}));
    }
    throw ParameterError("unknown neighbor family '" + family +
                         "' (expected twist|linear_mod_p|full|singleton)");
}

LossFunction build_loss(const std::string& name, const Universe& universe) {
    if (name == "zero_one") return loss_zero_one();
    if (name == "hamming") {
        if (universe.kind() != Universe::Kind::images)
            throw ParameterError("hamming loss requires an image universe");
        return loss_hamming(universe.side());
    }
    throw ParameterError("unknown loss '" + name + "' (expected zero_one|hamming)");
}

std::set<int> net_arities(const NeuralNet& net) {
    std::set<int> arities;
    for (const auto& id : net.non_input_vertices()) arities.insert(net.indegree(id));
    return arities;
}

// Architecture indegrees, before any activations exist.
std::set<int> architecture_arities(const Architecture& arch) {
    std::map<std::string, int> indegree;
    for (const auto& [from, to] : arch.edges) ++indegree[to];
    std::set<int> arities;
    for (std::size_t i = 1; i < arch.layers.size(); ++i)
        for (const auto& id : arch.layers[i]) arities.insert(indegree[id]);
    return arities;
}

NeuralNet resolve_initial_net(const ExperimentConfig& config, const json& doc, int n,
                              std::uint64_t seed, std::ostream& log) {
    if (doc.is_string()) {
        std::ifstream in(resolve(doc.get<std::string>(), config.config_dir));
        if (!in) throw IoError("cannot open net document '" + doc.get<std::string>() + "'");
        json net_doc;
        try {
            in >> net_doc;
        } catch (const json::exception& e) {
            throw IoError("net document: " + std::string(e.what()));
        }
        return NeuralNet::from_json(net_doc);
    }
    if (!doc.is_object() || !doc.contains("layers"))
        throw ParameterError("config \"net\" must be a path or an inline architecture");

    Architecture arch;
    for (const auto& layer : doc.at("layers"))
        arch.layers.push_back(layer.get<std::vector<std::string>>());
    for (const auto& edge : doc.value("edges", json::array()))
        arch.edges.emplace_back(edge.at(0).get<std::string>(), edge.at(1).get<std::string>());

    // Draw initial activations from the configured clone pools.
    const Universe universe = Universe::images(n);
    const json init_spec = config.raw.value("init", config.raw.value("neighbor", json::object()));
    auto pools = build_pools(init_spec, n, architecture_arities(arch), seed);

    std::map<std::string, int> indegree;
    for (const auto& [from, to] : arch.edges) ++indegree[to];
    Rng rng(seed, stream_id(streams::kInit));
    std::map<std::string, Operation> activations;
    int drawn = 0;
    for (std::size_t i = 1; i < arch.layers.size(); ++i) {
        for (const auto& id : arch.layers[i]) {
            const int arity = indegree[id];
            std::vector<const Operation*> options;
            for (const auto& op : pools.H)
                if (op.arity() == arity) options.push_back(&op);
            for (const auto& op : pools.G)
                if (op.arity() == arity) options.push_back(&op);
            if (options.empty()) {
                if (arity == 0) {
                    activations.emplace(
                        id, constant_operation(universe, rng.below(universe.cardinality())));
                    ++drawn;
                    continue;
                }
                throw ParameterError("init: no pool member of arity " + std::to_string(arity) +
                                     " for vertex '" + id + "'");
            }
            activations.emplace(id, *options[rng.below(options.size())]);
            ++drawn;
        }
    }
    log << "initialized " << drawn << " activations from the clone pools\n";
    return NeuralNet(std::move(arch), universe, std::move(activations));
}

void write_trace(const std::string& path, double initial_loss,
                 const std::vector<TraceRow>& trace) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write trace '" + path + "'");
    out << "step,vertex,loss_before,loss_after,candidates\n";
    (void)initial_loss;
    for (const auto& row : trace)
        out << row.step << ',' << row.vertex << ',' << format_double(row.loss_before) << ','
            << format_double(row.loss_after) << ',' << row.candidates << '\n';
}

}  // namespace

// ---------------------------------------------------------------------------
// Command runners
// ---------------------------------------------------------------------------

TrainOutcome run_train(const ExperimentConfig& config, std::ostream& log) {
    const json& raw = config.raw;
    if (!raw.contains("net")) throw ParameterError("config: missing \"net\"");
    if (!raw.contains("dataset")) throw ParameterError("config: missing \"dataset\"");
    const std::uint64_t seed = raw.value("seed", std::uint64_t{0});
    const std::string out_dir = raw.value("out", std::string("run"));

    const std::string manifest = resolve(raw.at("dataset").get<std::string>(), config.config_dir);
    const int n = raw.value("n", 0) > 0 ? raw.at("n").get<int>() : dataset_side(manifest);

    NeuralNet net = resolve_initial_net(config, raw.at("net"), n, seed, log);
    const TrainingSet data = load_dataset(
        manifest, net.universe().kind() == Universe::Kind::images ? net.universe().side() : 0);
    for (const auto& [input, target] : data) {
        if (static_cast<int>(input.size()) != net.input_size() ||
            static_cast<int>(target.size()) != net.output_size())
            throw ParameterError("dataset tuple shape does not match the net (" +
                                 std::to_string(input.size()) + "->" +
                                 std::to_string(target.size()) + " vs " +
                                 std::to_string(net.input_size()) + "->" +
                                 std::to_string(net.output_size()) + ")");
    }

    const NeighborFunction eta = build_neighbor(raw.value("neighbor", json::object()),
                                                net.universe(), net_arities(net), seed);
    const LossFunction loss = build_loss(
        raw.value("loss", net.universe().kind() == Universe::Kind::images ? "hamming"
                                                                          : "zero_one"),
        net.universe());

    const json trainer = raw.value("trainer", json::object());
    TrainerConfig trainer_config;
    trainer_config.max_iterations = trainer.value("max_iterations", std::uint64_t{100});
    trainer_config.patience = trainer.value("patience", std::uint64_t{0});
    trainer_config.seed = seed;

    const TrainResult result = train(net, eta, loss, data, trainer_config);

    fs::create_directories(out_dir);
    TrainOutcome outcome;
    outcome.initial_loss = result.initial_loss;
    outcome.final_loss = result.final_loss;
    outcome.net_path = (fs::path(out_dir) / "net.json").string();
    outcome.trace_path = (fs::path(out_dir) / "trace.csv").string();
    std::ofstream net_out(outcome.net_path);
    if (!net_out) throw IoError("cannot write net '" + outcome.net_path + "'");
    net_out << result.net.to_json().dump(2) << '\n';
    write_trace(outcome.trace_path, result.initial_loss, result.trace);

    log << "steps " << result.trace.size() << "\n";
    log << "initial_loss " << format_loss(result.initial_loss) << "\n";
    log << "final_loss " << format_loss(result.final_loss) << "\n";
    return outcome;
}

double run_eval(const std::string& net_path, const std::string& manifest_path,
                const std::string& loss_name) {
    std::ifstream in(net_path);
    if (!in) throw IoError("cannot open net document '" + net_path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw IoError("net document: " + std::string(e.what()));
    }
    const NeuralNet net = NeuralNet::from_json(doc);
    if (net.universe().kind() != Universe::Kind::images)
        throw ParameterError("eval expects a net on an image universe");
    const TrainingSet data = load_dataset(manifest_path, net.universe().side());
    for (const auto& [input, target] : data)
        if (static_cast<int>(input.size()) != net.input_size() ||
            static_cast<int>(target.size()) != net.output_size())
            throw ParameterError("dataset tuple shape does not match the net");
    return empirical_loss(net, data, build_loss(loss_name, net.universe()));
}

namespace {

std::string image_list(const std::vector<Value>& tuple, int n) {
    std::string out;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i) out += ", ";
        out += BinaryImage(n, tuple[i]).to_string();
    }
    return out;
}

bool report_witness(const std::string& label, const HomWitness& witness, int n,
                    std::ostream& out) {
    out << label << (witness.verdict ? ": PASS" : ": FAIL")
        << (witness.sampled ? " (sampled)" : " (exhaustive)") << "\n";
    if (!witness.verdict && witness.counterexample) {
        const auto& ce = *witness.counterexample;
        out << "  violated: " << ce.where << "\n";
        for (const auto& column : ce.args)
            out << "  argument tuple: " << image_list(column, n) << "\n";
        out << "  image tuple:    " << image_list(ce.outputs, n) << "\n";
    }
    return witness.verdict;
}

}  // namespace

bool run_verify_net(const std::string& net_path, const std::string& mode, std::uint64_t budget,
                    std::uint64_t seed, std::ostream& out) {
    std::ifstream in(net_path);
    if (!in) throw IoError("cannot open net document '" + net_path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw IoError("net document: " + std::string(e.what()));
    }
    const NeuralNet net = NeuralNet::from_json(doc);
    if (net.universe().kind() != Universe::Kind::images)
        throw ParameterError("verify supports nets on image universes");
    const int n = net.universe().side();
    const Structure ham = hamming_structure(n);

    auto pick_mode = [&](int arity) -> CheckMode {
        if (mode == "exhaustive") return CheckMode::exhaustive();
        if (mode == "sampled") return CheckMode::sampled(budget, seed);
        // auto: exhaustive where the pair enumeration stays small
        const std::uint64_t edges = *ham.relation("adjacent").tuple_count;
        const std::uint64_t combos =
            detail::checked_pow(edges, std::max(arity, 1), CheckMode::kDefaultExhaustiveCeiling);
        if (combos <= CheckMode::kDefaultExhaustiveCeiling) return CheckMode::exhaustive();
        return CheckMode::sampled(budget, seed);
    };

    bool all_ok = true;
    for (const auto& id : net.non_input_vertices()) {
        const Operation& op = net.activation(id);
        const HomWitness witness = is_polymorphism(op, ham, pick_mode(op.arity()));
        all_ok &= report_witness("activation " + id + " [" + op.family() + "]", witness, n, out);
    }
    for (int j = 0; j < net.output_size(); ++j) {
        const HomWitness witness =
            is_polymorphism(net.output_coordinate_op(j), ham, pick_mode(net.input_size()));
        all_ok &= report_witness("output coordinate " + std::to_string(j + 1), witness, n, out);
    }
    out << (all_ok ? "verdict: all checks passed" : "verdict: violations found") << "\n";
    return all_ok;
}

bool run_verify_dominion(const std::string& dominion_path, std::ostream& out) {
    std::ifstream in(dominion_path);
    if (!in) throw IoError("cannot open dominion file '" + dominion_path + "'");
    const Dominion D = read_dominion(in);
    const HomWitness witness = is_dominion(D);
    out << "dominion k=" << D.k() << " n=" << D.n() << " labels=" << D.label_count()
        << (witness.verdict ? ": PASS" : ": FAIL") << "\n";
    if (!witness.verdict && witness.counterexample) {
        const auto& ce = *witness.counterexample;
        out << "  basic cube at top corner (";
        for (std::size_t i = 0; i < ce.args[0].size(); ++i)
            out << (i ? "," : "") << ce.args[0][i];
        out << ") carries labels {";
        for (std::size_t i = 0; i < ce.outputs.size(); ++i)
            out << (i ? "," : "") << ce.outputs[i];
        out << "}\n";
    }
    return witness.verdict;
}

void run_show(const std::string& net_path, std::ostream& out) {
    std::ifstream in(net_path);
    if (!in) throw IoError("cannot open net document '" + net_path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw IoError("net document: " + std::string(e.what()));
    }
    const NeuralNet net = NeuralNet::from_json(doc);
    out << "universe: " << net.universe().describe() << "\n";
    const auto& arch = net.architecture();
    for (std::size_t i = 0; i < arch.layers.size(); ++i) {
        out << "layer " << (i + 1) << ":";
        for (const auto& id : arch.layers[i]) out << ' ' << id;
        out << "\n";
    }
    out << "edges:\n";
    for (const auto& [from, to] : arch.edges) out << "  " << from << " -> " << to << "\n";
    out << "activations:\n";
    for (const auto& id : net.non_input_vertices()) {
        const Operation& op = net.activation(id);
        out << "  " << id << ": " << op.family();
        if (op.family() != "twist" && op.family() != "compose" && op.family() != "dominion")
            out << " " << op.params().dump();
        out << "\n";
    }
}

void run_gen_dominion(const DominionGenSpec& spec, std::ostream& log) {
    const Dominion D = generate_dominion(spec.k, spec.n, spec.labels, spec.seed);
    if (const auto parent = fs::path(spec.out_path).parent_path(); !parent.empty())
        fs::create_directories(parent);
    std::ofstream out(spec.out_path);
    if (!out) throw IoError("cannot write dominion '" + spec.out_path + "'");
    write_dominion(out, D);

    const SimpleGraph constraints = minc(D);
    std::ofstream minc_out(spec.out_path + ".minc");
    if (!minc_out) throw IoError("cannot write minc edge list");
    write_edge_list(minc_out, constraints);

    const auto tree = embed_in_tree(constraints);
    log << "dominion: " << D.vertex_count() << " vertices, " << constraints.edges.size()
        << " minc edges, " << (tree ? "tree-embeddable" : "minc has a cycle") << "\n";

    if (spec.with_alpha) {
        if (!tree) {
            log << "alpha skipped: minc is not tree-embeddable by this procedure\n";
            return;
        }
        const LabelAssignment alpha = tree_walk_homomorphism(*tree, spec.n, spec.seed);
        dominion_polymorphism(D, alpha);  // validates alpha against minc
        write_label_assignment(spec.out_path + ".alpha", alpha);
        log << "alpha written to " << spec.out_path << ".alpha/\n";
    }
}

}  // namespace dnets
