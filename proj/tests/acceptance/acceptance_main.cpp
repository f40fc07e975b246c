// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is self-contained and pinned to its tolerance.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dnets/dominion.hpp"
#include "dnets/experiment.hpp"
#include "dnets/hamming.hpp"
#include "dnets/learn.hpp"
#include "dnets/net.hpp"
#include "dnets/pbm.hpp"
#include "dnets/structure.hpp"
#include "../f5_example.hpp"

using namespace dnets;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> run;
};

fs::path scratch_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("dnets_acceptance_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

TrainingSet task_pairs(const std::string& task, int n, int count, std::uint64_t seed) {
    TaskParams params;
    params.task = task;
    params.n = n;
    Rng param_rng(seed, stream_id(streams::kDatasetParams));
    if (task == "mask" || task == "twist-composite")
        params.mask = BinaryImage(n, param_rng.below(Universe::images(n).cardinality())).rows();
    if (task == "twist-composite")
        params.sigma = dihedral_name(kDihedralElements[param_rng.below(8)]);
    const Operation truth = task_operation(params);
    Rng rng(seed, stream_id(streams::kDatasetInputs));
    TrainingSet pairs;
    for (int i = 0; i < count; ++i) {
        const Value a = random_image(n, rng).bits();
        pairs.push_back({{a}, {truth.apply({&a, 1})}});
    }
    return pairs;
}

// 1. The reference three-layer net over F_5 equals its closed form on all
//    125 inputs, exactly.
bool golden_reference_net(std::string& detail) {
    const NeuralNet net = f5::build_net();
    int checked = 0;
    for (Value x1 = 0; x1 < 5; ++x1)
        for (Value x2 = 0; x2 < 5; ++x2)
            for (Value x3 = 0; x3 < 5; ++x3) {
                const auto expected = f5::closed_form(x1, x2, x3);
                const auto got = net.evaluate({x1, x2, x3});
                if (got.size() != 2 || got[0] != expected[0] || got[1] != expected[1]) {
                    detail = "mismatch at (" + std::to_string(x1) + "," + std::to_string(x2) +
                             "," + std::to_string(x3) + ")";
                    return false;
                }
                ++checked;
            }
    detail = std::to_string(checked) + "/125 inputs exact";
    return checked == 125;
}

// 2. Fifty seeded rot90 runs at n=3, 200 steps each: traces never increase.
bool loss_monotonicity(std::string& detail) {
    const int n = 3;
    std::uint64_t steps_checked = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const TrainingSet T = task_pairs("rot90", n, 12, seed);
        const auto H = build_H(n, {true, 2, 2, seed});
        const NeighborFunction eta = neighbor_twist(H, {}, 48);

        Architecture arch = chain_architecture(3);
        std::map<std::string, Operation> act;
        act.emplace("v_2_1", H[1 + seed % (H.size() - 1)]);
        act.emplace("v_3_1", H[1 + (seed * 7) % (H.size() - 1)]);
        const NeuralNet net(arch, Universe::images(n), std::move(act));

        const TrainResult result = train(net, eta, loss_hamming(n), T, {200, 0, seed});
        if (result.trace.size() != 200) {
            detail = "run " + std::to_string(seed) + " has " +
                     std::to_string(result.trace.size()) + " steps";
            return false;
        }
        double previous = result.initial_loss;
        for (const auto& row : result.trace) {
            if (row.loss_before != previous || row.loss_after > row.loss_before) {
                detail = "monotonicity broken at run " + std::to_string(seed) + " step " +
                         std::to_string(row.step);
                return false;
            }
            previous = row.loss_after;
            ++steps_checked;
        }
    }
    detail = std::to_string(steps_checked) + " consecutive pairs non-increasing";
    return true;
}

// 3. Every activation and output-coordinate map of trained nets stays a
//    polymorphism: exhaustive at n=2, sampled 10^4 pairs at n=5.
bool polymorphism_preservation(std::string& detail) {
    int checks = 0;
    for (const int n : {2, 5}) {
        const Universe universe = Universe::images(n);
        const Structure ham = hamming_structure(n);
        const auto basis = standard_basis(n);
        const auto H = build_H(n, {true, 2, 2, 77});

        Rng pool_rng(n, stream_id("acceptance.pool"));
        std::vector<Operation> G;
        for (int i = 0; i < 3; ++i) {
            std::vector<BinaryImage> c = {random_image(n, pool_rng), random_image(n, pool_rng)};
            G.push_back(multilinear_indicator(basis[pool_rng.below(basis.size())], c));
        }
        for (std::uint64_t i = 0; i < 2; ++i) {
            const Dominion D = generate_dominion(2, n, 4, 100 + i);
            if (const auto tree = embed_in_tree(minc(D)))
                G.push_back(dominion_polymorphism(D, tree_walk_homomorphism(*tree, n, i)));
        }

        Architecture arch;
        arch.layers = {{"a", "b"}, {"o"}};
        arch.edges = {{"a", "o"}, {"b", "o"}};
        std::map<std::string, Operation> act;
        act.emplace("o", G.front());
        const NeuralNet net(arch, universe, std::move(act));

        Rng data_rng(n * 13, stream_id("acceptance.data"));
        const Operation rot = dihedral_endo(Dihedral::r, n);
        TrainingSet T;
        for (int i = 0; i < 10; ++i) {
            const Value a = random_image(n, data_rng).bits();
            const Value b = random_image(n, data_rng).bits();
            T.push_back({{a, b}, {rot.apply({&a, 1})}});
        }

        const NeighborFunction eta = neighbor_twist(H, G, 32);
        const TrainResult result =
            train(net, eta, loss_hamming(n), T, {n == 2 ? 120u : 60u, 0, 9});

        const CheckMode mode =
            n == 2 ? CheckMode::exhaustive() : CheckMode::sampled(10000, 4);
        for (const auto& id : result.net.non_input_vertices()) {
            const auto witness = is_polymorphism(result.net.activation(id), ham, mode);
            ++checks;
            if (!witness.verdict) {
                detail = "activation at " + id + " fails at n=" + std::to_string(n);
                return false;
            }
        }
        for (int j = 0; j < result.net.output_size(); ++j) {
            const auto witness = is_polymorphism(result.net.output_coordinate_op(j), ham, mode);
            ++checks;
            if (!witness.verdict) {
                detail = "output coordinate " + std::to_string(j) + " fails at n=" +
                         std::to_string(n);
                return false;
            }
        }
    }
    detail = std::to_string(checks) + " oracle checks, zero violations";
    return true;
}

// 4. 100 seeded dominions (k=2, n=3, |L| in 2..8) all verify; the same seeds
//    at n=2 drive the tree pipeline into exhaustively-checked polymorphisms.
bool dominion_pipeline(std::string& detail) {
    const Structure ham2 = hamming_structure(2);
    int verified = 0, polymorphic = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const int labels = 2 + static_cast<int>(seed % 7);
        const Dominion D3 = generate_dominion(2, 3, labels, seed);
        if (!is_dominion(D3).verdict) {
            detail = "seed " + std::to_string(seed) + " generated an invalid dominion";
            return false;
        }
        ++verified;

        const Dominion D2 = generate_dominion(2, 2, labels, seed);
        if (!is_dominion(D2).verdict) {
            detail = "seed " + std::to_string(seed) + " generated an invalid n=2 dominion";
            return false;
        }
        const auto tree = embed_in_tree(minc(D2));
        if (!tree) continue;  // cyclic minc: outside the tree-based procedure
        const Operation g =
            dominion_polymorphism(D2, tree_walk_homomorphism(*tree, 2, seed));
        if (!is_polymorphism(g, ham2, CheckMode::exhaustive()).verdict) {
            detail = "seed " + std::to_string(seed) + " pipeline output is not a polymorphism";
            return false;
        }
        ++polymorphic;
    }
    detail = std::to_string(verified) + "/100 dominions valid, " + std::to_string(polymorphic) +
             " acyclic pipelines exhaustively polymorphic";
    return verified == 100 && polymorphic > 0;
}

// 5. h_sigma o h_tau = h_{sigma tau} on full pixel permutations for all 64
//    pairs at n in {2..5}; gamma_n is a bijection for n in {2..7}.
bool dihedral_group_action(std::string& detail) {
    int pair_checks = 0;
    for (int n = 2; n <= 5; ++n)
        for (const Dihedral sigma : kDihedralElements)
            for (const Dihedral tau : kDihedralElements) {
                const auto p_sigma = dihedral_pixel_permutation(sigma, n);
                const auto p_tau = dihedral_pixel_permutation(tau, n);
                const auto p_product =
                    dihedral_pixel_permutation(dihedral_compose(sigma, tau), n);
                for (int q = 0; q < n * n; ++q)
                    if (p_tau[p_sigma[q]] != p_product[q]) {
                        detail = "action law fails at n=" + std::to_string(n) + " (" +
                                 dihedral_name(sigma) + "," + dihedral_name(tau) + ")";
                        return false;
                    }
                ++pair_checks;
            }

    for (int n = 2; n <= 7; ++n) {
        std::set<std::pair<int, int>> image;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const auto xy = gamma(n, i, j);
                if (!in_gamma_codomain(n, xy.first, xy.second) ||
                    !image.insert(xy).second ||
                    gamma_inverse(n, xy.first, xy.second) != std::pair{i, j}) {
                    detail = "gamma_" + std::to_string(n) + " is not a bijection onto U_n";
                    return false;
                }
            }
    }
    detail = std::to_string(pair_checks) + " group pairs and gamma_2..gamma_7 exact";
    return pair_checks == 64 * 4;
}

// 6. With p=5 and a target one coefficient step away, a forced-node step
//    reaches zero loss in exactly one iteration.
bool linear_reachability(std::string& detail) {
    const Operation start = linear_mod_p_operation(5, {2, 3});
    const Operation target = linear_mod_p_operation(5, {3, 2});  // offsets (+1, -1)

    Architecture arch;
    arch.layers = {{"x1", "x2"}, {"y"}};
    arch.edges = {{"x1", "y"}, {"x2", "y"}};
    std::map<std::string, Operation> act;
    act.emplace("y", start);
    const NeuralNet net(arch, Universe::table(5), std::move(act));

    TrainingSet T;
    for (Value a = 0; a < 5; ++a)
        for (Value b = 0; b < 5; ++b) T.push_back({{a, b}, {target({a, b})}});

    const LossFunction loss = loss_zero_one();
    const double initial = empirical_loss(net, T, loss);
    Rng rng(0);
    const auto [stepped, report] =
        learn_step_at(net, "y", neighbor_linear_mod_p(5), loss, T, rng);
    const double after = empirical_loss(stepped, T, loss);
    detail = "loss " + std::to_string(initial) + " -> " + std::to_string(after) + " in one step";
    return initial > 0.0 && report.loss_after == 0.0 && after == 0.0;
}

// 7. Mask task with a strictly masking b: training reaches a floor that is
//    reported, not asserted to be zero.
bool mask_task_floor(std::string& detail) {
    const int n = 3;
    const std::uint64_t seed = 7;
    Rng param_rng(seed, stream_id(streams::kDatasetParams));
    const BinaryImage mask(n, param_rng.below(Universe::images(n).cardinality()));
    if (mask.weight() == n * n) {
        detail = "seed does not produce a strict mask";
        return false;
    }
    const TrainingSet T = task_pairs("mask", n, 14, seed);
    const auto H = build_H(n, {true, 3, 3, seed});
    const NeighborFunction eta = neighbor_twist(H, {}, 48);

    Architecture arch = chain_architecture(2);
    std::map<std::string, Operation> act;
    act.emplace("v_2_1", dihedral_endo(Dihedral::r2, n));
    const NeuralNet net(arch, Universe::images(n), std::move(act));

    const TrainResult result = train(net, eta, loss_hamming(n), T, {150, 0, seed});
    char floor[64];
    std::snprintf(floor, sizeof floor, "final empirical loss floor %.6f (initial %.6f)",
                  result.final_loss, result.initial_loss);
    detail = floor;
    return result.final_loss <= result.initial_loss;
}

// 8. Two train runs with one config and seed write byte-identical documents.
bool train_determinism(std::string& detail) {
    const fs::path data = scratch_dir("determinism_data");
    generate_dataset({"rot90", 3, 10, 21, data.string()});

    auto run_once = [&](const std::string& tag) {
        const fs::path out = scratch_dir("determinism_" + tag);
        nlohmann::json doc = nlohmann::json::parse(R"({
            "n": 3,
            "net": {"layers": [["x"], ["y"]], "edges": [["x", "y"]]},
            "neighbor": {
                "family": "twist",
                "h": {"dihedral": true, "swap_masks": 2, "blank_masks": 2},
                "g": {"indicators": 2, "dominions": 1, "dominion_labels": 3},
                "sample_bound": 32
            },
            "loss": "hamming",
            "trainer": {"max_iterations": 60, "patience": 0},
            "seed": 2026
        })");
        doc["dataset"] = (data / "manifest.tsv").string();
        doc["out"] = out.string();
        std::ostringstream log;
        return run_train(ExperimentConfig::from_json(doc), log);
    };

    const TrainOutcome first = run_once("a");
    const TrainOutcome second = run_once("b");
    const bool nets_equal = slurp(first.net_path) == slurp(second.net_path);
    const bool traces_equal = slurp(first.trace_path) == slurp(second.trace_path);
    detail = std::string("net documents ") + (nets_equal ? "identical" : "differ") +
             ", traces " + (traces_equal ? "identical" : "differ");
    return nets_equal && traces_equal;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"golden three-layer net over F_5 (125 inputs, exact)", golden_reference_net},
        {"loss monotonicity over 50 seeded rot90 runs (200 steps each)", loss_monotonicity},
        {"polymorphism preservation (exhaustive n=2, sampled 10^4 n=5)",
         polymorphism_preservation},
        {"dominion pipeline (100 seeds verified; acyclic cases exhaustively polymorphic)",
         dominion_pipeline},
        {"dihedral group action and gamma bijectivity", dihedral_group_action},
        {"linear-mod-5 reachability in exactly one forced step", linear_reachability},
        {"mask task reports its loss floor", mask_task_floor},
        {"byte-identical training runs under one seed", train_determinism},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = criteria[i].run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %zu. %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", i + 1,
                    criteria[i].name.c_str(), seconds, detail.empty() ? "" : " - ",
                    detail.c_str());
        if (!ok) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
