// dnets: discrete neural nets over finite universes, trained by local search
// over clone-constrained activation functions.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "dnets/error.hpp"
#include "dnets/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete neural nets: datasets, training, verification"};
    app.require_subcommand(1);

    // gen-dataset
    auto* gen = app.add_subcommand("gen-dataset", "synthesize an image transformation dataset");
    dnets::DatasetSpec dataset_spec;
    gen->add_option("--task", dataset_spec.task, "rot90|reflect|mask|twist-composite")
        ->required();
    gen->add_option("--n", dataset_spec.n, "image side length")->required();
    gen->add_option("--count", dataset_spec.count, "number of pairs")->default_val(16);
    gen->add_option("--seed", dataset_spec.seed, "master seed")->default_val(0);
    gen->add_option("--out", dataset_spec.out_dir, "output directory")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "run the local-search trainer");
    std::string config_path;
    std::string train_out;
    std::uint64_t train_seed = 0;
    std::uint64_t max_iterations = 0;
    std::int64_t patience = -1;
    bool seed_given = false;
    train_cmd->add_option("--config", config_path, "experiment JSON file")->required();
    train_cmd->add_option("--out", train_out, "override the output directory");
    train_cmd->add_option("--seed", train_seed, "override the master seed")
        ->each([&](const std::string&) { seed_given = true; });
    train_cmd->add_option("--max-iters", max_iterations, "override trainer.max_iterations");
    train_cmd->add_option("--patience", patience, "override trainer.patience");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "mean loss of a net over a dataset");
    std::string eval_net, eval_data, eval_loss = "hamming";
    eval_cmd->add_option("--net", eval_net, "net document")->required();
    eval_cmd->add_option("--dataset", eval_data, "manifest.tsv")->required();
    eval_cmd->add_option("--loss", eval_loss, "hamming|zero_one");

    // gen-dominion
    auto* dom_cmd = app.add_subcommand("gen-dominion", "generate a dominion and its minc graph");
    dnets::DominionGenSpec dom_spec;
    dom_cmd->add_option("--k", dom_spec.k, "arity")->default_val(2);
    dom_cmd->add_option("--n", dom_spec.n, "image side length")->default_val(3);
    dom_cmd->add_option("--labels", dom_spec.labels, "label count")->default_val(4);
    dom_cmd->add_option("--seed", dom_spec.seed, "master seed")->default_val(0);
    dom_cmd->add_option("--out", dom_spec.out_path, "dominion file path")->required();
    dom_cmd->add_flag("--alpha", dom_spec.with_alpha,
                      "also emit a tree-walk label assignment when minc embeds in a tree");

    // verify
    auto* verify_cmd =
        app.add_subcommand("verify", "polymorphism checks for a net, or dominion validity");
    std::string verify_net, verify_dominion, verify_mode = "auto";
    std::uint64_t verify_budget = 10000, verify_seed = 0;
    verify_cmd->add_option("--net", verify_net, "net document to check against ham_n");
    verify_cmd->add_option("--dominion", verify_dominion, "dominion file to check");
    verify_cmd->add_option("--mode", verify_mode, "auto|exhaustive|sampled");
    verify_cmd->add_option("--budget", verify_budget, "samples per check in sampled mode");
    verify_cmd->add_option("--seed", verify_seed, "sampling seed");

    // show
    auto* show_cmd = app.add_subcommand("show", "print layers, edges, and activations");
    std::string show_net;
    show_cmd->add_option("--net", show_net, "net document")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen) {
            dnets::generate_dataset(dataset_spec);
            std::cout << "wrote " << dataset_spec.count << " pairs to " << dataset_spec.out_dir
                      << "\n";
            return kExitOk;
        }
        if (*train_cmd) {
            auto config = dnets::ExperimentConfig::from_file(config_path);
            if (!train_out.empty()) config.raw["out"] = train_out;
            if (seed_given) config.raw["seed"] = train_seed;
            if (max_iterations > 0) config.raw["trainer"]["max_iterations"] = max_iterations;
            if (patience >= 0)
                config.raw["trainer"]["patience"] = static_cast<std::uint64_t>(patience);
            const auto outcome = dnets::run_train(config, std::cout);
            std::cout << "net written to " << outcome.net_path << "\n";
            return kExitOk;
        }
        if (*eval_cmd) {
            const double loss = dnets::run_eval(eval_net, eval_data, eval_loss);
            std::printf("%.6f\n", loss);
            return kExitOk;
        }
        if (*dom_cmd) {
            dnets::run_gen_dominion(dom_spec, std::cout);
            return kExitOk;
        }
        if (*verify_cmd) {
            if (verify_net.empty() == verify_dominion.empty())
                throw dnets::ParameterError("verify: pass exactly one of --net or --dominion");
            const bool ok =
                verify_net.empty()
                    ? dnets::run_verify_dominion(verify_dominion, std::cout)
                    : dnets::run_verify_net(verify_net, verify_mode, verify_budget, verify_seed,
                                            std::cout);
            return ok ? kExitOk : kExitVerificationFailure;
        }
        if (*show_cmd) {
            dnets::run_show(show_net, std::cout);
            return kExitOk;
        }
    } catch (const dnets::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
