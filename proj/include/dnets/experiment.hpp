#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dnets/learn.hpp"
#include "dnets/net.hpp"

namespace dnets {

// ---------------------------------------------------------------------------
// Datasets (PBM files + TSV manifest)
// ---------------------------------------------------------------------------

struct DatasetSpec {
    std::string task;  // rot90 | reflect | mask | twist-composite
    int n = 3;
    int count = 16;
    std::uint64_t seed = 0;
    std::string out_dir;
};

// Parameters the task derived from the seed (recorded in task.json).
struct TaskParams {
    std::string task;
    int n = 0;
    std::string sigma;               // dihedral element, when used
    std::vector<std::string> mask;   // mask/offset image rows, when used
};

// Ground-truth map of the named task (always an endomorphism of ham_n).
Operation task_operation(const TaskParams& params);

// Write input_%04d.pbm / target_%04d.pbm / manifest.tsv / task.json.
// Deterministic: same spec, byte-identical output.
TaskParams generate_dataset(const DatasetSpec& spec);

// Load (input tuple, target tuple) pairs from a manifest. Fields may hold
// comma-separated path lists for multi-image tuples; paths resolve relative
// to the manifest's directory.
TrainingSet load_dataset(const std::string& manifest_path, int expected_n);

// Peek at the image side length of the first referenced file.
int dataset_side(const std::string& manifest_path);

// ---------------------------------------------------------------------------
// Experiment configuration
// ---------------------------------------------------------------------------

// Parsed experiment file. "net" names a net document, or holds an inline
// {"layers":..,"edges":..} architecture whose activations are then drawn
// from the configured pools under the master seed.
struct ExperimentConfig {
    nlohmann::json raw;
    std::string config_dir;  // directory of the config file, for relative paths

    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_json(nlohmann::json doc, std::string dir = ".");
};

struct TrainOutcome {
    double initial_loss = 0.0;
    double final_loss = 0.0;
    std::string net_path;
    std::string trace_path;
};

// Run the training pipeline: resolve the initial net, build the neighbor
// function and loss, train, and write <out>/net.json and <out>/trace.csv.
TrainOutcome run_train(const ExperimentConfig& config, std::ostream& log);

// Mean loss of a stored net over a dataset.
double run_eval(const std::string& net_path, const std::string& manifest_path,
                const std::string& loss_name);

// Per-activation and per-output-coordinate polymorphism verdicts against
// ham_n. Returns true when everything passed. mode: "auto" | "exhaustive" |
// "sampled".
bool run_verify_net(const std::string& net_path, const std::string& mode, std::uint64_t budget,
                    std::uint64_t seed, std::ostream& out);

bool run_verify_dominion(const std::string& dominion_path, std::ostream& out);

// Layers, orderings, edges, and activation descriptors, human-readable.
void run_show(const std::string& net_path, std::ostream& out);

struct DominionGenSpec {
    int k = 2;
    int n = 3;
    int labels = 4;
    std::uint64_t seed = 0;
    std::string out_path;
    bool with_alpha = false;
};

// Write the dominion file, its minc edge list (<out>.minc), and optionally a
// tree-walk label assignment (<out>.alpha/ with PBMs) when minc is acyclic.
void run_gen_dominion(const DominionGenSpec& spec, std::ostream& log);

// Seed streams (documented splitting scheme: Rng(seed, stream_id(name))).
namespace streams {
inline constexpr const char* kDatasetInputs = "dataset.inputs";
inline constexpr const char* kDatasetParams = "dataset.params";
inline constexpr const char* kPools = "pools";
inline constexpr const char* kInit = "init";
inline constexpr const char* kTrain = "train";
}  // namespace streams

}  // namespace dnets
