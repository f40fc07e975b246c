// Python bindings for the main operations: images, finite operations,
// the Hamming-graph families, nets, the local-search trainer, and the
// dominion pipeline. Values are universe elements: packed bit patterns for
// images(n) universes, plain integers for table universes.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dnets/dominion.hpp"
#include "dnets/experiment.hpp"
#include "dnets/hamming.hpp"
#include "dnets/learn.hpp"
#include "dnets/net.hpp"
#include "dnets/operation.hpp"
#include "dnets/pbm.hpp"
#include "dnets/structure.hpp"

namespace py = pybind11;
using namespace dnets;

namespace {

nlohmann::json json_from_string(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("invalid JSON: ") + e.what());
    }
}

CheckMode mode_from_args(const std::string& mode, std::uint64_t budget, std::uint64_t seed) {
    if (mode == "exhaustive") return CheckMode::exhaustive();
    if (mode == "sampled") return CheckMode::sampled(budget, seed);
    throw ParameterError("mode must be 'exhaustive' or 'sampled'");
}

py::object witness_to_py(const HomWitness& witness) {
    py::dict out;
    out["verdict"] = witness.verdict;
    out["sampled"] = witness.sampled;
    if (witness.counterexample) {
        py::dict ce;
        ce["where"] = witness.counterexample->where;
        ce["args"] = witness.counterexample->args;
        ce["outputs"] = witness.counterexample->outputs;
        ce["detail"] = witness.counterexample->detail;
        out["counterexample"] = ce;
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_dnets, m) {
    m.doc() = "discrete neural nets on finite universes";

    py::register_exception<Error>(m, "DnetsError", PyExc_RuntimeError);

    // --- universes and images -------------------------------------------
    py::class_<Universe>(m, "Universe")
        .def_static("table", &Universe::table, py::arg("size"))
        .def_static("images", &Universe::images, py::arg("side"))
        .def_property_readonly("cardinality", &Universe::cardinality)
        .def("contains", &Universe::contains)
        .def("__eq__", [](const Universe& a, const Universe& b) { return a == b; })
        .def("__repr__", &Universe::describe);

    py::class_<BinaryImage>(m, "BinaryImage")
        .def(py::init<int, std::uint64_t>(), py::arg("n"), py::arg("bits") = 0)
        .def_static("from_rows", &BinaryImage::from_rows)
        .def_property_readonly("side", &BinaryImage::side)
        .def_property_readonly("bits", &BinaryImage::bits)
        .def("get", &BinaryImage::get)
        .def("set", &BinaryImage::set)
        .def("flip", &BinaryImage::flip)
        .def_property_readonly("weight", &BinaryImage::weight)
        .def("rows", &BinaryImage::rows)
        .def("__eq__", [](const BinaryImage& a, const BinaryImage& b) { return a == b; })
        .def("__repr__",
             [](const BinaryImage& a) { return "BinaryImage(" + a.to_string() + ")"; });

    m.def("hamming_distance",
          py::overload_cast<const BinaryImage&, const BinaryImage&>(&hamming_distance));
    m.def("hamming_weight", &hamming_weight);
    m.def("adjacent", py::overload_cast<const BinaryImage&, const BinaryImage&>(&adjacent));
    m.def("standard_basis", &standard_basis);
    m.def("read_pbm", &read_pbm_file);
    m.def("write_pbm", &write_pbm_file);

    // --- operations -------------------------------------------------------
    py::class_<Operation>(m, "Operation")
        .def_property_readonly("arity", &Operation::arity)
        .def_property_readonly("universe", &Operation::universe)
        .def_property_readonly("family", &Operation::family)
        .def("__call__",
             [](const Operation& op, const std::vector<Value>& args) { return op.apply(args); })
        .def("to_json", [](const Operation& op) { return op.to_json().dump(); })
        .def_static("from_json",
                    [](const std::string& text) { return Operation::from_json(json_from_string(text)); });

    m.def("project", &project);
    m.def("compose",
          [](const Operation& f, const std::vector<Operation>& gs) { return compose(f, gs); });
    m.def("table_operation", &table_operation);
    m.def("constant_operation", &constant_operation);
    m.def("linear_mod_p_operation", &linear_mod_p_operation);
    m.def("dihedral_endo",
          [](const std::string& sigma, int n) { return dihedral_endo(dihedral_from_name(sigma), n); });
    m.def("swap_endo", &swap_endo);
    m.def("blank_endo", &blank_endo);
    m.def("multilinear_indicator",
          [](const BinaryImage& b, const std::vector<BinaryImage>& c) {
              return multilinear_indicator(b, c);
          });
    m.def("bitwise_and_operation", &bitwise_and_operation);
    m.def("dihedral_compose", [](const std::string& sigma, const std::string& tau) {
        return dihedral_name(dihedral_compose(dihedral_from_name(sigma), dihedral_from_name(tau)));
    });
    m.def("gamma", [](int n, int i, int j) { return gamma(n, i, j); });
    m.def("gamma_inverse", [](int n, int x, int y) { return gamma_inverse(n, x, y); });

    // --- structures and oracles -------------------------------------------
    py::class_<Structure>(m, "Structure")
        .def_property_readonly("universe", &Structure::universe);

    m.def("hamming_structure", &hamming_structure);
    m.def(
        "is_polymorphism",
        [](const Operation& f, const Structure& A, const std::string& mode, std::uint64_t budget,
           std::uint64_t seed) { return witness_to_py(is_polymorphism(f, A, mode_from_args(mode, budget, seed))); },
        py::arg("f"), py::arg("structure"), py::arg("mode") = "exhaustive",
        py::arg("budget") = 10000, py::arg("seed") = 0);
    m.def("power_adjacent",
          [](const Structure& A, const std::vector<Value>& u, const std::vector<Value>& v) {
              return power_adjacent(A, u, v);
          });

    // --- nets ---------------------------------------------------------------
    py::class_<NeuralNet>(m, "NeuralNet")
        .def(py::init([](const std::vector<std::vector<std::string>>& layers,
                         const std::vector<std::pair<std::string, std::string>>& edges,
                         const Universe& universe,
                         const std::map<std::string, Operation>& activations) {
                 return NeuralNet(Architecture{layers, edges}, universe, activations);
             }),
             py::arg("layers"), py::arg("edges"), py::arg("universe"), py::arg("activations"))
        .def_property_readonly("universe", &NeuralNet::universe)
        .def_property_readonly("input_size", &NeuralNet::input_size)
        .def_property_readonly("output_size", &NeuralNet::output_size)
        .def_property_readonly("non_input_vertices", &NeuralNet::non_input_vertices)
        .def("indegree", &NeuralNet::indegree)
        .def("activation", &NeuralNet::activation)
        .def("evaluate",
             [](const NeuralNet& net, const std::vector<Value>& input) { return net.evaluate(input); })
        .def("with_activation", &NeuralNet::with_activation)
        .def("output_coordinate_op", &NeuralNet::output_coordinate_op)
        .def("to_json", [](const NeuralNet& net) { return net.to_json().dump(2); })
        .def_static("from_json", [](const std::string& text) {
            return NeuralNet::from_json(json_from_string(text));
        });

    m.def("validate_architecture", [](const std::vector<std::vector<std::string>>& layers,
                                      const std::vector<std::pair<std::string, std::string>>& edges) {
        return validate_architecture(Architecture{layers, edges});
    });

    // --- learning -------------------------------------------------------------
    py::class_<LossFunction>(m, "LossFunction")
        .def_property_readonly("name", [](const LossFunction& l) { return l.name; });
    m.def("loss_zero_one", &loss_zero_one);
    m.def("loss_hamming", &loss_hamming);

    py::class_<NeighborFunction>(m, "NeighborFunction")
        .def_property_readonly("clone_tag",
                               [](const NeighborFunction& eta) { return eta.clone_tag; })
        .def("enumerate", [](const NeighborFunction& eta, const Operation& g, std::uint64_t seed) {
            Rng rng(seed);
            return eta.enumerate(g, rng);
        });
    m.def("neighbor_singleton", &neighbor_singleton);
    m.def("neighbor_full", &neighbor_full, py::arg("universe"), py::arg("max_ops") = 65536);
    m.def("neighbor_linear_mod_p", &neighbor_linear_mod_p);
    m.def("neighbor_twist", &neighbor_twist, py::arg("H"), py::arg("G"),
          py::arg("sample_bound") = 64);
    m.def("build_H", [](int n, bool dihedral, int swap_masks, int blank_masks, std::uint64_t seed) {
              return build_H(n, HFamilySpec{dihedral, swap_masks, blank_masks, seed});
          },
          py::arg("n"), py::arg("dihedral") = true, py::arg("swap_masks") = 0,
          py::arg("blank_masks") = 0, py::arg("seed") = 0);

    m.def("empirical_loss", &empirical_loss);
    m.def(
        "learn_step_at",
        [](const NeuralNet& net, const std::string& vertex, const NeighborFunction& eta,
           const LossFunction& loss, const TrainingSet& T, std::uint64_t seed) {
            Rng rng(seed);
            auto [result, report] = learn_step_at(net, vertex, eta, loss, T, rng);
            py::dict info;
            info["vertex"] = report.vertex;
            info["loss_before"] = report.loss_before;
            info["loss_after"] = report.loss_after;
            info["candidates"] = report.candidate_losses.size();
            info["chosen_index"] = report.chosen_index;
            return py::make_tuple(result, info);
        },
        py::arg("net"), py::arg("vertex"), py::arg("eta"), py::arg("loss"), py::arg("pairs"),
        py::arg("seed") = 0);
    m.def(
        "train",
        [](const NeuralNet& net, const NeighborFunction& eta, const LossFunction& loss,
           const TrainingSet& T, std::uint64_t max_iterations, std::uint64_t patience,
           std::uint64_t seed) {
            const TrainResult result = train(net, eta, loss, T, {max_iterations, patience, seed});
            py::list trace;
            for (const auto& row : result.trace)
                trace.append(py::make_tuple(row.step, row.vertex, row.loss_before, row.loss_after,
                                            row.candidates));
            py::dict out;
            out["net"] = result.net;
            out["trace"] = trace;
            out["initial_loss"] = result.initial_loss;
            out["final_loss"] = result.final_loss;
            return out;
        },
        py::arg("net"), py::arg("eta"), py::arg("loss"), py::arg("pairs"),
        py::arg("max_iterations") = 100, py::arg("patience") = 0, py::arg("seed") = 0);

    // --- dominions ------------------------------------------------------------
    py::class_<Dominion>(m, "Dominion")
        .def(py::init<int, int, int, std::vector<int>>(), py::arg("k"), py::arg("n"),
             py::arg("label_count"), py::arg("labels"))
        .def_property_readonly("k", &Dominion::k)
        .def_property_readonly("n", &Dominion::n)
        .def_property_readonly("label_count", &Dominion::label_count)
        .def_property_readonly("labels", &Dominion::labels)
        .def("label_at", &Dominion::label_at);

    m.def("weight_map", [](const std::vector<BinaryImage>& images) { return weight_map(images); });
    m.def("weight_adjacent", &weight_adjacent);
    m.def("basic_cube", &basic_cube);
    m.def("is_dominion", [](const Dominion& D) { return witness_to_py(is_dominion(D)); });
    m.def("generate_dominion", &generate_dominion, py::arg("k"), py::arg("n"),
          py::arg("label_count"), py::arg("seed") = 0);
    m.def("minc_edges", [](const Dominion& D) {
        const SimpleGraph g = minc(D);
        return std::vector<std::pair<int, int>>(g.edges.begin(), g.edges.end());
    });
    m.def("dominion_polymorphism_from_walk",
          [](const Dominion& D, std::uint64_t seed) -> py::object {
              const auto tree = embed_in_tree(minc(D));
              if (!tree) return py::none();
              return py::cast(
                  dominion_polymorphism(D, tree_walk_homomorphism(*tree, D.n(), seed)));
          },
          py::arg("dominion"), py::arg("seed") = 0,
          "Embed minc in a tree and build g_alpha; None when minc is cyclic.");
    m.def("dominion_polymorphism", &dominion_polymorphism);
}
