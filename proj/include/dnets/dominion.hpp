#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dnets/image.hpp"
#include "dnets/operation.hpp"
#include "dnets/structure.hpp"

namespace dnets {

// A vertex of the k-ary Hamming weight graph: k entries in [0, n^2].
using WeightVector = std::vector<int>;

// psi_k: componentwise Hamming weights.
WeightVector weight_map(std::span<const BinaryImage> images);
WeightVector weight_map_bits(std::span<const Value> packed);

// King-move adjacency with loops: every coordinate differs by at most 1.
bool weight_adjacent(const WeightVector& u, const WeightVector& v);

// The 2^k vertices {u + delta : delta in {0,1}^k}; u must lie in [0..n^2-1]^k.
std::vector<WeightVector> basic_cube(const WeightVector& top, int n);

// A labeling of [0..n^2]^k (flattened lexicographically, last coordinate
// fastest) with labels in [0, label_count). Validity — at most two distinct
// labels per basic cube — is checked by is_dominion, not the constructor.
class Dominion {
  public:
    Dominion(int k, int n, int label_count, std::vector<int> labels);

    int k() const { return k_; }
    int n() const { return n_; }
    int label_count() const { return label_count_; }
    const std::vector<int>& labels() const { return labels_; }

    int label_at(const WeightVector& v) const { return labels_[flat_index(v)]; }
    std::size_t flat_index(const WeightVector& v) const;
    WeightVector vertex_at(std::size_t flat) const;
    std::size_t vertex_count() const { return labels_.size(); }

    // Practical dense-storage bound; larger requests are refused.
    static constexpr std::uint64_t kMaxVertices = 1u << 20;

  private:
    int k_, n_, label_count_;
    std::vector<int> labels_;
};

// Every basic cube carries at most two distinct labels; a false verdict names
// a violating top corner and the >= 3 labels on its cube.
HomWitness is_dominion(const Dominion& D);

// Seeded randomized lexicographic sweep with bounded backtracking and
// restart. Always terminates with a valid dominion; deterministic per seed.
Dominion generate_dominion(int k, int n, int label_count, std::uint64_t seed);

// Simple undirected graph on vertices 0..vertex_count-1, edges stored (i<j).
struct SimpleGraph {
    int vertex_count = 0;
    std::set<std::pair<int, int>> edges;

    bool has_edge(int a, int b) const;
};

// Labels adjacent when they co-occur in some basic cube. No loops.
SimpleGraph minc(const Dominion& D);

// A spanning tree of g's components joined into one tree, when g is acyclic;
// nullopt when g has a cycle (this artifact only exploits the tree case).
std::optional<SimpleGraph> embed_in_tree(const SimpleGraph& g);

// alpha: one image per label.
using LabelAssignment = std::vector<BinaryImage>;

// Seeded walk assigning the root a random image and each child its parent's
// image, flipped in one random pixel half the time. Maps every tree edge to
// an adjacent pair, so its restriction to any subgraph is a homomorphism.
LabelAssignment tree_walk_homomorphism(const SimpleGraph& tree, int n, std::uint64_t seed);

// g_alpha(a_1..a_k) = alpha(D(psi_k(a))). Construction checks alpha against
// every minc edge and names the violated edge on failure. The result is
// always a polymorphism of ham_n.
Operation dominion_polymorphism(const Dominion& D, const LabelAssignment& alpha);

// --- file formats -----------------------------------------------------------

// Line 1: "k n |L|"; then the labels in lexicographic vertex order.
void write_dominion(std::ostream& out, const Dominion& D);
Dominion read_dominion(std::istream& in);

// One "a b" line per minc edge.
void write_edge_list(std::ostream& out, const SimpleGraph& g);

// One "label <tab> pbm-path" line per label; images written alongside.
void write_label_assignment(const std::string& dir, const LabelAssignment& alpha);
LabelAssignment read_label_assignment(const std::string& file);

}  // namespace dnets
