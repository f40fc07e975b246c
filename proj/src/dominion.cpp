#include "dnets/dominion.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dnets/pbm.hpp"
#include "dnets/rng.hpp"
#include "detail.hpp"

namespace dnets {

namespace fs = std::filesystem;

WeightVector weight_map(std::span<const BinaryImage> images) {
    if (images.empty()) throw ParameterError("weight_map: empty tuple");
    const int n = images.front().side();
    WeightVector weights;
    weights.reserve(images.size());
    for (const auto& img : images) {
        if (img.side() != n) throw ParameterError("weight_map: mixed image sizes");
        weights.push_back(img.weight());
    }
    return weights;
}

WeightVector weight_map_bits(std::span<const Value> packed) {
    WeightVector weights;
    weights.reserve(packed.size());
    for (Value v : packed) weights.push_back(std::popcount(v));
    return weights;
}

bool weight_adjacent(const WeightVector& u, const WeightVector& v) {
    if (u.size() != v.size()) throw ParameterError("weight_adjacent: lengths differ");
    for (std::size_t i = 0; i < u.size(); ++i)
        if (std::abs(u[i] - v[i]) > 1) return false;
    return true;
}

std::vector<WeightVector> basic_cube(const WeightVector& top, int n) {
    const int k = static_cast<int>(top.size());
    if (k < 1) throw ParameterError("basic_cube: empty top corner");
    for (int u : top)
        if (u < 0 || u > n * n - 1)
            throw ParameterError("basic_cube: top corner outside [0," +
                                 std::to_string(n * n - 1) + "]^k");
    std::vector<WeightVector> corners;
    corners.reserve(std::size_t{1} << k);
    for (std::uint64_t delta = 0; delta < (std::uint64_t{1} << k); ++delta) {
        WeightVector v = top;
        for (int i = 0; i < k; ++i) v[i] += (delta >> i) & 1;
        corners.push_back(std::move(v));
    }
    return corners;
}

Dominion::Dominion(int k, int n, int label_count, std::vector<int> labels)
    : k_(k), n_(n), label_count_(label_count), labels_(std::move(labels)) {
    if (k < 1) throw ParameterError("dominion: k must be >= 1");
    if (n < 1 || n > kMaxImageSide) throw ParameterError("dominion: bad image side");
    if (label_count < 1) throw ParameterError("dominion: need at least one label");
    const std::uint64_t vertices =
        detail::checked_pow(static_cast<std::uint64_t>(n) * n + 1, k, kMaxVertices);
    if (vertices > kMaxVertices)
        throw ParameterError("dominion: (n^2+1)^k exceeds the dense storage bound");
    if (labels_.size() != vertices)
        throw ParameterError("dominion: got " + std::to_string(labels_.size()) +
                             " labels, expected " + std::to_string(vertices));
    for (int l : labels_)
        if (l < 0 || l >= label_count)
            throw ParameterError("dominion: label " + std::to_string(l) + " outside [0," +
                                 std::to_string(label_count) + ")");
}

std::size_t Dominion::flat_index(const WeightVector& v) const {
    if (static_cast<int>(v.size()) != k_) throw ParameterError("dominion: arity mismatch");
    const int base = n_ * n_ + 1;
    std::size_t index = 0;
    for (int coordinate : v) {
        if (coordinate < 0 || coordinate >= base)
            throw ParameterError("dominion: weight " + std::to_string(coordinate) +
                                 " outside [0," + std::to_string(base - 1) + "]");
        index = index * base + coordinate;
    }
    return index;
}

WeightVector Dominion::vertex_at(std::size_t flat) const {
    const int base = n_ * n_ + 1;
    WeightVector v(k_);
    for (int i = k_ - 1; i >= 0; --i) {
        v[i] = static_cast<int>(flat % base);
        flat /= base;
    }
    return v;
}

namespace {

// Visit the top corners u in [0..n^2-1]^k lexicographically.
void for_each_cube_top(int k, int n, const std::function<void(const WeightVector&)>& fn) {
    WeightVector top(k, 0);
    const int limit = n * n - 1;
    for (;;) {
        fn(top);
        int pos = k - 1;
        while (pos >= 0 && ++top[pos] > limit) top[pos--] = 0;
        if (pos < 0) return;
    }
}

std::vector<int> distinct_cube_labels(const Dominion& D, const WeightVector& top) {
    std::vector<int> labels;
    for (const auto& corner : basic_cube(top, D.n())) {
        const int l = D.label_at(corner);
        if (std::find(labels.begin(), labels.end(), l) == labels.end()) labels.push_back(l);
    }
    return labels;
}

}  // namespace

HomWitness is_dominion(const Dominion& D) {
    HomWitness witness;
    for_each_cube_top(D.k(), D.n(), [&](const WeightVector& top) {
        if (!witness.verdict) return;
        const auto labels = distinct_cube_labels(D, top);
        if (labels.size() > 2) {
            witness.verdict = false;
            Counterexample ce;
            ce.where = "basic-cube";
            ce.args = {std::vector<Value>(top.begin(), top.end())};
            ce.outputs.assign(labels.begin(), labels.end());
            ce.detail = "basic cube carries more than two labels";
            witness.counterexample = std::move(ce);
        }
    });
    return witness;
}

Dominion generate_dominion(int k, int n, int label_count, std::uint64_t seed) {
    // Lexicographic sweep with randomized label choice, bounded backtracking,
    // and restart under a derived seed. A constant completion always exists,
    // so restarts cannot starve.
    const std::uint64_t vertex_count =
        detail::checked_pow(static_cast<std::uint64_t>(n) * n + 1, k, Dominion::kMaxVertices);
    if (vertex_count > Dominion::kMaxVertices)
        throw ParameterError("generate_dominion: (n^2+1)^k exceeds the dense storage bound");
    const int base = n * n + 1;

    // Neighbour cubes of a vertex: every top corner u with u_i in
    // {v_i-1, v_i} that stays inside [0..n^2-1]^k.
    Dominion shape(k, n, 1, std::vector<int>(vertex_count, 0));
    auto cubes_of = [&](const WeightVector& v) {
        std::vector<WeightVector> tops;
        WeightVector top(k);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
            bool ok = true;
            for (int i = 0; i < k && ok; ++i) {
                top[i] = v[i] - static_cast<int>((mask >> i) & 1);
                ok = top[i] >= 0 && top[i] <= base - 2;
            }
            if (ok && std::find(tops.begin(), tops.end(), top) == tops.end()) tops.push_back(top);
        }
        return tops;
    };

    for (std::uint64_t attempt = 0;; ++attempt) {
        std::uint64_t mix = seed;
        for (std::uint64_t i = 0; i <= attempt; ++i) Rng::splitmix64(mix);
        Rng rng(mix, stream_id("generate_dominion"));

        std::vector<int> labels(vertex_count, -1);
        // Per-vertex shuffled candidate queue, rebuilt on (re)entry.
        std::vector<std::vector<int>> pending(vertex_count);
        std::uint64_t budget = 64 * vertex_count;
        std::size_t t = 0;
        bool fresh = true;
        while (t < vertex_count && budget > 0) {
            --budget;
            const WeightVector v = shape.vertex_at(t);
            if (fresh) {
                // Labels compatible with every partially-filled cube at v.
                std::vector<int> candidates;
                for (int l = 0; l < label_count; ++l) {
                    bool ok = true;
                    for (const auto& top : cubes_of(v)) {
                        std::vector<int> used;
                        for (const auto& corner : basic_cube(top, n)) {
                            const std::size_t idx = shape.flat_index(corner);
                            const int assigned = idx < t ? labels[idx] : -1;
                            if (assigned >= 0 &&
                                std::find(used.begin(), used.end(), assigned) == used.end())
                                used.push_back(assigned);
                        }
                        if (std::find(used.begin(), used.end(), l) == used.end())
                            used.push_back(l);
                        if (used.size() > 2) {
                            ok = false;
                            break;
                        }
                    }
                    if (ok) candidates.push_back(l);
                }
                // Uniform choice order via shuffle.
                for (std::size_t i = candidates.size(); i > 1; --i)
                    std::swap(candidates[i - 1], candidates[rng.below(i)]);
                pending[t] = std::move(candidates);
            }
            if (pending[t].empty()) {
                if (t == 0) break;  // restart
                labels[t] = -1;
                --t;
                labels[t] = -1;
                fresh = false;  // retry previous vertex with its remaining candidates
                continue;
            }
            labels[t] = pending[t].back();
            pending[t].pop_back();
            ++t;
            fresh = true;
        }
        if (t == vertex_count) return Dominion(k, n, label_count, std::move(labels));
    }
}

bool SimpleGraph::has_edge(int a, int b) const {
    if (a == b) return false;
    return edges.count({std::min(a, b), std::max(a, b)}) > 0;
}

SimpleGraph minc(const Dominion& D) {
    SimpleGraph graph;
    graph.vertex_count = D.label_count();
    for_each_cube_top(D.k(), D.n(), [&](const WeightVector& top) {
        const auto labels = distinct_cube_labels(D, top);
        for (std::size_t i = 0; i < labels.size(); ++i)
            for (std::size_t j = i + 1; j < labels.size(); ++j)
                graph.edges.emplace(std::min(labels[i], labels[j]),
                                    std::max(labels[i], labels[j]));
    });
    return graph;
}

std::optional<SimpleGraph> embed_in_tree(const SimpleGraph& g) {
    // Union-find cycle detection; acyclic input is a forest we link into a
    // single tree with bridges between component representatives.
    std::vector<int> parent(g.vertex_count);
    for (int i = 0; i < g.vertex_count; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [a, b] : g.edges) {
        const int ra = find(a), rb = find(b);
        if (ra == rb) return std::nullopt;  // cycle
        parent[ra] = rb;
    }
    SimpleGraph tree = g;
    int previous_root = -1;
    for (int v = 0; v < g.vertex_count; ++v) {
        if (find(v) != v) continue;
        if (previous_root >= 0) {
            tree.edges.emplace(std::min(previous_root, v), std::max(previous_root, v));
            parent[find(previous_root)] = v;
        }
        previous_root = v;
    }
    return tree;
}

namespace {

bool is_tree(const SimpleGraph& g) {
    if (g.vertex_count < 1) return false;
    if (static_cast<int>(g.edges.size()) != g.vertex_count - 1) return false;
    std::vector<int> parent(g.vertex_count);
    for (int i = 0; i < g.vertex_count; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [a, b] : g.edges) {
        const int ra = find(a), rb = find(b);
        if (ra == rb) return false;
        parent[ra] = rb;
    }
    return true;  // acyclic with |V|-1 edges implies connected
}

}  // namespace

LabelAssignment tree_walk_homomorphism(const SimpleGraph& tree, int n, std::uint64_t seed) {
    if (!is_tree(tree)) throw ParameterError("tree_walk_homomorphism: input is not a tree");
    Rng rng(seed, stream_id("tree_walk"));
    const Universe universe = Universe::images(n);
    LabelAssignment alpha(tree.vertex_count, BinaryImage(n));

    std::vector<std::vector<int>> adjacency(tree.vertex_count);
    for (const auto& [a, b] : tree.edges) {
        adjacency[a].push_back(b);
        adjacency[b].push_back(a);
    }

    std::vector<bool> visited(tree.vertex_count, false);
    std::vector<int> stack = {0};
    alpha[0] = BinaryImage(n, rng.below(universe.cardinality()));
    visited[0] = true;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int child : adjacency[v]) {
            if (visited[child]) continue;
            visited[child] = true;
            BinaryImage img = alpha[v];
            // Loops at every vertex make "stay" as valid as "step".
            if (rng.coin()) {
                const int i = static_cast<int>(rng.below(n));
                const int j = static_cast<int>(rng.below(n));
                img.flip(i, j);
            }
            alpha[child] = img;
            stack.push_back(child);
        }
    }
    return alpha;
}

Operation dominion_polymorphism(const Dominion& D, const LabelAssignment& alpha) {
    if (static_cast<int>(alpha.size()) != D.label_count())
        throw ParameterError("dominion_polymorphism: alpha must assign every label");
    for (const auto& img : alpha)
        if (img.side() != D.n())
            throw ParameterError("dominion_polymorphism: alpha images must have side " +
                                 std::to_string(D.n()));
    const SimpleGraph constraints = minc(D);
    for (const auto& [a, b] : constraints.edges)
        if (!adjacent(alpha[a], alpha[b]))
            throw ParameterError("dominion_polymorphism: alpha violates minc edge {" +
                                 std::to_string(a) + "," + std::to_string(b) + "}: images " +
                                 alpha[a].to_string() + " and " + alpha[b].to_string() +
                                 " are not adjacent");

    const Universe universe = Universe::images(D.n());
    nlohmann::json alpha_doc = nlohmann::json::array();
    for (const auto& img : alpha) alpha_doc.push_back(detail::image_to_json(img));
    nlohmann::json params = {{"k", D.k()},
                             {"n", D.n()},
                             {"label_count", D.label_count()},
                             {"labels", D.labels()},
                             {"alpha", std::move(alpha_doc)}};

    auto labels = std::make_shared<const std::vector<int>>(D.labels());
    std::vector<Value> images;
    for (const auto& img : alpha) images.push_back(img.bits());
    const int base = D.n() * D.n() + 1;
    return Operation::make(
        D.k(), universe,
        detail::make_descriptor("dominion", D.k(), universe, std::move(params)),
        [labels, images, base](std::span<const Value> args) {
            std::size_t index = 0;
            for (Value a : args) index = index * base + std::popcount(a);
            return images[(*labels)[index]];
        });
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

void write_dominion(std::ostream& out, const Dominion& D) {
    out << D.k() << ' ' << D.n() << ' ' << D.label_count() << '\n';
    const int base = D.n() * D.n() + 1;
    const auto& labels = D.labels();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out << labels[i];
        out << (((i + 1) % base == 0) ? '\n' : ' ');
    }
}

Dominion read_dominion(std::istream& in) {
    int k, n, label_count;
    if (!(in >> k >> n >> label_count)) throw IoError("dominion file: malformed header");
    if (k < 1 || n < 1 || n > kMaxImageSide || label_count < 1)
        throw IoError("dominion file: header values out of range");
    const std::uint64_t vertex_count =
        detail::checked_pow(static_cast<std::uint64_t>(n) * n + 1, k, Dominion::kMaxVertices);
    if (vertex_count > Dominion::kMaxVertices)
        throw IoError("dominion file: (n^2+1)^k exceeds the dense storage bound");
    std::vector<int> labels(vertex_count);
    for (auto& l : labels)
        if (!(in >> l)) throw IoError("dominion file: truncated label table");
    try {
        return Dominion(k, n, label_count, std::move(labels));
    } catch (const ParameterError& e) {
        throw IoError(std::string("dominion file: ") + e.what());
    }
}

void write_edge_list(std::ostream& out, const SimpleGraph& g) {
    for (const auto& [a, b] : g.edges) out << a << ' ' << b << '\n';
}

void write_label_assignment(const std::string& dir, const LabelAssignment& alpha) {
    fs::create_directories(dir);
    std::ofstream index(fs::path(dir) / "assignment.tsv");
    if (!index) throw IoError("cannot write label assignment under '" + dir + "'");
    for (std::size_t label = 0; label < alpha.size(); ++label) {
        const std::string name = "label_" + std::to_string(label) + ".pbm";
        write_pbm_file((fs::path(dir) / name).string(), alpha[label]);
        index << label << '\t' << name << '\n';
    }
}

LabelAssignment read_label_assignment(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open label assignment '" + file + "'");
    const fs::path dir = fs::path(file).parent_path();
    std::map<std::size_t, BinaryImage> by_label;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::size_t label;
        std::string path;
        if (!(row >> label >> path)) throw IoError("label assignment: malformed line '" + line + "'");
        by_label.emplace(label, read_pbm_file((dir / path).string()));
    }
    LabelAssignment alpha;
    for (std::size_t i = 0; i < by_label.size(); ++i) {
        const auto it = by_label.find(i);
        if (it == by_label.end())
            throw IoError("label assignment: missing label " + std::to_string(i));
        alpha.push_back(it->second);
    }
    return alpha;
}

}  // namespace dnets
