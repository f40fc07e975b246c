#include "dnets/hamming.hpp"

#include <map>

#include "detail.hpp"

namespace dnets {

using nlohmann::json;

// ---------------------------------------------------------------------------
// D4 elements
// ---------------------------------------------------------------------------

namespace {

constexpr std::array<std::array<std::array<int, 2>, 2>, 8> kMatrices = {{
    {{{1, 0}, {0, 1}}},     // e
    {{{0, -1}, {1, 0}}},    // r
    {{{-1, 0}, {0, -1}}},   // r2
    {{{0, 1}, {-1, 0}}},    // r3
    {{{1, 0}, {0, -1}}},    // s
    {{{0, -1}, {-1, 0}}},   // sr  = s*r
    {{{-1, 0}, {0, 1}}},    // sr2 = s*r2
    {{{0, 1}, {1, 0}}},     // sr3 = s*r3
}};

constexpr const char* kNames[8] = {"e", "r", "r2", "r3", "s", "sr", "sr2", "sr3"};

std::array<std::array<int, 2>, 2> mat_mul(const std::array<std::array<int, 2>, 2>& a,
                                          const std::array<std::array<int, 2>, 2>& b) {
    std::array<std::array<int, 2>, 2> c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
}

Dihedral from_matrix(const std::array<std::array<int, 2>, 2>& m) {
    for (int i = 0; i < 8; ++i)
        if (kMatrices[i] == m) return static_cast<Dihedral>(i);
    throw ParameterError("matrix is not a D4 element");
}

}  // namespace

std::array<std::array<int, 2>, 2> dihedral_matrix(Dihedral s) {
    return kMatrices[static_cast<int>(s)];
}

std::string dihedral_name(Dihedral s) { return kNames[static_cast<int>(s)]; }

Dihedral dihedral_from_name(const std::string& name) {
    for (int i = 0; i < 8; ++i)
        if (name == kNames[i]) return static_cast<Dihedral>(i);
    throw ParameterError("unknown dihedral element '" + name + "'");
}

Dihedral dihedral_compose(Dihedral sigma, Dihedral tau) {
    // "sigma first, then tau" on column vectors is mat(tau)*mat(sigma).
    return from_matrix(mat_mul(dihedral_matrix(tau), dihedral_matrix(sigma)));
}

// Used by the twist chain simplifier without pulling in this header.
std::string compose_dihedral_names(const std::string& sigma, const std::string& tau) {
    return dihedral_name(dihedral_compose(dihedral_from_name(sigma), dihedral_from_name(tau)));
}

// ---------------------------------------------------------------------------
// Centered coordinates
// ---------------------------------------------------------------------------

bool in_gamma_codomain(int n, int x, int y) {
    if (n % 2 == 1) {
        const int half = n / 2;
        return -half <= x && x <= half && -half <= y && y <= half;
    }
    const int half = (n + 1) / 2;  // U_n sits inside U_{n+1}, axes removed
    return x != 0 && y != 0 && -half <= x && x <= half && -half <= y && y <= half;
}

std::pair<int, int> gamma(int n, int i, int j) {
    if (i < 0 || j < 0 || i >= n || j >= n)
        throw ParameterError("gamma: pixel outside [" + std::to_string(n) + "]^2");
    const int half = n / 2;
    if (n % 2 == 1) return {-half + j, half - i};
    const bool low_i = i < n / 2;
    const bool low_j = j < n / 2;
    if (low_i && low_j) return {-half + j, half - i};
    if (!low_i && low_j) return {-half + j, half - i - 1};
    if (low_i && !low_j) return {-half + j + 1, half - i};
    return {-half + j + 1, half - i - 1};
}

std::pair<int, int> gamma_inverse(int n, int x, int y) {
    if (!in_gamma_codomain(n, x, y))
        throw ParameterError("gamma_inverse: (" + std::to_string(x) + "," + std::to_string(y) +
                             ") outside U_" + std::to_string(n));
    const int half = n / 2;
    if (n % 2 == 1) return {half - y, x + half};
    const int i = (y > 0) ? half - y : half - y - 1;
    const int j = (x < 0) ? x + half : x + half - 1;
    return {i, j};
}

std::vector<int> dihedral_pixel_permutation(Dihedral sigma, int n) {
    const auto m = dihedral_matrix(sigma);
    std::vector<int> perm(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto [x, y] = gamma(n, i, j);
            const int sx = m[0][0] * x + m[0][1] * y;
            const int sy = m[1][0] * x + m[1][1] * y;
            const auto [si, sj] = gamma_inverse(n, sx, sy);
            perm[i * n + j] = si * n + sj;
        }
    return perm;
}

// ---------------------------------------------------------------------------
// Endomorphisms and indicators
// ---------------------------------------------------------------------------

Operation dihedral_endo(Dihedral sigma, int n) {
    const Universe universe = Universe::images(n);
    auto perm = std::make_shared<const std::vector<int>>(dihedral_pixel_permutation(sigma, n));
    json params = {{"sigma", dihedral_name(sigma)}, {"n", n}};
    const int pixels = n * n;
    return Operation::make(
        1, universe, detail::make_descriptor("dihedral", 1, universe, std::move(params)),
        [perm, pixels](std::span<const Value> args) {
            const Value a = args[0];
            Value out = 0;
            for (int p = 0; p < pixels; ++p)
                out |= ((a >> (*perm)[p]) & 1u) << p;
            return out;
        });
}

Operation swap_endo(const BinaryImage& b) {
    const Universe universe = Universe::images(b.side());
    const Value mask = b.bits();
    json params = {{"mask", detail::image_to_json(b)}};
    return Operation::make(1, universe,
                           detail::make_descriptor("swap", 1, universe, std::move(params)),
                           [mask](std::span<const Value> args) { return args[0] ^ mask; });
}

Operation blank_endo(const BinaryImage& b) {
    const Universe universe = Universe::images(b.side());
    const Value mask = b.bits();
    json params = {{"mask", detail::image_to_json(b)}};
    return Operation::make(1, universe,
                           detail::make_descriptor("blank", 1, universe, std::move(params)),
                           [mask](std::span<const Value> args) { return args[0] & mask; });
}

Operation multilinear_indicator(const BinaryImage& b, std::span<const BinaryImage> c) {
    if (b.weight() != 1)
        throw ParameterError("multilinear indicator requires ||b|| = 1, got weight " +
                             std::to_string(b.weight()));
    const int n = b.side();
    const Universe universe = Universe::images(n);
    std::vector<Value> gates;
    json c_doc = json::array();
    for (const auto& ci : c) {
        if (ci.side() != n) throw ParameterError("indicator parameter images must share n");
        gates.push_back(ci.bits());
        c_doc.push_back(detail::image_to_json(ci));
    }
    const int arity = static_cast<int>(gates.size());
    const Value target = b.bits();
    json params = {{"b", detail::image_to_json(b)}, {"c", std::move(c_doc)}};
    return Operation::make(
        arity, universe, detail::make_descriptor("indicator", arity, universe, std::move(params)),
        [gates, target](std::span<const Value> args) {
            for (std::size_t i = 0; i < gates.size(); ++i)
                if (std::popcount(args[i] & gates[i]) % 2 == 0) return Value{0};
            return target;
        });
}

Operation multilinear_indicator(const BinaryImage& b, const std::vector<BinaryImage>& c) {
    return multilinear_indicator(b, std::span<const BinaryImage>(c));
}

Operation bitwise_and_operation(int n, int arity) {
    if (arity < 1) throw ParameterError("bitwise_and needs arity >= 1");
    const Universe universe = Universe::images(n);
    return Operation::make(
        arity, universe, detail::make_descriptor("bitwise_and", arity, universe, json::object()),
        [](std::span<const Value> args) {
            Value acc = args[0];
            for (std::size_t i = 1; i < args.size(); ++i) acc &= args[i];
            return acc;
        });
}

// ---------------------------------------------------------------------------
// The Hamming graph as a structure
// ---------------------------------------------------------------------------

Structure hamming_structure(int n) {
    const Universe universe = Universe::images(n);
    const std::uint64_t card = universe.cardinality();
    const int flips = n * n;

    Relation adjacency;
    adjacency.name = "adjacent";
    adjacency.arity = 2;
    adjacency.contains = [](std::span<const Value> t) { return adjacent_bits(t[0], t[1]); };
    // Every vertex has n^2+1 closed out-neighbors: itself plus each single
    // pixel flip; enumerating (a, a^bit) covers each ordered edge once.
    adjacency.tuple_count = card * (flips + 1);
    adjacency.for_each = [card, flips](const std::function<void(std::span<const Value>)>& fn) {
        Value pair[2];
        for (Value a = 0; a < card; ++a) {
            pair[0] = a;
            pair[1] = a;
            fn(std::span<const Value>(pair, 2));
            for (int bit = 0; bit < flips; ++bit) {
                pair[1] = a ^ (Value{1} << bit);
                fn(std::span<const Value>(pair, 2));
            }
        }
    };
    adjacency.sample = [card, flips](Rng& rng) {
        const Value a = rng.below(card);
        const std::uint64_t pick = rng.below(static_cast<std::uint64_t>(flips) + 1);
        const Value b = (pick == static_cast<std::uint64_t>(flips)) ? a : a ^ (Value{1} << pick);
        return std::vector<Value>{a, b};
    };

    return Structure(universe, {std::move(adjacency)});
}

// ---------------------------------------------------------------------------
// H_n
// ---------------------------------------------------------------------------

std::vector<Operation> build_H(int n, const HFamilySpec& spec) {
    std::vector<Operation> ops;
    ops.push_back(dihedral_endo(Dihedral::e, n));  // identity always present
    if (spec.dihedral)
        for (const Dihedral s : kDihedralElements)
            if (s != Dihedral::e) ops.push_back(dihedral_endo(s, n));

    Rng rng(spec.seed, stream_id("build_H"));
    const Universe universe = Universe::images(n);
    for (int i = 0; i < spec.swap_masks; ++i)
        ops.push_back(swap_endo(BinaryImage(n, rng.below(universe.cardinality()))));
    for (int i = 0; i < spec.blank_masks; ++i)
        ops.push_back(blank_endo(BinaryImage(n, rng.below(universe.cardinality()))));

    // Extensional dedupe: exhaustive below the probe ceiling, otherwise on
    // the standard basis plus seeded probes.
    std::vector<Value> probes;
    if (universe.cardinality() <= 4096) {
        probes.resize(universe.cardinality());
        for (std::size_t i = 0; i < probes.size(); ++i) probes[i] = i;
    } else {
        for (const auto& e : standard_basis(n)) probes.push_back(e.bits());
        Rng probe_rng(0x9d32a5c7, stream_id("build_H.probes"));
        for (int i = 0; i < 64; ++i) probes.push_back(probe_rng.below(universe.cardinality()));
    }
    std::map<std::vector<Value>, std::size_t> seen;
    std::vector<Operation> unique;
    for (auto& op : ops) {
        std::vector<Value> signature;
        signature.reserve(probes.size());
        for (Value p : probes) signature.push_back(op.apply({&p, 1}));
        if (seen.emplace(std::move(signature), unique.size()).second)
            unique.push_back(std::move(op));
    }
    return unique;
}

}  // namespace dnets
