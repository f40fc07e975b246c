#pragma once

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dnets/image.hpp"
#include "dnets/operation.hpp"
#include "dnets/rng.hpp"
#include "dnets/structure.hpp"

namespace dnets {

// ---------------------------------------------------------------------------
// Dihedral symmetries of the pixel grid
// ---------------------------------------------------------------------------

// The eight elements of D4 with their fixed 2x2 matrices over {-1,0,1}:
// r = [[0,-1],[1,0]] (quarter turn), s = [[1,0],[0,-1]] (horizontal flip);
// the symbol x*y denotes the matrix product mat(x)*mat(y).
enum class Dihedral { e, r, r2, r3, s, sr, sr2, sr3 };

inline constexpr std::array<Dihedral, 8> kDihedralElements = {
    Dihedral::e,  Dihedral::r,  Dihedral::r2,  Dihedral::r3,
    Dihedral::s,  Dihedral::sr, Dihedral::sr2, Dihedral::sr3};

std::array<std::array<int, 2>, 2> dihedral_matrix(Dihedral s);
std::string dihedral_name(Dihedral s);
Dihedral dihedral_from_name(const std::string& name);

// Group product in application order: the element acting as "sigma first,
// then tau" (matrix mat(tau)*mat(sigma)). With this orientation
// h_sigma o h_tau = h_{compose(sigma,tau)} holds for the endomorphisms below.
Dihedral dihedral_compose(Dihedral sigma, Dihedral tau);

// Centered pixel coordinates: gamma_n maps [n]^2 onto U_n (the integer square
// for odd n; for even n the square of n+1 minus both axes).
std::pair<int, int> gamma(int n, int i, int j);
std::pair<int, int> gamma_inverse(int n, int x, int y);
bool in_gamma_codomain(int n, int x, int y);

// Pixel permutation of h_sigma: result[out] = in, both as flat indices i*n+j.
std::vector<int> dihedral_pixel_permutation(Dihedral sigma, int n);

// ---------------------------------------------------------------------------
// Endomorphism families of ham_n and indicator polymorphisms
// ---------------------------------------------------------------------------

// (h_sigma(a))_ij = a at gamma^-1(sigma(gamma(i,j))); always an automorphism.
Operation dihedral_endo(Dihedral sigma, int n);

// a -> a + b over F_2 (an involutive automorphism).
Operation swap_endo(const BinaryImage& b);

// a -> a (.) b, the Hadamard mask (an endomorphism, idempotent).
Operation blank_endo(const BinaryImage& b);

// g_{b,c}(a_1..a_k) = (prod_i a_i . c_i) b with ||b|| = 1; image inside the
// adjacent pair {0, b}, hence always a polymorphism of ham_n.
Operation multilinear_indicator(const BinaryImage& b, std::span<const BinaryImage> c);
Operation multilinear_indicator(const BinaryImage& b, const std::vector<BinaryImage>& c);

// k-ary pixelwise AND on images(n). Not a polymorphism for n >= 2; kept as a
// negative control for the verification oracles.
Operation bitwise_and_operation(int n, int arity);

// The n-Hamming graph as a relational structure: one binary relation
// "adjacent", d(a,b) <= 1, with enumeration and sampling support.
Structure hamming_structure(int n);

// Which endomorphisms to put in H_n. The full swapping/blanking families have
// 2^(n^2) members each, so masks are drawn under a seed.
struct HFamilySpec {
    bool dihedral = true;
    int swap_masks = 0;
    int blank_masks = 0;
    std::uint64_t seed = 0;
};

// The identity, the dihedral family when selected, and the requested sampled
// swap/blank endomorphisms, deduplicated extensionally. Deterministic under
// the given seed.
std::vector<Operation> build_H(int n, const HFamilySpec& spec);

}  // namespace dnets
