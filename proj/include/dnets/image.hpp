#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "dnets/error.hpp"
#include "dnets/universe.hpp"

namespace dnets {

// An n x n binary image, a vertex of the Hamming graph. Pixels are 0-indexed;
// pixel (i,j) lives at bit i*n+j of the packed word.
class BinaryImage {
  public:
    explicit BinaryImage(int n, std::uint64_t bits = 0) : n_(n), bits_(bits) {
        if (n < 1 || n > kMaxImageSide)
            throw ParameterError("image side must be in [1," + std::to_string(kMaxImageSide) +
                                 "], got " + std::to_string(n));
        if (n < 8 && (bits >> (n * n)) != 0)
            throw ParameterError("image bits exceed the n*n pixel grid");
    }

    // Rows as strings of '0'/'1', e.g. {"01","10"}.
    static BinaryImage from_rows(const std::vector<std::string>& rows);

    int side() const { return n_; }
    std::uint64_t bits() const { return bits_; }

    bool get(int i, int j) const {
        check_pixel(i, j);
        return (bits_ >> (i * n_ + j)) & 1u;
    }

    void set(int i, int j, bool v) {
        check_pixel(i, j);
        const std::uint64_t mask = std::uint64_t{1} << (i * n_ + j);
        bits_ = v ? (bits_ | mask) : (bits_ & ~mask);
    }

    void flip(int i, int j) {
        check_pixel(i, j);
        bits_ ^= std::uint64_t{1} << (i * n_ + j);
    }

    int weight() const { return std::popcount(bits_); }

    std::vector<std::string> rows() const;
    std::string to_string() const;  // rows joined with '/'

    bool operator==(const BinaryImage& other) const = default;

  private:
    void check_pixel(int i, int j) const {
        if (i < 0 || j < 0 || i >= n_ || j >= n_)
            throw ParameterError("pixel (" + std::to_string(i) + "," + std::to_string(j) +
                                 ") outside [" + std::to_string(n_) + "]^2");
    }

    int n_;
    std::uint64_t bits_;
};

inline int hamming_distance(const BinaryImage& a, const BinaryImage& b) {
    if (a.side() != b.side()) throw ParameterError("hamming_distance: image sizes differ");
    return std::popcount(a.bits() ^ b.bits());
}

inline int hamming_weight(const BinaryImage& a) { return a.weight(); }

inline bool adjacent(const BinaryImage& a, const BinaryImage& b) {
    return hamming_distance(a, b) <= 1;
}

// Packed-value forms used by operation evaluators on images(n) universes.
inline int hamming_distance_bits(Value a, Value b) { return std::popcount(a ^ b); }
inline bool adjacent_bits(Value a, Value b) { return std::popcount(a ^ b) <= 1; }

// The n^2 images of weight exactly one.
std::vector<BinaryImage> standard_basis(int n);

BinaryImage random_image(int n, class Rng& rng);

}  // namespace dnets
