#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "dnets/error.hpp"

namespace dnets {

// A universe element. Table universes use the values 0..m-1; image universes
// pack an n x n bit matrix row-major, pixel (i,j) at bit i*n+j.
using Value = std::uint64_t;

// The carrier set of operations and structures: either an explicit m-element
// set ("table") or the set of n x n binary images ("images").
class Universe {
  public:
    enum class Kind { table, images };

    static Universe table(int size);
    static Universe images(int side);

    Kind kind() const { return kind_; }

    // Element count for table universes.
    int size() const { return extent_; }
    // Image side length n for image universes.
    int side() const { return extent_; }

    std::uint64_t cardinality() const;
    bool contains(Value v) const;

    bool operator==(const Universe& other) const = default;

    nlohmann::json to_json() const;
    static Universe from_json(const nlohmann::json& doc);

    std::string describe() const;

  private:
    Universe(Kind kind, int extent) : kind_(kind), extent_(extent) {}

    Kind kind_;
    int extent_;
};

// Images are bit-packed into a single 64-bit word, so sides above 7 (whose
// universe cardinality would also overflow) are rejected.
inline constexpr int kMaxImageSide = 7;
inline constexpr int kMaxTableSize = 1 << 20;

}  // namespace dnets
