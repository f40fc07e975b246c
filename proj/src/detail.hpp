#pragma once

// Internal helpers shared by the library's translation units.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dnets/image.hpp"
#include "dnets/universe.hpp"

namespace dnets::detail {

inline nlohmann::json image_to_json(const BinaryImage& img) { return img.rows(); }

inline BinaryImage image_from_json(const nlohmann::json& doc) {
    if (!doc.is_array()) throw IoError("expected an image as an array of row strings");
    return BinaryImage::from_rows(doc.get<std::vector<std::string>>());
}

inline nlohmann::json make_descriptor(const std::string& family, int arity,
                                      const Universe& universe, nlohmann::json params) {
    return {{"family", family},
            {"arity", arity},
            {"universe", universe.to_json()},
            {"params", std::move(params)}};
}

// Visit every tuple in [0,base)^arity, lexicographically with the first
// coordinate slowest. Returns the number of tuples visited.
inline std::uint64_t for_each_tuple(int arity, std::uint64_t base,
                                    const std::function<void(std::span<const Value>)>& fn) {
    std::vector<Value> tuple(static_cast<std::size_t>(arity), 0);
    std::uint64_t visited = 0;
    for (;;) {
        fn(tuple);
        ++visited;
        int pos = arity - 1;
        while (pos >= 0 && ++tuple[pos] == base) tuple[pos--] = 0;
        if (pos < 0) return visited;
    }
}

// base^exp, saturating at limit+1 to keep overflow checks simple.
inline std::uint64_t checked_pow(std::uint64_t base, int exp, std::uint64_t limit) {
    std::uint64_t result = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && result > limit / base) return limit + 1;
        result *= base;
    }
    return result;
}

}  // namespace dnets::detail
