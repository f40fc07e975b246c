#include "dnets/universe.hpp"

#include <nlohmann/json.hpp>

namespace dnets {

Universe Universe::table(int size) {
    if (size < 1 || size > kMaxTableSize)
        throw ParameterError("table universe size must be in [1," +
                             std::to_string(kMaxTableSize) + "], got " + std::to_string(size));
    return Universe(Kind::table, size);
}

Universe Universe::images(int side) {
    if (side < 1 || side > kMaxImageSide)
        throw ParameterError("image universe side must be in [1," +
                             std::to_string(kMaxImageSide) + "], got " + std::to_string(side));
    return Universe(Kind::images, side);
}

std::uint64_t Universe::cardinality() const {
    if (kind_ == Kind::table) return static_cast<std::uint64_t>(extent_);
    return std::uint64_t{1} << (extent_ * extent_);
}

bool Universe::contains(Value v) const { return v < cardinality(); }

nlohmann::json Universe::to_json() const {
    if (kind_ == Kind::table) return {{"kind", "table"}, {"size", extent_}};
    return {{"kind", "images"}, {"n", extent_}};
}

Universe Universe::from_json(const nlohmann::json& doc) {
    const auto kind = doc.at("kind").get<std::string>();
    if (kind == "table") return table(doc.at("size").get<int>());
    if (kind == "images") return images(doc.at("n").get<int>());
    throw IoError("unknown universe kind '" + kind + "'");
}

std::string Universe::describe() const {
    if (kind_ == Kind::table) return "table(" + std::to_string(extent_) + ")";
    return "images(" + std::to_string(extent_) + ")";
}

}  // namespace dnets
