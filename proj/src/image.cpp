#include "dnets/image.hpp"

#include "dnets/rng.hpp"

namespace dnets {

BinaryImage BinaryImage::from_rows(const std::vector<std::string>& rows) {
    const int n = static_cast<int>(rows.size());
    BinaryImage img(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(rows[i].size()) != n)
            throw ParameterError("image row " + std::to_string(i) + " has length " +
                                 std::to_string(rows[i].size()) + ", expected " +
                                 std::to_string(n));
        for (int j = 0; j < n; ++j) {
            const char c = rows[i][j];
            if (c != '0' && c != '1') throw ParameterError("image rows must contain only 0/1");
            if (c == '1') img.set(i, j, true);
        }
    }
    return img;
}

std::vector<std::string> BinaryImage::rows() const {
    std::vector<std::string> out(n_, std::string(n_, '0'));
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (get(i, j)) out[i][j] = '1';
    return out;
}

std::string BinaryImage::to_string() const {
    std::string out;
    const auto rs = rows();
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (i) out += '/';
        out += rs[i];
    }
    return out;
}

std::vector<BinaryImage> standard_basis(int n) {
    std::vector<BinaryImage> basis;
    basis.reserve(static_cast<std::size_t>(n) * n);
    for (int p = 0; p < n * n; ++p) basis.push_back(BinaryImage(n, std::uint64_t{1} << p));
    return basis;
}

BinaryImage random_image(int n, Rng& rng) {
    const Universe u = Universe::images(n);
    return BinaryImage(n, rng.below(u.cardinality()));
}

}  // namespace dnets
