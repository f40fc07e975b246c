#pragma once

#include <iosfwd>
#include <string>

#include "dnets/image.hpp"

namespace dnets {

// Plain PBM (P1): header "P1", dimensions "n n", then n rows of n 0/1 tokens.
// Bit (i,j) maps to row i, column j. Only square images are accepted.
void write_pbm(std::ostream& out, const BinaryImage& image);
void write_pbm_file(const std::string& path, const BinaryImage& image);

BinaryImage read_pbm(std::istream& in);
BinaryImage read_pbm_file(const std::string& path);

}  // namespace dnets
