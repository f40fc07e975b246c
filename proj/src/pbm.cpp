#include "dnets/pbm.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace dnets {

namespace {

// Next significant character: whitespace skipped, '#' comments run to EOL.
int next_token_char(std::istream& in) {
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
            continue;
        }
        if (!std::isspace(c)) return c;
    }
    return EOF;
}

int read_int(std::istream& in, const char* what) {
    int c = next_token_char(in);
    if (c == EOF || !std::isdigit(c)) throw IoError(std::string("pbm: expected ") + what);
    int value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        if (value > 1 << 20) throw IoError(std::string("pbm: unreasonable ") + what);
        c = in.get();
    }
    return value;
}

}  // namespace

void write_pbm(std::ostream& out, const BinaryImage& image) {
    const int n = image.side();
    out << "P1\n" << n << ' ' << n << '\n';
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j) out << ' ';
            out << (image.get(i, j) ? '1' : '0');
        }
        out << '\n';
    }
}

void write_pbm_file(const std::string& path, const BinaryImage& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_pbm(out, image);
    if (!out) throw IoError("write failed for '" + path + "'");
}

BinaryImage read_pbm(std::istream& in) {
    int c = next_token_char(in);
    if (c != 'P' || in.get() != '1') throw IoError("pbm: missing P1 magic");
    const int width = read_int(in, "width");
    const int height = read_int(in, "height");
    if (width != height)
        throw IoError("pbm: image is " + std::to_string(width) + "x" + std::to_string(height) +
                      ", only square images are supported");
    try {
        BinaryImage img(width);
        for (int i = 0; i < width; ++i)
            for (int j = 0; j < width; ++j) {
                c = next_token_char(in);
                if (c != '0' && c != '1') throw IoError("pbm: expected a 0/1 bitmap entry");
                if (c == '1') img.set(i, j, true);
            }
        return img;
    } catch (const ParameterError& e) {
        throw IoError(std::string("pbm: ") + e.what());
    }
}

BinaryImage read_pbm_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_pbm(in);
}

}  // namespace dnets
