#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dnets/dominion.hpp"
#include "dnets/pbm.hpp"
#include "dnets/rng.hpp"

using namespace dnets;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("dnets_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("pbm round trip over random images") {
    Rng rng(12, stream_id("pbm"));
    for (int n = 1; n <= 7; ++n)
        for (int trial = 0; trial < 8; ++trial) {
            const BinaryImage img = random_image(n, rng);
            std::stringstream buffer;
            write_pbm(buffer, img);
            CHECK(read_pbm(buffer) == img);
        }
}

TEST_CASE("pbm formatting is the plain P1 layout") {
    const BinaryImage img = BinaryImage::from_rows({"10", "01"});
    std::stringstream buffer;
    write_pbm(buffer, img);
    CHECK(buffer.str() == "P1\n2 2\n1 0\n0 1\n");
}

TEST_CASE("pbm reader tolerates comments and packed digits") {
    std::stringstream with_comment("P1\n# made by hand\n2 2\n0 1 1 0\n");
    CHECK(read_pbm(with_comment) == BinaryImage::from_rows({"01", "10"}));
    std::stringstream packed("P1 2 2 0110");
    CHECK(read_pbm(packed) == BinaryImage::from_rows({"01", "10"}));
}

TEST_CASE("pbm reader rejects malformed input") {
    std::stringstream bad_magic("P4\n2 2\n0 1 1 0\n");
    CHECK_THROWS_AS(read_pbm(bad_magic), IoError);
    std::stringstream rectangular("P1\n3 2\n0 1 1 0 1 1\n");
    CHECK_THROWS_AS(read_pbm(rectangular), IoError);
    std::stringstream truncated("P1\n2 2\n0 1\n");
    CHECK_THROWS_AS(read_pbm(truncated), IoError);
    std::stringstream junk("P1\n2 2\n0 1 x 0\n");
    CHECK_THROWS_AS(read_pbm(junk), IoError);
    std::stringstream oversized("P1\n9 9\n");
    CHECK_THROWS_AS(read_pbm(oversized), IoError);
}

TEST_CASE("pbm file io") {
    const fs::path dir = temp_dir("pbm_files");
    const BinaryImage img = BinaryImage::from_rows({"110", "001", "010"});
    const std::string path = (dir / "img.pbm").string();
    write_pbm_file(path, img);
    CHECK(read_pbm_file(path) == img);
    CHECK_THROWS_AS(read_pbm_file((dir / "missing.pbm").string()), IoError);
}

TEST_CASE("label assignment files round trip") {
    const fs::path dir = temp_dir("alpha");
    const LabelAssignment alpha = {BinaryImage::from_rows({"10", "00"}),
                                   BinaryImage::from_rows({"10", "01"}), BinaryImage(2)};
    write_label_assignment(dir.string(), alpha);
    const LabelAssignment back =
        read_label_assignment((dir / "assignment.tsv").string());
    CHECK(back == alpha);

    SUBCASE("missing labels are reported") {
        std::ofstream broken(dir / "broken.tsv");
        broken << "0\tlabel_0.pbm\n2\tlabel_2.pbm\n";
        broken.close();
        CHECK_THROWS_AS(read_label_assignment((dir / "broken.tsv").string()), IoError);
    }
}
