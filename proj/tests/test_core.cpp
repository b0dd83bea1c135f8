#include <doctest.h>

#include <cstdint>
#include <filesystem>

#include "plumeseg/errors.hpp"
#include "plumeseg/io.hpp"
#include "plumeseg/types.hpp"
#include "test_support.hpp"

using namespace plumeseg;
namespace fs = std::filesystem;

namespace {

HyperCube sample_cube(std::uint64_t seed = 7) {
    HyperCube cube;
    cube.frames = 2;
    cube.height = 3;
    cube.width = 4;
    cube.bands = 5;
    cube.kind = CubeKind::Emissivity;
    cube.wavelengths_nm = {7830, 7860, 7890, 7920, 7950};
    cube.data = testsup::uniform_vector(cube.sample_count(), seed);
    return cube;
}

}  // namespace

TEST_CASE("hsc1 round-trip is bit exact") {
    const auto dir = testsup::temp_dir("core_roundtrip");
    const HyperCube cube = sample_cube();
    write_cube(cube, dir / "a.hsc");
    const HyperCube back = read_cube(dir / "a.hsc");

    CHECK(back.frames == cube.frames);
    CHECK(back.height == cube.height);
    CHECK(back.width == cube.width);
    CHECK(back.bands == cube.bands);
    CHECK(back.kind == cube.kind);
    CHECK(back.wavelengths_nm == cube.wavelengths_nm);
    CHECK(back.data == cube.data);

    // writing twice gives identical bytes
    write_cube(back, dir / "b.hsc");
    CHECK(testsup::slurp(dir / "a.hsc") == testsup::slurp(dir / "b.hsc"));
}

TEST_CASE("hsc1 minimal cube has the exact computed size") {
    const auto dir = testsup::temp_dir("core_minimal");
    HyperCube cube;
    cube.frames = cube.height = cube.width = cube.bands = 1;
    cube.kind = CubeKind::Radiance;
    cube.wavelengths_nm = {7830.0};
    cube.data = {0.5};
    write_cube(cube, dir / "m.hsc");

    // magic(4) + 4*u32(16) + 1*f64 wavelength(8) + kind(1) + 1*f64 data(8)
    CHECK(hsc1_file_size(1, 1, 1, 1) == 37);
    CHECK(fs::file_size(dir / "m.hsc") == 37);
    const HyperCube back = read_cube(dir / "m.hsc");
    CHECK(back.data.size() == 1);
    CHECK(back.data[0] == 0.5);
}

TEST_CASE("hsc1 parse errors carry byte offsets") {
    const auto dir = testsup::temp_dir("core_parse");
    const HyperCube cube = sample_cube();
    write_cube(cube, dir / "ok.hsc");
    std::string blob = testsup::slurp(dir / "ok.hsc");

    SUBCASE("bad magic reports offset 0") {
        std::string bad = blob;
        bad[0] = 'X';
        bad[1] = 'X';
        bad[2] = 'X';
        bad[3] = 'X';
        write_text_file(dir / "bad.hsc", bad);
        try {
            read_cube(dir / "bad.hsc");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.byte_offset() == 0);
        }
    }
    SUBCASE("truncated payload rejected") {
        write_text_file(dir / "trunc.hsc", blob.substr(0, blob.size() - 5));
        CHECK_THROWS_AS(read_cube(dir / "trunc.hsc"), ParseError);
    }
    SUBCASE("trailing bytes rejected") {
        write_text_file(dir / "extra.hsc", blob + "!");
        CHECK_THROWS_AS(read_cube(dir / "extra.hsc"), ParseError);
    }
    SUBCASE("non-ascending wavelengths rejected at their offset") {
        HyperCube bad = cube;
        bad.wavelengths_nm[2] = bad.wavelengths_nm[1];  // not ascending
        CHECK_THROWS_AS(write_cube(bad, dir / "never.hsc"), DomainError);
        // byte-level corruption so the reader path is exercised too
        std::string corrupted = blob;
        for (int i = 0; i < 8; ++i) corrupted[20 + 8 + i] = corrupted[20 + i];
        write_text_file(dir / "wl.hsc", corrupted);
        try {
            read_cube(dir / "wl.hsc");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.byte_offset() == 20 + 8);  // second wavelength
        }
    }
    SUBCASE("NaN rejected before write") {
        HyperCube bad = cube;
        bad.data[3] = std::nan("");
        CHECK_THROWS_AS(write_cube(bad, dir / "nan.hsc"), DomainError);
    }
}

TEST_CASE("emit_image writes exact netpbm bytes") {
    const auto dir = testsup::temp_dir("core_netpbm");

    SUBCASE("all-zero 2x2 gray frame") {
        const std::vector<double> gray(4, 0.0);
        emit_image(gray, 2, 2, 1, dir / "z.pgm");
        const auto img = testsup::decode_pnm(testsup::slurp(dir / "z.pgm"));
        CHECK(img.channels == 1);
        CHECK(img.width == 2);
        CHECK(img.height == 2);
        CHECK(img.bytes == std::vector<std::uint8_t>{0, 0, 0, 0});
    }
    SUBCASE("all-one 1x1 rgb frame") {
        const std::vector<double> rgb = {1.0, 1.0, 1.0};
        emit_image(rgb, 1, 1, 3, dir / "o.ppm");
        const auto img = testsup::decode_pnm(testsup::slurp(dir / "o.ppm"));
        CHECK(img.channels == 3);
        CHECK(img.bytes == std::vector<std::uint8_t>{255, 255, 255});
    }
    SUBCASE("0.5 rounds half away from zero to 128") {
        const std::vector<double> gray = {0.5};
        emit_image(gray, 1, 1, 1, dir / "h.pgm");
        const auto img = testsup::decode_pnm(testsup::slurp(dir / "h.pgm"));
        CHECK(img.bytes == std::vector<std::uint8_t>{128});
    }
    SUBCASE("deterministic bytes") {
        const auto gray = testsup::uniform_vector(64, 3);
        emit_image(gray, 8, 8, 1, dir / "d1.pgm");
        emit_image(gray, 8, 8, 1, dir / "d2.pgm");
        CHECK(testsup::slurp(dir / "d1.pgm") == testsup::slurp(dir / "d2.pgm"));
    }
    SUBCASE("out-of-range pixel rejected with its index") {
        std::vector<double> gray = {0.0, 1.5, 0.0, 0.0};
        try {
            emit_image(gray, 2, 2, 1, dir / "bad.pgm");
            FAIL("expected DomainError");
        } catch (const DomainError& e) {
            CHECK(std::string(e.what()).find("pixel index 1") !=
                  std::string::npos);
        }
    }
    SUBCASE("round-trip through the library reader") {
        const auto gray = testsup::uniform_vector(35, 11);
        emit_image(gray, 5, 7, 1, dir / "rt.pgm");
        const ImageU8 img = read_netpbm(dir / "rt.pgm");
        CHECK(img.height == 5);
        CHECK(img.width == 7);
        const auto oracle = testsup::decode_pnm(testsup::slurp(dir / "rt.pgm"));
        CHECK(img.pixels == oracle.bytes);
    }
}

TEST_CASE("labeling csv format") {
    const auto dir = testsup::temp_dir("core_csv");

    SUBCASE("1x3 labeling") {
        Labeling l;
        l.height = 1;
        l.width = 3;
        l.num_clusters = 3;
        l.labels = {0, 1, 2};
        emit_labeling_csv(l, dir / "a.csv");
        CHECK(testsup::slurp(dir / "a.csv") == "0,1,2\n");
    }
    SUBCASE("2x1 labeling gives two lines") {
        Labeling l;
        l.height = 2;
        l.width = 1;
        l.num_clusters = 2;
        l.labels = {1, 0};
        emit_labeling_csv(l, dir / "b.csv");
        CHECK(testsup::slurp(dir / "b.csv") == "1\n0\n");
    }
    SUBCASE("round-trip with a reader oracle") {
        Labeling l;
        l.height = 3;
        l.width = 4;
        l.num_clusters = 5;
        l.labels = {0, 1, 2, 3, 4, 0, 1, 2, 3, 4, 0, 1};
        emit_labeling_csv(l, dir / "c.csv");
        const std::string text = testsup::slurp(dir / "c.csv");
        std::vector<int> parsed;
        int cur = -1;
        for (char ch : text) {
            if (ch >= '0' && ch <= '9') {
                cur = (cur < 0 ? 0 : cur * 10) + (ch - '0');
            } else if (cur >= 0) {
                parsed.push_back(cur);
                cur = -1;
            }
        }
        CHECK(parsed == l.labels);
    }
}

TEST_CASE("jaccard index") {
    std::vector<std::uint8_t> a = {1, 1, 0, 0};
    std::vector<std::uint8_t> b = {1, 0, 1, 0};
    CHECK(jaccard(a, b) == doctest::Approx(1.0 / 3.0));
    CHECK(jaccard(a, a) == 1.0);
    std::vector<std::uint8_t> empty(4, 0);
    CHECK(jaccard(empty, empty) == 1.0);
}

TEST_CASE("frame pattern expansion is strict") {
    CHECK(format_indexed_path("m_%04d.pgm", 7) == "m_0007.pgm");
    CHECK(format_indexed_path("x%d.ppm", 12) == "x12.ppm");
    CHECK_THROWS_AS(format_indexed_path("no_conversion.pgm", 1), DomainError);
    CHECK_THROWS_AS(format_indexed_path("two_%d_%d.pgm", 1), DomainError);
    CHECK_THROWS_AS(format_indexed_path("bad_%s.pgm", 1), DomainError);
}

TEST_CASE("slice_frames copies the right samples") {
    const HyperCube cube = sample_cube();
    const HyperCube cut = slice_frames(cube, 1, 2);
    CHECK(cut.frames == 1);
    CHECK(cut.at(0, 2, 3, 4) == cube.at(1, 2, 3, 4));
    CHECK_THROWS_AS(slice_frames(cube, 1, 1), DomainError);
}
