#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "euler_lab/snapshot.hpp"
#include "test_support.hpp"

using namespace euler_lab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / ("euler_lab_test_" + std::string(name));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("snapshot round trip through stem, .bin and .json paths") {
  const fs::path dir = scratch_dir("snap");
  GridSpec g{8};
  SpectralField f = testing_support::random_solenoidal(g, 4, 2, 1.0);
  f *= cplx(0.3, -0.7);
  const fs::path bin = write_snapshot(dir / "field", f);
  CHECK(bin == dir / "field.bin");
  CHECK(fs::file_size(bin) == 3 * g.points() * 16);
  for (const fs::path& p : {dir / "field", dir / "field.bin", dir / "field.json"}) {
    const SpectralField r = read_snapshot(p);
    CHECK(r.grid() == g);
    CHECK(r.rank() == Rank::vector3);
    CHECK(r.hermitian() == f.hermitian());
    CHECK(testing_support::max_diff(r, f) == 0.0);
  }
}

TEST_CASE("snapshot layout is little-endian re/im in component-major order") {
  const fs::path dir = scratch_dir("layout");
  GridSpec g{8};
  SpectralField f(g, Rank::scalar, false);
  f.at(0, 0, 0, 1) = {1.5, -2.0};
  write_snapshot(dir / "s", f);
  std::ifstream in(dir / "s.bin", std::ios::binary);
  double vals[4];
  in.read(reinterpret_cast<char*>(vals), sizeof vals);
  CHECK(vals[0] == 0.0);
  CHECK(vals[2] == 1.5);
  CHECK(vals[3] == -2.0);
}

TEST_CASE("snapshot reader rejects damaged files") {
  const fs::path dir = scratch_dir("bad");
  GridSpec g{8};
  write_snapshot(dir / "s", SpectralField(g, Rank::scalar));
  fs::resize_file(dir / "s.bin", fs::file_size(dir / "s.bin") - 8);
  CHECK_THROWS_AS(read_snapshot(dir / "s"), RejectedInput);

  write_snapshot(dir / "t", SpectralField(g, Rank::scalar));
  { std::ofstream(dir / "t.bin", std::ios::app | std::ios::binary) << "xxxxxxxx"; }
  CHECK_THROWS_AS(read_snapshot(dir / "t"), RejectedInput);

  write_snapshot(dir / "u", SpectralField(g, Rank::scalar));
  { std::ofstream(dir / "u.json") << "{\"n\": 8, \"rank\": 2, \"hermitian\": true, \"dealias_fraction\": 0.5}"; }
  CHECK_THROWS_AS(read_snapshot(dir / "u"), RejectedInput);
  { std::ofstream(dir / "u.json") << "{not json"; }
  CHECK_THROWS_AS(read_snapshot(dir / "u"), RejectedInput);
  CHECK_THROWS_AS(read_snapshot(dir / "missing"), RejectedInput);
}
