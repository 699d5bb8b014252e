#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "lrp/cli.hpp"
#include "lrp/errors.hpp"
#include "lrp/io.hpp"
#include "lrp/sampler.hpp"

using namespace lrp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lrp_unit";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("edge files round trip exactly") {
  const EdgeConfiguration c = sample_continuous(ModelParams{2, 1.5, 0.25, 9.0, 42},
                                                Window::cube(2, -3.0, 5.0), Stream(42));
  REQUIRE(!c.edges.empty());
  const std::string bytes = encode_edge_file(c);
  CHECK(decode_edge_file(bytes) == c);
  const std::string path = scratch("a.lrpe").string();
  write_edge_file(path, c);
  CHECK(read_edge_file(path) == c);
  CHECK(sniff_sample_file(path) == "edge");
}

TEST_CASE("corrupt edge files are detected") {
  const EdgeConfiguration c = sample_continuous(ModelParams{1, 2.0, 1.0, kInfinity, 1},
                                                Window::cube(1, 0.0, 50.0), Stream(1));
  std::string bytes = encode_edge_file(c);
  std::string flipped = bytes;
  flipped[flipped.size() - 12] ^= 0x10;
  CHECK_THROWS_AS(decode_edge_file(flipped), FormatError);
  CHECK_THROWS_AS(decode_edge_file(bytes.substr(0, bytes.size() - 3)), FormatError);
  CHECK_THROWS_AS(decode_edge_file("LRPX" + bytes.substr(4)), FormatError);
}

TEST_CASE("lattice files round trip exactly") {
  const LatticeGraph g = sample_discrete(ModelParams{2, 1.0, 1.0, kInfinity, 3},
                                         IntBox(Site{-4, 0}, Site{6, 9}), Stream(3));
  CHECK(decode_lattice_file(encode_lattice_file(g)) == g);
  std::string bytes = encode_lattice_file(g);
  bytes[bytes.size() - 9] ^= 0x01;
  CHECK_THROWS_AS(decode_lattice_file(bytes), FormatError);
}

TEST_CASE("rasters round trip") {
  LatticeGraph g;
  g.params = ModelParams{2, 1.0, 1.0, kInfinity, 0};
  g.box = IntBox::cube(2, 0, 6);
  const DistanceField f = bfs_distance(g, Site{3, 3});
  const std::string path = scratch("ball.f32").string();
  write_raster(path, f);
  const DistanceField back = read_raster(path);
  CHECK(back.values == f.values);
  CHECK(back.window == f.window);
  CHECK(fs::file_size(path) == 49 * 4);
}

TEST_CASE("doubles print losslessly") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345678.875, -2.5})
    CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("command line exit codes") {
  const std::string out = scratch("cli.lrpe").string();
  CHECK(run_cli({"lrp", "sample", "--model", "continuous", "--d", "1", "--beta", "1", "--delta", "1",
                 "--window", "0:2", "--seed", "7", "--out", out}) == kExitOk);
  const std::string first = read_file(out);
  CHECK(run_cli({"lrp", "sample", "--model", "continuous", "--d", "1", "--beta", "1", "--delta", "1",
                 "--window", "0:2", "--seed", "7", "--out", out}) == kExitOk);
  CHECK(read_file(out) == first);
  CHECK(fs::exists(out + ".manifest.json"));
  CHECK(run_cli({"lrp", "sample", "--delta", "0", "--box", "0:4", "--out", out}) == kExitUsage);
  CHECK(run_cli({"lrp", "frobnicate"}) == kExitUsage);
  CHECK(run_cli({"lrp", "verify", "--suite", "nope", "--out", out + ".json"}) == kExitUsage);
  const std::string csv = scratch("d.csv").string();
  CHECK(run_cli({"lrp", "dist", "--box=0:9", "--from", "0", "--to", "12", "--out", csv}) == kExitUsage);
}

TEST_CASE("empty lattice file gives taxicab distances") {
  LatticeGraph g;
  g.params = ModelParams{2, 1.0, 1.0, kInfinity, 0};
  g.box = IntBox::cube(2, -5, 5);
  g.touching_implicit = false;
  const std::string in = scratch("empty.lrpl").string();
  write_lattice_file(in, g);
  const std::string csv = scratch("empty.csv").string();
  REQUIRE(run_cli({"lrp", "dist", "--d", "2", "--in", in, "--from", "0,0", "--to", "3,-4", "--out", csv}) ==
          kExitOk);
  CHECK(read_file(csv) == "x0,x1,y0,y1,distance,hops\n0,0,3,-4,7,0\n");
}
