#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pavinglab/errors.hpp"
#include "pavinglab/io.hpp"
#include "test_support.hpp"

using namespace pavinglab;
using namespace testsupport;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("pavinglab-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static inline int counter = 0;
};

}  // namespace

TEST_CASE("matrix market array round trip is exact") {
  TempDir dir;
  Rng rng(5005);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(8));
    const Mat a = random_complex(rng, n);
    const std::string path = (dir.path / "a.mtx").string();
    write_matrix_market(path, a, false);
    const Mat b = read_matrix_market(path);
    CHECK(max_abs(Mat(a - b)) == 0.0);
  }

  // exact banner per the format
  const std::string path = (dir.path / "banner.mtx").string();
  write_matrix_market(path, Mat::Identity(2, 2), false);
  std::ifstream in(path);
  std::string banner;
  std::getline(in, banner);
  CHECK(banner == "%%MatrixMarket matrix array complex general");
}

TEST_CASE("matrix market coordinate round trip is exact") {
  TempDir dir;
  Rng rng(5015);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(8));
    Mat a = Mat::Zero(n, n);
    for (int e = 0; e < n; ++e) {
      a(rng.uniform_int(n), rng.uniform_int(n)) = rng.complex_normal();
    }
    const std::string path = (dir.path / "s.mtx").string();
    write_matrix_market(path, a, true);
    CHECK(max_abs(Mat(a - read_matrix_market(path))) == 0.0);
  }

  const std::string path = (dir.path / "banner.mtx").string();
  write_matrix_market(path, Mat::Identity(2, 2), true);
  std::ifstream in(path);
  std::string banner;
  std::getline(in, banner);
  CHECK(banner == "%%MatrixMarket matrix coordinate complex general");
}

TEST_CASE("matrix market reader accepts real fields and rejects junk") {
  TempDir dir;
  const std::string path = (dir.path / "real.mtx").string();
  {
    std::ofstream out(path);
    out << "%%MatrixMarket matrix coordinate real general\n"
        << "% comment line\n"
        << "2 2 2\n"
        << "1 1 3.5\n"
        << "2 1 -1\n";
  }
  const Mat a = read_matrix_market(path);
  CHECK(a(0, 0) == Cplx(3.5, 0.0));
  CHECK(a(1, 0) == Cplx(-1.0, 0.0));
  CHECK(a(0, 1) == Cplx(0.0, 0.0));

  const std::string bad = (dir.path / "bad.mtx").string();
  {
    std::ofstream out(bad);
    out << "%%NotMarket matrix array complex general\n2 2\n";
  }
  CHECK_THROWS_AS(read_matrix_market(bad), IoError);
  CHECK_THROWS_AS(read_matrix_market((dir.path / "missing.mtx").string()),
                  IoError);

  const std::string sym = (dir.path / "sym.mtx").string();
  {
    std::ofstream out(sym);
    out << "%%MatrixMarket matrix coordinate real symmetric\n1 1 1\n1 1 2\n";
  }
  CHECK_THROWS_AS(read_matrix_market(sym), IoError);
}

TEST_CASE("block operator manifests round trip") {
  TempDir dir;
  Rng rng(5025);
  BlockOperator op({random_complex(rng, 3), random_complex(rng, 5)});
  const std::string manifest = (dir.path / "op.json").string();
  write_block_operator(manifest, op);
  const BlockOperator back = read_block_operator(manifest);
  REQUIRE(back.block_count() == 2);
  for (int k = 0; k < 2; ++k) {
    CHECK(max_abs(Mat(back.block(k) - op.block(k))) == 0.0);
  }

  const std::string broken = (dir.path / "broken.json").string();
  {
    std::ofstream out(broken);
    out << "{\"blocks\": [{\"n\": 4, \"mm\": \"op_block000.mtx\"}]}";
  }
  CHECK_THROWS_AS(read_block_operator(broken), IoError);  // dim mismatch
}

TEST_CASE("partition and permutation-set JSON") {
  PavingPartition part{2, {{1, 2, 1}, {2, 2}}};
  const PavingPartition back = partition_from_json(partition_to_json(part));
  CHECK(back.m == 2);
  CHECK(back.colors == part.colors);
  CHECK(partition_to_json(part).find("\"colors\":[[1,2,1],[2,2]]") !=
        std::string::npos);

  PermutationSet ps{3, {{1, 2, 0}, {0, 2, 1}}};
  const std::string text = permutation_set_to_json(ps);
  CHECK(text.find("[2,3,1]") != std::string::npos);  // 1-based on the wire
  const PermutationSet back_ps = permutation_set_from_json(text);
  CHECK(back_ps.n == 3);
  CHECK(back_ps.perms == ps.perms);

  CHECK_THROWS_AS(partition_from_json("{"), IoError);
  CHECK_THROWS_AS(permutation_set_from_json("[]"), IoError);
}
