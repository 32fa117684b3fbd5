#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <vector>

#include "spcv/errors.hpp"
#include "spcv/landscape.hpp"

using namespace spcv;

namespace {

// A landscape with hand-set raw fields, ready for derive_predictors.
Landscape raw_landscape(int side, std::vector<double> x1, std::vector<double> x2,
                        std::vector<double> x3) {
  Landscape land;
  land.grid.side_cells = side;
  int n = land.grid.n_cells();
  land.field(1) = std::move(x1);
  land.field(2) = std::move(x2);
  land.field(3) = std::move(x3);
  for (int k : {6, 7, 8, 9, 10}) land.field(k).assign(n, 0.0);
  return land;
}

}  // namespace

TEST_CASE("quantile_linear interpolates order statistics") {
  std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK(quantile_linear(v, 0.0) == 1.0);
  CHECK(quantile_linear(v, 1.0) == 10.0);
  CHECK(quantile_linear(v, 0.5) == doctest::Approx(5.5));
  CHECK(quantile_linear(v, 0.95) == doctest::Approx(9.55));
  CHECK(quantile_linear(v, 0.25) == doctest::Approx(3.25));
  CHECK(quantile_linear({1, 2, 3, 4}, 0.5) == doctest::Approx(2.5));
  CHECK(quantile_linear({7.5}, 0.3) == 7.5);
  // order must not matter
  CHECK(quantile_linear({3, 1, 2}, 0.5) == 2.0);
  CHECK_THROWS_AS(quantile_linear({}, 0.5), ParamError);
}

TEST_CASE("bell_transform peaks at the normal density constant") {
  CHECK(bell_transform(0.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)));
  CHECK(bell_transform(0.0) == doctest::Approx(0.398942).epsilon(1e-5));
  CHECK(bell_transform(1.5) == bell_transform(-1.5));
  CHECK(bell_transform(2.0) < bell_transform(1.0));
  CHECK(bell_transform(1.0) < bell_transform(0.0));
  CHECK(bell_transform(2.0) == doctest::Approx(std::exp(-1.0) / std::sqrt(2.0 * std::numbers::pi)));
}

TEST_CASE("derived predictors follow their defining formulas") {
  // 2x2 grid, distinct hand-picked raws
  Landscape land = raw_landscape(2, {0.0, 1.0, -0.5, 2.0}, {0.0, 2.0, 1.0, -1.0},
                                 {1.0, 0.5, -2.0, 4.0});
  derive_predictors(land);

  for (int i = 0; i < 4; ++i) {
    double x1 = land.field(1)[i], x2 = land.field(2)[i], x3 = land.field(3)[i];
    CHECK(land.field(5)[i] == x1 + x2 + x3 + x2 * x3);
    CHECK(land.field(11)[i] == x2 / x3);
    CHECK(land.field(12)[i] == bell_transform(x3));
    CHECK(land.field(13)[i] == bell_transform(x2));
    bool is01 = land.field(4)[i] == 0.0 || land.field(4)[i] == 1.0;
    CHECK(is01);
  }
  // cell 0 by hand: 0 + 0 + 1 + 0*1
  CHECK(land.field(5)[0] == 1.0);
  // ratios: {0, 4, -0.5, -0.25}; only the largest clears the 95th percentile
  CHECK(land.field(4)[1] == 0.0);
  CHECK(land.field(4)[0] == 1.0);
  CHECK(land.field(4)[2] == 1.0);
  CHECK(land.field(4)[3] == 1.0);
}

TEST_CASE("a zero in the ratio denominator is a hard error naming the cell") {
  Landscape land = raw_landscape(2, {0, 0, 0, 0}, {1, 1, 1, 1}, {1, 1, 0, 1});
  CHECK_THROWS_WITH_AS(derive_predictors(land),
                       doctest::Contains("cell 2"), ParamError);
}

TEST_CASE("target construction caps the base sum by positive ratios only") {
  Landscape land = raw_landscape(2, {1, 1, 1, 1}, {4, 4, -8, 1}, {2, 0.25, 2, 4});
  derive_predictors(land);
  // override the derived helpers to pin the arithmetic
  land.field(5) = {1.0, 1.0, 1.0, 1.0};
  land.field(6) = {1.0, 1.0, 1.0, 1.0};
  land.field(12) = {1.0, 1.0, 1.0, 1.0};
  land.field(13) = {1.0, 1.0, 1.0, 1.0};
  // bases are all 5; ratios are {2, 16, -4, 0.25}
  compute_target(land);
  CHECK(land.y[0] == 2.0);   // positive ratio below the base caps it
  CHECK(land.y[1] == 5.0);   // ratio above the base leaves it alone
  CHECK(land.y[2] == 5.0);   // negative ratio never caps
  CHECK(land.y[3] == 0.25);  // small positive ratio caps hard
}

TEST_CASE("simulated landscapes satisfy their construction invariants") {
  GridSpec grid;
  grid.side_cells = 50;
  Landscape land = simulate_landscape(grid, 20240101);

  for (int k = 1; k <= 13; ++k) REQUIRE(land.field(k).size() == 2500);
  REQUIRE(land.y.size() == 2500);

  SUBCASE("exclusion indicator marks the top five percent of ratios") {
    int zeros = 0;
    for (double v : land.field(4)) {
      REQUIRE((v == 0.0 || v == 1.0));
      if (v == 0.0) ++zeros;
    }
    // 2500 distinct ratios leave exactly 125 strictly above their 95th percentile
    CHECK(zeros == 125);
  }

  SUBCASE("stored derived fields re-derive from the raw fields") {
    for (int i = 0; i < 2500; ++i) {
      double x1 = land.field(1)[i], x2 = land.field(2)[i], x3 = land.field(3)[i];
      CHECK(land.field(5)[i] == x1 + x2 + x3 + x2 * x3);
      CHECK(land.field(11)[i] == x2 / x3);
    }
  }

  SUBCASE("the target never exceeds a positive ratio") {
    int capped = 0;
    for (int i = 0; i < 2500; ++i) {
      if (land.field(11)[i] > 0.0) {
        CHECK(land.y[i] <= land.field(11)[i]);
        if (land.y[i] == land.field(11)[i]) ++capped;
      }
    }
    CHECK(capped > 0);
  }

  SUBCASE("determinism and seed sensitivity") {
    Landscape again = simulate_landscape(grid, 20240101);
    CHECK(land.field(1) == again.field(1));
    CHECK(land.field(13) == again.field(13));
    CHECK(land.y == again.y);
    Landscape other = simulate_landscape(grid, 20240102);
    CHECK(land.field(1) != other.field(1));
  }
}

TEST_CASE("grid means of a zero-mean field stay centered over many landscapes") {
  GridSpec grid;
  grid.side_cells = 25;
  const int n_land = 100;
  std::vector<double> means;
  means.reserve(n_land);
  for (int l = 0; l < n_land; ++l) {
    Landscape land = simulate_landscape(grid, 5000 + l);
    double m = 0.0;
    for (double v : land.field(2)) m += v;
    means.push_back(m / land.field(2).size());
  }
  double grand = 0.0;
  for (double m : means) grand += m;
  grand /= n_land;
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  double se = std::sqrt(ss / (n_land - 1)) / std::sqrt(static_cast<double>(n_land));
  CHECK(std::abs(grand) <= 3.0 * se);
}

TEST_CASE("landscape CSV round-trips exactly") {
  GridSpec grid;
  grid.side_cells = 8;
  Landscape land = simulate_landscape(grid, 99);

  auto dir = std::filesystem::temp_directory_path() / "spcv_landscape_test";
  std::filesystem::create_directories(dir);
  std::string path = (dir / "land.csv").string();
  write_landscape_csv(land, path);
  Landscape back = read_landscape_csv(path);

  CHECK(back.grid.side_cells == 8);
  for (int k = 1; k <= 13; ++k) CHECK(back.field(k) == land.field(k));
  CHECK(back.y == land.y);
  std::filesystem::remove_all(dir);
}

TEST_CASE("landscape CSV rejects foreign schemas") {
  auto dir = std::filesystem::temp_directory_path() / "spcv_landscape_bad";
  std::filesystem::create_directories(dir);
  std::string path = (dir / "bad.csv").string();
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    REQUIRE(f != nullptr);
    std::fputs("a,b,c\n1,2,3\n", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(read_landscape_csv(path), IoError);
  CHECK_THROWS_AS(read_landscape_csv((dir / "missing.csv").string()), IoError);
  std::filesystem::remove_all(dir);
}
