#include "doctest.h"
#include "robeam/problem.hpp"

using namespace robeam;

TEST_SUITE("problem") {
  TEST_CASE("one-degree grid around broadside has 180 angles") {
    const auto grid = grid_from_spec(90.0, {{0, 89, 1}, {91, 180, 1}});
    REQUIRE(grid.num_sidelobes() == 180);
    CHECK(grid.sidelobe_angles.front() == 0.0);
    CHECK(grid.sidelobe_angles[89] == 89.0);
    CHECK(grid.sidelobe_angles[90] == 91.0);
    CHECK(grid.sidelobe_angles.back() == 180.0);
  }

  TEST_CASE("single-point range") {
    const auto grid = grid_from_spec(90.0, {{30, 30, 1}});
    REQUIRE(grid.num_sidelobes() == 1);
    CHECK(grid.sidelobe_angles[0] == 30.0);
  }

  TEST_CASE("overlapping ranges deduplicate to the same grid") {
    const auto a = grid_from_spec(90.0, {{0, 89, 1}});
    const auto b = grid_from_spec(90.0, {{0, 89, 1}, {40, 50, 1}});
    CHECK(a.sidelobe_angles == b.sidelobe_angles);
  }

  TEST_CASE("fractional steps do not split angles") {
    const auto a = grid_from_spec(90.0, {{0, 3, 0.1}, {0, 3, 0.3}});
    CHECK(a.num_sidelobes() == 31);
  }

  TEST_CASE("grid errors") {
    CHECK_THROWS_AS(grid_from_spec(90.0, {{0, 180, 1}}), DomainError);
    CHECK_THROWS_AS(grid_from_spec(90.0, {{0, 10, 0}}), DomainError);
    CHECK_THROWS_AS(grid_from_spec(90.0, {{10, 0, 1}}), DomainError);
    CHECK_THROWS_AS(grid_from_spec(90.0, {}), DomainError);
    CHECK_THROWS_AS(grid_from_spec(90.0, {{170, 190, 1}}), DomainError);
  }

  TEST_CASE("thirty-element broadside instance") {
    const auto grid = grid_from_spec(90.0, {{0, 89, 1}, {91, 180, 1}});
    const auto inst = build_instance(ArrayGeometry(30), grid, DiskRadii<double>::constant(30, 0.15));
    CHECK(inst.num_elements() == 30);
    CHECK(inst.num_sidelobes() == 180);
    CHECK((inst.mainlobe_sv - SteeringVector<double>::Ones(30)).norm() < 1e-12);
    for (Index m = 0; m < inst.num_sidelobes(); ++m)
      CHECK((inst.sidelobe_svs.col(m) -
             presumed_steering<double>(ArrayGeometry(30), deg_to_rad(grid.sidelobe_angles[m])))
                .norm() == 0.0);
  }

  TEST_CASE("scalar instance") {
    const auto inst = build_instance(ArrayGeometry(1), grid_from_spec(90.0, {{30, 30, 1}}), DiskRadii<double>::zero(1));
    CHECK(inst.num_elements() == 1);
    CHECK(inst.num_sidelobes() == 1);
    CHECK(inst.radii.delta.isZero(0.0));
  }

  TEST_CASE("main-lobe vector has squared norm N") {
    for (double angle : {0.0, 33.0, 90.0, 151.5}) {
      AngleGrid grid;
      grid.mainlobe = angle;
      grid.sidelobe_angles = {angle == 0.0 ? 10.0 : 0.0};
      const auto inst = build_instance(ArrayGeometry(13), grid, DiskRadii<double>::zero(13));
      CHECK(inst.mainlobe_sv.squaredNorm() == doctest::Approx(13.0).epsilon(1e-12));
    }
  }

  TEST_CASE("construction errors") {
    const auto grid = grid_from_spec(90.0, {{0, 10, 1}});
    CHECK_THROWS_AS(build_instance(ArrayGeometry(4), grid, DiskRadii<double>::zero(3)), ConstructionError);
    AngleGrid bad;
    bad.mainlobe = 90.0;
    bad.sidelobe_angles = {90.0};
    CHECK_THROWS_AS(build_instance(ArrayGeometry(4), bad, DiskRadii<double>::zero(4)), DomainError);
    bad.sidelobe_angles = {190.0};
    CHECK_THROWS_AS(build_instance(ArrayGeometry(4), bad, DiskRadii<double>::zero(4)), DomainError);
  }

  TEST_CASE("build is deterministic") {
    const auto grid = grid_from_spec(60.0, {{0, 50, 2.5}, {70, 180, 3}});
    const auto radii = DiskRadii<double>::constant(9, 0.1);
    const auto a = build_instance(ArrayGeometry(9), grid, radii);
    const auto b = build_instance(ArrayGeometry(9), grid, radii);
    CHECK(a.sidelobe_svs == b.sidelobe_svs);
    CHECK(a.mainlobe_sv == b.mainlobe_sv);
  }

  TEST_CASE("stacked steering puts the main lobe first") {
    const auto inst = build_instance(ArrayGeometry(5), grid_from_spec(90.0, {{0, 40, 10}}), DiskRadii<double>::zero(5));
    const auto s = inst.stacked_steering();
    CHECK(s.cols() == inst.num_sidelobes() + 1);
    CHECK(s.col(0) == inst.mainlobe_sv);
    CHECK(s.rightCols(inst.num_sidelobes()) == inst.sidelobe_svs);
  }
}
