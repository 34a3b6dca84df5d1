#include <catch_amalgamated.hpp>

#include <cmath>

#include "mlsb/geometry.hpp"
#include "mlsb/table_io.hpp"

using namespace mlsb;
using Catch::Approx;

namespace {

const double kEllipsePerimeter = 9.688448220547676;  // 8 E(3/4), independent elliptic-integral oracle
const char* kEllipsePerimeterDigits = "9.688448220547676198428503196391829411954";

std::vector<ShapeSpec> equilateral() {
  return {ShapeSpec::circle(0, 0, 1), ShapeSpec::circle(6, 0, 1), ShapeSpec::circle(3, 3 * std::sqrt(3.0), 1)};
}

}  // namespace

TEST_CASE("circle points are anchored at t = 0") {
  ConvexObstacle c(ShapeSpec::circle(0, 0, 1));
  auto p0 = c.point(0.0);
  CHECK(p0.x == Approx(1.0).margin(1e-15));
  CHECK(p0.y == Approx(0.0).margin(1e-15));
  auto p1 = c.point(M_PI);
  CHECK(p1.x == Approx(-1.0).margin(1e-15));
  CHECK(p1.y == Approx(0.0).margin(1e-15));
}

TEST_CASE("ellipse quarter perimeter lands on the minor axis") {
  ConvexObstacle e(ShapeSpec::ellipse(0, 0, 2, 1, 0), 64);
  mp::PrecisionScope scope(64);
  Real L = e.total_length<Real>();
  Vec2<Real> q = e.point(L / 4.0);
  CHECK(abs(q.x).to_double() < 1e-12);
  CHECK(abs(q.y - 1.0).to_double() < 1e-12);
}

TEST_CASE("ellipse perimeter matches the elliptic integral") {
  ConvexObstacle e(ShapeSpec::ellipse(0, 0, 2, 1, 0), 128);
  CHECK(e.total_length<double>() == Approx(kEllipsePerimeter).epsilon(1e-14));
  mp::PrecisionScope scope(128);
  Real L = e.total_length<Real>();
  Real ref(std::string_view(kEllipsePerimeterDigits), 160);
  CHECK((abs(L - ref) / ref).to_double() < 1e-36);
}

TEST_CASE("curvature values") {
  ConvexObstacle c(ShapeSpec::circle(1, 2, 2.5));
  for (double s : {0.0, 1.0, 7.5}) CHECK(c.curvature(s) == Approx(0.4).epsilon(1e-14));
  ConvexObstacle e(ShapeSpec::ellipse(0, 0, 2, 1, 0));
  CHECK(e.curvature_t(0.0) == Approx(2.0).epsilon(1e-14));
  CHECK(e.curvature_t(M_PI / 2) == Approx(0.25).epsilon(1e-14));
  double L = e.total_length<double>();
  CHECK(e.curvature(0.0) == Approx(2.0).epsilon(1e-12));
  CHECK(e.curvature(L / 4) == Approx(0.25).epsilon(1e-12));
}

TEST_CASE("arclength parametrization") {
  ConvexObstacle c(ShapeSpec::circle(0, 0, 1.7));
  for (double t : {0.0, 0.3, 2.0, 5.9}) CHECK(c.s_of_t(t) == Approx(1.7 * t).epsilon(1e-15));
  for (const auto& spec : {ShapeSpec::ellipse(0, 0, 2, 1, 0.4),
                           ShapeSpec::fourier(0, 0, 1, {0.0, 0.04, 0.01}, {0.02, 0.0, 0.0})}) {
    ConvexObstacle o(spec, 128);
    double L = o.total_length<double>();
    for (double t : {0.1, 1.3, 4.0}) {
      CHECK(o.s_of_t(t + 2 * M_PI) == Approx(o.s_of_t(t) + L).epsilon(1e-14));
      CHECK(o.t_of_s(o.s_of_t(t)) == Approx(t).epsilon(1e-14));
      auto p = o.point(o.s_of_t(t) + L);
      auto q = o.point_t(t);
      CHECK(std::hypot(p.x - q.x, p.y - q.y) < 1e-13);
    }
    mp::PrecisionScope scope(128);
    Real t(0.7);
    Real back = o.t_of_s(o.s_of_t(t));
    CHECK(abs(back - t).to_double() < 1e-35);
  }
}

TEST_CASE("precision above the construction maximum is refused") {
  ConvexObstacle e(ShapeSpec::ellipse(0, 0, 2, 1, 0), 64);
  mp::PrecisionScope scope(256);
  try {
    (void)e.total_length<Real>();
    FAIL("expected precision-unavailable");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::precision_unavailable);
  }
}

TEST_CASE("finite-difference curvature agrees with the analytic value") {
  for (const auto& spec : {ShapeSpec::ellipse(0.5, -1, 1.6, 0.9, 0.7),
                           ShapeSpec::fourier(0, 0, 1, {0.0, 0.05, 0.0}, {0.0, 0.0, 0.01})}) {
    ConvexObstacle o(spec);
    double L = o.total_length<double>();
    const double h = 1e-3;
    for (int i = 0; i < 16; ++i) {
      double s = L * i / 16;
      auto a = o.point(s - h), b = o.point(s), c = o.point(s + h);
      double kx = (a.x - 2 * b.x + c.x) / (h * h), ky = (a.y - 2 * b.y + c.y) / (h * h);
      CHECK(std::hypot(kx, ky) == Approx(o.curvature(s)).epsilon(1e-5));
    }
  }
}

TEST_CASE("non-convex Fourier curves are rejected") {
  try {
    ConvexObstacle o(ShapeSpec::fourier(0, 0, 1, {0.0, 0.0, 0.3}, {}));
    FAIL("expected table-invalid");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::table_invalid);
  }
}

TEST_CASE("non-eclipse certificate of the equilateral table") {
  BilliardTable t(equilateral());
  CHECK(t.certificate().ok);
  CHECK(t.certificate().min_clearance == Approx(3 * std::sqrt(3.0) - 2).epsilon(1e-9));
  CHECK(t.min_gap() == Approx(4.0).epsilon(1e-9));
}

TEST_CASE("certificate is invariant under rigid motions") {
  double th = 0.83, c = std::cos(th), s = std::sin(th);
  std::vector<ShapeSpec> base{ShapeSpec::circle(0, 0, 1), ShapeSpec::ellipse(6.5, 0, 1.4, 0.8, 0.2),
                              ShapeSpec::fourier(3, 6, 1, {0.0, 0.04}, {0.02})};
  std::vector<ShapeSpec> moved;
  for (const auto& sp : base) moved.push_back(sp.moved(c, s, -2.0, 3.5, th));
  BilliardTable a(base), b(moved);
  CHECK(a.certificate().min_clearance == Approx(b.certificate().min_clearance).epsilon(1e-8));
  CHECK(a.min_gap() == Approx(b.min_gap()).epsilon(1e-8));
}

TEST_CASE("collinear discs violate non-eclipse at the middle disc") {
  std::vector<ShapeSpec> col{ShapeSpec::circle(0, 0, 1), ShapeSpec::circle(6, 0, 1), ShapeSpec::circle(12, 0, 1)};
  try {
    BilliardTable t(col);
    FAIL("expected eclipse violation");
  } catch (const EclipseError& e) {
    CHECK(e.kind() == ErrorKind::eclipse_violation);
    CHECK(e.k() == 1);
    CHECK(e.depth() > 0);
  }
}

TEST_CASE("two obstacles are not a table") {
  try {
    BilliardTable t({ShapeSpec::circle(0, 0, 1), ShapeSpec::circle(4, 0, 1)});
    FAIL("expected table-invalid");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::table_invalid);
  }
}

TEST_CASE("table files parse and fingerprint canonically") {
  TableFile a = load_table_file(std::string(MLSB_TABLES) + "/equilateral.json");
  CHECK(a.specs.size() == 3);
  TableFile b = parse_table(a.canonical);
  CHECK(a.sha256 == b.sha256);
  CHECK(a.sha256.size() == 64);
  try {
    parse_table("{\"obstacles\": [");
    FAIL("expected io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }
  try {
    parse_table(R"({"obstacles":[{"kind":"square","center":[0,0]}]})");
    FAIL("expected table-invalid");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::table_invalid);
  }
}
