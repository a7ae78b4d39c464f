#include <doctest.h>

#include <random>

#include "fki/geometry.hpp"

using namespace fki;

TEST_CASE("contains: interior, boundary and ball points") {
  const Domain h = Domain::half_space({1.0, 0.0}, 0.0);
  CHECK(h.contains(Point{1.0, 0.0}));
  CHECK_FALSE(h.contains(Point{0.0, 0.0}));
  CHECK(Domain::ball({0.0, 0.0}, 1.0).contains(Point{0.5, 0.5}));
  CHECK_FALSE(Domain::ball({0.0, 0.0}, 1.0).contains(Point{1.0, 0.0}));
  CHECK(Domain::complement_of_ball({0.0, 0.0}, 1.0).contains(Point{2.0, 0.0}));
  CHECK_FALSE(Domain::box({0.0, 0.0}, {1.0, 2.0}).contains(Point{0.5, 2.0}));
}

TEST_CASE("boundary_distance examples") {
  CHECK(Domain::half_space({1.0, 0.0}, 0.0).boundary_distance(Point{2.0, 0.0}) == doctest::Approx(2.0));
  CHECK(Domain::ball({0.0, 0.0}, 1.0).boundary_distance(Point{0.25, 0.0}) == doctest::Approx(0.75));
  CHECK(Domain::full_space(3).boundary_distance(Point{1.0, 2.0, 3.0}) == kInf);
  CHECK(Domain::box({0.0, 0.0}, {1.0, 3.0}).boundary_distance(Point{0.2, 1.0}) == doctest::Approx(0.2));
  CHECK(Domain::complement_of_ball({0.0, 0.0, 0.0}, 1.0).boundary_distance(Point{0.0, 3.0, 0.0}) ==
        doctest::Approx(2.0));
}

TEST_CASE("construction rejects bad input") {
  CHECK_THROWS_AS(Domain::full_space(1), ParameterError);
  CHECK_THROWS_AS(Domain::ball({0.0, 0.0}, -1.0), ParameterError);
  CHECK_THROWS_AS(Domain::box({0.0, 0.0}, {1.0, 0.0}), ParameterError);
  CHECK_THROWS_AS(ConeSpec(1.0, kPi / 2), ParameterError);
  CHECK_THROWS_AS(ConeSpec(0.0, 0.3), ParameterError);
  CHECK_THROWS_AS(Domain::half_space({1.0, 0.0}, 0.0).contains(Point{1.0, 0.0, 0.0}), DimensionError);
}

TEST_CASE("classify_regularity") {
  const Regularity h = Domain::half_space({0.0, 1.0}, 0.0).classify_regularity();
  CHECK(h.kind == RegularityClass::uniformly_regular);
  REQUIRE(h.witness);
  CHECK(h.witness->radius == 1.0);
  CHECK(h.witness->opening_angle == doctest::Approx(kPi / 4));
  CHECK(Domain::ball({0.0, 0.0}, 1.0).classify_regularity().kind == RegularityClass::uniformly_regular);
  CHECK(Domain::full_space(2).classify_regularity().kind == RegularityClass::uniformly_regular);
  CHECK(make_slit_plane().classify_regularity().kind == RegularityClass::unknown);
  CHECK(make_punctured_space({0.0, 0.0}).classify_regularity().kind == RegularityClass::unknown);
}

namespace {

Point random_unit(std::mt19937& gen, int d) {
  std::normal_distribution<double> n;
  Point u(d);
  double len = 0.0;
  for (double& c : u) c = n(gen), len += c * c;
  for (double& c : u) c /= std::sqrt(len);
  return u;
}

Point random_boundary_point(const Domain& dom, std::mt19937& gen) {
  const int d = dom.dimension();
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return std::visit(
      [&](const auto& k) -> Point {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, domains::HalfSpace>) {
          Point p(d);
          for (double& c : p) c = u(gen);
          const double gap = dot(k.normal, p) - k.offset;
          for (int i = 0; i < d; ++i) p[i] -= gap * k.normal[i];
          return p;
        } else if constexpr (std::is_same_v<K, domains::Ball> || std::is_same_v<K, domains::ComplementOfBall>) {
          Point p = random_unit(gen, d);
          for (int i = 0; i < d; ++i) p[i] = k.center[i] + k.radius * p[i];
          return p;
        } else if constexpr (std::is_same_v<K, domains::Box>) {
          Point p(d);
          for (int i = 0; i < d; ++i) p[i] = std::uniform_real_distribution<double>(k.lo[i], k.hi[i])(gen);
          // pin one to three coordinates onto faces, including corners
          const int pins = std::uniform_int_distribution<int>(1, d)(gen);
          for (int j = 0; j < pins; ++j) {
            const int i = std::uniform_int_distribution<int>(0, d - 1)(gen);
            p[i] = std::bernoulli_distribution(0.5)(gen) ? k.lo[i] : k.hi[i];
          }
          return p;
        } else {
          throw std::logic_error("no boundary sampler");
        }
      },
      dom.kind());
}

std::vector<Domain> built_in_domains() {
  return {Domain::half_space({0.6, 0.8}, 0.3),
          Domain::half_space({0.0, 0.0, 1.0}, -1.0),
          Domain::ball({0.5, -0.5}, 0.7),
          Domain::ball({0.0, 0.0, 0.0}, 2.0),
          Domain::box({0.0, 0.0}, {1.0, 0.5}),
          Domain::box({-1.0, 0.0, 0.0}, {1.0, 0.2, 3.0}),
          Domain::complement_of_ball({0.0, 0.0}, 0.4),
          Domain::complement_of_ball({1.0, 1.0, 1.0}, 1.0)};
}

}  // namespace

TEST_CASE("property: witness cones miss the domain") {
  std::mt19937 gen(1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const Domain& dom : built_in_domains()) {
    const Regularity reg = dom.classify_regularity();
    REQUIRE(reg.witness);
    const ConeSpec cone = *reg.witness;
    const int d = dom.dimension();
    int tested = 0;
    for (int b = 0; b < 40; ++b) {
      const Point bp = random_boundary_point(dom, gen);
      const Point axis = dom.exterior_cone_axis(bp);
      for (int k = 0; k < 200; ++k) {
        const Point dir = random_unit(gen, d);
        const double rho = cone.radius * unit(gen);
        Point y(d);
        for (int i = 0; i < d; ++i) y[i] = bp[i] + rho * dir[i];
        if (!in_cone(cone, bp, axis, y)) continue;
        ++tested;
        INFO(dom.name(), " boundary point ", bp[0], ",", bp[1]);
        CHECK_FALSE(dom.contains(y));
      }
    }
    CHECK(tested > 500);
  }
}

TEST_CASE("property: boundary distance is below the distance to any exterior point") {
  std::mt19937 gen(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const Domain& dom : built_in_domains()) {
    const int d = dom.dimension();
    std::vector<Point> inside, outside;
    while (inside.size() < 100 || outside.size() < 100) {
      Point p(d);
      for (double& c : p) c = u(gen);
      auto& bucket = dom.contains(p) ? inside : outside;
      if (bucket.size() < 100) bucket.push_back(p);
    }
    for (const auto& x : inside) {
      const double dist = dom.boundary_distance(x);
      for (const auto& y : outside) CHECK(dist <= distance(x, y) + 1e-12);
    }
  }
}

TEST_CASE("property: contains describes an open set") {
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0), frac(0.0, 0.5);
  for (const Domain& dom : built_in_domains()) {
    const int d = dom.dimension();
    for (int k = 0; k < 300; ++k) {
      Point x(d);
      for (double& c : x) c = u(gen);
      if (!dom.contains(x)) continue;
      const double delta = dom.boundary_distance(x);
      REQUIRE(delta > 0.0);
      const Point dir = random_unit(gen, d);
      const double step = std::min(delta, 10.0) * frac(gen);
      Point y(d);
      for (int i = 0; i < d; ++i) y[i] = x[i] + step * dir[i];
      CHECK(dom.contains(y));
    }
  }
}

TEST_CASE("custom domains") {
  const Domain slit = make_slit_plane();
  CHECK_FALSE(slit.contains(Point{-1.0, 0.0}));
  CHECK(slit.contains(Point{1.0, 0.0}));
  CHECK(slit.boundary_distance(Point{-1.0, 0.5}) == doctest::Approx(0.5));
  CHECK(slit.boundary_distance(Point{3.0, 4.0}) == doctest::Approx(5.0));
  CHECK(slit.default_killing() == KillingMode::naive);
  CHECK(Domain::ball({0.0, 0.0}, 1.0).default_killing() == KillingMode::corrected);
  CHECK_THROWS_AS(Domain::custom(2, "x", {}, [](PointView) { return 1.0; }), ParameterError);
}

TEST_CASE("in_cone uses the open cone around the axis") {
  const ConeSpec c(1.0, kPi / 4);
  const Point v{0.0, 0.0}, u{1.0, 0.0};
  CHECK(in_cone(c, v, u, Point{0.5, 0.1}));
  CHECK_FALSE(in_cone(c, v, u, Point{0.5, 0.6}));
  CHECK_FALSE(in_cone(c, v, u, Point{1.5, 0.0}));
  CHECK_FALSE(in_cone(c, v, u, Point{0.0, 0.0}));
}
