#include <cmath>
#include <string>

#include "doctest.h"
#include "kellerer/peacock.hpp"
#include "support.hpp"

using namespace kellerer;

namespace {
const DiscreteMeasure kPair({-1.0, 1.0}, {0.5, 0.5});
const GridSpec kGrid{-8.0, 8.0, 0.05, 0.0025 / 3.0, 5.0};

Peacock gaussian_peacock(std::vector<double> ts) {
  std::vector<DiscreteMeasure> ms;
  for (double t : ts) ms.push_back(discretized_gaussian(0.0, t, kGrid));
  return Peacock(std::move(ts), std::move(ms));
}
}  // namespace

TEST_CASE("validate examples") {
  const auto d0 = DiscreteMeasure::dirac(0.0);
  const auto ok = validate(Peacock({0.5, 1.0}, {d0, kPair}));
  CHECK(ok.pass);
  CHECK_FALSE(ok.first_failing_pair.has_value());

  const auto bad = validate(Peacock({0.5, 1.0}, {kPair, d0}));
  CHECK_FALSE(bad.pass);
  REQUIRE(bad.first_failing_pair.has_value());
  CHECK(*bad.first_failing_pair == 0);
  CHECK(bad.pairs[0].worst_call_violation == doctest::Approx(0.5));

  CHECK(validate(gaussian_peacock({0.25, 0.5, 1.0})).pass);
}

TEST_CASE("validate reports structural errors") {
  const auto d0 = DiscreteMeasure::dirac(0.0);
  CHECK_FALSE(validate(Peacock({0.5, 0.9}, {d0, kPair})).pass);
  CHECK_FALSE(validate(Peacock({0.5, 0.5, 1.0}, {d0, d0, kPair})).pass);
  CHECK_FALSE(validate(Peacock({-0.5, 1.0}, {d0, kPair})).pass);
  const auto r = validate(Peacock({0.7, 0.2, 1.0}, {d0, d0, kPair}));
  CHECK_FALSE(r.structural_errors.empty());
  CHECK_THROWS(Peacock({}, {}));
  CHECK_THROWS(Peacock({1.0}, {d0, d0}));
}

TEST_CASE("phi integral") {
  CHECK(phi_integral(DiscreteMeasure::dirac(0.0)) == 1.0);
  CHECK(phi_integral(DiscreteMeasure::dirac(3.0)) == doctest::Approx(std::sqrt(10.0)));
  CHECK(phi_integral(kPair) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("reparametrize") {
  const auto d0 = DiscreteMeasure::dirac(0.0);
  LabeledFamily<std::string> two{{"a", "b"}, {d0, kPair}};
  const Peacock p = reparametrize(two);
  REQUIRE(p.size() == 2);
  CHECK(p.times()[0] < 1.0);
  CHECK(p.times()[1] == 1.0);
  CHECK(p.measures()[0] == d0);
  CHECK(p.measures()[1] == kPair);
  CHECK(validate(p).pass);

  LabeledFamily<int> constant{{1, 2}, {d0, d0}};
  const Peacock c = reparametrize(constant);
  REQUIRE(c.size() == 1);
  CHECK(c.times()[0] == 1.0);

  LabeledFamily<double> gauss{{0.1, 0.4, 0.9},
                              {discretized_gaussian(0.0, 0.5, kGrid),
                               discretized_gaussian(0.0, 1.0, kGrid),
                               discretized_gaussian(0.0, 2.0, kGrid)}};
  const Peacock g = reparametrize(gauss);
  REQUIRE(g.size() == 3);
  std::vector<double> phis;
  for (const auto& m : gauss.measures) phis.push_back(phi_integral(m));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(g.times()[i] ==
          doctest::Approx((phis[i] - phis[0]) / (phis[2] - phis[0])).epsilon(1e-12));
  }
  CHECK(validate(g).pass);

  LabeledFamily<int> unordered{{2, 1}, {d0, kPair}};
  CHECK_THROWS_AS(reparametrize(unordered), std::invalid_argument);
  LabeledFamily<int> reversed{{1, 2}, {kPair, d0}};
  CHECK_THROWS_AS(reparametrize(reversed), std::invalid_argument);
}

TEST_CASE("interpolate") {
  const Peacock p = gaussian_peacock({0.25, 0.5, 1.0});
  CHECK(interpolate(p, 0.5) == p.measures()[1]);
  CHECK(interpolate(p, 1.0) == p.measures()[2]);
  const auto mid = interpolate(p, 0.75);
  const DiscreteMeasure parts[] = {p.measures()[1], p.measures()[2]};
  const double half[] = {0.5, 0.5};
  CHECK(kellerer::testing::same_measure(mid, mixture(parts, half), 1e-15));
  CHECK_THROWS_AS(interpolate(p, 0.1), std::out_of_range);
  CHECK_THROWS_AS(interpolate(p, 1.1), std::out_of_range);

  double prev_s = 0.25;
  for (int k = 1; k <= 10; ++k) {
    const double s = 0.25 + 0.75 * k / 11.0;
    CHECK(convex_order(interpolate(p, prev_s), interpolate(p, s)));
    prev_s = s;
  }
}

TEST_CASE("right continuity report") {
  const auto up = right_continuity_report(gaussian_peacock({0.25, 0.5, 1.0}));
  CHECK(up.non_decreasing);
  CHECK(up.max_jump > 0.0);
  for (std::size_t i = 0; i + 1 < up.phi_integrals.size(); ++i) {
    CHECK(up.phi_integrals[i] < up.phi_integrals[i + 1]);
  }

  const auto d0 = DiscreteMeasure::dirac(0.0);
  const auto flat = right_continuity_report(Peacock({0.5, 1.0}, {d0, d0}));
  CHECK(flat.non_decreasing);
  CHECK(flat.max_jump == 0.0);

  const Peacock g = gaussian_peacock({0.25, 0.5, 1.0});
  std::vector<DiscreteMeasure> rev(g.measures().rbegin(), g.measures().rend());
  const auto down = right_continuity_report(Peacock(g.times(), rev));
  CHECK_FALSE(down.non_decreasing);
  CHECK(down.max_decrease > 0.0);
}

TEST_CASE("discretized gaussian") {
  const auto n = discretized_gaussian(0.0, 1.0, kGrid);
  CHECK(std::abs(mean(n)) < 1e-14);
  CHECK(variance(n) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(n.min_atom() > kGrid.x_min);
  CHECK(n.max_atom() < kGrid.x_max);
  const auto shifted = discretized_gaussian(0.5, 0.5, kGrid);
  CHECK(mean(shifted) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(discretized_gaussian(0.0, 0.0, kGrid) == DiscreteMeasure::dirac(0.0));
  CHECK_THROWS(discretized_gaussian(9.0, 1.0, kGrid));
}
