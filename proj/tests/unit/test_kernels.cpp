#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "kellerer/kernels.hpp"
#include "support.hpp"

using namespace kellerer;
using kellerer::testing::Rng;

namespace {
const DiscreteMeasure kPair({-1.0, 1.0}, {0.5, 0.5});

MartingaleKernel crossing_kernel() {
  return MartingaleKernel({-1.0, 1.0}, {DiscreteMeasure({-3.0, 1.0}, {0.5, 0.5}),
                                        DiscreteMeasure({0.0, 4.0}, {0.75, 0.25})});
}

MartingaleKernel binomial_step(std::vector<double> sources) {
  std::vector<DiscreteMeasure> ts;
  for (double x : sources) ts.push_back(DiscreteMeasure({x - 1.0, x + 1.0}, {0.5, 0.5}));
  return MartingaleKernel(std::move(sources), std::move(ts));
}

bool family_passes(const MartingaleKernel& k) {
  for (const auto& f : lip1_test_family(k)) {
    if (!lipschitz_conditional(k, f).lipschitz) return false;
  }
  return true;
}
}  // namespace

TEST_CASE("kernel construction") {
  CHECK_THROWS_AS(MartingaleKernel({1.0, 0.0}, {kPair, kPair}), std::invalid_argument);
  CHECK_THROWS_AS(MartingaleKernel({0.0}, {kPair, kPair}), std::invalid_argument);
  const auto k = binomial_step({0.0, 2.0});
  CHECK(k.find_source(2.0) == 1);
  CHECK(k.find_source(1.0) == k.size());
  CHECK(k.target_of(0.0) == kPair);
  CHECK_THROWS_AS(k.target_of(5.0), std::out_of_range);
}

TEST_CASE("validate_kernel") {
  const std::vector<double> pts{-1.0, 0.0, 2.0};
  CHECK(validate_kernel(MartingaleKernel::identity(pts)).pass);
  CHECK(validate_kernel(MartingaleKernel({0.0}, {kPair})).pass);
  const auto bad = validate_kernel(MartingaleKernel({0.0}, {DiscreteMeasure::dirac(1.0)}));
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_deviation == doctest::Approx(1.0));
}

TEST_CASE("pushforward") {
  CHECK(pushforward(DiscreteMeasure::dirac(0.0), MartingaleKernel({0.0}, {kPair})) == kPair);
  const std::vector<double> pts{-1.0, 1.0};
  CHECK(pushforward(kPair, MartingaleKernel::identity(pts)) == kPair);
  const auto two = pushforward(kPair, binomial_step({-1.0, 1.0}));
  CHECK(kellerer::testing::same_measure(two, DiscreteMeasure({-2.0, 0.0, 2.0}, {0.25, 0.5, 0.25}),
                                        1e-15));
  CHECK_THROWS(pushforward(DiscreteMeasure::dirac(5.0), binomial_step({0.0})));
}

TEST_CASE("compose") {
  const auto k = binomial_step({-1.0, 1.0});
  const std::vector<double> after{-2.0, 0.0, 2.0};
  const auto ki = compose(k, MartingaleKernel::identity(after));
  REQUIRE(ki.size() == k.size());
  for (std::size_t i = 0; i < k.size(); ++i) CHECK(ki.targets()[i] == k.targets()[i]);

  const auto two = compose(binomial_step({0.0}), k);
  CHECK(kellerer::testing::same_measure(two.target_of(0.0),
                                        DiscreteMeasure({-2.0, 0.0, 2.0}, {0.25, 0.5, 0.25}),
                                        1e-15));
  CHECK_THROWS_AS(compose(binomial_step({0.0}), binomial_step({-1.0})), std::invalid_argument);
}

TEST_CASE("test functions") {
  const auto h = Lip1TestFunction::hinge(0.5);
  CHECK(h(0.5) == 0.0);
  CHECK(h(-1.5) == doctest::Approx(2.0));
  CHECK(h(3.0) == doctest::Approx(2.5));
  const auto c = Lip1TestFunction::clipped_identity(-1.0, 1.0);
  CHECK(c(-3.0) == doctest::Approx(-1.0));
  CHECK(c(0.25) == doctest::Approx(0.25));
  CHECK(c(7.0) == doctest::Approx(1.0));
  CHECK(Lip1TestFunction::identity()(2.5) == 2.5);
  CHECK(Lip1TestFunction::negated_identity()(2.5) == -2.5);
  CHECK(h.integrate(kPair) == doctest::Approx(1.0));
  CHECK_THROWS(Lip1TestFunction("steep", 0.0, {}, {2.0}));

  Rng rng(21);
  for (int rep = 0; rep < 100; ++rep) {
    const auto a = kellerer::testing::random_measure(rng, 5);
    const auto b = kellerer::testing::random_measure(rng, 5);
    const auto f = Lip1TestFunction::dual_witness(a, b);
    CHECK(f.integrate(b) - f.integrate(a) == doctest::Approx(w1(a, b)).epsilon(1e-10));
    for (double y = -6.0; y < 6.0; y += 0.37) CHECK(std::abs(f(y + 0.37) - f(y)) <= 0.37 + 1e-12);
  }
}

TEST_CASE("Lipschitz-Markov examples") {
  const std::vector<double> pts{-1.0, 0.0, 3.0};
  const auto id = MartingaleKernel::identity(pts);
  CHECK(is_lipschitz_markov(id).pass);
  const auto prof = w1_profile(id);
  REQUIRE(prof.size() == 2);
  CHECK(prof[0] == 1.0);
  CHECK(prof[1] == 3.0);

  const auto k = crossing_kernel();
  CHECK(validate_kernel(k).pass);
  const auto cert = is_lipschitz_markov(k);
  CHECK_FALSE(cert.pass);
  REQUIRE(cert.pairs.size() == 1);
  CHECK_FALSE(cert.pairs[0].fsd);
  CHECK(cert.pairs[0].w1 == doctest::Approx(2.5));
  CHECK(cert.worst_excess == doctest::Approx(0.5));
  CHECK(w1_profile(k)[0] == doctest::Approx(2.5));
}

TEST_CASE("conditional expectations of test functions") {
  Rng rng(22);
  for (int rep = 0; rep < 30; ++rep) {
    const auto k = kellerer::testing::random_martingale_kernel(rng, {-2.0, -0.5, 1.0, 1.5});
    const auto r = lipschitz_conditional(k, Lip1TestFunction::identity());
    CHECK(r.lipschitz);
    for (std::size_t i = 0; i < k.size(); ++i) {
      CHECK(r.values[i] == doctest::Approx(k.sources()[i]).epsilon(1e-12));
    }
  }

  // The hinge at 0 does not separate the crossing kernel: g(-1) = 2 and
  // g(1) = 1. The dual witness attains the full W1 of 2.5.
  const auto k = crossing_kernel();
  const auto hinge = lipschitz_conditional(k, Lip1TestFunction::hinge(0.0));
  CHECK(hinge.values[0] == doctest::Approx(2.0));
  CHECK(hinge.values[1] == doctest::Approx(1.0));
  CHECK(hinge.lipschitz);
  const auto witness = Lip1TestFunction::dual_witness(k.targets()[0], k.targets()[1]);
  const auto w = lipschitz_conditional(k, witness);
  CHECK_FALSE(w.lipschitz);
  CHECK(std::abs(w.values[1] - w.values[0]) == doctest::Approx(2.5));
  CHECK(w.worst_excess == doctest::Approx(0.5));
  CHECK_FALSE(family_passes(k));
}

TEST_CASE("shift cost lower bound and the three characterizations agree") {
  Rng rng(23);
  int lm = 0;
  for (int rep = 0; rep < 300; ++rep) {
    const auto mu = kellerer::testing::random_measure(rng, 5);
    const auto k = kellerer::testing::random_martingale_kernel(rng, kellerer::testing::atoms_of(mu));
    REQUIRE(validate_kernel(k).pass);
    const auto prof = w1_profile(k);
    bool equal_gaps = true;
    for (std::size_t i = 0; i < prof.size(); ++i) {
      const double gap = k.sources()[i + 1] - k.sources()[i];
      CHECK(prof[i] >= gap - 1e-12);
      CHECK(prof[i] ==
            doctest::Approx(kellerer::testing::quantile_w1(k.targets()[i], k.targets()[i + 1]))
                .epsilon(1e-10));
      if (prof[i] > gap + 1e-9) equal_gaps = false;
    }
    const bool cert = is_lipschitz_markov(k).pass;
    CHECK(cert == equal_gaps);
    CHECK(cert == family_passes(k));
    lm += cert ? 1 : 0;
  }
  CHECK(lm > 0);
  CHECK(lm < 300);
}

TEST_CASE("composition preserves Lipschitz-Markov") {
  Rng rng(24);
  int tested = 0;
  for (int rep = 0; rep < 400 && tested < 40; ++rep) {
    const auto mu = kellerer::testing::random_measure(rng, 3);
    const auto k1 = kellerer::testing::random_martingale_kernel(rng, kellerer::testing::atoms_of(mu), 0.5, 1);
    if (!is_lipschitz_markov(k1).pass) continue;
    const auto mid = pushforward(mu, k1);
    const auto k2 = kellerer::testing::random_martingale_kernel(rng, kellerer::testing::atoms_of(mid), 0.5, 1);
    if (!is_lipschitz_markov(k2).pass) continue;
    ++tested;
    const auto k12 = compose(k1, k2);
    CHECK(validate_kernel(k12).pass);
    CHECK(is_lipschitz_markov(k12).pass);
    CHECK(kellerer::testing::same_measure(pushforward(mu, k12), pushforward(mid, k2), 1e-12));
  }
  CHECK(tested >= 10);
}
