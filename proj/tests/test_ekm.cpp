#include <doctest.h>

#include <cmath>
#include <vector>

#include "cekm/distributions.hpp"
#include "cekm/ekm.hpp"
#include "cekm/errors.hpp"
#include "cekm/estimators.hpp"
#include "cekm/phi.hpp"

using namespace cekm;

namespace {

TailView make_view(std::vector<double> ratios, std::vector<std::uint8_t> delta) {
  TailView v;
  v.k = ratios.size();
  v.threshold = 1.0;
  v.ratios = std::move(ratios);
  v.delta_top = std::move(delta);
  return v;
}

// Reference weights with the inner product recomputed from scratch for every
// index, multiplying factors from j = k down to i+1.
std::vector<double> naive_weights(const std::vector<std::uint8_t>& delta) {
  const std::size_t k = delta.size();
  std::vector<double> w(k, 0.0);
  for (std::size_t i = 1; i <= k; ++i) {
    if (!delta[i - 1]) continue;
    double prod = 1.0;
    for (std::size_t j = k; j > i; --j) {
      if (delta[j - 1]) prod *= (static_cast<double>(j) - 1.0) / static_cast<double>(j);
    }
    w[i - 1] = prod / static_cast<double>(i);
  }
  return w;
}

}  // namespace

TEST_CASE("hand-checked weight triples") {
  const auto w1 = ekm_weights(make_view({8, 4, 2}, {1, 0, 1}));
  CHECK(w1.omega[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(w1.omega[1] == 0.0);
  CHECK(w1.omega[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(w1.total_mass == doctest::Approx(1.0).epsilon(1e-15));

  const auto w2 = ekm_weights(make_view({8, 4, 2}, {0, 1, 1}));
  CHECK(w2.omega[0] == 0.0);
  CHECK(w2.omega[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(w2.omega[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(w2.total_mass == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("all-uncensored weights are uniform") {
  const auto w = ekm_weights(make_view({16, 8, 4, 2}, {1, 1, 1, 1}));
  for (double x : w.omega) CHECK(x == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(w.total_mass == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("total mass telescopes for every censoring pattern up to k = 12") {
  for (std::size_t k = 1; k <= 12; ++k) {
    std::vector<double> ratios(k);
    for (std::size_t i = 0; i < k; ++i) ratios[i] = static_cast<double>(k - i + 1);
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
      std::vector<std::uint8_t> delta(k);
      for (std::size_t i = 0; i < k; ++i) delta[i] = (mask >> i) & 1;
      const auto w = ekm_weights(make_view(ratios, delta));
      double prod = 1.0;
      for (std::size_t i = 1; i <= k; ++i) {
        prod *= 1.0 - static_cast<double>(delta[i - 1]) / static_cast<double>(i);
      }
      REQUIRE(std::fabs(w.total_mass - (1.0 - prod)) <= 1e-12);
      REQUIRE((w.total_mass >= 0.0 && w.total_mass <= 1.0 + 1e-15));
      // full mass exactly when the largest observation is uncensored
      if (delta[0]) {
        REQUIRE(std::fabs(w.total_mass - 1.0) <= 1e-12);
      } else {
        REQUIRE(w.total_mass < 1.0 - 1.0 / (2.0 * static_cast<double>(k)));
      }
    }
  }
}

TEST_CASE("backward pass matches the quadratic-time reference bit for bit") {
  RandomStream rng(2024);
  const std::size_t k = 1000;
  std::vector<std::uint8_t> delta(k);
  for (auto& d : delta) d = rng.uniform() < 0.7 ? 1 : 0;
  std::vector<double> ratios(k);
  for (std::size_t i = 0; i < k; ++i) ratios[i] = 1.0 + static_cast<double>(k - i);
  const auto fast = ekm_weights(make_view(ratios, delta));
  const auto slow = naive_weights(delta);
  for (std::size_t i = 0; i < k; ++i) REQUIRE(fast.omega[i] == slow[i]);
}

TEST_CASE("integrals against the top-k product-limit measure") {
  const auto view = make_view({8, 4, 2}, {1, 0, 1});
  CHECK(ekm_integral(view, [](double) { return 1.0; }) ==
        doctest::Approx(ekm_total_mass(view)).epsilon(1e-15));
  CHECK(ekm_integral(view, [](double x) { return std::log(x); }) ==
        doctest::Approx(7.0 / 3.0 * std::log(2.0)).epsilon(1e-14));

  // all-uncensored reduction to the plain average
  const auto uncensored = make_view({9, 3, 2}, {1, 1, 1});
  const double hill = (std::log(9.0) + std::log(3.0) + std::log(2.0)) / 3.0;
  CHECK(ekm_integral(uncensored, [](double x) { return std::log(x); }) ==
        doctest::Approx(hill).epsilon(1e-15));
  for (const auto& phi : {NamedPhi::log(), NamedPhi::log_sq(), NamedPhi::power(0.5),
                          NamedPhi::indicator(4.0)}) {
    CHECK(std::fabs(ekm_integral(uncensored, phi.as_function()) -
                    residual_estimator(uncensored.ratios, phi.as_function())) <= 1e-15);
  }

  CHECK_THROWS_AS(
      (void)ekm_integral(view, [](double x) { return 1.0 / (x - 2.0); }), NumericError);
}

TEST_CASE("phi is not evaluated on zero-weight ratios") {
  const auto view = make_view({8, 4, 2}, {1, 0, 1});
  // pole at the censored ratio 4 is never touched
  const double v = ekm_integral(view, [](double x) { return 1.0 / (x - 4.0); });
  CHECK(std::isfinite(v));
}

TEST_CASE("ekm cdf") {
  const auto view = make_view({8, 4, 2}, {1, 0, 1});
  const auto cdf = ekm_cdf(view);
  CHECK(cdf(0.5) == 0.0);
  CHECK(cdf(2.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(cdf(4.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(cdf(8.0) == doctest::Approx(1.0).epsilon(1e-15));

  const auto empirical = ekm_cdf(make_view({16, 8, 4, 2}, {1, 1, 1, 1}));
  CHECK(empirical(2.0) == doctest::Approx(0.25));
  CHECK(empirical(16.0) == doctest::Approx(1.0));

  // monotone in x
  const auto view2 = make_view({10, 7, 5, 3, 2}, {1, 0, 1, 1, 0});
  const auto cdf2 = ekm_cdf(view2);
  double prev = -1.0;
  for (double x = 0.5; x < 12.0; x += 0.25) {
    CHECK(cdf2(x) >= prev);
    prev = cdf2(x);
  }
}

TEST_CASE("total mass edge cases") {
  CHECK(ekm_total_mass(make_view({8, 4, 2}, {1, 1, 0})) == doctest::Approx(1.0));
  CHECK(ekm_total_mass(make_view({8, 4, 2}, {0, 0, 0})) == 0.0);
  CHECK(ekm_total_mass(make_view({8, 4, 2}, {0, 1, 1})) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("named integrand registry") {
  CHECK(NamedPhi::parse("log")(std::exp(2.0)) == doctest::Approx(2.0));
  CHECK(NamedPhi::parse("log2")(std::exp(2.0)) == doctest::Approx(4.0));
  CHECK(NamedPhi::parse("one")(17.0) == 1.0);
  CHECK(NamedPhi::parse("indicator(2.5)")(2.0) == 1.0);
  CHECK(NamedPhi::parse("indicator(2.5)")(3.0) == 0.0);
  CHECK(NamedPhi::parse("power(0.5)")(4.0) == doctest::Approx(2.0));
  CHECK(NamedPhi::parse("power(0.5)").name() == "power(0.5)");
  CHECK_THROWS_AS((void)NamedPhi::parse("cube"), ParseError);
  CHECK_THROWS_AS((void)NamedPhi::parse("indicator(0.5)"), ParseError);
}

TEST_CASE("top-k integral converges to the limit tail integral") {
  // Frechet(2) events, Frechet(2/3) censoring: S(log) concentrates at 1/2.
  const Distribution f = Distribution::frechet(2);
  const Distribution g = Distribution::frechet(2.0 / 3.0);
  double sum = 0.0;
  const int reps = 200;
  for (int rep = 0; rep < reps; ++rep) {
    RandomStream rng(314, static_cast<std::uint64_t>(rep));
    const auto sample = generate_censored(f, g, 5000, rng);
    const auto view = top_k_view(sort_with_concomitants(sample), 150);
    sum += ekm_integral(view, [](double x) { return std::log(x); });
  }
  CHECK(sum / reps == doctest::Approx(0.5).epsilon(0.1));
}
