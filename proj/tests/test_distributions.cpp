#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cekm/distributions.hpp"
#include "cekm/errors.hpp"
#include "cekm/random.hpp"

using namespace cekm;

TEST_CASE("cdf closed forms") {
  CHECK(Distribution::pareto(2).cdf(2.0) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(Distribution::beta(1, 2).cdf(0.5) == doctest::Approx(0.75).epsilon(1e-14));
  const double s = std::sqrt(2.0);
  CHECK(Distribution::burr(s, s).cdf(1.0) ==
        doctest::Approx(1.0 - std::pow(2.0, -s)).epsilon(1e-14));
  CHECK(Distribution::frechet(2).cdf(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(Distribution::exponential(1).cdf(1.0) == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(Distribution::pareto(2).cdf(0.5) == 0.0);
  CHECK(Distribution::beta(1, 2).cdf(2.0) == 1.0);
}

TEST_CASE("quantile closed forms and guards") {
  CHECK(Distribution::pareto(2).quantile(0.75) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(Distribution::exponential(1).quantile(1.0 - std::exp(-1.0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(Distribution::frechet(2).quantile(std::exp(-1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS((void)Distribution::pareto(2).quantile(0.0), DomainError);
  CHECK_THROWS_AS((void)Distribution::pareto(2).quantile(1.0), DomainError);
  CHECK_THROWS_AS((void)Distribution::pareto(-1), DomainError);
  CHECK_THROWS_AS((void)Distribution::gpd(0.5, 0.0, -1.0), DomainError);
}

TEST_CASE("quantile is the inverse of cdf across families") {
  const Distribution dists[] = {
      Distribution::pareto(2),         Distribution::burr(std::sqrt(2.0), std::sqrt(2.0)),
      Distribution::frechet(2),        Distribution::beta(1, 2),
      Distribution::beta(2.5, 3.5),    Distribution::weibull(0.5, 1.0),
      Distribution::exponential(6),    Distribution::gpd(0.5, 0.0, 1.0),
      Distribution::gpd(-0.25, 1.0, 2.0), Distribution::gpd(0.0, 0.0, 1.0),
  };
  for (const auto& d : dists) {
    for (double p : {0.001, 0.05, 0.3, 0.5, 0.8, 0.99, 0.9999}) {
      const double x = d.quantile(p);
      const double q = d.quantile(d.cdf(x));
      CHECK(q == doctest::Approx(x).epsilon(1e-10));
    }
  }
}

TEST_CASE("heavy-tailed survival ratios are regularly varying") {
  const std::pair<Distribution, double> cases[] = {
      {Distribution::pareto(2), 0.5},
      {Distribution::burr(std::sqrt(2.0), std::sqrt(2.0)), 0.5},
      {Distribution::frechet(2), 0.5},
      {Distribution::burr(1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)), 3.0},
  };
  for (const auto& [d, gamma] : cases) {
    for (double t : {1e3, 1e6}) {
      const double ratio = (1.0 - d.cdf(2.0 * t)) / (1.0 - d.cdf(t));
      CHECK(ratio == doctest::Approx(std::pow(2.0, -1.0 / gamma)).epsilon(0.05));
    }
  }
}

TEST_CASE("exponential pair transforms to an exact Pareto tail") {
  // 1 - F(U_H(x)) = x^{-6/7} for F = exp(6), H = exp(7).
  const Distribution f = Distribution::exponential(6);
  const Distribution h = Distribution::exponential(7);
  for (double x : {1.5, 2.0, 10.0, 1e4, 1e8}) {
    const double u_h = h.quantile(1.0 - 1.0 / x);
    CHECK(1.0 - f.cdf(u_h) == doctest::Approx(std::pow(x, -6.0 / 7.0)).epsilon(1e-10));
  }
}

TEST_CASE("sampling is deterministic and inverse-transform") {
  const Distribution d = Distribution::pareto(2);
  RandomStream a(123), b(123);
  const auto xs = d.sample(a, 5);
  const auto ys = d.sample(b, 5);
  CHECK(xs == ys);
  RandomStream c(123);
  for (double x : xs) CHECK(x == d.quantile(c.uniform()));
}

TEST_CASE("empirical cdf of a large sample tracks the truth") {
  const Distribution d = Distribution::pareto(2);
  RandomStream rng(7);
  auto xs = d.sample(rng, 100000);
  std::sort(xs.begin(), xs.end());
  double sup = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double emp_hi = static_cast<double>(i + 1) / xs.size();
    const double emp_lo = static_cast<double>(i) / xs.size();
    const double f = d.cdf(xs[i]);
    sup = std::max({sup, std::fabs(emp_hi - f), std::fabs(emp_lo - f)});
  }
  CHECK(sup < 0.01);
}

TEST_CASE("bounded support is respected") {
  const Distribution d = Distribution::beta(1, 2);
  RandomStream rng(11);
  const auto xs = d.sample(rng, 100000);
  CHECK(*std::max_element(xs.begin(), xs.end()) < 1.0);
  CHECK(*std::min_element(xs.begin(), xs.end()) > 0.0);
}

TEST_CASE("tail profiles") {
  const TailProfile beta = Distribution::beta(1, 2).tail_profile();
  CHECK(beta.gamma == doctest::Approx(-0.5));
  CHECK(beta.right_endpoint == doctest::Approx(1.0));

  const double c = 1.0 / std::sqrt(3.0);
  CHECK(Distribution::burr(c, c).tail_profile().gamma == doctest::Approx(3.0).epsilon(1e-12));

  CHECK(Distribution::frechet(2).tail_profile().gamma == doctest::Approx(0.5));
  CHECK(std::isinf(Distribution::pareto(2).tail_profile().right_endpoint));
  CHECK(Distribution::gpd(-0.5, 0.0, 1.0).tail_profile().right_endpoint ==
        doctest::Approx(2.0));
}

TEST_CASE("alpha_pair across max-domains") {
  const auto exp6 = Distribution::exponential(6).tail_profile();
  const auto exp1 = Distribution::exponential(1).tail_profile();
  CHECK(exp6.alpha_pair(exp1) == doctest::Approx(6.0 / 7.0).epsilon(1e-14));
  CHECK(exp6.alpha_pair(exp1) + exp1.alpha_pair(exp6) == doctest::Approx(1.0));

  const auto par_f = Distribution::pareto(2).tail_profile();
  const auto par_g = Distribution::pareto(2.0 / 3.0).tail_profile();
  CHECK(par_f.alpha_pair(par_g) == doctest::Approx(0.75));

  const auto beta_f = Distribution::beta(1, 2).tail_profile();
  const auto beta_g = Distribution::beta(1, 2).tail_profile();
  CHECK(beta_f.alpha_pair(beta_g) == doctest::Approx(0.5));

  // Weibull(1,1) event times censored by Weibull(1/2,1): lighter event tail.
  const auto wei_f = Distribution::weibull(1, 1).tail_profile();
  const auto wei_g = Distribution::weibull(0.5, 1).tail_profile();
  CHECK(wei_f.alpha_pair(wei_g) == doctest::Approx(1.0));
  CHECK(wei_g.alpha_pair(wei_f) == doctest::Approx(0.0));

  CHECK_THROWS_AS((void)par_f.alpha_pair(beta_g), DomainError);
}

TEST_CASE("distribution literals round-trip") {
  const char* literals[] = {"pareto(2)", "burr(1.4142,1.4142)", "beta(1,2)", "weibull(0.5,1)",
                            "exp(6)",    "frechet(2)",           "gpd(0.5,0,1)"};
  for (const char* lit : literals) {
    const Distribution d = Distribution::parse(lit);
    const Distribution again = Distribution::parse(d.to_literal());
    CHECK(d.family() == again.family());
    CHECK(d.params() == again.params());
  }
  CHECK_THROWS_AS((void)Distribution::parse("cauchy(1)"), ParseError);
  CHECK_THROWS_AS((void)Distribution::parse("pareto(1,2)"), ParseError);
  CHECK_THROWS_AS((void)Distribution::parse("pareto(x)"), ParseError);
  CHECK_THROWS_AS((void)Distribution::parse("pareto(-1)"), ParseError);
}
