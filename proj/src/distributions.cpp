#include "cekm/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cekm/errors.hpp"
#include "cekm/format.hpp"

namespace cekm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
  if (!ok) throw DomainError(msg);
}

// Continued fraction for the incomplete beta (Lentz's method).
double beta_cont_frac(double a, double b, double x) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double tiny = std::numeric_limits<double>::min() / eps;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 10.0 * eps) return h;
  }
  throw NumericError("incomplete beta continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cont_frac(a, b, x) / a;
  }
  return 1.0 - front * beta_cont_frac(b, a, 1.0 - x) / b;
}

Distribution::Distribution(Family f, std::vector<double> params)
    : family_(f), params_(std::move(params)) {}

Distribution Distribution::pareto(double alpha) {
  require(alpha > 0.0, "pareto: alpha must be > 0");
  return Distribution(Family::pareto, {alpha});
}

Distribution Distribution::burr(double c, double kappa) {
  require(c > 0.0 && kappa > 0.0, "burr: c and kappa must be > 0");
  return Distribution(Family::burr, {c, kappa});
}

Distribution Distribution::frechet(double alpha) {
  require(alpha > 0.0, "frechet: alpha must be > 0");
  return Distribution(Family::frechet, {alpha});
}

Distribution Distribution::beta(double a, double b) {
  require(a > 0.0 && b > 0.0, "beta: a and b must be > 0");
  return Distribution(Family::beta, {a, b});
}

Distribution Distribution::weibull(double shape, double scale) {
  require(shape > 0.0 && scale > 0.0, "weibull: shape and scale must be > 0");
  return Distribution(Family::weibull, {shape, scale});
}

Distribution Distribution::exponential(double rate) {
  require(rate > 0.0, "exp: rate must be > 0");
  return Distribution(Family::exponential, {rate});
}

Distribution Distribution::gpd(double gamma, double mu, double sigma) {
  require(sigma > 0.0, "gpd: sigma must be > 0");
  return Distribution(Family::gpd, {gamma, mu, sigma});
}

double Distribution::cdf(double x) const {
  switch (family_) {
    case Family::pareto: {
      if (x <= 1.0) return 0.0;
      return -std::expm1(-params_[0] * std::log(x));
    }
    case Family::burr: {
      if (x <= 0.0) return 0.0;
      const double c = params_[0], kappa = params_[1];
      return -std::expm1(-kappa * std::log1p(std::pow(x, c)));
    }
    case Family::frechet: {
      if (x <= 0.0) return 0.0;
      return std::exp(-std::pow(x, -params_[0]));
    }
    case Family::beta: {
      const double a = params_[0], b = params_[1];
      if (x <= 0.0) return 0.0;
      if (x >= 1.0) return 1.0;
      if (a == 1.0) return -std::expm1(b * std::log1p(-x));
      if (b == 1.0) return std::pow(x, a);
      return regularized_incomplete_beta(a, b, x);
    }
    case Family::weibull: {
      if (x <= 0.0) return 0.0;
      return -std::expm1(-std::pow(x / params_[1], params_[0]));
    }
    case Family::exponential: {
      if (x <= 0.0) return 0.0;
      return -std::expm1(-params_[0] * x);
    }
    case Family::gpd: {
      const double gamma = params_[0], mu = params_[1], sigma = params_[2];
      if (x <= mu) return 0.0;
      const double s = (x - mu) / sigma;
      if (gamma == 0.0) return -std::expm1(-s);
      const double arg = 1.0 + gamma * s;
      if (arg <= 0.0) return gamma < 0.0 ? 1.0 : 0.0;
      return -std::expm1(-std::log(arg) / gamma);
    }
  }
  return 0.0;  // unreachable
}

double Distribution::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile: p must lie in (0,1)");
  switch (family_) {
    case Family::pareto:
      return std::exp(-std::log1p(-p) / params_[0]);
    case Family::burr: {
      const double c = params_[0], kappa = params_[1];
      return std::pow(std::expm1(-std::log1p(-p) / kappa), 1.0 / c);
    }
    case Family::frechet:
      return std::pow(-std::log(p), -1.0 / params_[0]);
    case Family::beta: {
      const double a = params_[0], b = params_[1];
      if (a == 1.0) return -std::expm1(std::log1p(-p) / b);
      if (b == 1.0) return std::pow(p, 1.0 / a);
      // Newton on the cdf with bisection safeguarding.
      double lo = 0.0, hi = 1.0, x = a / (a + b);
      const double ln_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
      for (int it = 0; it < 200; ++it) {
        const double f = regularized_incomplete_beta(a, b, x) - p;
        if (f > 0.0) {
          hi = x;
        } else {
          lo = x;
        }
        const double ln_pdf = (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - ln_beta;
        double step = f * std::exp(-ln_pdf);
        double next = x - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) <= 1e-16 * std::max(1.0, std::fabs(x))) return next;
        x = next;
      }
      return x;
    }
    case Family::weibull:
      return params_[1] * std::pow(-std::log1p(-p), 1.0 / params_[0]);
    case Family::exponential:
      return -std::log1p(-p) / params_[0];
    case Family::gpd: {
      const double gamma = params_[0], mu = params_[1], sigma = params_[2];
      if (gamma == 0.0) return mu - sigma * std::log1p(-p);
      return mu + sigma * std::expm1(-gamma * std::log1p(-p)) / gamma;
    }
  }
  return 0.0;  // unreachable
}

std::vector<double> Distribution::sample(RandomStream& rng, std::size_t n) const {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = quantile(rng.uniform());
  return out;
}

TailProfile Distribution::tail_profile() const {
  TailProfile t;
  switch (family_) {
    case Family::pareto:
      t.gamma = 1.0 / params_[0];
      t.right_endpoint = kInf;
      break;
    case Family::burr:
      t.gamma = 1.0 / (params_[0] * params_[1]);
      t.right_endpoint = kInf;
      break;
    case Family::frechet:
      t.gamma = 1.0 / params_[0];
      t.right_endpoint = kInf;
      break;
    case Family::beta:
      t.gamma = -1.0 / params_[1];
      t.right_endpoint = 1.0;
      break;
    case Family::weibull:
      t.gamma = 0.0;
      t.right_endpoint = kInf;
      t.gumbel_shape = params_[0];
      t.gumbel_rate = std::pow(params_[1], -params_[0]);
      break;
    case Family::exponential:
      t.gamma = 0.0;
      t.right_endpoint = kInf;
      t.gumbel_shape = 1.0;
      t.gumbel_rate = params_[0];
      break;
    case Family::gpd: {
      const double gamma = params_[0], mu = params_[1], sigma = params_[2];
      t.gamma = gamma;
      t.right_endpoint = gamma < 0.0 ? mu - sigma / gamma : kInf;
      if (gamma == 0.0) {
        t.gumbel_shape = 1.0;
        t.gumbel_rate = 1.0 / sigma;
      }
      break;
    }
  }
  return t;
}

double TailProfile::alpha_pair(const TailProfile& censoring) const {
  const double gf = gamma, gg = censoring.gamma;
  if (gf != 0.0 && gg != 0.0) {
    if ((gf > 0.0) != (gg > 0.0)) {
      throw DomainError("alpha_pair: event and censoring tails in different max-domains");
    }
    return gg / (gf + gg);
  }
  if (gf == 0.0 && gg == 0.0) {
    if (gumbel_rate <= 0.0 || censoring.gumbel_rate <= 0.0) {
      throw DomainError("alpha_pair: missing Gumbel hazard data");
    }
    if (gumbel_shape == censoring.gumbel_shape) {
      return gumbel_rate / (gumbel_rate + censoring.gumbel_rate);
    }
    // Lighter tail (larger Weibull shape) is eventually never the minimum.
    return gumbel_shape > censoring.gumbel_shape ? 1.0 : 0.0;
  }
  throw DomainError("alpha_pair: event and censoring tails in different max-domains");
}

namespace {

std::vector<double> parse_args(std::string_view inside, std::string_view literal) {
  std::vector<double> args;
  std::string token;
  std::stringstream ss{std::string(inside)};
  while (std::getline(ss, token, ',')) {
    try {
      std::size_t pos = 0;
      args.push_back(std::stod(token, &pos));
      while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) ++pos;
      if (pos != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw ParseError("bad distribution parameter in '" + std::string(literal) + "'");
    }
  }
  return args;
}

}  // namespace

Distribution Distribution::parse(std::string_view literal) {
  const auto open = literal.find('(');
  const auto close = literal.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    throw ParseError("distribution literal must look like name(args): '" + std::string(literal) + "'");
  }
  std::string name(literal.substr(0, open));
  name.erase(std::remove_if(name.begin(), name.end(), ::isspace), name.end());
  const auto args = parse_args(literal.substr(open + 1, close - open - 1), literal);
  const auto need = [&](std::size_t n) {
    if (args.size() != n) {
      throw ParseError("distribution '" + name + "' expects " + std::to_string(n) + " parameter(s)");
    }
  };
  try {
    if (name == "pareto") { need(1); return pareto(args[0]); }
    if (name == "burr") { need(2); return burr(args[0], args[1]); }
    if (name == "frechet") { need(1); return frechet(args[0]); }
    if (name == "beta") { need(2); return beta(args[0], args[1]); }
    if (name == "weibull") { need(2); return weibull(args[0], args[1]); }
    if (name == "exp") { need(1); return exponential(args[0]); }
    if (name == "gpd") { need(3); return gpd(args[0], args[1], args[2]); }
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
  throw ParseError("unknown distribution family '" + name + "'");
}

std::string Distribution::to_literal() const {
  const char* name = nullptr;
  switch (family_) {
    case Family::pareto: name = "pareto"; break;
    case Family::burr: name = "burr"; break;
    case Family::frechet: name = "frechet"; break;
    case Family::beta: name = "beta"; break;
    case Family::weibull: name = "weibull"; break;
    case Family::exponential: name = "exp"; break;
    case Family::gpd: name = "gpd"; break;
  }
  std::string out = std::string(name) + "(";
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (i) out += ",";
    out += format_double(params_[i]);
  }
  return out + ")";
}

}  // namespace cekm
