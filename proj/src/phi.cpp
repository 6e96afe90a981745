#include "cekm/phi.hpp"

#include <cmath>

#include "cekm/errors.hpp"
#include "cekm/format.hpp"

namespace cekm {

double NamedPhi::operator()(double x) const {
  switch (kind_) {
    case Kind::one: return 1.0;
    case Kind::log: return std::log(x);
    case Kind::log_sq: {
      const double l = std::log(x);
      return l * l;
    }
    case Kind::indicator: return x <= param_ ? 1.0 : 0.0;
    case Kind::power: return std::pow(x, param_);
  }
  return 0.0;  // unreachable
}

RealFunction NamedPhi::as_function() const {
  NamedPhi self = *this;
  return [self](double x) { return self(x); };
}

NamedPhi NamedPhi::parse(std::string_view text) {
  if (text == "one") return one();
  if (text == "log") return log();
  if (text == "log2") return log_sq();
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (open != std::string_view::npos && close == text.size() - 1) {
    const std::string name(text.substr(0, open));
    const std::string arg(text.substr(open + 1, close - open - 1));
    try {
      std::size_t pos = 0;
      const double v = std::stod(arg, &pos);
      if (pos != arg.size()) throw std::invalid_argument(arg);
      if (name == "indicator") {
        if (!(v > 1.0)) throw ParseError("indicator(x0) requires x0 > 1");
        return indicator(v);
      }
      if (name == "power") return power(v);
    } catch (const std::invalid_argument&) {
      throw ParseError("bad numeric argument in phi '" + std::string(text) + "'");
    } catch (const std::out_of_range&) {
      throw ParseError("bad numeric argument in phi '" + std::string(text) + "'");
    }
  }
  throw ParseError("unknown phi '" + std::string(text) +
                   "' (expected one, log, log2, indicator(x0), power(p))");
}

std::string NamedPhi::name() const {
  switch (kind_) {
    case Kind::one: return "one";
    case Kind::log: return "log";
    case Kind::log_sq: return "log2";
    case Kind::indicator: return "indicator(" + format_double(param_) + ")";
    case Kind::power: return "power(" + format_double(param_) + ")";
  }
  return "";  // unreachable
}

}  // namespace cekm
