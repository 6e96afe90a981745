#pragma once

#include <string>
#include <string_view>

#include "cekm/kaplan_meier.hpp"

namespace cekm {

// Named integrand registry shared by the CLI and the limit-variance oracles:
//   one, log, log2 (meaning (log x)^2), indicator(x0), power(p).
class NamedPhi {
 public:
  enum class Kind { one, log, log_sq, indicator, power };

  static NamedPhi one() { return {Kind::one, 0.0}; }
  static NamedPhi log() { return {Kind::log, 0.0}; }
  static NamedPhi log_sq() { return {Kind::log_sq, 0.0}; }
  static NamedPhi indicator(double x0) { return {Kind::indicator, x0}; }
  static NamedPhi power(double p) { return {Kind::power, p}; }

  static NamedPhi parse(std::string_view text);

  double operator()(double x) const;
  RealFunction as_function() const;

  Kind kind() const { return kind_; }
  double param() const { return param_; }
  std::string name() const;

 private:
  NamedPhi(Kind k, double p) : kind_(k), param_(p) {}
  Kind kind_;
  double param_;
};

}  // namespace cekm
