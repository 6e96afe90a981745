#include "cekm/kaplan_meier.hpp"

#include <cmath>

#include "cekm/errors.hpp"

namespace cekm {

namespace {

// Walks the sorted sample once, carrying survival as a running product, and
// reports each (value, jump) with equal uncensored values merged.
template <typename Emit>
void km_jumps(const SortedCensoredSample& sorted, Emit&& emit) {
  const std::size_t n = sorted.size();
  double survival = 1.0;
  double pending_value = 0.0;
  double pending_jump = 0.0;
  bool pending = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!sorted.delta[i]) continue;
    const double at_risk = static_cast<double>(n - i);
    const double jump = survival / at_risk;
    survival *= 1.0 - 1.0 / at_risk;
    if (pending && sorted.z[i] == pending_value) {
      pending_jump += jump;
      continue;
    }
    if (pending) emit(pending_value, pending_jump);
    pending_value = sorted.z[i];
    pending_jump = jump;
    pending = true;
  }
  if (pending) emit(pending_value, pending_jump);
}

}  // namespace

StepCdf km_estimate(const SortedCensoredSample& sorted) {
  if (sorted.size() == 0) throw DomainError("km_estimate: empty sample");
  std::vector<double> knots, values;
  double cum = 0.0;
  km_jumps(sorted, [&](double value, double jump) {
    cum += jump;
    knots.push_back(value);
    values.push_back(cum);
  });
  return StepCdf(std::move(knots), std::move(values));
}

double km_integral(const SortedCensoredSample& sorted, const RealFunction& phi) {
  if (sorted.size() == 0) throw DomainError("km_integral: empty sample");
  double sum = 0.0;
  km_jumps(sorted, [&](double value, double jump) {
    const double y = phi(value);
    if (!std::isfinite(y)) {
      throw NumericError("km_integral: phi not finite at a jump point");
    }
    sum += y * jump;
  });
  return sum;
}

}  // namespace cekm
