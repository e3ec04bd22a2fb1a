#include "dagcast/arrivals.hpp"

#include <cmath>
#include <string>

#include "dagcast/error.hpp"

namespace dagcast {

ArrivalKind parse_arrival_kind(std::string_view name) {
  if (name == "bernoulli" || name == "bernoulli-batch") return ArrivalKind::bernoulli_batch;
  if (name == "poisson") return ArrivalKind::poisson;
  throw DomainError("unknown arrival process '" + std::string(name) + "'");
}

std::string_view to_string(ArrivalKind kind) noexcept {
  return kind == ArrivalKind::poisson ? "poisson" : "bernoulli-batch";
}

ArrivalProcess::ArrivalProcess(const ArrivalSpec& spec) : spec_(spec), rng_(spec.seed) {
  if (!(spec.rate >= 0.0) || !std::isfinite(spec.rate)) throw DomainError("arrival rate must be finite and >= 0");
  if (spec.rate > 0.0) {
    batch_ = static_cast<std::int64_t>(std::ceil(spec.rate));
    batch_probability_ = spec.rate / static_cast<double>(batch_);
  }
}

std::int64_t ArrivalProcess::next() {
  if (spec_.rate == 0.0) return 0;
  if (spec_.kind == ArrivalKind::bernoulli_batch) {
    return rng_.uniform() < batch_probability_ ? batch_ : 0;
  }
  // Knuth's product method on chunks of mean <= 16 keeps exp(-mean) well
  // away from underflow.
  std::int64_t total = 0;
  double remaining = spec_.rate;
  while (remaining > 0.0) {
    const double mean = std::min(remaining, 16.0);
    remaining -= mean;
    const double limit = std::exp(-mean);
    double product = rng_.uniform();
    while (product > limit) {
      ++total;
      product *= rng_.uniform();
    }
  }
  return total;
}

}  // namespace dagcast
