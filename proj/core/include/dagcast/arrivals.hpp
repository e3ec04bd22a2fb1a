#pragma once

#include <cstdint>
#include <string_view>

#include "dagcast/rng.hpp"

namespace dagcast {

enum class ArrivalKind {
  // A(t) = ceil(rate) with probability rate / ceil(rate), else 0.
  bernoulli_batch,
  poisson,
};

ArrivalKind parse_arrival_kind(std::string_view name);
std::string_view to_string(ArrivalKind kind) noexcept;

struct ArrivalSpec {
  ArrivalKind kind = ArrivalKind::bernoulli_batch;
  double rate = 0.0;  // packets per slot
  std::uint64_t seed = 1;
};

// i.i.d. integer arrivals with mean `rate`.
class ArrivalProcess {
 public:
  explicit ArrivalProcess(const ArrivalSpec& spec);

  std::int64_t next();
  double rate() const noexcept { return spec_.rate; }

 private:
  ArrivalSpec spec_;
  SplitMix64 rng_;
  std::int64_t batch_ = 0;
  double batch_probability_ = 0.0;
};

}  // namespace dagcast
