#include "dexroute/amm.hpp"

#include <cmath>

namespace dexroute {

namespace {

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !(lambda < 1.0)) {
    throw InvariantViolation("fee lambda must be in [0, 1)");
  }
}

void check_inputs(const ReservePair& reserves, double amount_in) {
  if (!(reserves.r_in > 0.0) || !(reserves.r_out > 0.0)) {
    throw NonPositiveReserve("reserves must be strictly positive");
  }
  if (!std::isfinite(amount_in) || amount_in < 0.0) {
    throw NegativeInput("amount_in must be finite and >= 0");
  }
}

double swap_out_real(const ReservePair& reserves, double amount_in, double lambda) {
  const double kept = (1.0 - lambda) * amount_in;
  double out = reserves.r_out * kept / (reserves.r_in + kept);
  // An input so large that the quotient rounds up to r_out would zero the
  // pool; clamp to the next representable value below it.
  if (!(out < reserves.r_out)) {
    out = std::nextafter(reserves.r_out, 0.0);
  }
  return out;
}

double swap_out_exact(const ReservePair& reserves, double amount_in, const FeeRate& fee) {
  if (!fee.keep_ratio) {
    throw InvariantViolation("ExactInteger mode needs a fee with an exact integer ratio");
  }
  const auto [num, den] = *fee.keep_ratio;
  const auto x = static_cast<std::uint64_t>(reserves.r_in);
  const auto y = static_cast<std::uint64_t>(reserves.r_out);
  const auto dx = static_cast<std::uint64_t>(amount_in);
  if (x == 0 || y == 0) {
    throw NonPositiveReserve("ExactInteger mode requires reserves >= 1");
  }
  if (dx == 0) return 0.0;
  using u128 = unsigned __int128;
  const u128 numerator = u128(y) * num * dx;
  const u128 denominator = u128(x) * den + u128(num) * dx;
  return static_cast<double>(static_cast<std::uint64_t>(numerator / denominator));
}

}  // namespace

FeeRate FeeRate::from_lambda(double lambda) {
  check_lambda(lambda);
  FeeRate fee;
  fee.lambda = lambda;
  const double ppm = lambda * 1e6;
  const double rounded = std::round(ppm);
  if (std::abs(ppm - rounded) < 1e-6 && rounded >= 0.0 && rounded < 1e6) {
    const auto fee_ppm = static_cast<std::uint64_t>(rounded);
    fee.keep_ratio = {1'000'000 - fee_ppm, 1'000'000};
  }
  return fee;
}

FeeRate FeeRate::from_keep_ratio(std::uint64_t keep_num, std::uint64_t keep_den) {
  if (keep_num == 0 || keep_den == 0 || keep_num > keep_den) {
    throw InvariantViolation("keep ratio must satisfy 0 < num <= den");
  }
  FeeRate fee;
  fee.lambda = 1.0 - static_cast<double>(keep_num) / static_cast<double>(keep_den);
  fee.keep_ratio = {keep_num, keep_den};
  return fee;
}

double swap_out(const ReservePair& reserves, double amount_in, const FeeRate& fee,
                SwapMode mode) {
  check_lambda(fee.lambda);
  check_inputs(reserves, amount_in);
  if (amount_in == 0.0) return 0.0;
  return mode == SwapMode::Real ? swap_out_real(reserves, amount_in, fee.lambda)
                                : swap_out_exact(reserves, amount_in, fee);
}

SwapResult apply_swap(const ReservePair& reserves, double amount_in, const FeeRate& fee,
                      SwapMode mode) {
  const double out = swap_out(reserves, amount_in, fee, mode);
  return {{reserves.r_in + amount_in, reserves.r_out - out}, out};
}

}  // namespace dexroute
