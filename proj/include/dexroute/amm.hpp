#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "dexroute/errors.hpp"

namespace dexroute {

// Pool trading fee: the fraction of the input retained by liquidity providers.
// When the fee has parts-per-million resolution the keep fraction (1 - lambda)
// is also stored as an exact integer ratio, which ExactInteger swaps require.
struct FeeRate {
  double lambda = 0.0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> keep_ratio;

  // Derives the exact keep ratio when lambda * 1e6 is integral.
  static FeeRate from_lambda(double lambda);
  // keep_num/keep_den = 1 - lambda; keep_num <= keep_den, both positive.
  static FeeRate from_keep_ratio(std::uint64_t keep_num, std::uint64_t keep_den);

  static FeeRate uniswap_v2() { return from_keep_ratio(997, 1000); }
  static FeeRate zero() { return from_keep_ratio(1, 1); }
};

enum class SwapMode {
  Real,          // double-precision evaluation of the closed form
  ExactInteger,  // integer arithmetic with floor division, on-chain style
};

// Reserves of one directed pool: r_in is the sold token's reserve, r_out the
// bought token's. Both strictly positive.
struct ReservePair {
  double r_in = 0.0;
  double r_out = 0.0;
};

// Constant-product output amount for a fixed input.
// Real mode evaluates r_out * g * dx / (r_in + g * dx) with g = 1 - lambda,
// clamped to [0, r_out); ExactInteger floors the same quotient over integers.
double swap_out(const ReservePair& reserves, double amount_in, const FeeRate& fee,
                SwapMode mode = SwapMode::Real);

struct SwapResult {
  ReservePair reserves;  // post-trade, strictly positive
  double amount_out = 0.0;
};

// swap_out plus the updated reserve pair (r_in + dx, r_out - dy).
SwapResult apply_swap(const ReservePair& reserves, double amount_in, const FeeRate& fee,
                      SwapMode mode = SwapMode::Real);

}  // namespace dexroute
