#pragma once

#include <cmath>
#include <concepts>
#include <type_traits>

#include "dualrate/errors.hpp"

namespace dualrate {

/// Coefficients of the consensus loop lifted from the control period T to
/// the measurement period N*T.
///
/// `theta` is the delay of the lifted system in measurement periods and
/// `tau` the fast step within a period at which the newer sample arrives.
/// Over one period the state contracts by (1 - gamma) and blends in the
/// two delayed neighbour averages with weights f0 (newer) and f1 (older).
template <typename Scalar, typename Ratio = Scalar>
struct LiftedCoefficients {
  int theta = 0;
  Ratio tau{};
  Scalar gamma{};
  Scalar f0{};
  Scalar f1{};
};

namespace detail {

template <typename Scalar>
Scalar power(const Scalar& base, int exponent) {
  Scalar result(1);
  Scalar b = base;
  for (unsigned e = static_cast<unsigned>(exponent); e != 0; e >>= 1) {
    if (e & 1u) result *= b;
    b *= b;
  }
  return result;
}

template <typename Scalar, typename Ratio>
Scalar power(const Scalar& base, const Ratio& exponent) {
  if constexpr (std::is_integral_v<Ratio>) {
    return power(base, static_cast<int>(exponent));
  } else {
    using std::pow;
    return pow(base, Scalar(exponent));
  }
}

template <typename Ratio>
int ceil_div(int h, const Ratio& n) {
  if constexpr (std::is_integral_v<Ratio>) {
    return static_cast<int>((h + n - 1) / n);
  } else {
    using std::ceil;
    return static_cast<int>(ceil(static_cast<double>(h) / static_cast<double>(n)));
  }
}

}  // namespace detail

/// Closed forms for theta, tau, gamma, f0, f1.
///
/// `Ratio` is the type of the sampling period ratio: an integer type gives
/// exact integer powers (usable with rational scalars), a floating type
/// allows real-valued N. With h = 0 no delayed sample is ever used, so the
/// result is theta = -1, tau = N, f0 = 0, f1 = 1.
template <typename Scalar, typename Ratio>
LiftedCoefficients<Scalar, Ratio> lifted_coefficients(const Scalar& epsilon, int h,
                                                      const Ratio& N) {
  if (!(epsilon > Scalar(0) && epsilon < Scalar(1))) {
    throw Error(ErrorCode::InvalidParameter, "epsilon must lie in (0, 1)");
  }
  if (h < 0) throw Error(ErrorCode::InvalidParameter, "h must be >= 0");
  if (!(N >= Ratio(1))) throw Error(ErrorCode::InvalidParameter, "N must be >= 1");

  const Scalar q = Scalar(1) - epsilon;
  LiftedCoefficients<Scalar, Ratio> c;
  c.gamma = Scalar(1) - detail::power(q, N);
  if (h == 0) {
    c.theta = -1;
    c.tau = N;
    c.f0 = Scalar(0);
    c.f1 = Scalar(1);
    return c;
  }
  c.theta = detail::ceil_div(h, N) - 1;
  c.tau = Ratio(h) - Ratio(c.theta) * N;
  const Scalar q_rest = detail::power(q, N - c.tau);
  c.f0 = (Scalar(1) - q_rest) / c.gamma;
  c.f1 = q_rest * (Scalar(1) - detail::power(q, c.tau)) / c.gamma;
  return c;
}

}  // namespace dualrate
