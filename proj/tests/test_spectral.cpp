#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "dualrate/benchmark.hpp"
#include "dualrate/errors.hpp"
#include "dualrate/spectral.hpp"
#include "support/extended_roots.hpp"
#include "support/random_graphs.hpp"

using namespace dualrate;

namespace {

struct Instance {
  double lambda;
  double epsilon;
  int h;
  int N;
};

Instance random_instance(testing::Rng& rng, double lambda_lo, double lambda_hi, bool h_le_N) {
  Instance s;
  s.lambda = testing::uniform(rng, lambda_lo, lambda_hi);
  s.epsilon = testing::uniform(rng, 0.01, 0.99);
  s.N = testing::uniform_int(rng, 1, 40);
  s.h = h_le_N ? testing::uniform_int(rng, 1, s.N) : testing::uniform_int(rng, 0, 5 * s.N);
  return s;
}

}  // namespace

TEST_CASE("char_poly structure") {
  const auto lc = lifted_coefficients(0.3, 10, 16);
  const CharPoly p = char_poly(0.7, lc);
  REQUIRE(p.degree() == 2);
  CHECK(p.coeffs(2) == 1.0);
  CHECK(p.coeffs(1) == doctest::Approx(-(1 - lc.gamma) - 0.3 * lc.gamma * lc.f0));
  CHECK(p.coeffs(0) == doctest::Approx(-0.3 * lc.gamma * lc.f1));

  const CharPoly deep = char_poly(0.7, lifted_coefficients(0.3, 10, 3));
  CHECK(deep.degree() == 5);
  CHECK(deep.coeffs(2) == 0.0);
  CHECK(deep.coeffs(3) == 0.0);

  // h = N: z^2 - (1-gamma) z - (1-lambda) gamma
  const auto eq = lifted_coefficients(0.4, 6, 6);
  const CharPoly q = char_poly(1.3, eq);
  CHECK(q.coeffs(1) == doctest::Approx(-(1 - eq.gamma)));
  CHECK(q.coeffs(0) == doctest::Approx(0.3 * eq.gamma));
}

TEST_CASE("P(1) equals gamma lambda") {
  testing::Rng rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const Instance s = random_instance(rng, 0.0, 2.0, false);
    const auto lc = lifted_coefficients(s.epsilon, s.h, s.N);
    CHECK(std::abs(char_poly(s.lambda, lc)(1.0) - lc.gamma * s.lambda) <= 1e-12);
  }
}

TEST_CASE("consensus mode factors as (z - 1)(z + gamma f1) when theta = 0") {
  // Frozen from a 40-digit evaluation.
  CHECK(zbar(0.0, 0.3, 10, 16) == doctest::Approx(0.1143257069430399).epsilon(1e-12));

  testing::Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const Instance s = random_instance(rng, 0.0, 0.0, true);
    const auto c = lifted_coefficients(s.epsilon, s.h, s.N);
    REQUIRE(c.theta == 0);
    CHECK(std::abs(zbar(0.0, s.epsilon, s.h, s.N) - c.gamma * c.f1) <= 1e-10);
    const CharPoly p = char_poly(0.0, c);
    CHECK(std::abs(p(-c.gamma * c.f1)) <= 1e-14);
  }
}

TEST_CASE("zbar special values") {
  // lambda = 1 leaves only the (1-gamma) pole.
  const auto lc = lifted_coefficients(0.3, 4, 7);
  CHECK(zbar(1.0, 0.3, 4, 7) == doctest::Approx(1 - lc.gamma).epsilon(1e-12));
  // No delay, N = 1: single root 1 - eps lambda.
  CHECK(zbar(1.5, 0.4, 0, 1) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(zbar(0.0, 0.4, 0, 1) == 0.0);
  // lambda = 2, eps = 0.5, h = N = 1: z^2 - 0.5 z + 0.5 has |z| = sqrt(0.5).
  CHECK(zbar(2.0, 0.5, 1, 1) == doctest::Approx(0.70710678118654752).epsilon(1e-14));
  CHECK(zbar_closed_form(2.0, 0.5, 1, 1) == doctest::Approx(0.70710678118654752).epsilon(1e-14));
  // Degree 4: h=5, N=2, eps=0.3, lambda=1.5.
  CHECK(zbar(1.5, 0.3, 5, 2) == doctest::Approx(0.74742077868479047).epsilon(1e-13));

  CHECK_THROWS_AS(zbar(2.5, 0.3, 1, 1), Error);
  CHECK_THROWS_AS(zbar(0.5, 1.0, 1, 1), Error);
}

TEST_CASE("zbar_closed_form rejects points outside its regime") {
  auto code = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Parse;
  };
  CHECK(code([] { zbar_closed_form(0.5, 0.3, 10, 9); }) == ErrorCode::OutOfRegime);
  CHECK(code([] { zbar_closed_form(0.5, 0.3, 0, 9); }) == ErrorCode::OutOfRegime);
  CHECK(code([] { zbar_closed_form(0.0, 0.3, 1, 9); }) == ErrorCode::OutOfRegime);
}

TEST_CASE("root magnitudes stay inside the unit disk") {
  testing::Rng rng(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    const bool consensus = trial % 4 == 0;
    const Instance s = random_instance(rng, 1e-6, 2.0, false);
    const double lambda = consensus ? 0.0 : s.lambda;
    const auto lc = lifted_coefficients(s.epsilon, s.h, s.N);
    const auto roots = poly_roots(char_poly(lambda, lc));
    CHECK(max_modulus(roots) < 1 + 1e-9);
    if (!consensus) continue;

    int at_one = 0;
    for (const auto& z : roots) at_one += std::abs(z - 1.0) <= 1e-9;
    CHECK(at_one == 1);
    // The remaining roots can sit within (1-eps)^N of the unit circle, far
    // below double resolution, so strict containment is checked in 100 digits.
    int extended_at_one = 0;
    for (const auto& z : testing::extended_mode_roots(0.0, s.epsilon, s.h, s.N)) {
      if (abs(z - testing::Extended(1)) <= testing::Extended("1e-60")) {
        ++extended_at_one;
      } else {
        CHECK(abs(z) < 1);
      }
    }
    CHECK(extended_at_one == 1);
  }
}

TEST_CASE("zbar decreases in N for modes in (0, 1]") {
  testing::Rng rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    const double lambda = testing::uniform(rng, 1e-3, 1.0);
    const double eps = testing::uniform(rng, 0.01, 0.99);
    const int h = testing::uniform_int(rng, 1, 30);
    const double N1 = testing::uniform(rng, h, 3.0 * h + 20);
    const double N2 = N1 + testing::uniform(rng, 1e-3, 20.0);
    CHECK(zbar(lambda, eps, h, N1) >= zbar(lambda, eps, h, N2) - 1e-12);
  }
}

TEST_CASE("zbar is ordered across modes in (0, 1]") {
  testing::Rng rng(78);
  for (int trial = 0; trial < 500; ++trial) {
    double li = testing::uniform(rng, 1e-3, 1.0);
    double lj = testing::uniform(rng, 1e-3, 1.0);
    if (li > lj) std::swap(li, lj);
    const double eps = testing::uniform(rng, 0.01, 0.99);
    const int N = testing::uniform_int(rng, 1, 40);
    const int h = testing::uniform_int(rng, 1, N);
    CHECK(zbar(li, eps, h, N) >= zbar(lj, eps, h, N) - 1e-12);
  }
}

TEST_CASE("zbar tends to |1 - lambda| for large N") {
  testing::Rng rng(79);
  for (int trial = 0; trial < 200; ++trial) {
    const double lambda = testing::uniform(rng, 1e-3, 2.0);
    const double eps = testing::uniform(rng, 0.05, 0.95);
    const int h = testing::uniform_int(rng, 1, 20);
    // The older-sample weight f1 decays like (1-eps)^(N-h), so N - h must be large too.
    const double N = h + std::ceil(std::log(1e-14) / std::log(1 - eps));
    REQUIRE(std::pow(1 - eps, N) <= 1e-8);
    CHECK(std::abs(zbar(lambda, eps, h, N) - std::abs(1 - lambda)) <= 1e-6);
  }
}

TEST_CASE("closed form agrees with the general root solver") {
  testing::Rng rng(80);
  for (int trial = 0; trial < 1000; ++trial) {
    const double lambda = testing::uniform(rng, 1e-6, 2.0);
    const double eps = testing::uniform(rng, 0.01, 0.99);
    const int h = testing::uniform_int(rng, 1, 30);
    const double N = trial % 2 ? testing::uniform_int(rng, h, h + 40)
                               : testing::uniform(rng, h, h + 40.0);
    CHECK(std::abs(zbar_closed_form(lambda, eps, h, N) - zbar(lambda, eps, h, N)) <= 1e-10);
  }
  CHECK(zbar_closed_form(2.0, 0.3, 10, 10) == doctest::Approx(zbar(2.0, 0.3, 10, 10)));
}

TEST_CASE("closed-form branches meet at lambda = 1") {
  for (double eps : {0.1, 0.5, 0.9}) {
    for (double N : {3.0, 7.5, 20.0}) {
      // zbar moves like sqrt(|1 - lambda|) here.
      const double at_one = zbar(1.0, eps, 3, N);
      const double below = zbar_closed_form(1.0 - 1e-14, eps, 3, N);
      const double above = zbar_closed_form(1.0 + 1e-14, eps, 3, N);
      CHECK(std::abs(below - at_one) < 1e-6);
      CHECK(std::abs(above - at_one) < 1e-6);
    }
  }
}

TEST_CASE("substitution variables") {
  const SubstitutionVars lo = substitution_vars(0.4, 0.3, 10, 16);
  CHECK_FALSE(lo.upper_branch);
  CHECK(lo.b == doctest::Approx(0.6));
  CHECK(lo.g == doctest::Approx(std::pow(0.7, 16)));
  CHECK(lo.c == doctest::Approx(std::pow(0.7, -10)));
  CHECK(lo.p2 == doctest::Approx(lo.b * lo.g * (lo.c - 1)));
  const SubstitutionVars hi = substitution_vars(1.4, 0.3, 10, 16);
  CHECK(hi.upper_branch);
  CHECK(hi.b == doctest::Approx(0.4));
  CHECK(hi.p1 == doctest::Approx(((1 + hi.b * hi.c) * hi.g - hi.b) / 2));
}

TEST_CASE("mode_curve shapes for the benchmark graph") {
  std::vector<double> Ns(41);
  std::iota(Ns.begin(), Ns.end(), 10.0);
  const ModeRootCurve low = mode_curve(0.446297, 0.3, 10, Ns);
  REQUIRE(low.zbar.size() == Ns.size());
  for (std::size_t k = 1; k < Ns.size(); ++k) CHECK(low.zbar[k] < low.zbar[k - 1]);

  const ModeRootCurve top = mode_curve(1.876672, 0.3, 10, Ns);
  const auto it = std::min_element(top.zbar.begin(), top.zbar.end());
  CHECK(it != top.zbar.begin());
  CHECK(it != top.zbar.end() - 1);
}

TEST_CASE("project_modes") {
  const Graph g = benchmark_graph();
  const Spectrum s = spectrum(g);
  const SystemParams p{0.3, 10, 4};
  const Trace slow = simulate_slow(g, p, benchmark_initial_state(), 60);
  const Eigen::MatrixXd alpha = project_modes(s, slow);
  CHECK((s.right * alpha - slow.states).cwiseAbs().maxCoeff() <= 1e-8);

  // Each modal coordinate follows its own scalar recursion.
  const auto lc = derived_quantities(p);
  auto past = [&](Eigen::Index i, Eigen::Index l) { return alpha(i, std::max<Eigen::Index>(l, 0)); };
  double worst = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double lambda = s.eigenvalues(i);
    for (Eigen::Index l = 0; l + 1 < alpha.cols(); ++l) {
      const double next = (1 - lc.gamma) * alpha(i, l) +
                          lc.gamma * (1 - lambda) *
                              (lc.f0 * past(i, l - lc.theta) + lc.f1 * past(i, l - lc.theta - 1));
      worst = std::max(worst, std::abs(next - alpha(i, l + 1)));
    }
  }
  CHECK(worst <= 1e-10);

  const Trace flat = simulate_fast(g, p, Eigen::VectorXd::Constant(6, 2.5), 10);
  const Eigen::MatrixXd a0 = project_modes(s, flat);
  CHECK(a0.bottomRows(5).cwiseAbs().maxCoeff() <= 1e-10);

  const Trace other = simulate_fast(testing::complete_graph(3), p, Eigen::Vector3d(1, 2, 3), 5);
  CHECK_THROWS_AS(project_modes(s, other), Error);
}
