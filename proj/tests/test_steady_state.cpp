#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tlsqle/model.hpp"
#include "tlsqle/steady_state.hpp"

using namespace tlsqle;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ModelParams strong_drive(HpBranch b, double alpha_in = 700.0) {
  ModelParams p;
  p.kappa = 1.0;
  p.kappa_n = 1.5e-4;
  p.delta = 20.0;
  p.alpha_in = alpha_in;
  p.branch = b;
  return validate_params(p);
}

// Frozen from a 40-digit polynomial-root computation on the occupancy cubic.
constexpr double kXMinus = 1223.570805230627187255765;
constexpr double kXPlus = 1224.693694538030285995925;
constexpr double kAlphaMinusRe = 1.194791757038889150479;
constexpr double kAlphaMinusIm = 34.95916586373220535016;

}  // namespace

TEST_CASE("occupancy cubic coefficients for both mappings") {
  SECTION("ground-state branch") {
    const auto c = cubic_coefficients(strong_drive(HpBranch::Minus));
    CHECK_THAT(c[0], WithinRel(2.25e-8, 1e-14));
    CHECK_THAT(c[1], WithinRel(1.5e-4, 1e-14));
    CHECK_THAT(c[2], WithinRel(400.25, 1e-14));
    CHECK_THAT(c[3], WithinRel(-490000.0, 1e-14));
  }
  SECTION("inverted branch flips the quadratic coefficient") {
    const auto c = cubic_coefficients(strong_drive(HpBranch::Plus));
    CHECK_THAT(c[1], WithinRel(-1.5e-4, 1e-14));
    CHECK_THAT(c[0], WithinRel(2.25e-8, 1e-14));
    CHECK_THAT(c[2], WithinRel(400.25, 1e-14));
    CHECK_THAT(c[3], WithinRel(-490000.0, 1e-14));
  }
  SECTION("linear cavity on resonance reduces to x/4 = |a_in|^2") {
    ModelParams p;
    p.alpha_in = 1.0;
    const auto c = cubic_coefficients(validate_params(p));
    CHECK(c[0] == 0.0);
    CHECK(c[1] == 0.0);
    CHECK(c[2] == 0.25);
    CHECK(c[3] == -1.0);
  }
}

TEST_CASE("linear cavity has the analytic root") {
  ModelParams p;
  p.alpha_in = 1.0;
  const auto sols = solve_steady_state(validate_params(p));
  REQUIRE(sols.size() == 1);
  CHECK_THAT(sols[0].alpha.real(), WithinRel(2.0, 1e-12));
  CHECK_THAT(sols[0].alpha.imag(), WithinAbs(0.0, 1e-12));
  CHECK_THAT(sols[0].occupancy_x, WithinRel(4.0, 1e-12));
  CHECK(sols[0].stable);
  CHECK(sols[0].residual <= 1e-12);
}

TEST_CASE("strong drive matches the high-precision cubic root") {
  SECTION("ground-state branch") {
    const auto sols = solve_steady_state(strong_drive(HpBranch::Minus));
    REQUIRE(sols.size() == 1);
    CHECK_THAT(sols[0].occupancy_x, WithinRel(kXMinus, 1e-12));
    CHECK_THAT(sols[0].alpha.real(), WithinRel(kAlphaMinusRe, 1e-11));
    CHECK_THAT(sols[0].alpha.imag(), WithinRel(kAlphaMinusIm, 1e-12));
    CHECK(sols[0].stable);
    CHECK(sols[0].residual <= 1e-10);
  }
  SECTION("inverted branch") {
    const auto sols = solve_steady_state(strong_drive(HpBranch::Plus));
    REQUIRE(sols.size() == 1);
    CHECK_THAT(sols[0].occupancy_x, WithinRel(kXPlus, 1e-12));
    CHECK(sols[0].stable);
    CHECK(sols[0].residual <= 1e-10);
  }
}

TEST_CASE("inverted branch near resonance is tristable") {
  // crafted so the occupancy roots are exactly 1, (9 -+ sqrt(17))/2
  ModelParams p;
  p.kappa_n = 0.1;
  p.delta = 0.0;
  p.alpha_in = 0.4;
  p.branch = HpBranch::Plus;
  const auto sols = solve_steady_state(validate_params(p));
  REQUIRE(sols.size() == 3);
  const double s17 = std::sqrt(17.0);
  CHECK_THAT(sols[0].occupancy_x, WithinRel(1.0, 1e-11));
  CHECK_THAT(sols[1].occupancy_x, WithinRel((9.0 - s17) / 2.0, 1e-11));
  CHECK_THAT(sols[2].occupancy_x, WithinRel((9.0 + s17) / 2.0, 1e-11));
  // lowest root is the adiabatically reachable one; the upper two lose
  // stability through the parametric term / damping reversal
  CHECK(sols[0].stable);
  CHECK_FALSE(sols[1].stable);
  CHECK_FALSE(sols[2].stable);
  for (const auto& s : sols) CHECK(s.residual <= 1e-10);
}

TEST_CASE("every returned root satisfies the stationary equation") {
  for (HpBranch b : {HpBranch::Minus, HpBranch::Plus})
    for (double a : {0.0, 1.0, 50.0, 400.0, 700.0, 900.0})
      for (double delta : {-20.0, 0.0, 5.0, 20.0}) {
        ModelParams p;
        p.kappa_n = 1.5e-4;
        p.delta = delta;
        p.alpha_in = a;
        p.branch = b;
        for (const auto& s : solve_steady_state(validate_params(p)))
          CHECK(s.residual <= 1e-10);
      }
}

TEST_CASE("occupancy equals the squared amplitude") {
  for (HpBranch b : {HpBranch::Minus, HpBranch::Plus}) {
    const auto sols = solve_steady_state(strong_drive(b, 555.0));
    for (const auto& s : sols)
      CHECK_THAT(s.occupancy_x, WithinRel(std::norm(s.alpha), 1e-12));
  }
}

TEST_CASE("occupancy grows monotonically with the drive on the ground-state branch") {
  double prev = -1.0;
  for (double a : linspace(0.0, 700.0, 100)) {
    const auto sols = solve_steady_state(strong_drive(HpBranch::Minus, a));
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].occupancy_x >= prev - 1e-12);
    prev = sols[0].occupancy_x;
  }
}

TEST_CASE("undriven cavity returns the vacuum root") {
  for (HpBranch b : {HpBranch::Minus, HpBranch::Plus}) {
    const auto sols = solve_steady_state(strong_drive(b, 0.0));
    REQUIRE(!sols.empty());
    CHECK(sols[0].occupancy_x == 0.0);
    CHECK(sols[0].stable);
  }
}

TEST_CASE("drift generator entries") {
  SECTION("no nonlinearity gives the detuned decay") {
    ModelParams p;
    p.delta = 20.0;
    p.alpha_in = 3.0;
    p = validate_params(p);
    const auto m = drift_matrix(p, Complex(1.5, -0.5));
    CHECK(m.m00 == Complex(-0.5, 20.0));
    CHECK(m.m11 == Complex(-0.5, -20.0));
    CHECK(m.m01 == Complex(0.0, 0.0));
    CHECK(m.m10 == Complex(0.0, 0.0));
  }
  SECTION("no pump removes the parametric coupling at any kappa_n") {
    ModelParams p;
    p.delta = 7.0;
    p.kappa_n = 0.3;
    p = validate_params(p);
    const auto m = drift_matrix(p, Complex(0.0, 0.0));
    CHECK(m.m00 == Complex(-0.5, 7.0));
    CHECK(m.m01 == Complex(0.0, 0.0));
  }
  SECTION("strong drive produces the expected parametric magnitude") {
    const auto p = strong_drive(HpBranch::Minus);
    const auto sol = solve_steady_state(p)[0];
    const auto m = drift_matrix(p, sol.alpha);
    CHECK_THAT(std::abs(m.m01), WithinRel(p.kappa_n * sol.occupancy_x, 1e-12));
    // conjugate structure of the pair dynamics
    CHECK(m.m11 == std::conj(m.m00));
    CHECK(m.m10 == std::conj(m.m01));
    // diagonal damping is half the effective linewidth
    CHECK_THAT(-m.m00.real(), WithinRel(0.5 + 2.0 * p.kappa_n * sol.occupancy_x, 1e-12));
  }
}

TEST_CASE("stability assessment via the closed-form eigenvalues") {
  SECTION("detuned linear cavity") {
    DriftMatrix m{Complex(-0.5, 20.0), 0.0, 0.0, Complex(-0.5, -20.0)};
    const auto [stable, eig] = assess_stability(m);
    CHECK(stable);
    CHECK_THAT(eig[0].real(), WithinRel(-0.5, 1e-12));
    CHECK_THAT(std::abs(eig[0].imag()), WithinRel(20.0, 1e-12));
  }
  SECTION("parametric gain beyond the damping is unstable") {
    DriftMatrix m{Complex(-0.4, 0.0), Complex(1.0, 0.0), Complex(1.0, 0.0),
                  Complex(-0.4, 0.0)};
    const auto [stable, eig] = assess_stability(m);
    CHECK_FALSE(stable);
    const double top = std::max(eig[0].real(), eig[1].real());
    CHECK_THAT(top, WithinRel(0.6, 1e-12));
  }
  SECTION("eigenvalues satisfy the characteristic polynomial") {
    const auto p = strong_drive(HpBranch::Plus, 500.0);
    const auto sol = solve_steady_state(p)[0];
    const auto m = drift_matrix(p, sol.alpha);
    const auto [stable, eig] = assess_stability(m);
    (void)stable;
    for (const auto& l : eig) {
      const Complex chi = (m.m00 - l) * (m.m11 - l) - m.m01 * m.m10;
      CHECK(std::abs(chi) <= 1e-9 * (std::abs(m.m00) + std::abs(l)) * (std::abs(m.m11) + std::abs(l)));
    }
  }
}

TEST_CASE("inverted branch drive sweep crosses the instability threshold") {
  // frozen from the same high-precision computation: total damping crosses
  // zero at alpha_in = 816.5603672315558
  bool was_stable = true;
  double first_unstable = 0.0;
  for (double a : linspace(700.0, 900.0, 201)) {
    const auto sols = solve_steady_state(strong_drive(HpBranch::Plus, a));
    REQUIRE(sols.size() == 1);
    if (was_stable && !sols[0].stable) {
      first_unstable = a;
      was_stable = false;
    }
  }
  CHECK_FALSE(was_stable);
  CHECK_THAT(first_unstable, WithinAbs(816.5603672315558, 1.0 + 1e-9));
}

TEST_CASE("inverted branch root at vanishing total damping is flagged") {
  // x = 5 solves the stationary equation with kappa_n x = kappa/2 exactly
  ModelParams p;
  p.kappa_n = 0.1;
  p.delta = 1.0;
  p.alpha_in = std::sqrt(5.0);
  p.branch = HpBranch::Plus;
  const auto sols = solve_steady_state(validate_params(p));
  bool found = false;
  for (const auto& s : sols)
    if (std::abs(s.occupancy_x - 5.0) < 1e-6) {
      found = true;
      CHECK_FALSE(s.stable);
      CHECK(s.residual <= 1e-10);
    }
  CHECK(found);
}

TEST_CASE("roots are sorted and deduplicated") {
  ModelParams p;
  p.kappa_n = 0.1;
  p.delta = 0.0;
  p.alpha_in = 0.4;
  p.branch = HpBranch::Plus;
  const auto sols = solve_steady_state(validate_params(p));
  for (size_t i = 1; i < sols.size(); ++i) {
    CHECK(sols[i].occupancy_x > sols[i - 1].occupancy_x);
    CHECK(sols[i].occupancy_x - sols[i - 1].occupancy_x >
          1e-9 * sols[i].occupancy_x);
  }
}
