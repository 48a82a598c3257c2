#include "hleray/error.hpp"
#include "hleray/pt.hpp"

#include <doctest.h>

#include <cmath>

using namespace hleray;

namespace {
double norm0(const AmbientField& u) { return std::sqrt(hardy_integral(u, 0.0)); }
} // namespace

TEST_CASE("a poloidal field has no toroidal part") {
  const RadialGrid g;
  const DiscPtr disc = make_discretization(3, g, 4);
  const ModeCoefficients f = single_mode(disc, disc->basis.offset[2] + 1, bump_profile(g, 0.0, 3.0));
  const AmbientField u = apply_D(f);
  CHECK(u.checks().divergence < 1e-10);
  const PTSplit s = pt_split(u);
  CHECK(norm0(s.u_T) / norm0(u) < 1e-12);
  CHECK(norm0(s.u_P - u) / norm0(u) < 1e-12);
  // The recovered potential is the one we started from.
  CHECK((s.potential.coeffs - f.coeffs).cwiseAbs().maxCoeff() / f.coeffs.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("a toroidal field has no poloidal part") {
  const RadialGrid g;
  const DiscPtr disc = make_discretization(4, g, 4);
  const AmbientField u = toroidal_generator(disc, 2, 4, bump_profile(g, 0.3, 2.5));
  const PTSplit s = pt_split(u);
  CHECK(norm0(s.u_P) / norm0(u) < 1e-12);
}

TEST_CASE("random solenoidal fields") {
  const RadialGrid g;
  const DiscPtr disc = make_discretization(3, g, 5);
  const AmbientField a = random_solenoidal(disc, 11, 4);
  const AmbientField b = random_solenoidal(disc, 11, 4);
  const AmbientField c = random_solenoidal(disc, 12, 4);
  CHECK((a.modes[0] - b.modes[0]).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.modes[0] - c.modes[0]).cwiseAbs().maxCoeff() > 0.0);
  CHECK(a.checks().divergence < 1e-9);
  const PTSplit s = pt_split(a);
  CHECK(s.u_T.checks().toroidal);
  CHECK(s.u_P.checks().solenoidal);
  CHECK_THROWS_AS(random_solenoidal(disc, 1, 5), DomainError);
}

TEST_CASE("non-solenoidal input is refused") {
  const RadialGrid g;
  const DiscPtr disc = make_discretization(3, g, 3);
  CHECK_THROWS_AS(pt_split(radial_field(disc, bump_profile(g, 0.0, 3.0))), FieldError);
}

TEST_CASE("apply_D needs room for one more degree") {
  const RadialGrid g;
  const DiscPtr disc = make_discretization(3, g, 3);
  const ModeCoefficients f = single_mode(disc, disc->basis.offset[3], bump_profile(g, 0.0, 3.0));
  CHECK_THROWS_AS(apply_D(f), TruncationError);
}
