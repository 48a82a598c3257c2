#pragma once

// Poloidal-toroidal decomposition of solenoidal fields.

#include "hleray/fields.hpp"

#include <cstdint>

namespace hleray {

/// Scalar field in mode space: coeffs(j, b) is the radial profile of harmonic
/// b at t_j, stored scale (physical = exp(p t) * stored).
struct ModeCoefficients {
  DiscPtr disc;
  double radial_power = 0.0;
  Eigen::MatrixXd coeffs;  ///< M x nb

  static ModeCoefficients zero(const DiscPtr& disc, double radial_power = 0.0);
  /// Highest degree with a coefficient above `rel` times the largest one; -1 if zero.
  int max_degree(double rel = 1e-14) const;
};

/// Single harmonic: profile(t) * Y_index.
ModeCoefficients single_mode(const DiscPtr& disc, int basis_index, const RadialProfile& profile,
                             double radial_power = 0.0);

inline constexpr double kModeZeroTolerance = 1e-9;
/// Radial-component coefficients below this times the field's largest stored
/// coefficient are treated as zero.
inline constexpr double kRoundoffFloor = 1e-13;

/// f = Lap_s^{-1} u_R, mode by mode. Throws FieldError if the nu = 0 part of
/// u_R exceeds `mode0_tolerance` relative to the field, TruncationError if
/// u_R is not resolved by the basis.
ModeCoefficients poloidal_potential(const AmbientField& u, double mode0_tolerance = kModeZeroTolerance);

/// D f = sigma Lap_s f - (d + N - 1) grad_s f with d = r d_r. Requires the
/// degree of f to be at most basis_degree - 1 (TruncationError otherwise).
AmbientField apply_D(const ModeCoefficients& f);

struct PTSplit {
  AmbientField u_P;
  AmbientField u_T;
  ModeCoefficients potential;
};

/// u_P = D Lap_s^{-1} u_R, u_T = u - u_P. Throws FieldError if u is not
/// solenoidal within `solenoidal_tolerance` (relative weighted L2 of div u).
PTSplit pt_split(const AmbientField& u, double solenoidal_tolerance = kSolenoidalTolerance);

struct RandomFieldOptions {
  double center_range = 3.0;      ///< bump centers uniform in [-c, c]
  double min_half_width = 2.0;
  double max_half_width = 3.2;
  int toroidal_terms = 3;
  bool poloidal = true;
  bool toroidal = true;
};

/// Random band-limited solenoidal field: apply_D of random bump profiles on
/// all harmonics of degree 1..L plus windowed P(sigma) v^{(i,j)} terms with P
/// invariant under rotations of the (i,j) plane and deg P <= L. Requires
/// 1 <= L <= basis_degree - 1. Deterministic in `seed`.
AmbientField random_solenoidal(const DiscPtr& disc, std::uint64_t seed, int L,
                               const RandomFieldOptions& opts = {});

} // namespace hleray
