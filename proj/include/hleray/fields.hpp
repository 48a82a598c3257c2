#pragma once

// Vector fields on R^N \ {0} sampled on (log-radius grid) x (sphere grid).
//
// A field is stored in mode space: component k is an M x nb matrix whose
// column j is the radial profile multiplying the basis harmonic Y_j. The
// physical field is exp(p t) times the stored one, p = radial_power; this
// keeps fields like |x|^{-c} zeta(t/n) representable on long grids.

#include "hleray/radial.hpp"
#include "hleray/sphere.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace hleray {

/// Radial grid, sphere grid and harmonic basis shared by a family of fields.
struct Discretization {
  RadialGrid radial;
  SphereGrid sphere;
  HarmonicBasis basis;
  Eigen::MatrixXd gram_values;    ///< nb x nb, int Y_i Y_j on the grid
  Eigen::MatrixXd gram_gradients; ///< nb x nb, int grad_s Y_i . grad_s Y_j on the grid

  int N() const { return sphere.N; }
  int basis_degree() const { return basis.L; }
  int nb() const { return basis.size(); }
  Eigen::Index nodes() const { return sphere.size(); }
};

using DiscPtr = std::shared_ptr<const Discretization>;

/// Requires N >= 3 and resolution >= basis_degree + 2 (0 selects exactly that).
DiscPtr make_discretization(int N, const RadialGrid& radial, int basis_degree, int resolution = 0);

struct FieldFlags {
  bool solenoidal = false;
  bool toroidal = false;
  bool poloidal = false;
};

/// Outcome of the structural checks behind the flags.
struct FieldChecks {
  double divergence = 0.0;           ///< relative weighted L2 norm of div u
  double radial_component = 0.0;     ///< relative weighted L2 norm of u_R
  double spherical_divergence = 0.0; ///< relative weighted L2 norm of r^{-1} div_s u_S
  bool solenoidal = false;
  bool toroidal = false;
};

inline constexpr double kSolenoidalTolerance = 1e-8;
inline constexpr double kToroidalTolerance = 1e-8;

struct AmbientField {
  DiscPtr disc;
  double radial_power = 0.0;
  std::vector<Eigen::MatrixXd> modes;  ///< N entries, each M x nb
  FieldFlags flags;

  static AmbientField zero(const DiscPtr& disc, double radial_power = 0.0);

  int N() const { return disc->N(); }
  /// Stored samples of component k, M x nodes.
  Eigen::MatrixXd component_samples(int k) const;
  /// Physical value at radial index j and sphere node i.
  Eigen::VectorXd value(int j, Eigen::Index i) const;
  double max_abs_stored() const;

  /// Flag checks, computed once per field value and cached. Copies start
  /// with an empty cache; mutate `modes` directly only before the first call.
  const FieldChecks& checks() const;

  AmbientField& operator+=(const AmbientField& o);
  AmbientField& operator-=(const AmbientField& o);
  AmbientField& operator*=(double s);

private:
  struct Cache {
    std::once_flag once;
    FieldChecks value;
  };
  struct CacheSlot {
    std::unique_ptr<Cache> ptr = std::make_unique<Cache>();
    CacheSlot() = default;
    CacheSlot(const CacheSlot&) {}
    CacheSlot(CacheSlot&&) noexcept = default;
    CacheSlot& operator=(const CacheSlot&) { ptr = std::make_unique<Cache>(); return *this; }
    CacheSlot& operator=(CacheSlot&&) noexcept = default;
    void reset() { ptr = std::make_unique<Cache>(); }
  };
  mutable CacheSlot cache_;
};

AmbientField operator+(AmbientField a, const AmbientField& b);
AmbientField operator-(AmbientField a, const AmbientField& b);
AmbientField operator*(double s, AmbientField a);

/// Builds a field from stored samples (N matrices of M x nodes) by projection
/// onto the basis; `residual` receives the relative projection residual.
/// Throws TruncationError above `tolerance`.
AmbientField field_from_samples(const DiscPtr& disc, double radial_power,
                                const std::vector<Eigen::MatrixXd>& samples,
                                double tolerance = 1e-8, double* residual = nullptr);

/// Harmonic coefficients of a sphere function given at the nodes.
Eigen::RowVectorXd sphere_coefficients(const DiscPtr& disc, const Eigen::Ref<const Eigen::VectorXd>& f,
                                       double tolerance = 1e-10);

/// window(t) * v^{(i,j)}(sigma), 1 <= i < j <= N: component i is -sigma_j,
/// component j is sigma_i.
AmbientField toroidal_generator(const DiscPtr& disc, int i, int j, const RadialProfile& window,
                                double radial_power = 0.0);

/// window(t) * sigma.
AmbientField radial_field(const DiscPtr& disc, const RadialProfile& window, double radial_power = 0.0);

/// window(t) * e_k, 1 <= k <= N.
AmbientField constant_direction_field(const DiscPtr& disc, int k, const RadialProfile& window,
                                      double radial_power = 0.0);

/// Radial-spherical split at the nodes, stored scale (physical = exp(p t) * stored).
struct RSParts {
  double radial_power = 0.0;
  Eigen::MatrixXd u_R;               ///< M x nodes
  std::vector<Eigen::MatrixXd> u_S;  ///< N entries, M x nodes
};

RSParts rs_decompose(const AmbientField& u);

/// Scalar field at the nodes, physical = exp(p t) * values.
struct ScalarSamples {
  double radial_power = 0.0;
  Eigen::MatrixXd values;  ///< M x nodes
};

/// u_R = sigma . u at the nodes.
ScalarSamples radial_component(const AmbientField& u);

/// Sum_k (grad_s u_k)_k at the nodes.
ScalarSamples gradient_trace(const AmbientField& u);

/// div u = d'_r u_R + r^{-1} div_s u_S.
ScalarSamples divergence_rs(const AmbientField& u);

/// r^{-1} div_s u_S.
ScalarSamples spherical_divergence_rs(const AmbientField& u);

/// (int |s|^2 |x|^{2 gamma + shift} dx)^{1/2} for nodal scalar samples.
double weighted_norm(const DiscPtr& disc, const ScalarSamples& s, double gamma, double shift);

/// Per-slice integrands, independent of gamma:
/// dirichlet(t) = sum_k int ((d + p) u_k)^2 + |grad_s u_k|^2 dsigma,
/// hardy(t) = int |u|^2 dsigma, both for the stored field.
struct SliceProfiles {
  double radial_power = 0.0;
  Eigen::VectorXd dirichlet;
  Eigen::VectorXd hardy;
};

SliceProfiles slice_profiles(const AmbientField& u);

struct WeightedIntegrals {
  double dirichlet = 0.0;  ///< int |grad u|^2 |x|^{2 gamma} dx
  double hardy = 0.0;      ///< int |u|^2 |x|^{2 gamma - 2} dx
  double quotient() const { return dirichlet / hardy; }
};

/// Throws SupportError if u does not vanish on the outer part of the grid.
WeightedIntegrals weighted_integrals(const AmbientField& u, double gamma);
WeightedIntegrals weighted_integrals(const SliceProfiles& s, const RadialGrid& g, int N, double gamma);

/// int |u|^2 |x|^{2 gamma - 2} dx.
double hardy_integral(const AmbientField& u, double gamma);

/// Sphere mean (1/|S|) int u dsigma per radius, stored scale, M x N.
Eigen::MatrixXd sphere_mean(const AmbientField& u);

struct OrthogonalityResult {
  double l2 = 0.0;          ///< int v.w dsigma at radius e^{t_j}
  double gradient = 0.0;    ///< int grad v : grad w dsigma at radius e^{t_j}
  double l2_scale = 0.0;    ///< (int|v|^2 int|w|^2)^{1/2}
  double gradient_scale = 0.0;
  double l2_sum = 0.0;      ///< int|v|^2 + int|w|^2
  double gradient_sum = 0.0;
};

OrthogonalityResult orthogonality_check(const AmbientField& v, const AmbientField& w, int radius_index);

/// Relative residuals of the toroidal conditions u_R = 0, div_s u_S = 0.
FieldChecks compute_checks(const AmbientField& u);

bool is_toroidal(const AmbientField& u, double tolerance = kToroidalTolerance);
bool is_solenoidal(const AmbientField& u, double tolerance = kSolenoidalTolerance);

/// Field interchange: one JSON header line, then `node,t_index,u1..uN` CSV
/// rows of stored samples.
void write_field(std::ostream& os, const AmbientField& u);

struct ImportedField {
  AmbientField field;
  double projection_residual = 0.0;
};

/// Throws FormatError on malformed input and TruncationError if the samples
/// are not representable in the declared basis.
ImportedField read_field(std::istream& is, double tolerance = 1e-8);

} // namespace hleray
