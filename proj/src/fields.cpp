#include "hleray/fields.hpp"

#include "hleray/error.hpp"
#include "hleray/io.hpp"

#include <json.hpp>

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace hleray {

namespace {

void require_same(const AmbientField& a, const AmbientField& b) {
  if (a.disc != b.disc) {
    throw DomainError("fields live on different discretizations");
  }
  if (a.radial_power != b.radial_power) {
    throw DomainError("fields have different radial powers");
  }
}

// exp(k t_j) for all radial nodes.
Eigen::VectorXd exp_weights(const RadialGrid& g, double k) {
  Eigen::VectorXd out(g.M);
  for (int j = 0; j < g.M; ++j) {
    const double e = k * g.t(j);
    if (e > 709.0) {
      throw OverflowError("exponential weight exp(" + std::to_string(e) + ") overflows");
    }
    out[j] = std::exp(e);
  }
  return out;
}

// (D_t + p) applied column-wise.
Eigen::MatrixXd shifted_dt(const RadialGrid& g, const Eigen::MatrixXd& F, double p) {
  Eigen::MatrixXd out = radial_dt(g, F);
  if (p != 0.0) out += p * F;
  return out;
}

// Row-wise quadratic form diag(F G F^T).
Eigen::VectorXd row_quadratic(const Eigen::MatrixXd& F, const Eigen::MatrixXd& G) {
  return (F * G).cwiseProduct(F).rowwise().sum();
}

void check_field_support(const AmbientField& u) {
  const Eigen::Index M = u.disc->radial.M;
  Eigen::MatrixXd all(M, static_cast<Eigen::Index>(u.modes.size()) * u.disc->nb());
  for (std::size_t k = 0; k < u.modes.size(); ++k) {
    all.middleCols(static_cast<Eigen::Index>(k) * u.disc->nb(), u.disc->nb()) = u.modes[k];
  }
  check_support(u.disc->radial, all, "field");
}

} // namespace

DiscPtr make_discretization(int N, const RadialGrid& radial, int basis_degree, int resolution) {
  if (N < 3) {
    throw DomainError("fields need N >= 3");
  }
  radial.validate();
  if (resolution == 0) resolution = basis_degree + 2;
  if (resolution < basis_degree + 2) {
    throw TruncationError("sphere resolution must be at least basis_degree + 2");
  }
  auto d = std::make_shared<Discretization>();
  d->radial = radial;
  d->sphere = build_grid(N, resolution);
  d->basis = harmonic_basis(N, basis_degree, d->sphere, true);
  const Eigen::MatrixXd WY = d->sphere.weights.asDiagonal() * d->basis.Y;
  d->gram_values = d->basis.Y.transpose() * WY;
  d->gram_gradients = Eigen::MatrixXd::Zero(d->nb(), d->nb());
  for (int c = 0; c < N; ++c) {
    d->gram_gradients += d->basis.grad[c].transpose() * (d->sphere.weights.asDiagonal() * d->basis.grad[c]);
  }
  return d;
}

AmbientField AmbientField::zero(const DiscPtr& disc, double radial_power) {
  AmbientField u;
  u.disc = disc;
  u.radial_power = radial_power;
  u.modes.assign(disc->N(), Eigen::MatrixXd::Zero(disc->radial.M, disc->nb()));
  return u;
}

Eigen::MatrixXd AmbientField::component_samples(int k) const {
  return modes.at(static_cast<std::size_t>(k)) * disc->basis.Y.transpose();
}

Eigen::VectorXd AmbientField::value(int j, Eigen::Index i) const {
  Eigen::VectorXd v(N());
  const double s = std::exp(radial_power * disc->radial.t(j));
  for (int k = 0; k < N(); ++k) v[k] = s * modes[k].row(j).dot(disc->basis.Y.row(i));
  return v;
}

double AmbientField::max_abs_stored() const {
  double m = 0.0;
  for (int k = 0; k < N(); ++k) m = std::max(m, component_samples(k).cwiseAbs().maxCoeff());
  return m;
}

const FieldChecks& AmbientField::checks() const {
  Cache& c = *cache_.ptr;
  std::call_once(c.once, [this, &c] { c.value = compute_checks(*this); });
  return c.value;
}

AmbientField& AmbientField::operator+=(const AmbientField& o) {
  require_same(*this, o);
  for (int k = 0; k < N(); ++k) modes[k] += o.modes[k];
  flags = {flags.solenoidal && o.flags.solenoidal, flags.toroidal && o.flags.toroidal,
           flags.poloidal && o.flags.poloidal};
  cache_.reset();
  return *this;
}

AmbientField& AmbientField::operator-=(const AmbientField& o) {
  require_same(*this, o);
  for (int k = 0; k < N(); ++k) modes[k] -= o.modes[k];
  flags = {flags.solenoidal && o.flags.solenoidal, flags.toroidal && o.flags.toroidal,
           flags.poloidal && o.flags.poloidal};
  cache_.reset();
  return *this;
}

AmbientField& AmbientField::operator*=(double s) {
  for (auto& m : modes) m *= s;
  cache_.reset();
  return *this;
}

AmbientField operator+(AmbientField a, const AmbientField& b) { return a += b; }
AmbientField operator-(AmbientField a, const AmbientField& b) { return a -= b; }
AmbientField operator*(double s, AmbientField a) { return a *= s; }

AmbientField field_from_samples(const DiscPtr& disc, double radial_power,
                                const std::vector<Eigen::MatrixXd>& samples, double tolerance,
                                double* residual) {
  if (static_cast<int>(samples.size()) != disc->N()) {
    throw DomainError("field_from_samples: wrong number of components");
  }
  AmbientField u = AmbientField::zero(disc, radial_power);
  double total = 0.0;
  double lost = 0.0;
  const Eigen::VectorXd& w = disc->sphere.weights;
  for (int k = 0; k < disc->N(); ++k) {
    const Eigen::MatrixXd& S = samples[k];
    if (S.rows() != disc->radial.M || S.cols() != disc->nodes()) {
      throw DomainError("field_from_samples: sample matrix has wrong shape");
    }
    u.modes[k] = S * disc->basis.analysis.transpose();
    const Eigen::MatrixXd R = S - u.modes[k] * disc->basis.Y.transpose();
    total += (S.cwiseAbs2() * w).sum();
    lost += (R.cwiseAbs2() * w).sum();
  }
  const double res = total > 0.0 ? std::sqrt(lost / total) : 0.0;
  if (residual) *residual = res;
  if (res > tolerance) {
    throw TruncationError("field is not representable in the basis (relative residual " +
                          std::to_string(res) + ")");
  }
  return u;
}

Eigen::RowVectorXd sphere_coefficients(const DiscPtr& disc, const Eigen::Ref<const Eigen::VectorXd>& f,
                                       double tolerance) {
  return expand(disc->basis, disc->sphere, f, tolerance).coeffs.transpose();
}

AmbientField toroidal_generator(const DiscPtr& disc, int i, int j, const RadialProfile& window,
                                double radial_power) {
  const int N = disc->N();
  if (!(1 <= i && i < j && j <= N)) {
    throw DomainError("toroidal_generator needs 1 <= i < j <= N");
  }
  if (!(window.grid == disc->radial)) {
    throw DomainError("window grid does not match the discretization");
  }
  AmbientField u = AmbientField::zero(disc, radial_power);
  const Eigen::MatrixXd& X = disc->sphere.nodes;
  u.modes[i - 1] = window.values * sphere_coefficients(disc, -X.col(j - 1));
  u.modes[j - 1] = window.values * sphere_coefficients(disc, X.col(i - 1));
  u.flags = {true, true, false};
  return u;
}

AmbientField radial_field(const DiscPtr& disc, const RadialProfile& window, double radial_power) {
  AmbientField u = AmbientField::zero(disc, radial_power);
  for (int k = 0; k < disc->N(); ++k) {
    u.modes[k] = window.values * sphere_coefficients(disc, disc->sphere.nodes.col(k));
  }
  return u;
}

AmbientField constant_direction_field(const DiscPtr& disc, int k, const RadialProfile& window,
                                      double radial_power) {
  if (k < 1 || k > disc->N()) {
    throw DomainError("direction index out of range");
  }
  AmbientField u = AmbientField::zero(disc, radial_power);
  u.modes[k - 1] = window.values *
                   sphere_coefficients(disc, Eigen::VectorXd::Ones(disc->nodes()));
  return u;
}

ScalarSamples radial_component(const AmbientField& u) {
  ScalarSamples s;
  s.radial_power = u.radial_power;
  s.values = Eigen::MatrixXd::Zero(u.disc->radial.M, u.disc->nodes());
  for (int k = 0; k < u.N(); ++k) {
    s.values += u.component_samples(k) * u.disc->sphere.nodes.col(k).asDiagonal();
  }
  return s;
}

RSParts rs_decompose(const AmbientField& u) {
  RSParts parts;
  parts.radial_power = u.radial_power;
  parts.u_R = radial_component(u).values;
  for (int k = 0; k < u.N(); ++k) {
    parts.u_S.push_back(u.component_samples(k) - parts.u_R * u.disc->sphere.nodes.col(k).asDiagonal());
  }
  return parts;
}

ScalarSamples gradient_trace(const AmbientField& u) {
  ScalarSamples s;
  s.radial_power = u.radial_power;
  s.values = Eigen::MatrixXd::Zero(u.disc->radial.M, u.disc->nodes());
  for (int k = 0; k < u.N(); ++k) s.values += u.modes[k] * u.disc->basis.grad[k].transpose();
  return s;
}

ScalarSamples divergence_rs(const AmbientField& u) {
  // r div u = (d + p) u_R + sum_k (grad_s u_k)_k, using div_s u_S = trace - (N-1) u_R.
  const ScalarSamples ur = radial_component(u);
  ScalarSamples out = gradient_trace(u);
  out.values += shifted_dt(u.disc->radial, ur.values, u.radial_power);
  out.radial_power = u.radial_power - 1.0;
  return out;
}

ScalarSamples spherical_divergence_rs(const AmbientField& u) {
  const ScalarSamples ur = radial_component(u);
  ScalarSamples out = gradient_trace(u);
  out.values -= (u.N() - 1) * ur.values;
  out.radial_power = u.radial_power - 1.0;
  return out;
}

double weighted_norm(const DiscPtr& disc, const ScalarSamples& s, double gamma, double shift) {
  const int N = disc->N();
  const Eigen::VectorXd slice = s.values.cwiseAbs2() * disc->sphere.weights;
  const Eigen::VectorXd e = exp_weights(disc->radial, 2.0 * gamma + shift + N + 2.0 * s.radial_power);
  return std::sqrt(integrate(disc->radial, slice.cwiseProduct(e)));
}

SliceProfiles slice_profiles(const AmbientField& u) {
  const Discretization& d = *u.disc;
  SliceProfiles s;
  s.radial_power = u.radial_power;
  s.dirichlet = Eigen::VectorXd::Zero(d.radial.M);
  s.hardy = Eigen::VectorXd::Zero(d.radial.M);
  for (int k = 0; k < u.N(); ++k) {
    const Eigen::MatrixXd& F = u.modes[k];
    const Eigen::MatrixXd dF = shifted_dt(d.radial, F, u.radial_power);
    s.hardy += row_quadratic(F, d.gram_values);
    s.dirichlet += row_quadratic(dF, d.gram_values) + row_quadratic(F, d.gram_gradients);
  }
  return s;
}

WeightedIntegrals weighted_integrals(const SliceProfiles& s, const RadialGrid& g, int N, double gamma) {
  const Eigen::VectorXd e = exp_weights(g, 2.0 * gamma + N - 2 + 2.0 * s.radial_power);
  WeightedIntegrals w;
  w.dirichlet = integrate(g, s.dirichlet.cwiseProduct(e));
  w.hardy = integrate(g, s.hardy.cwiseProduct(e));
  return w;
}

WeightedIntegrals weighted_integrals(const AmbientField& u, double gamma) {
  if (u.N() < 3) {
    throw DomainError("weighted integrals need N >= 3");
  }
  check_field_support(u);
  return weighted_integrals(slice_profiles(u), u.disc->radial, u.N(), gamma);
}

double hardy_integral(const AmbientField& u, double gamma) {
  const Discretization& d = *u.disc;
  Eigen::VectorXd h = Eigen::VectorXd::Zero(d.radial.M);
  for (int k = 0; k < u.N(); ++k) h += row_quadratic(u.modes[k], d.gram_values);
  const Eigen::VectorXd e = exp_weights(d.radial, 2.0 * gamma + u.N() - 2 + 2.0 * u.radial_power);
  return integrate(d.radial, h.cwiseProduct(e));
}

Eigen::MatrixXd sphere_mean(const AmbientField& u) {
  Eigen::MatrixXd out(u.disc->radial.M, u.N());
  const double area = u.disc->sphere.weights.sum();
  for (int k = 0; k < u.N(); ++k) out.col(k) = u.component_samples(k) * u.disc->sphere.weights / area;
  return out;
}

OrthogonalityResult orthogonality_check(const AmbientField& v, const AmbientField& w, int radius_index) {
  if (v.disc != w.disc) {
    throw DomainError("fields live on different discretizations");
  }
  const Discretization& d = *v.disc;
  if (radius_index < 0 || radius_index >= d.radial.M) {
    throw DomainError("radius index out of range");
  }
  const double t = d.radial.t(radius_index);
  const double sv = std::exp(v.radial_power * t);
  const double sw = std::exp(w.radial_power * t);
  const double r2 = std::exp(-2.0 * t);
  const Eigen::VectorXd& W = d.sphere.weights;
  OrthogonalityResult r;
  double vv = 0.0, ww = 0.0, gv = 0.0, gw = 0.0;
  for (int k = 0; k < v.N(); ++k) {
    const Eigen::RowVectorXd a = sv * v.modes[k].row(radius_index);
    const Eigen::RowVectorXd b = sw * w.modes[k].row(radius_index);
    const Eigen::RowVectorXd da = sv * shifted_dt(d.radial, v.modes[k], v.radial_power).row(radius_index);
    const Eigen::RowVectorXd db = sw * shifted_dt(d.radial, w.modes[k], w.radial_power).row(radius_index);
    const Eigen::VectorXd va = d.basis.Y * a.transpose();
    const Eigen::VectorXd vb = d.basis.Y * b.transpose();
    const Eigen::VectorXd dva = d.basis.Y * da.transpose();
    const Eigen::VectorXd dvb = d.basis.Y * db.transpose();
    r.l2 += W.dot(va.cwiseProduct(vb));
    vv += W.dot(va.cwiseAbs2());
    ww += W.dot(vb.cwiseAbs2());
    // grad = sigma d_r + r^{-1} grad_s, with d_r = r^{-1} (r d_r).
    double g = W.dot(dva.cwiseProduct(dvb));
    double ga = W.dot(dva.cwiseAbs2());
    double gb = W.dot(dvb.cwiseAbs2());
    for (int c = 0; c < v.N(); ++c) {
      const Eigen::VectorXd sa = d.basis.grad[c] * a.transpose();
      const Eigen::VectorXd sb = d.basis.grad[c] * b.transpose();
      g += W.dot(sa.cwiseProduct(sb));
      ga += W.dot(sa.cwiseAbs2());
      gb += W.dot(sb.cwiseAbs2());
    }
    r.gradient += r2 * g;
    gv += r2 * ga;
    gw += r2 * gb;
  }
  r.l2_scale = std::sqrt(vv * ww);
  r.gradient_scale = std::sqrt(gv * gw);
  r.l2_sum = vv + ww;
  r.gradient_sum = gv + gw;
  return r;
}

FieldChecks compute_checks(const AmbientField& u) {
  FieldChecks c;
  const SliceProfiles s = slice_profiles(u);
  const WeightedIntegrals wi = weighted_integrals(s, u.disc->radial, u.N(), 0.0);
  const double grad_norm = std::sqrt(wi.dirichlet);
  const double norm = std::sqrt(wi.hardy);
  auto rel = [](double x, double scale) { return scale > 0.0 ? x / scale : x; };
  // One pass over the samples: u_R and the gradient trace feed all three checks.
  const ScalarSamples ur = radial_component(u);
  const ScalarSamples trace = gradient_trace(u);
  ScalarSamples div{u.radial_power - 1.0, trace.values + shifted_dt(u.disc->radial, ur.values, u.radial_power)};
  ScalarSamples sdiv{u.radial_power - 1.0, trace.values - (u.N() - 1) * ur.values};
  c.divergence = rel(weighted_norm(u.disc, div, 0.0, 0.0), grad_norm);
  c.radial_component = rel(weighted_norm(u.disc, ur, 0.0, -2.0), norm);
  c.spherical_divergence = rel(weighted_norm(u.disc, sdiv, 0.0, 0.0), grad_norm);
  c.solenoidal = c.divergence <= kSolenoidalTolerance;
  c.toroidal = c.radial_component <= kToroidalTolerance && c.spherical_divergence <= kToroidalTolerance;
  return c;
}

bool is_toroidal(const AmbientField& u, double tolerance) {
  const FieldChecks& c = u.checks();
  return c.radial_component <= tolerance && c.spherical_divergence <= tolerance;
}

bool is_solenoidal(const AmbientField& u, double tolerance) { return u.checks().divergence <= tolerance; }

void write_field(std::ostream& os, const AmbientField& u) {
  const Discretization& d = *u.disc;
  nlohmann::ordered_json h;
  h["schema_version"] = 1;
  h["N"] = u.N();
  h["radial_grid"] = {{"t_min", d.radial.t_min}, {"t_max", d.radial.t_max}, {"M", d.radial.M}};
  h["sphere_resolution"] = d.sphere.resolution;
  h["basis_degree"] = d.basis_degree();
  h["radial_power"] = u.radial_power;
  h["flags"] = {{"solenoidal", u.flags.solenoidal}, {"toroidal", u.flags.toroidal},
                {"poloidal", u.flags.poloidal}};
  os << dump_json(h, -1) << '\n';
  os << "node,t_index";
  for (int k = 1; k <= u.N(); ++k) os << ",u" << k;
  os << '\n';
  std::vector<Eigen::MatrixXd> S;
  for (int k = 0; k < u.N(); ++k) S.push_back(u.component_samples(k));
  for (Eigen::Index i = 0; i < d.nodes(); ++i) {
    for (int j = 0; j < d.radial.M; ++j) {
      os << i << ',' << j;
      for (int k = 0; k < u.N(); ++k) os << ',' << format_double(S[k](j, i));
      os << '\n';
    }
  }
}

ImportedField read_field(std::istream& is, double tolerance) {
  std::string line;
  if (!std::getline(is, line)) {
    throw FormatError("field file is empty");
  }
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("field header is not valid JSON: ") + e.what());
  }
  int N = 0, M = 0, res = 0, L = 0;
  double t_min = 0, t_max = 0, p = 0;
  FieldFlags flags;
  try {
    if (h.at("schema_version").get<int>() != 1) {
      throw FormatError("unsupported field schema_version");
    }
    N = h.at("N").get<int>();
    const auto& rg = h.at("radial_grid");
    t_min = rg.at("t_min").get<double>();
    t_max = rg.at("t_max").get<double>();
    M = rg.at("M").get<int>();
    res = h.at("sphere_resolution").get<int>();
    L = h.at("basis_degree").get<int>();
    p = h.value("radial_power", 0.0);
    if (h.contains("flags")) {
      const auto& f = h["flags"];
      flags.solenoidal = f.value("solenoidal", false);
      flags.toroidal = f.value("toroidal", false);
      flags.poloidal = f.value("poloidal", false);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("field header: ") + e.what());
  }
  DiscPtr disc;
  try {
    disc = make_discretization(N, RadialGrid{t_min, t_max, M}, L, res);
  } catch (const DomainError& e) {
    throw FormatError(std::string("field header: ") + e.what());
  }
  if (!std::getline(is, line) || line.rfind("node,t_index", 0) != 0) {
    throw FormatError("missing CSV column header");
  }
  std::vector<Eigen::MatrixXd> S(N, Eigen::MatrixXd::Constant(M, disc->nodes(), std::nan("")));
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw FormatError("bad number '" + cell + "' in field row " + std::to_string(rows + 1));
      }
    }
    if (static_cast<int>(vals.size()) != N + 2) {
      throw FormatError("field row " + std::to_string(rows + 1) + " has wrong column count");
    }
    const auto i = static_cast<Eigen::Index>(vals[0]);
    const auto j = static_cast<Eigen::Index>(vals[1]);
    if (i < 0 || i >= disc->nodes() || j < 0 || j >= M) {
      throw FormatError("field row index out of range");
    }
    for (int k = 0; k < N; ++k) S[k](j, i) = vals[2 + k];
    ++rows;
  }
  if (rows != static_cast<std::size_t>(M) * static_cast<std::size_t>(disc->nodes())) {
    throw FormatError("field file has " + std::to_string(rows) + " rows, expected " +
                      std::to_string(static_cast<std::size_t>(M) * disc->nodes()));
  }
  for (const auto& s : S) {
    if (!s.allFinite()) throw FormatError("field file has missing or non-finite samples");
  }
  ImportedField out;
  out.field = field_from_samples(disc, p, S, tolerance, &out.projection_residual);
  out.field.flags = flags;
  return out;
}

} // namespace hleray
