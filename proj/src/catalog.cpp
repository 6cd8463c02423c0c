#include "metallic/catalog.hpp"

#include "metallic/charts.hpp"
#include "metallic/errors.hpp"
#include "metallic/sigma.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

namespace metallic {

namespace {

int get_int(const ParamMap& m, const std::string& key) {
  const std::string& text = m.at(key);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DomainError("parameter " + key + " must be an integer, got '" + text + "'");
  }
  return value;
}

double get_real(const ParamMap& m, const std::string& key) {
  const std::string& text = m.at(key);
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(value)) {
    throw DomainError("parameter " + key + " must be a finite number, got '" + text + "'");
  }
  return value;
}

MetallicParams get_params(const ParamMap& m) { return make_params(get_int(m, "p"), get_int(m, "q")); }

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

// Optional derived radius given by the caller must agree with the computed one.
void check_derived(const ParamMap& m, const std::string& key, double value) {
  const auto it = m.find(key);
  if (it == m.end() || it->second.empty()) return;
  const double given = get_real(m, key);
  if (std::abs(given - value) > 1e-12 * std::max(1.0, value)) {
    throw DomainError("inconsistent radii: " + key + " = " + it->second + " but the other radii give " +
                      std::to_string(value));
  }
}

std::vector<TrigMonomial> concat(std::vector<std::vector<TrigMonomial>> blocks) {
  std::vector<TrigMonomial> out;
  for (auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

Immersion::NormalFrameFn radial_frame() {
  return [](const Eigen::VectorXd&, const Eigen::VectorXd& x) -> Eigen::MatrixXd { return x.normalized(); };
}

SmoothMap prepend_constant(int in_dim, double value) {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(in_dim + 1, in_dim);
  B.bottomRows(in_dim) = Eigen::MatrixXd::Identity(in_dim, in_dim);
  Eigen::VectorXd offset = Eigen::VectorXd::Zero(in_dim + 1);
  offset(0) = value;
  return linear_map(B, offset);
}

Eigen::VectorXd stack_columns(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::VectorXd scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

double slant_line_lambda(const MetallicParams& params) {
  const double p = params.p;
  return p * p / (2.0 * p * p + 4.0 * params.q);
}

}  // namespace

BuiltEntry example1(int a, int b, double r1, double r2, double r3, const MetallicParams& params, int lambda,
                    DerivativeMode mode) {
  require(a >= 1, "example1 needs a >= 1");
  require(b >= 2, "example1 needs b >= 2");
  require(2 * a + b <= AmbientStructure::max_dim, "example1 dimension exceeds the ambient limit");
  require(r1 > 0.0 && r2 > 0.0 && r3 > 0.0, "example1 radii must be positive");
  require(lambda == 1 || lambda == -1, "lambda must be 1 or -1");
  const double r = std::hypot(r1, r2);
  const double R = std::hypot(r, r3);
  const int n = 2 * a + b - 2;

  // chi, then the angles of w_x, w_y, w_z.
  const auto xs = times(sphere_block(a, 1, r), {0, true});
  const auto ys = times(sphere_block(a, a, r), {0, false});
  const auto zs = sphere_block(b, 2 * a - 1, r3);
  std::vector<double> lo{0.1};
  std::vector<double> hi{std::numbers::pi / 2 - 0.1};
  append_sphere_box(a, lo, hi);
  append_sphere_box(a, lo, hi);
  append_sphere_box(b, lo, hi);

  const Immersion::NormalFrameFn frame = [a, r, r3, R](const Eigen::VectorXd&, const Eigen::VectorXd& x) {
    Eigen::MatrixXd F(x.size(), 2);
    F.col(0) = x / R;
    Eigen::VectorXd n2 = x * (r3 / r);
    n2.tail(x.size() - 2 * a) = -x.tail(x.size() - 2 * a) * (r / r3);
    F.col(1) = n2 / R;
    return F;
  };

  BuiltEntry e{make_product_structure(a, b, lambda, params),
               Immersion("example1", trig_monomial_map(n, concat({xs, ys, zs})), make_box(lo, hi), mode, frame),
               "not-slant"};

  // Outer sphere S^{2a+b-1}(R): psi, then the inner coordinates.
  const double psi0 = std::atan2(r3, r);
  const auto oxs = times(times(sphere_block(a, 2, R), {1, true}), {0, true});
  const auto oys = times(times(sphere_block(a, a + 1, R), {1, false}), {0, true});
  const auto ozs = times(sphere_block(b, 2 * a, R), {0, false});
  std::vector<double> olo{0.5 * psi0};
  std::vector<double> ohi{psi0 + 0.5 * (std::numbers::pi / 2 - psi0)};
  olo.insert(olo.end(), lo.begin(), lo.end());
  ohi.insert(ohi.end(), hi.begin(), hi.end());
  e.chain = ChainStage{Immersion("example1_outer", trig_monomial_map(n + 1, concat({oxs, oys, ozs})),
                                 make_box(olo, ohi), mode, radial_frame()),
                       prepend_constant(n, psi0)};

  if (lambda != 1) return e;

  const double sigma = params.sigma;
  const double sigma_bar = params.sigma_bar;
  const double sd = std::sqrt(params.delta);
  const double p = params.p;
  struct Radii {
    double r1sq, r2sq;
  };
  const auto radii = [a](const Eigen::VectorXd& x) {
    return Radii{x.head(a).squaredNorm(), x.segment(a, a).squaredNorm()};
  };

  e.oracle.push_back({"a11", OracleComponent::Kind::a, 0, 0, [=](const OraclePoint& pt) {
                        const Radii q = radii(pt.x);
                        const double tau = sigma * q.r1sq + sigma_bar * q.r2sq + sigma * r3 * r3;
                        return scalar(r * tau / (r * R * R));
                      }});
  e.oracle.push_back({"a12", OracleComponent::Kind::a, 0, 1, [=](const OraclePoint& pt) {
                        const Radii q = radii(pt.x);
                        return scalar((sigma_bar - sigma) * r3 * q.r2sq / (r * R * R));
                      }});
  e.oracle.push_back({"a22", OracleComponent::Kind::a, 1, 1, [=](const OraclePoint& pt) {
                        const Radii q = radii(pt.x);
                        return scalar(r3 * (sigma * q.r1sq + sigma_bar * q.r2sq + sigma * r * r) / (r * R * R));
                      }});
  e.oracle.push_back({"xi1", OracleComponent::Kind::xi, 0, 0, [=](const OraclePoint& pt) {
                        const Radii q = radii(pt.x);
                        Eigen::VectorXd v = Eigen::VectorXd::Zero(pt.x.size());
                        v.head(a) = (sigma - sigma_bar) * q.r2sq / (r * r) * pt.x.head(a);
                        v.segment(a, a) = -(sigma - sigma_bar) * q.r1sq / (r * r) * pt.x.segment(a, a);
                        return v;
                      }});
  e.oracle.push_back({"xi2", OracleComponent::Kind::xi, 1, 0, [=](const OraclePoint& pt) {
                        const Radii q = radii(pt.x);
                        const double tau = sigma * q.r1sq + sigma_bar * q.r2sq + sigma * r3 * r3;
                        const double cxy = r3 * tau - p * q.r2sq * r3 * r3 / r;
                        const double cz = r * tau - sd * q.r2sq * r3 - r * R * R * sigma / (r3 * r3);
                        Eigen::VectorXd v(pt.x.size());
                        v.head(2 * a) = cxy * pt.x.head(2 * a);
                        v.tail(b) = cz * pt.x.tail(b);
                        return Eigen::VectorXd(v / (r * R * R * R));
                      }});
  e.oracle.push_back({"eta1", OracleComponent::Kind::eta, 0, 0, [=](const OraclePoint& pt) {
                        return Eigen::VectorXd(sd * (pt.tangent.topRows(a).transpose() * pt.x.head(a)));
                      }});
  e.oracle.push_back({"eta2", OracleComponent::Kind::eta, 1, 0, [](const OraclePoint& pt) {
                        return Eigen::VectorXd(Eigen::VectorXd::Zero(pt.tangent.cols()));
                      }});
  e.oracle.push_back({"T", OracleComponent::Kind::T, 0, 0, [=](const OraclePoint& pt) {
                        Eigen::MatrixXd out(pt.tangent.rows(), pt.tangent.cols());
                        for (Eigen::Index i = 0; i < pt.tangent.cols(); ++i) {
                          const Eigen::VectorXd X = pt.tangent.col(i);
                          const double s = pt.x.head(a).dot(X.head(a));
                          Eigen::VectorXd v(X.size());
                          v.head(a) = sigma * X.head(a);
                          v.segment(a, a) = sigma_bar * X.segment(a, a);
                          v.tail(b) = sigma * X.tail(b);
                          out.col(i) = v - sd / R * s * pt.x;
                        }
                        return stack_columns(out);
                      }});
  return e;
}

BuiltEntry example2(int a, int b, double r1, double r2, const MetallicParams& params, DerivativeMode mode) {
  require(a >= 2 && b >= 2, "example2 needs a, b >= 2");
  require(a + b <= AmbientStructure::max_dim, "example2 dimension exceeds the ambient limit");
  require(r1 > 0.0 && r2 > 0.0, "example2 radii must be positive");
  const double r = std::hypot(r1, r2);
  const int n = a + b - 2;

  std::vector<double> lo;
  std::vector<double> hi;
  append_sphere_box(a, lo, hi);
  append_sphere_box(b, lo, hi);
  const Immersion::NormalFrameFn frame = [a, r, r1, r2](const Eigen::VectorXd&, const Eigen::VectorXd& x) {
    Eigen::MatrixXd F(x.size(), 2);
    F.col(0) = x / r;
    Eigen::VectorXd n2(x.size());
    n2.head(a) = x.head(a) * (r2 / r1);
    n2.tail(x.size() - a) = -x.tail(x.size() - a) * (r1 / r2);
    F.col(1) = n2 / r;
    return F;
  };
  BuiltEntry e{make_split_structure(a, b, params),
               Immersion("example2", trig_monomial_map(n, concat({sphere_block(a, 0, r1), sphere_block(b, a - 1, r2)})),
                         make_box(lo, hi), mode, frame),
               "invariant"};
  e.expected_theta = 0.0;

  const double psi0 = std::atan2(r2, r1);
  std::vector<double> olo{0.5 * psi0};
  std::vector<double> ohi{psi0 + 0.5 * (std::numbers::pi / 2 - psi0)};
  olo.insert(olo.end(), lo.begin(), lo.end());
  ohi.insert(ohi.end(), hi.begin(), hi.end());
  const auto oxs = times(sphere_block(a, 1, r), {0, true});
  const auto oys = times(sphere_block(b, a, r), {0, false});
  e.chain = ChainStage{Immersion("example2_outer", trig_monomial_map(n + 1, concat({oxs, oys})), make_box(olo, ohi),
                                 mode, radial_frame()),
                       prepend_constant(n, psi0)};

  const double sigma = params.sigma;
  const double sigma_bar = params.sigma_bar;
  const double rr = r * r;
  const Eigen::MatrixXd A = (Eigen::MatrixXd(2, 2) << sigma * r1 * r1 + sigma_bar * r2 * r2,
                             r1 * r2 * (sigma - sigma_bar), r1 * r2 * (sigma - sigma_bar),
                             sigma_bar * r1 * r1 + sigma * r2 * r2)
                                .finished() /
                            rr;
  for (int k = 0; k < 2; ++k) {
    for (int t = k; t < 2; ++t) {
      const double v = A(k, t);
      e.oracle.push_back({"a" + std::to_string(k + 1) + std::to_string(t + 1), OracleComponent::Kind::a, k, t,
                          [v](const OraclePoint&) { return scalar(v); }});
    }
  }
  for (int k = 0; k < 2; ++k) {
    e.oracle.push_back({"xi" + std::to_string(k + 1), OracleComponent::Kind::xi, k, 0,
                        [](const OraclePoint& pt) { return Eigen::VectorXd(Eigen::VectorXd::Zero(pt.x.size())); }});
  }
  for (int k = 0; k < 2; ++k) {
    e.oracle.push_back({"eta" + std::to_string(k + 1), OracleComponent::Kind::eta, k, 0, [](const OraclePoint& pt) {
                          return Eigen::VectorXd(Eigen::VectorXd::Zero(pt.tangent.cols()));
                        }});
  }
  const Eigen::MatrixXd J = e.ambient.J();
  e.oracle.push_back({"T", OracleComponent::Kind::T, 0, 0,
                      [J](const OraclePoint& pt) { return stack_columns(J * pt.tangent); }});
  return e;
}

LinearSpec parse_linear_spec(const std::string& text) {
  for (LinearSpec s : {LinearSpec::inv_line, LinearSpec::anti_line, LinearSpec::mixed_line, LinearSpec::anti_plane,
                       LinearSpec::slant_plane, LinearSpec::mixed_plane}) {
    if (text == to_string(s)) return s;
  }
  throw DomainError("unknown linear spec '" + text + "'");
}

const char* to_string(LinearSpec spec) {
  switch (spec) {
    case LinearSpec::inv_line:
      return "inv_line";
    case LinearSpec::anti_line:
      return "anti_line";
    case LinearSpec::mixed_line:
      return "mixed_line";
    case LinearSpec::anti_plane:
      return "anti_plane";
    case LinearSpec::slant_plane:
      return "slant_plane";
    case LinearSpec::mixed_plane:
      break;
  }
  return "mixed_plane";
}

namespace {

Immersion linear_immersion(const std::string& name, const Eigen::MatrixXd& B, DerivativeMode mode) {
  if (Eigen::JacobiSVD<Eigen::MatrixXd>(B).singularValues().minCoeff() < rank_threshold) {
    throw DomainError("linear spec is rank deficient");
  }
  const int n = static_cast<int>(B.cols());
  ParamBox box{Eigen::VectorXd::Constant(n, -1.0), Eigen::VectorXd::Constant(n, 1.0)};
  return Immersion(name, linear_map(B, Eigen::VectorXd::Zero(B.rows())), box, mode);
}

// Orthonormal basis of the plane spanned by e_1 + e_3 and e_2 + e_4.
Eigen::MatrixXd slant_plane_basis() {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(4, 2);
  B(0, 0) = B(2, 0) = B(1, 1) = B(3, 1) = std::sqrt(0.5);
  return B;
}

}  // namespace

BuiltEntry linear_slant(LinearSpec spec, int k, const MetallicParams& params, DerivativeMode mode) {
  const double t = params.sigma / std::sqrt(static_cast<double>(params.q));
  const double theta_slant = std::acos(std::sqrt(slant_line_lambda(params)));
  const std::string name = std::string("linear_slant/") + to_string(spec);
  switch (spec) {
    case LinearSpec::inv_line: {
      BuiltEntry e{make_split_structure(1, 1, params),
                   linear_immersion(name, Eigen::Vector2d(1.0, 0.0), mode), "invariant", true};
      e.expected_theta = 0.0;
      return e;
    }
    case LinearSpec::anti_line: {
      BuiltEntry e{make_split_structure(1, 1, params),
                   linear_immersion(name, Eigen::Vector2d(1.0, t).normalized(), mode), "anti-invariant", true};
      e.expected_theta = std::numbers::pi / 2;
      return e;
    }
    case LinearSpec::mixed_line: {
      BuiltEntry e{make_split_structure(1, 1, params),
                   linear_immersion(name, Eigen::Vector2d(1.0, 1.0).normalized(), mode), "proper-slant", true};
      e.expected_theta = theta_slant;
      return e;
    }
    case LinearSpec::anti_plane: {
      require(k >= 1 && 2 * k <= AmbientStructure::max_dim, "anti_plane needs 1 <= k <= 32");
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2 * k, k);
      for (int i = 0; i < k; ++i) {
        B(i, i) = 1.0;
        B(k + i, i) = t;
      }
      B /= std::sqrt(1.0 + t * t);
      BuiltEntry e{make_split_structure(k, k, params), linear_immersion(name, B, mode), "anti-invariant", true};
      e.expected_theta = std::numbers::pi / 2;
      return e;
    }
    case LinearSpec::slant_plane: {
      BuiltEntry e{make_split_structure(2, 2, params), linear_immersion(name, slant_plane_basis(), mode),
                   "proper-slant", true};
      e.expected_theta = theta_slant;
      return e;
    }
    case LinearSpec::mixed_plane: {
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(4, 2);
      B(0, 0) = 1.0;
      B(1, 1) = 1.0;
      B(3, 1) = t;
      B.col(1).normalize();
      return BuiltEntry{make_split_structure(2, 2, params), linear_immersion(name, B, mode), "not-slant", true};
    }
  }
  throw DomainError("unknown linear spec");
}

namespace {

BuiltEntry circle(double radius, const MetallicParams& params, DerivativeMode mode) {
  require(radius > 0.0, "radius must be positive");
  std::vector<double> lo;
  std::vector<double> hi;
  append_sphere_box(2, lo, hi);
  return BuiltEntry{make_split_structure(1, 1, params),
                    Immersion("circle", trig_monomial_map(1, sphere_block(2, 0, radius)), make_box(lo, hi), mode),
                    "not-slant"};
}

BuiltEntry sphere(double radius, const MetallicParams& params, DerivativeMode mode) {
  require(radius > 0.0, "radius must be positive");
  std::vector<double> lo;
  std::vector<double> hi;
  append_sphere_box(3, lo, hi);
  return BuiltEntry{make_split_structure(2, 1, params),
                    Immersion("sphere", trig_monomial_map(2, sphere_block(3, 0, radius)), make_box(lo, hi), mode,
                              radial_frame()),
                    "not-slant"};
}

BuiltEntry linear_chain(const MetallicParams& params, DerivativeMode mode) {
  BuiltEntry e = linear_slant(LinearSpec::slant_plane, 0, params, mode);
  Eigen::MatrixXd Bbar(4, 3);
  Bbar.leftCols(2) = slant_plane_basis();
  Bbar.col(2) = Eigen::Vector4d(1.0, 0.0, -1.0, 0.0).normalized();
  Eigen::MatrixXd link = Eigen::MatrixXd::Zero(3, 2);
  link.topRows(2) = Eigen::Matrix2d::Identity();
  e.immersion = linear_immersion("linear_chain", slant_plane_basis(), mode);
  e.chain = ChainStage{linear_immersion("linear_chain_outer", Bbar, mode), linear_map(link, Eigen::VectorXd::Zero(3))};
  return e;
}

BuiltEntry trivial_chain(const MetallicParams& params, DerivativeMode mode) {
  BuiltEntry e = linear_slant(LinearSpec::slant_plane, 0, params, mode);
  e.immersion = linear_immersion("trivial_chain", slant_plane_basis(), mode);
  e.chain = ChainStage{e.immersion, linear_map(Eigen::Matrix2d::Identity(), Eigen::VectorXd::Zero(2))};
  return e;
}

std::vector<ParamSpec> metallic_params() {
  return {{"p", "1", "positive integer p of J^2 = pJ + qI"}, {"q", "1", "positive integer q of J^2 = pJ + qI"}};
}

std::vector<ParamSpec> with_metallic(std::vector<ParamSpec> specs) {
  auto m = metallic_params();
  specs.insert(specs.end(), m.begin(), m.end());
  return specs;
}

std::vector<CatalogEntry> make_catalog() {
  std::vector<CatalogEntry> entries;
  entries.push_back({"circle", "circle of the given radius in E^2 with J = diag(sigma, sigma_bar)", "not-slant",
                     with_metallic({{"radius", "1", "radius"}}),
                     [](const ParamMap& m, DerivativeMode mode) {
                       return circle(get_real(m, "radius"), get_params(m), mode);
                     }});
  entries.push_back(
      {"example1", "S^{2a-1}(r) x S^{b-1}(r3) in E^{2a+b} with J_lambda, r^2 = r1^2 + r2^2", "not-slant",
       with_metallic({{"a", "1", "integer >= 1"},
                      {"b", "2", "integer >= 2"},
                      {"r1", "1", "radius of the x block, > 0"},
                      {"r2", "1", "radius of the y block, > 0"},
                      {"r3", "1", "radius of the z sphere, > 0"},
                      {"lambda", "1", "1 or -1"},
                      {"r", "", "optional check value for sqrt(r1^2 + r2^2)"},
                      {"R", "", "optional check value for sqrt(r^2 + r3^2)"}}),
       [](const ParamMap& m, DerivativeMode mode) {
         const double r1 = get_real(m, "r1");
         const double r2 = get_real(m, "r2");
         const double r3 = get_real(m, "r3");
         BuiltEntry e = example1(get_int(m, "a"), get_int(m, "b"), r1, r2, r3, get_params(m), get_int(m, "lambda"), mode);
         check_derived(m, "r", std::hypot(r1, r2));
         check_derived(m, "R", std::hypot(std::hypot(r1, r2), r3));
         return e;
       }});
  entries.push_back({"example2", "S^{a-1}(r1) x S^{b-1}(r2) in E^{a+b} with the split structure", "invariant",
                     with_metallic({{"a", "2", "integer >= 2"},
                                    {"b", "2", "integer >= 2"},
                                    {"r1", "1", "radius, > 0"},
                                    {"r2", "1", "radius, > 0"},
                                    {"r", "", "optional check value for sqrt(r1^2 + r2^2)"}}),
                     [](const ParamMap& m, DerivativeMode mode) {
                       const double r1 = get_real(m, "r1");
                       const double r2 = get_real(m, "r2");
                       BuiltEntry e = example2(get_int(m, "a"), get_int(m, "b"), r1, r2, get_params(m), mode);
                       check_derived(m, "r", std::hypot(r1, r2));
                       return e;
                     }});
  entries.push_back({"linear_chain", "slant plane inside a hyperplane of E^4", "proper-slant", metallic_params(),
                     [](const ParamMap& m, DerivativeMode mode) { return linear_chain(get_params(m), mode); }});
  entries.push_back(
      {"linear_slant", "linear subspaces of E^2, E^4 or E^{2k} with a split structure",
       "inv_line: invariant, anti_line: anti-invariant, mixed_line: proper-slant, anti_plane: anti-invariant, "
       "slant_plane: proper-slant, mixed_plane: not-slant",
       with_metallic({{"spec", "mixed_line", "inv_line | anti_line | mixed_line | anti_plane | slant_plane | mixed_plane"},
                      {"k", "2", "dimension of anti_plane"}}),
       [](const ParamMap& m, DerivativeMode mode) {
         return linear_slant(parse_linear_spec(m.at("spec")), get_int(m, "k"), get_params(m), mode);
       }});
  entries.push_back({"sphere", "round sphere S^2 in E^3 with J = diag(sigma, sigma, sigma_bar)", "not-slant",
                     with_metallic({{"radius", "1", "radius"}}),
                     [](const ParamMap& m, DerivativeMode mode) {
                       return sphere(get_real(m, "radius"), get_params(m), mode);
                     }});
  entries.push_back({"trivial_chain", "slant plane chained through itself", "proper-slant", metallic_params(),
                     [](const ParamMap& m, DerivativeMode mode) { return trivial_chain(get_params(m), mode); }});
  std::sort(entries.begin(), entries.end(), [](const auto& l, const auto& r) { return l.name < r.name; });
  return entries;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = make_catalog();
  return entries;
}

const CatalogEntry& find_entry(const std::string& name) {
  for (const auto& e : catalog()) {
    if (e.name == name) return e;
  }
  throw UnknownEntryError("unknown catalog entry '" + name + "'");
}

std::string catalog_list() {
  std::ostringstream out;
  for (const auto& e : catalog()) {
    out << e.name << "\n  " << e.summary << "\n  expected: " << e.expected_class << "\n";
    for (const auto& p : e.params) {
      out << "  " << p.name << " = " << (p.default_value.empty() ? "(unset)" : p.default_value) << "  " << p.description
          << "\n";
    }
  }
  return out.str();
}

ParamMap resolve_params(const CatalogEntry& entry, const ParamMap& given) {
  ParamMap out;
  for (const auto& p : entry.params) out[p.name] = p.default_value;
  for (const auto& [key, value] : given) {
    if (!out.count(key)) throw DomainError("entry " + entry.name + " has no parameter '" + key + "'");
    out[key] = value;
  }
  return out;
}

BuiltEntry build_entry(const std::string& name, const ParamMap& given, DerivativeMode mode) {
  const CatalogEntry& entry = find_entry(name);
  return entry.build(resolve_params(entry, given), mode);
}

namespace {

Eigen::VectorXd definitional(const OracleComponent& c, const Eigen::MatrixXd& J, const Eigen::MatrixXd& F,
                             const OraclePoint& pt) {
  const Eigen::MatrixXd A = F.transpose() * J * F;
  switch (c.kind) {
    case OracleComponent::Kind::a:
      return scalar(A(c.k, c.t));
    case OracleComponent::Kind::xi:
      return J * F.col(c.k) - F * A.row(c.k).transpose();
    case OracleComponent::Kind::eta:
      return (J * pt.tangent).transpose() * F.col(c.k);
    case OracleComponent::Kind::T: {
      const Eigen::MatrixXd JX = J * pt.tangent;
      return stack_columns(JX - F * (F.transpose() * JX));
    }
  }
  return {};
}

Eigen::VectorXd pipeline(const OracleComponent& c, const SigmaStructure& s, const Eigen::MatrixXd& E) {
  switch (c.kind) {
    case OracleComponent::Kind::a:
      return scalar(s.A(c.k, c.t));
    case OracleComponent::Kind::xi:
      return E * s.xi.col(c.k);
    case OracleComponent::Kind::eta:
      return s.eta.row(c.k).transpose();
    case OracleComponent::Kind::T:
      return stack_columns(E * s.T);
  }
  return {};
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

double max_abs(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

std::vector<OracleRow> evaluate_oracle(const BuiltEntry& entry, int samples, std::uint64_t seed, double gate_tol,
                                       double match_tol) {
  std::vector<OracleRow> rows(entry.oracle.size());
  if (entry.oracle.empty()) return rows;
  const Eigen::MatrixXd& J = entry.ambient.J();
  std::vector<double> worst_gap(rows.size(), -1.0);
  std::vector<double> match(rows.size(), 0.0);
  for (const auto& u : sample_points(entry.immersion, samples, seed)) {
    const PointFrame frame = frame_at(entry.immersion, u);
    const SigmaStructure s = decompose(entry.ambient, frame);
    const OraclePoint pt{u, frame.x, frame.E};
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const OracleComponent& c = entry.oracle[i];
      const Eigen::VectorXd printed = c.printed(pt);
      const Eigen::VectorXd defn = definitional(c, J, frame.F, pt);
      const Eigen::VectorXd computed = pipeline(c, s, frame.E);
      const double gap = max_abs(printed - defn);
      rows[i].gate_residual = std::max(rows[i].gate_residual, gap);
      match[i] = std::max(match[i], max_abs(computed - printed));
      if (gap > worst_gap[i]) {
        worst_gap[i] = gap;
        rows[i].worst_point = to_std(u);
        rows[i].printed = to_std(printed);
        rows[i].definitional = to_std(defn);
        rows[i].computed = to_std(computed);
      }
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].name = entry.oracle[i].name;
    rows[i].gate_pass = rows[i].gate_residual <= gate_tol;
    if (rows[i].gate_pass) {
      rows[i].match_residual = match[i];
      rows[i].match_pass = match[i] <= match_tol;
    }
  }
  return rows;
}

}  // namespace metallic
