#pragma once

#include "metallic/ambient.hpp"
#include "metallic/immersion.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace metallic {

using ParamMap = std::map<std::string, std::string>;

struct ParamSpec {
  std::string name;
  std::string default_value;
  std::string description;
};

/// Where a closed-form oracle is evaluated: chart point, ambient point and the ambient
/// tangent frame (N x n) there.
struct OraclePoint {
  Eigen::VectorXd u;
  Eigen::VectorXd x;
  Eigen::MatrixXd tangent;
};

/// One closed-form component of the induced structure.
///   a:   entry a_kt, a 1-vector
///   xi:  xi_k as an ambient vector
///   eta: (eta_k(E_i))_i over the tangent frame
///   T:   the ambient vectors T(E_i), stacked column by column
struct OracleComponent {
  enum class Kind { a, xi, eta, T };
  std::string name;
  Kind kind = Kind::a;
  int k = 0;
  int t = 0;
  std::function<Eigen::VectorXd(const OraclePoint&)> printed;
};

/// Outer stage of an inheritance chain M -> outer -> E^N, with the chart-level link.
struct ChainStage {
  Immersion outer;
  SmoothMap link;
};

/// An instantiated catalog entry.
struct BuiltEntry {
  BuiltEntry(AmbientStructure amb, Immersion imm, std::string cls, bool linear = false)
      : ambient(std::move(amb)), immersion(std::move(imm)), expected_class(std::move(cls)), flat(linear) {}

  AmbientStructure ambient;
  Immersion immersion;
  std::string expected_class;  // slant verdict: invariant, anti-invariant, proper-slant, not-slant
  bool flat = false;           // linear chart, second fundamental form identically zero
  std::optional<double> expected_theta;
  std::optional<ChainStage> chain;
  std::vector<OracleComponent> oracle;
};

struct CatalogEntry {
  std::string name;
  std::string summary;
  std::string expected_class;
  std::vector<ParamSpec> params;
  std::function<BuiltEntry(const ParamMap&, DerivativeMode)> build;
};

/// All entries in alphabetical order.
const std::vector<CatalogEntry>& catalog();

/// Throws UnknownEntryError.
const CatalogEntry& find_entry(const std::string& name);

/// Names, parameter schemas and expected classifications, one block per entry.
std::string catalog_list();

/// Given parameters merged over the defaults. Unknown keys throw DomainError.
ParamMap resolve_params(const CatalogEntry& entry, const ParamMap& given);

BuiltEntry build_entry(const std::string& name, const ParamMap& given,
                       DerivativeMode mode = DerivativeMode::analytic);

/// Product of spheres S^{2a-1}(r) x S^{b-1}(r3) in E^{2a+b} with J_lambda, r^2 = r1^2 + r2^2.
/// The first factor uses join coordinates (r cos chi w_x, r sin chi w_y), so r1 and r2
/// vary along the submanifold and the parameters only fix r. The oracle (lambda = 1) holds
/// the closed forms exactly as printed.
BuiltEntry example1(int a, int b, double r1, double r2, double r3, const MetallicParams& params, int lambda,
                    DerivativeMode mode = DerivativeMode::analytic);

/// S^{a-1}(r1) x S^{b-1}(r2) in E^{a+b} with the split structure; invariant.
BuiltEntry example2(int a, int b, double r1, double r2, const MetallicParams& params,
                    DerivativeMode mode = DerivativeMode::analytic);

/// Linear subspaces of E^N with a split structure.
enum class LinearSpec { inv_line, anti_line, mixed_line, anti_plane, slant_plane, mixed_plane };

LinearSpec parse_linear_spec(const std::string& text);
const char* to_string(LinearSpec spec);

BuiltEntry linear_slant(LinearSpec spec, int k, const MetallicParams& params,
                        DerivativeMode mode = DerivativeMode::analytic);

/// One row of the oracle table. The gate compares the printed value with the value
/// obtained directly from J and the normal frame (a_kt = <JN_k, N_t>, xi_k = JN_k -
/// sum a_kt N_t, eta_k(X) = <JX, N_k>, TX = JX - sum eta_k(X) N_k). Rows that pass the
/// gate are compared with the generic pipeline.
struct OracleRow {
  std::string name;
  double gate_residual = 0.0;
  bool gate_pass = false;
  std::optional<double> match_residual;
  bool match_pass = false;
  std::vector<double> worst_point;
  std::vector<double> printed;
  std::vector<double> definitional;
  std::vector<double> computed;
};

std::vector<OracleRow> evaluate_oracle(const BuiltEntry& entry, int samples, std::uint64_t seed,
                                       double gate_tol = 1e-8, double match_tol = 1e-8);

}  // namespace metallic
