#include "metallic/report.hpp"

#include "metallic/connection.hpp"
#include "metallic/errors.hpp"
#include "metallic/random.hpp"
#include "metallic/sigma.hpp"
#include "metallic/slant.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace metallic {

using json = nlohmann::ordered_json;

const char* to_string(Suite suite) {
  switch (suite) {
    case Suite::structure:
      return "structure";
    case Suite::slant:
      return "slant";
    case Suite::connection:
      return "connection";
    case Suite::inheritance:
      break;
  }
  return "inheritance";
}

std::vector<Suite> parse_suites(const std::string& text) {
  if (text == "all") return {Suite::structure, Suite::slant, Suite::connection, Suite::inheritance};
  for (Suite s : {Suite::structure, Suite::slant, Suite::connection, Suite::inheritance}) {
    if (text == to_string(s)) return {s};
  }
  throw DomainError("unknown suite '" + text + "'");
}

void RunConfig::validate() const {
  if (samples < 1) throw DomainError("samples must be at least 1");
  for (const auto& tol : {tol_structure, tol_angle, tol_connection, tol_inheritance, tol_oracle}) {
    if (tol && !(*tol > 0.0 && std::isfinite(*tol))) throw DomainError("tolerances must be positive");
  }
}

namespace {

json vec(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json vec(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(x);
  return out;
}

json mat(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(vec(Eigen::VectorXd(m.row(i).transpose())));
  return out;
}

json checks_json(const VerificationReport& report) {
  json out = json::array();
  for (const auto& c : report.checks()) {
    out.push_back({{"name", c.name},
                   {"residual", c.residual},
                   {"tolerance", c.tolerance},
                   {"pass", c.pass},
                   {"gated", c.gated},
                   {"samples_used", c.samples_used},
                   {"worst_sample_point", vec(c.worst_sample_point)}});
  }
  return out;
}

json ambient_json(const AmbientStructure& amb) {
  const AmbientSpec& spec = amb.spec();
  json out{{"dim", amb.dim()}, {"p", amb.params().p}, {"q", amb.params().q}};
  if (spec.kind == AmbientSpec::Kind::product) {
    out["kind"] = "product";
    out["a"] = spec.a;
    out["b"] = spec.b;
    out["lambda"] = spec.lambda;
  } else {
    out["kind"] = "split";
    out["a"] = spec.a;
    out["b"] = spec.b;
  }
  return out;
}

json slant_json(const SlantReport& s) {
  json out{{"classification", to_string(s.classification)},
           {"theta_mean", s.theta_mean},
           {"theta_min", s.theta_min},
           {"theta_max", s.theta_max},
           {"deviation", s.deviation},
           {"lambda_hat", s.lambda_hat},
           {"angle_tolerance", s.angle_tol},
           {"samples", s.samples},
           {"directions", s.directions},
           {"witness_min", {{"point", vec(s.witness_min_point)}, {"direction", vec(s.witness_min_direction)}}},
           {"witness_max", {{"point", vec(s.witness_max_point)}, {"direction", vec(s.witness_max_direction)}}}};
  const auto opt = [&](const char* key, const std::optional<double>& v) {
    out[key] = v ? json(*v) : json(nullptr);
  };
  opt("quadratic_residual", s.quadratic_residual);
  opt("metric_T_residual", s.metric_T_residual);
  opt("metric_N_residual", s.metric_N_residual);
  opt("tangent_form_residual", s.tangent_form_residual);
  return out;
}

json sigma_json(const SigmaStructure& s, const Eigen::VectorXd& u) {
  return {{"point", vec(u)}, {"T", mat(s.T)}, {"eta", mat(s.eta)}, {"xi", mat(s.xi)}, {"A", mat(s.A)}};
}

json oracle_json(const std::vector<OracleRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"component", r.name},
                   {"gate_residual", r.gate_residual},
                   {"gate_pass", r.gate_pass},
                   {"match_residual", r.match_residual ? json(*r.match_residual) : json(nullptr)},
                   {"match_pass", r.match_pass},
                   {"worst_point", vec(r.worst_point)},
                   {"printed", vec(r.printed)},
                   {"definitional", vec(r.definitional)},
                   {"computed", vec(r.computed)}});
  }
  return out;
}

struct Context {
  const RunConfig& config;
  const BuiltEntry& entry;
  double tol_structure;
  double tol_angle;
  double tol_connection;
  double tol_inheritance;
  double tol_oracle;
};

int slant_directions(const Immersion& imm) { return imm.n() + 8; }

VerificationReport structure_suite(const Context& ctx, json& extras) {
  VerificationReport report("structure");
  const AmbientStructure& amb = ctx.entry.ambient;
  const Immersion& imm = ctx.entry.immersion;
  const Eigen::VectorXd none;

  // Relative to the size of J^n, so that large p, q are judged by rounding level.
  double power = 0.0;
  Eigen::MatrixXd Jn = amb.J();
  for (int n = 1; n <= 12; ++n) {
    if (n > 1) Jn = Jn * amb.J();
    const double scale = std::max(1.0, Jn.cwiseAbs().maxCoeff());
    power = std::max(power, power_identity_residual(amb.J(), amb.params(), n) / scale);
  }
  report.observe("ambient_power_identity_relative", 1e-12, power, none);
  report.observe("ambient_compatibility", 1e-12, compatibility_residual(amb, 20, ctx.config.seed), none);

  const auto points = sample_points(imm, ctx.config.samples, ctx.config.seed);
  for (std::size_t k = 0; k < points.size(); ++k) {
    const PointFrame frame = frame_at(imm, points[k]);
    report.observe("frame_orthonormal", 1e-10, frame_orthonormality_residual(frame), points[k]);
    const SigmaStructure s = decompose(amb, frame);
    observe_structure_identities(s, amb.params(), ctx.tol_structure, derive_seed(ctx.config.seed, 1000 + k), points[k],
                                 report);
    if (k == 0) extras["sigma_sample"] = sigma_json(s, points[k]);
  }

  if (!ctx.entry.oracle.empty()) {
    const auto rows = evaluate_oracle(ctx.entry, ctx.config.samples, ctx.config.seed, ctx.tol_oracle, ctx.tol_oracle);
    for (const auto& r : rows) {
      if (r.match_residual) {
        const Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(r.worst_point.data(), r.worst_point.size());
        report.observe("oracle_" + r.name, ctx.tol_oracle, *r.match_residual, p);
      }
    }
    extras["oracle"] = oracle_json(rows);
  }
  return report;
}

VerificationReport slant_suite(const Context& ctx, const SlantReport& slant, json& extras) {
  VerificationReport report("slant");
  const Eigen::VectorXd none;
  const std::string verdict = to_string(slant.classification);
  report.observe("classification_matches_expected", 0.0, verdict == ctx.entry.expected_class ? 0.0 : 1.0, none);
  if (ctx.entry.expected_theta && slant.classification != SlantClass::not_slant) {
    report.observe("slant_angle_matches_expected", ctx.tol_angle, std::abs(slant.theta_mean - *ctx.entry.expected_theta),
                   none);
  }
  if (slant.quadratic_residual) report.observe("slant_quadratic", ctx.tol_structure, *slant.quadratic_residual, none);
  if (slant.metric_T_residual) report.observe("slant_metric_T", ctx.tol_structure, *slant.metric_T_residual, none);
  if (slant.metric_N_residual) report.observe("slant_metric_N", ctx.tol_structure, *slant.metric_N_residual, none);
  if (slant.tangent_form_residual) {
    report.observe("slant_tangent_form", ctx.tol_structure, *slant.tangent_form_residual, none);
  }
  extras["slant"] = slant_json(slant);

  if (slant.classification != SlantClass::not_slant) {
    SuiteOptions opts{ctx.config.samples, ctx.config.seed, ctx.tol_connection, 1.0};
    report.merge(verify_slant_derivative(ctx.entry.immersion, ctx.entry.ambient, slant.theta_mean, opts));
  }
  return report;
}

VerificationReport connection_suite(const Context& ctx, const SlantReport& slant, json& extras) {
  VerificationReport report("connection");
  const Immersion& imm = ctx.entry.immersion;
  const AmbientStructure& amb = ctx.entry.ambient;
  const SuiteOptions opts{ctx.config.samples, ctx.config.seed, ctx.tol_connection, 1.0};
  report.merge(verify_connection_identities(imm, amb, opts));
  report.merge(verify_nijenhuis(imm, amb, opts));
  if (slant.classification == SlantClass::invariant) report.merge(verify_invariant_identities(imm, amb, opts));
  if (slant.classification == SlantClass::anti_invariant) {
    report.merge(verify_anti_invariant_identities(imm, amb, opts));
  }
  extras["frame_smoothness_constant"] = frame_smoothness_constant(imm, ctx.config.samples, ctx.config.seed);
  if (!ctx.entry.flat && imm.mode() == DerivativeMode::analytic) {
    const double coarse = covariant_formula_residual(imm, amb, opts);
    SuiteOptions fine = opts;
    fine.step_scale = 0.5;
    const double finer = covariant_formula_residual(imm, amb, fine);
    extras["step_halving"] = {{"residual_full_step", coarse},
                              {"residual_half_step", finer},
                              {"ratio", finer > 0.0 ? json(coarse / finer) : json(nullptr)}};
  }
  return report;
}

VerificationReport inheritance_suite(const Context& ctx, json& extras) {
  VerificationReport report("inheritance");
  if (!ctx.entry.chain) {
    extras["inheritance"] = "no chain for this entry";
    return report;
  }
  const ChainStage& chain = *ctx.entry.chain;
  report.merge(verify_inheritance_chain(ctx.entry.ambient, chain.outer, ctx.entry.immersion, chain.link,
                                        ctx.config.samples, ctx.config.seed, ctx.tol_inheritance));
  return report;
}

json metadata(const RunConfig& config, const ParamMap& params) {
  json p = json::object();
  for (const auto& [k, v] : params) p[k] = v;
  json suites = json::array();
  for (Suite s : config.suites) suites.push_back(to_string(s));
  return {{"entry", config.entry},
          {"params", p},
          {"seed", config.seed},
          {"samples", config.samples},
          {"mode", to_string(config.mode)},
          {"suites", suites},
          {"version", version}};
}

}  // namespace

RunResult run(const RunConfig& config) {
  config.validate();
  const CatalogEntry& catalog_entry = find_entry(config.entry);
  const ParamMap params = resolve_params(catalog_entry, config.params);
  const BuiltEntry entry = catalog_entry.build(params, config.mode);
  const bool analytic = config.mode == DerivativeMode::analytic;
  const Context ctx{config,
                    entry,
                    config.tol_structure.value_or(analytic ? 1e-9 : 1e-5),
                    config.tol_angle.value_or(1e-6),
                    config.tol_connection.value_or(entry.flat && analytic ? 1e-10 : 1e-5),
                    config.tol_inheritance.value_or(1e-8),
                    config.tol_oracle.value_or(1e-8)};

  RunResult result;
  json extras = json::object();
  std::optional<SlantReport> slant;
  const auto need_slant = [&]() -> const SlantReport& {
    if (!slant) {
      slant = classify_slant(entry.immersion, entry.ambient, config.samples, slant_directions(entry.immersion),
                             config.seed, ctx.tol_angle);
    }
    return *slant;
  };

  for (Suite s : {Suite::structure, Suite::slant, Suite::connection, Suite::inheritance}) {
    if (std::find(config.suites.begin(), config.suites.end(), s) == config.suites.end()) continue;
    switch (s) {
      case Suite::structure:
        result.suites.push_back(structure_suite(ctx, extras));
        break;
      case Suite::slant:
        result.suites.push_back(slant_suite(ctx, need_slant(), extras));
        break;
      case Suite::connection:
        result.suites.push_back(connection_suite(ctx, need_slant(), extras));
        break;
      case Suite::inheritance:
        result.suites.push_back(inheritance_suite(ctx, extras));
        break;
    }
  }

  json suites = json::array();
  for (const auto& r : result.suites) {
    suites.push_back({{"suite", r.suite()}, {"pass", r.passed()}, {"checks", checks_json(r)}});
    result.passed = result.passed && r.passed();
  }
  result.report = {{"schema_version", schema_version},
                   {"metadata", metadata(config, params)},
                   {"ambient", ambient_json(entry.ambient)},
                   {"immersion", {{"name", entry.immersion.name()}, {"n", entry.immersion.n()},
                                  {"codimension", entry.immersion.r()}, {"expected_class", entry.expected_class}}},
                   {"pass", result.passed},
                   {"suites", suites},
                   {"extras", extras}};
  return result;
}

json analyze(const RunConfig& config) {
  config.validate();
  const CatalogEntry& catalog_entry = find_entry(config.entry);
  const ParamMap params = resolve_params(catalog_entry, config.params);
  const BuiltEntry entry = catalog_entry.build(params, config.mode);
  const Eigen::VectorXd u = sample_points(entry.immersion, 1, config.seed).front();
  const SigmaStructure s = decompose(entry.ambient, frame_at(entry.immersion, u));
  const SlantReport slant = classify_slant(entry.immersion, entry.ambient, config.samples,
                                           slant_directions(entry.immersion), config.seed,
                                           config.tol_angle.value_or(1e-6));
  return {{"schema_version", schema_version},
          {"metadata", metadata(config, params)},
          {"ambient", ambient_json(entry.ambient)},
          {"immersion", {{"name", entry.immersion.name()}, {"n", entry.immersion.n()},
                         {"codimension", entry.immersion.r()}, {"expected_class", entry.expected_class}}},
          {"sigma", sigma_json(s, u)},
          {"pointwise_class", to_string(classify_pointwise(s))},
          {"slant", slant_json(slant)}};
}

namespace {

void write(std::ostringstream& out, const json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) {
        out << "null";
      } else {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", d);
        out << buf;
      }
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out << "[]";
        return;
      }
      bool scalars = true;
      for (const auto& e : v) scalars = scalars && e.is_primitive();
      if (scalars) {
        out << "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out << ", ";
          write(out, v[i], indent + 1);
        }
        out << "]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        out << inner;
        write(out, v[i], indent + 1);
        out << (i + 1 < v.size() ? ",\n" : "\n");
      }
      out << pad << "]";
      return;
    }
    case json::value_t::object: {
      if (v.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      std::size_t i = 0;
      for (auto it = v.begin(); it != v.end(); ++it, ++i) {
        out << inner << json(it.key()).dump() << ": ";
        write(out, it.value(), indent + 1);
        out << (i + 1 < v.size() ? ",\n" : "\n");
      }
      out << pad << "}";
      return;
    }
    default:
      out << v.dump();
      return;
  }
}

}  // namespace

std::string to_json_text(const json& value) {
  std::ostringstream out;
  write(out, value, 0);
  out << "\n";
  return out.str();
}

std::string summary_text(const RunResult& result) {
  std::ostringstream out;
  for (const auto& r : result.suites) {
    for (const auto& c : r.checks()) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%-4s %s.%s residual=%.3e tolerance=%.1e\n",
                    !c.gated ? "INFO" : (c.pass ? "PASS" : "FAIL"), r.suite().c_str(), c.name.c_str(), c.residual,
                    c.tolerance);
      out << buf;
    }
  }
  out << (result.passed ? "all selected checks passed\n" : "some checks failed\n");
  return out.str();
}

}  // namespace metallic
