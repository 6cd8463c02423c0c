#include "metallic/charts.hpp"

#include "metallic/errors.hpp"

#include <cmath>
#include <numbers>

namespace metallic {

namespace {

struct FactorValues {
  double v;
  double d;
  double dd;
};

FactorValues evaluate(const TrigFactor& f, const Eigen::VectorXd& u) {
  const double s = std::sin(u(f.coord));
  const double c = std::cos(u(f.coord));
  if (f.cosine) return {c, -s, -c};
  return {s, c, -s};
}

// Product of all factor values except those at positions skip1 and skip2.
double product_except(const std::vector<FactorValues>& vals, std::size_t skip1, std::size_t skip2) {
  double out = 1.0;
  for (std::size_t k = 0; k < vals.size(); ++k) {
    if (k != skip1 && k != skip2) out *= vals[k].v;
  }
  return out;
}

}  // namespace

SmoothMap trig_monomial_map(int in_dim, std::vector<TrigMonomial> outputs) {
  for (const auto& m : outputs) {
    for (const auto& f : m.factors) {
      if (f.coord < 0 || f.coord >= in_dim) throw StructuralError("trig factor refers to a missing coordinate");
    }
  }
  const int out_dim = static_cast<int>(outputs.size());
  SmoothMap map;
  map.in_dim = in_dim;
  map.out_dim = out_dim;
  map.value = [outputs](const Eigen::VectorXd& u) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(outputs.size()));
    for (std::size_t k = 0; k < outputs.size(); ++k) {
      double v = outputs[k].scale;
      for (const auto& f : outputs[k].factors) v *= evaluate(f, u).v;
      x(static_cast<Eigen::Index>(k)) = v;
    }
    return x;
  };
  map.jacobian = [outputs, in_dim](const Eigen::VectorXd& u) {
    Eigen::MatrixXd Df = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(outputs.size()), in_dim);
    for (std::size_t k = 0; k < outputs.size(); ++k) {
      const auto& m = outputs[k];
      std::vector<FactorValues> vals;
      for (const auto& f : m.factors) vals.push_back(evaluate(f, u));
      const std::size_t none = vals.size();
      for (std::size_t a = 0; a < vals.size(); ++a) {
        Df(static_cast<Eigen::Index>(k), m.factors[a].coord) += m.scale * vals[a].d * product_except(vals, a, none);
      }
    }
    return Df;
  };
  map.hessian = [outputs, in_dim, out_dim](const Eigen::VectorXd& u) {
    Hessian H(out_dim, in_dim);
    for (std::size_t k = 0; k < outputs.size(); ++k) {
      const auto& m = outputs[k];
      Eigen::MatrixXd& B = H.block(static_cast<int>(k));
      std::vector<FactorValues> vals;
      for (const auto& f : m.factors) vals.push_back(evaluate(f, u));
      const std::size_t none = vals.size();
      for (std::size_t a = 0; a < vals.size(); ++a) {
        const int i = m.factors[a].coord;
        B(i, i) += m.scale * vals[a].dd * product_except(vals, a, none);
        for (std::size_t b = 0; b < vals.size(); ++b) {
          if (b == a) continue;
          const int j = m.factors[b].coord;
          B(i, j) += m.scale * vals[a].d * vals[b].d * product_except(vals, a, b);
        }
      }
    }
    return H;
  };
  return map;
}

std::vector<TrigMonomial> sphere_block(int m, int first_coord, double radius) {
  if (m < 1) throw DomainError("sphere block needs m >= 1");
  std::vector<TrigMonomial> block;
  std::vector<TrigFactor> sines;
  for (int k = 0; k < m; ++k) {
    TrigMonomial mono{radius, sines};
    if (k < m - 1) {
      mono.factors.push_back({first_coord + k, true});
      sines.push_back({first_coord + k, false});
    }
    block.push_back(std::move(mono));
  }
  return block;
}

std::vector<TrigMonomial> times(std::vector<TrigMonomial> block, TrigFactor factor) {
  for (auto& m : block) m.factors.push_back(factor);
  return block;
}

void append_sphere_box(int m, std::vector<double>& lo, std::vector<double>& hi) {
  for (int k = 0; k + 1 < m; ++k) {
    if (k + 2 < m) {
      lo.push_back(0.1);
      hi.push_back(std::numbers::pi - 0.1);
    } else {
      lo.push_back(-std::numbers::pi);
      hi.push_back(std::numbers::pi);
    }
  }
}

ParamBox make_box(const std::vector<double>& lo, const std::vector<double>& hi) {
  ParamBox box;
  box.lo = Eigen::Map<const Eigen::VectorXd>(lo.data(), static_cast<Eigen::Index>(lo.size()));
  box.hi = Eigen::Map<const Eigen::VectorXd>(hi.data(), static_cast<Eigen::Index>(hi.size()));
  return box;
}

SmoothMap compose(const SmoothMap& f, const SmoothMap& g) {
  if (g.out_dim != f.in_dim) throw StructuralError("cannot compose maps with mismatched dimensions");
  SmoothMap h;
  h.in_dim = g.in_dim;
  h.out_dim = f.out_dim;
  h.value = [f, g](const Eigen::VectorXd& u) { return f.value(g.value(u)); };
  if (f.has_analytic_derivatives() && g.has_analytic_derivatives()) {
    h.jacobian = [f, g](const Eigen::VectorXd& u) -> Eigen::MatrixXd { return f.jacobian(g.value(u)) * g.jacobian(u); };
    h.hessian = [f, g](const Eigen::VectorXd& u) {
      const Eigen::VectorXd v = g.value(u);
      const Eigen::MatrixXd Dg = g.jacobian(u);
      const Eigen::MatrixXd Df = f.jacobian(v);
      const Hessian Hf = f.hessian(v);
      const Hessian Hg = g.hessian(u);
      Hessian H(f.out_dim, g.in_dim);
      for (int k = 0; k < f.out_dim; ++k) {
        Eigen::MatrixXd B = Dg.transpose() * Hf.block(k) * Dg;
        for (int l = 0; l < g.out_dim; ++l) B += Df(k, l) * Hg.block(l);
        H.block(k) = B;
      }
      return H;
    };
  }
  return h;
}

}  // namespace metallic
