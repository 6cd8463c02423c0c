#pragma once

#include "metallic/immersion.hpp"

#include <vector>

namespace metallic {

/// One factor sin(u_k) or cos(u_k) of a trigonometric monomial.
struct TrigFactor {
  int coord = 0;
  bool cosine = true;
};

/// scale * prod_f g_f(u_{coord(f)}), one output coordinate of a chart.
struct TrigMonomial {
  double scale = 1.0;
  std::vector<TrigFactor> factors;
};

/// Chart whose output coordinates are trigonometric monomials. Jacobian and Hessian
/// are exact (product rule on the factors).
SmoothMap trig_monomial_map(int in_dim, std::vector<TrigMonomial> outputs);

/// Hyperspherical coordinates of S^{m-1}(radius) in R^m using chart coordinates
/// first_coord .. first_coord + m - 2:
///   x_1 = cos t_1, x_2 = sin t_1 cos t_2, ..., x_m = sin t_1 ... sin t_{m-1}.
/// For m = 1 the block is the constant point +radius.
std::vector<TrigMonomial> sphere_block(int m, int first_coord, double radius);

/// Multiplies every monomial by one more factor.
std::vector<TrigMonomial> times(std::vector<TrigMonomial> block, TrigFactor factor);

/// Chart-coordinate box for sphere_block(m, ...): polar angles in [0.1, pi - 0.1], the
/// last (azimuthal) angle in [-pi, pi]. Appends m - 1 entries to lo and hi.
void append_sphere_box(int m, std::vector<double>& lo, std::vector<double>& hi);

ParamBox make_box(const std::vector<double>& lo, const std::vector<double>& hi);

/// f o g for smooth maps with matching dimensions; derivatives by the chain rule when
/// both maps carry them.
SmoothMap compose(const SmoothMap& f, const SmoothMap& g);

}  // namespace metallic
