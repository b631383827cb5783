#pragma once

#include "ccn/network.hpp"
#include "ccn/numeric.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace ccn {

/// c * y_1^{p_1} ... y_K^{p_K} * L^r
struct Monomial {
  double coeff = 0.0;
  std::vector<int> y_exp;   // one exponent per input
  int l_exp = 0;

  int y_degree() const;
  int degree() const { return y_degree() + l_exp; }
};

/// Response function f(y_1, ..., y_K, L) of a homogeneous network.
struct PolyField {
  int n_inputs = 0;
  int degree_cap = 0;       // 0: no cap given
  std::vector<Monomial> terms;

  /// f and its partial derivatives; dy1/dy2 are 0-based input indices or -1.
  double value(const double* y, double lambda, int dy1 = -1, int dy2 = -1, int dl = 0) const;
};

/// Field file: optional `degree = D`, then `f = term + term ...` where
/// continuation lines start with `+` or `-`. A term is `c * y<i>^p * ... * L^r`
/// with every factor optional except at least one (the coefficient defaults
/// to 1). Variables are 1-based. Throws ParseError.
PolyField parse_field(std::string_view text);
std::string serialize_field(const PolyField& f);

/// F(x, L)_i = f(x_{eta_1(i)}, ..., x_{eta_K(i)}, L) on a network.
class NetworkField {
 public:
  /// Throws ModelError when the arity differs from the arrow count, the
  /// degree cap is exceeded, or a term is free of y (F(0, L) = 0 must hold).
  NetworkField(Network net, PolyField f);

  int dim() const { return net_.n_cells(); }
  const Network& network() const { return net_; }
  const PolyField& field() const { return f_; }

  Vec eval(const Vec& x, double lambda) const;
  Mat jacobian(const Vec& x, double lambda) const;
  /// d/dL of the Jacobian.
  Mat jacobian_lambda(const Vec& x, double lambda) const;
  /// Second derivative D^2_x F(x, L)[u, w].
  Vec second_derivative(const Vec& x, double lambda, const Vec& u, const Vec& w) const;

  /// Largest relative residual ||F(A x) - A F(x)|| over random points and
  /// the given generator matrices.
  double equivariance_residual(const std::vector<Mat>& generators, Rng& rng, int samples = 8) const;

 private:
  void gather(const Vec& x, int cell, std::vector<double>& y) const;

  Network net_;
  PolyField f_;
};

}  // namespace ccn
