#include "lspec/doppler.hpp"

#include <Eigen/Eigenvalues>

namespace lspec {

void QuadratureSpec::validate() const {
  if (node_count < 8) throw InvalidArgument("quadrature node_count must be >= 8");
  if (scheme == QuadratureScheme::trapezoid && !(truncation >= 3.0)) {
    throw InvalidArgument("trapezoid truncation must be >= 3 ku");
  }
  if (scheme == QuadratureScheme::adaptive) {
    if (!(truncation >= 3.0)) throw InvalidArgument("adaptive truncation must be >= 3 ku");
    if (!(tolerance > 0.0)) throw InvalidArgument("adaptive tolerance must be > 0");
    if (max_panels < 8) throw InvalidArgument("adaptive max_panels must be >= 8");
  }
}

void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  // Symmetric Jacobi matrix of the monic Hermite recurrence.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    J(k, k - 1) = J(k - 1, k) = std::sqrt(0.5 * k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  nodes.resize(n);
  weights.resize(n);
  const double mu0 = std::sqrt(std::numbers::pi);
  for (int i = 0; i < n; ++i) {
    nodes[i] = eig.eigenvalues()(i);
    const double v = eig.eigenvectors()(0, i);
    weights[i] = mu0 * v * v;
  }
  // Enforce exact antisymmetry of the nodes.
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (nodes[n - 1 - i] - nodes[i]);
    const double w = 0.5 * (weights[i] + weights[n - 1 - i]);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

namespace {

QuadratureRule fixed_rule(QuadratureScheme scheme, int n, double truncation, double ku) {
  QuadratureRule rule;
  if (scheme == QuadratureScheme::gauss_hermite) {
    std::vector<double> x, w;
    gauss_hermite(n, x, w);
    rule.kv.resize(n);
    rule.weight.resize(n);
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
    for (int i = 0; i < n; ++i) {
      rule.kv[i] = ku * x[i];
      rule.weight[i] = w[i] * inv_sqrt_pi;
    }
    return rule;
  }
  const double edge = truncation * ku;
  const double h = 2.0 * edge / (n - 1);
  const double norm = h / (std::sqrt(std::numbers::pi) * ku);
  rule.kv.resize(n);
  rule.weight.resize(n);
  for (int i = 0; i < n; ++i) {
    const double kv = -edge + h * i;
    const double r = kv / ku;
    rule.kv[i] = kv;
    rule.weight[i] = norm * std::exp(-r * r) * ((i == 0 || i == n - 1) ? 0.5 : 1.0);
  }
  return rule;
}

}  // namespace

QuadratureRule make_rule(const QuadratureSpec& spec, double ku) {
  spec.validate();
  if (!(ku > 0.0)) throw InvalidArgument("make_rule requires ku > 0");
  if (spec.scheme == QuadratureScheme::adaptive) {
    throw InvalidArgument("adaptive rules depend on the integrand; use adapt_rule");
  }
  return fixed_rule(spec.scheme, spec.node_count, spec.truncation, ku);
}

QuadratureRule refine_rule(const QuadratureRule& rule, const QuadratureSpec& spec, double ku) {
  if (!rule.panel_edges.empty()) {
    QuadratureRule fine;
    for (std::size_t i = 0; i + 1 < rule.panel_edges.size(); ++i) {
      const double lo = rule.panel_edges[i], hi = rule.panel_edges[i + 1];
      const double mid = 0.5 * (lo + hi);
      detail::append_panel(fine, lo, mid, ku);
      detail::append_panel(fine, mid, hi, ku);
    }
    return fine;
  }
  const int n = spec.scheme == QuadratureScheme::trapezoid ? 2 * spec.node_count - 1
                                                           : 2 * spec.node_count;
  return fixed_rule(spec.scheme, n, spec.truncation, ku);
}

namespace detail {

void append_panel(QuadratureRule& rule, double lo, double hi, double ku) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  const double norm = 1.0 / (std::sqrt(std::numbers::pi) * ku);
  auto push = [&](double kv, double w) {
    const double r = kv / ku;
    rule.kv.push_back(kv);
    rule.weight.push_back(w * half * norm * std::exp(-r * r));
  };
  for (int j = 0; j < 7; ++j) {
    push(mid - half * gk_x[j], gk_wk[j]);
    push(mid + half * gk_x[j], gk_wk[j]);
  }
  push(mid, gk_wk[7]);
  if (rule.panel_edges.empty() || rule.panel_edges.back() != lo) rule.panel_edges.push_back(lo);
  rule.panel_edges.push_back(hi);
}

}  // namespace detail

}  // namespace lspec
