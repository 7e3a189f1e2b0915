#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "lspec/errors.hpp"

namespace lspec {

enum class QuadratureScheme {
  gauss_hermite,  ///< node_count-point Gauss-Hermite in kv/ku
  trapezoid,      ///< node_count uniform points on [-truncation ku, truncation ku]
  adaptive,       ///< Gauss-Kronrod (7/15) panels refined around narrow structure
};

struct QuadratureSpec {
  QuadratureScheme scheme = QuadratureScheme::adaptive;
  int node_count = 64;
  double truncation = 6.0;  ///< half-width in units of ku
  double tolerance = 1e-8;  ///< relative, adaptive only
  int max_panels = 512;     ///< adaptive only

  void validate() const;
};

/// A velocity quadrature: <f> = sum_i weight[i] * f(Delta - kv[i]).
/// Weights already contain the Maxwell factor exp(-(kv/ku)^2) / (sqrt(pi) ku).
struct QuadratureRule {
  std::vector<double> kv;
  std::vector<double> weight;
  std::vector<double> panel_edges;  ///< adaptive rules only: sorted panel boundaries

  std::size_t size() const { return kv.size(); }
};

/// Gauss-Hermite nodes and weights for the weight exp(-x^2) (Golub-Welsch).
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Rule for the fixed schemes (gauss_hermite, trapezoid). ku must be > 0.
QuadratureRule make_rule(const QuadratureSpec& spec, double ku);

/// The same rule at doubled resolution (2n nodes, or every adaptive panel bisected).
QuadratureRule refine_rule(const QuadratureRule& rule, const QuadratureSpec& spec, double ku);

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (non-negative half).
inline constexpr double gk_x[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo, hi, error;
};

void append_panel(QuadratureRule& rule, double lo, double hi, double ku);

}  // namespace detail

/// Builds an adaptive Gauss-Kronrod rule for integrand f around `big_delta`.
/// `f` maps a shifted one-photon detuning to a value supporting +, -, * double
/// and detail::magnitude(). Panels are bisected (largest error first) until the
/// Kronrod-Gauss difference falls below spec.tolerance relative to the
/// integral, or spec.max_panels is reached.
template <class F>
QuadratureRule adapt_rule(F&& f, double big_delta, double ku, const QuadratureSpec& spec) {
  using detail::gk_wg;
  using detail::gk_wk;
  using detail::gk_x;
  const double norm = 1.0 / (std::sqrt(std::numbers::pi) * ku);

  auto integrate = [&](double lo, double hi, auto& kronrod) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    auto g = [&](double kv) {
      const double r = kv / ku;
      return f(big_delta - kv) * (norm * std::exp(-r * r));
    };
    auto fc = g(mid);
    kronrod = fc * gk_wk[7];
    auto gauss = fc * gk_wg[3];
    for (int j = 0; j < 7; ++j) {
      const double dx = half * gk_x[j];
      auto s = g(mid - dx) + g(mid + dx);
      kronrod = kronrod + s * gk_wk[j];
      if (j % 2 == 1) gauss = gauss + s * gk_wg[j / 2];
    }
    kronrod = kronrod * half;
    gauss = gauss * half;
    return detail::magnitude(kronrod - gauss);
  };

  const double edge = spec.truncation * ku;
  std::vector<double> cuts;
  const int initial = 8;
  for (int i = 0; i <= initial; ++i) cuts.push_back(-edge + 2.0 * edge * i / initial);
  // The resonant velocity class sits at kv = Delta.
  if (std::abs(big_delta) < edge) cuts.push_back(big_delta);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  using Value = decltype(f(0.0) * 1.0);
  Value total{};
  double total_error = 0.0;
  struct Entry {
    detail::Panel panel;
    Value value;
  };
  std::vector<Entry> panels;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Value v{};
    const double err = integrate(cuts[i], cuts[i + 1], v);
    panels.push_back({{cuts[i], cuts[i + 1], err}, v});
  }
  auto recompute = [&] {
    total = Value{};
    total_error = 0.0;
    for (const auto& p : panels) {
      total = total + p.value;
      total_error += p.panel.error;
    }
  };
  recompute();
  while (static_cast<int>(panels.size()) < spec.max_panels &&
         total_error > spec.tolerance * detail::magnitude(total) && total_error > 1e-300) {
    auto worst = std::max_element(panels.begin(), panels.end(), [](const Entry& a, const Entry& b) {
      return a.panel.error < b.panel.error;
    });
    const double lo = worst->panel.lo, hi = worst->panel.hi, mid = 0.5 * (lo + hi);
    Value left{}, right{};
    const double el = integrate(lo, mid, left);
    const double er = integrate(mid, hi, right);
    *worst = {{lo, mid, el}, left};
    panels.push_back({{mid, hi, er}, right});
    recompute();
  }

  std::sort(panels.begin(), panels.end(),
            [](const Entry& a, const Entry& b) { return a.panel.lo < b.panel.lo; });
  QuadratureRule rule;
  for (const auto& p : panels) detail::append_panel(rule, p.panel.lo, p.panel.hi, ku);
  return rule;
}

/// Evaluates <f> with a prebuilt rule.
template <class F>
auto apply_rule(const QuadratureRule& rule, F&& f, double big_delta) {
  using Value = decltype(f(0.0) * 1.0);
  Value acc{};
  for (std::size_t i = 0; i < rule.size(); ++i) {
    acc = acc + f(big_delta - rule.kv[i]) * rule.weight[i];
  }
  return acc;
}

/// Maxwell average (1/(sqrt(pi) ku)) * integral f(Delta - kv) exp(-(kv/ku)^2) d(kv).
///
/// ku == 0 returns f(Delta) exactly. Otherwise the result is cross-checked
/// against the rule at doubled resolution and QuadratureDivergence is thrown
/// when the two differ by more than 1e-4 relative. `f` must be re-entrant.
template <class F>
auto doppler_average(F&& f, double big_delta, double ku, const QuadratureSpec& spec) {
  spec.validate();
  if (!(ku >= 0.0)) throw InvalidArgument("ku must be >= 0");
  using Value = decltype(f(0.0) * 1.0);
  if (ku == 0.0) return Value(f(big_delta));

  const QuadratureRule rule = spec.scheme == QuadratureScheme::adaptive
                                  ? adapt_rule(f, big_delta, ku, spec)
                                  : make_rule(spec, ku);
  const Value coarse = apply_rule(rule, f, big_delta);
  const Value fine = apply_rule(refine_rule(rule, spec, ku), f, big_delta);
  const double scale = std::max(detail::magnitude(fine), 1e-300);
  if (detail::magnitude(fine - coarse) > 1e-4 * scale) {
    throw QuadratureDivergence("velocity average changes by more than 1e-4 under refinement");
  }
  return coarse;
}

}  // namespace lspec
