#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "gpd/groupoid.hpp"
#include "gpd/rational.hpp"

namespace gpd {

namespace detail {
inline bool weight_nonneg(const Rat& w) { return !(w < Rat(0)); }
inline bool weight_nonneg(double w) { return w >= 0.0; }
inline bool weight_is_one(const Rat& w) { return w == Rat(1); }
inline bool weight_is_one(double w) { return std::abs(w - 1.0) <= 1e-12; }
inline double weight_abs(double w) { return std::abs(w); }
inline Rat weight_abs(const Rat& w) { return w.abs(); }
}  // namespace detail

// Function on one range fiber G^x, stored parallel to range_fiber(x).
template <class W>
struct FiberFunction {
  ElementId x = 0;
  std::vector<W> v;
};

template <class W>
W l1_norm(const FiberFunction<W>& f) {
  W s{};
  for (const W& w : f.v) s += detail::weight_abs(w);
  return s;
}

// One probability vector per range fiber G^x.
template <class W>
class MeasureFamily {
 public:
  MeasureFamily(const Groupoid& g, std::vector<W> weights) : g_(&g), w_(std::move(weights)) {
    if ((int)w_.size() != g.size()) throw std::invalid_argument("MeasureFamily: size mismatch");
    for (const W& w : w_)
      if (!detail::weight_nonneg(w)) throw std::invalid_argument("MeasureFamily: negative weight");
    for (ElementId x : g.units()) {
      W s{};
      for (ElementId a : g.range_fiber(x)) s += w_[a];
      if (!detail::weight_is_one(s))
        throw std::invalid_argument("MeasureFamily: fiber at unit " + std::to_string(x) +
                                    " does not sum to 1");
    }
  }

  static MeasureFamily uniform(const Groupoid& g) {
    std::vector<W> w(g.size());
    for (ElementId x : g.units()) {
      auto& fib = g.range_fiber(x);
      for (ElementId a : fib) w[a] = W(1) / W((std::int64_t)fib.size());
    }
    return MeasureFamily(g, std::move(w));
  }

  const Groupoid& groupoid() const { return *g_; }
  const W& at(ElementId a) const { return w_[a]; }
  const std::vector<W>& weights() const { return w_; }

  bool full_support() const {
    for (const W& w : w_)
      if (detail::weight_abs(w) == W{}) return false;
    return true;
  }

  FiberFunction<W> fiber(ElementId x) const {
    FiberFunction<W> f;
    f.x = x;
    for (ElementId a : g_->range_fiber(x)) f.v.push_back(w_[a]);
    return f;
  }

 private:
  const Groupoid* g_;
  std::vector<W> w_;
};

template <>
inline MeasureFamily<double> MeasureFamily<double>::uniform(const Groupoid& g) {
  std::vector<double> w(g.size());
  for (ElementId x : g.units())
    for (ElementId a : g.range_fiber(x)) w[a] = 1.0 / (double)g.range_fiber(x).size();
  return MeasureFamily<double>(g, std::move(w));
}

// f*mu(a) = sum_{h in G_{s(a)}} f(a h^-1) mu^{r(h)}(h)
template <class W>
FiberFunction<W> convolve(const Groupoid& g, const FiberFunction<W>& f,
                          const MeasureFamily<W>& mu) {
  const auto& fiber = g.range_fiber(f.x);
  if (f.v.size() != fiber.size()) throw std::invalid_argument("convolve: fiber size mismatch");
  FiberFunction<W> out;
  out.x = f.x;
  out.v.assign(fiber.size(), W{});
  for (size_t ia = 0; ia < fiber.size(); ++ia) {
    ElementId a = fiber[ia];
    for (ElementId h : g.source_fiber(g.source(a))) {
      ElementId ahi = g.compose(a, g.inverse(h));
      size_t pos = std::lower_bound(fiber.begin(), fiber.end(), ahi) - fiber.begin();
      out.v[ia] += f.v[pos] * mu.at(h);
    }
  }
  return out;
}

// (mu*nu)^x := mu^x * nu
template <class W>
MeasureFamily<W> convolve_families(const MeasureFamily<W>& mu, const MeasureFamily<W>& nu) {
  const Groupoid& g = mu.groupoid();
  std::vector<W> w(g.size(), W{});
  for (ElementId x : g.units()) {
    FiberFunction<W> fx = convolve(g, mu.fiber(x), nu);
    const auto& fiber = g.range_fiber(x);
    for (size_t i = 0; i < fiber.size(); ++i) w[fiber[i]] = fx.v[i];
  }
  return MeasureFamily<W>(g, std::move(w));
}

// g.f(a) := f(g^-1 a), a function on G^{r(g)} from one on G^{s(g)}
template <class W>
FiberFunction<W> translate(const Groupoid& g, ElementId gg, const FiberFunction<W>& f) {
  if (f.x != g.source(gg)) throw std::invalid_argument("translate: f must live on G^{s(g)}");
  const auto& src = g.range_fiber(g.source(gg));
  const auto& dst = g.range_fiber(g.range(gg));
  FiberFunction<W> out;
  out.x = g.range(gg);
  out.v.assign(dst.size(), W{});
  ElementId gi = g.inverse(gg);
  for (size_t ia = 0; ia < dst.size(); ++ia) {
    ElementId gia = g.compose(gi, dst[ia]);
    size_t pos = std::lower_bound(src.begin(), src.end(), gia) - src.begin();
    out.v[ia] = f.v[pos];
  }
  return out;
}

// Matrix of P^x_mu on G^x: P[g,h] = mu^{s(g)}(g^-1 h), row-major over
// range_fiber(x) indexing. Row-stochastic.
template <class W>
std::vector<W> markov_matrix(const MeasureFamily<W>& mu, ElementId x) {
  const Groupoid& g = mu.groupoid();
  const auto& fiber = g.range_fiber(x);
  const size_t m = fiber.size();
  std::vector<W> p(m * m, W{});
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) p[i * m + j] = mu.at(g.compose(g.inverse(fiber[i]), fiber[j]));
  return p;
}

// P^x_mu(f)(g) = sum_{h in G^{s(g)}} f(gh) mu^{s(g)}(h)
template <class W>
FiberFunction<W> apply_markov(const MeasureFamily<W>& mu, const FiberFunction<W>& f) {
  const Groupoid& g = mu.groupoid();
  const auto& fiber = g.range_fiber(f.x);
  FiberFunction<W> out;
  out.x = f.x;
  out.v.assign(fiber.size(), W{});
  for (size_t i = 0; i < fiber.size(); ++i)
    for (ElementId h : g.range_fiber(g.source(fiber[i]))) {
      ElementId gh = g.compose(fiber[i], h);
      size_t pos = std::lower_bound(fiber.begin(), fiber.end(), gh) - fiber.begin();
      out.v[i] += f.v[pos] * mu.at(h);
    }
  return out;
}

// || g . mu^{*n, s(g)} - mu^{*n, r(g)} ||_1 for n = 1..depth
std::vector<double> reiter_profile(const MeasureFamily<double>& mu, ElementId g, int depth);

struct FixedSpaceResult {
  int dimension = 0;
  std::vector<Eigen::VectorXd> basis;
  double residual = 0;  // max_k ||P u_k - u_k||_inf / ||u_k||_inf
  bool trivial = false; // dimension 1 and constant basis vector within tol
};

// Basis of {u : Pu = u} for a row-stochastic P, via rank-revealing LU of P - I.
FixedSpaceResult harmonic_fixed_space(const Eigen::MatrixXd& p, double tol = 1e-8);

Eigen::MatrixXd markov_matrix_dense(const MeasureFamily<double>& mu, ElementId x);

inline MeasureFamily<double> to_double(const MeasureFamily<Rat>& mu) {
  std::vector<double> w(mu.weights().size());
  for (size_t i = 0; i < w.size(); ++i) w[i] = mu.weights()[i].to_double();
  return MeasureFamily<double>(mu.groupoid(), std::move(w));
}

}  // namespace gpd
