#include "gpd/measure.hpp"

#include <Eigen/LU>

namespace gpd {

std::vector<double> reiter_profile(const MeasureFamily<double>& mu, ElementId g, int depth) {
  const Groupoid& gr = mu.groupoid();
  std::vector<double> out;
  out.reserve(depth);
  MeasureFamily<double> pow = mu;  // mu^{*n}
  for (int n = 1; n <= depth; ++n) {
    if (n > 1) pow = convolve_families(pow, mu);
    FiberFunction<double> moved = translate(gr, g, pow.fiber(gr.source(g)));
    FiberFunction<double> target = pow.fiber(gr.range(g));
    double d = 0;
    for (size_t i = 0; i < moved.v.size(); ++i) d += std::abs(moved.v[i] - target.v[i]);
    out.push_back(d);
  }
  return out;
}

Eigen::MatrixXd markov_matrix_dense(const MeasureFamily<double>& mu, ElementId x) {
  auto p = markov_matrix(mu, x);
  const int m = (int)mu.groupoid().range_fiber(x).size();
  Eigen::MatrixXd out(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out(i, j) = p[(size_t)i * m + j];
  return out;
}

FixedSpaceResult harmonic_fixed_space(const Eigen::MatrixXd& p, double tol) {
  const int m = (int)p.rows();
  Eigen::MatrixXd a = p - Eigen::MatrixXd::Identity(m, m);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(tol);
  Eigen::MatrixXd ker = lu.kernel();

  FixedSpaceResult res;
  if (lu.rank() == m) {
    // kernel() returns a zero column in the full-rank case; a stochastic P
    // always fixes constants, so this only happens when tol is set too tight
    res.dimension = 0;
    return res;
  }
  res.dimension = (int)ker.cols();
  for (int c = 0; c < ker.cols(); ++c) {
    Eigen::VectorXd u = ker.col(c);
    double scale = u.cwiseAbs().maxCoeff();
    if (scale > 0) u /= scale;
    double r = (p * u - u).cwiseAbs().maxCoeff();
    res.residual = std::max(res.residual, r);
    res.basis.push_back(u);
  }
  if (res.dimension == 1) {
    const Eigen::VectorXd& u = res.basis[0];
    res.trivial = (u.maxCoeff() - u.minCoeff()) <= tol * u.cwiseAbs().maxCoeff();
  }
  return res;
}

}  // namespace gpd
