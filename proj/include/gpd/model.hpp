#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "gpd/cochain.hpp"
#include "gpd/groupoid.hpp"
#include "gpd/measure.hpp"

namespace gpd::model {

using Mat = Eigen::MatrixXcd;

// Ordered basis of paths of fixed length between two units: tuples t with
// r(t_1) = range_unit and s(t_n) = source_unit, lexicographic by ids.
struct PathSpace {
  std::vector<std::vector<ElementId>> paths;
  std::unordered_map<std::uint64_t, int> index;
  int dim() const { return (int)paths.size(); }
  int find(std::span<const ElementId> t) const;
};

// Groupoid + 3-cocycle with cached path bases; phases leave exact arithmetic
// here, as complex doubles on matrix units.
class Context {
 public:
  Context(const Groupoid& g, const Cochain& cocycle);

  const Groupoid& groupoid() const { return *g_; }
  const Cochain& cocycle() const { return *c_; }
  std::complex<double> cval(ElementId a, ElementId b, ElementId c) const {
    return c_->at({a, b, c}).value();
  }

  const PathSpace& paths(ElementId range_unit, ElementId source_unit, int n) const;

  // u_g^n(k): paths(s(g), s(k), n) -> paths(r(g), s(k), n), needs r(k) = r(g)
  Mat u(int n, ElementId g, ElementId k) const;
  // w^n(g,h)(k): diagonal unitary of B_n(k), needs (g,h) composable, r(k) = r(g)
  Mat w(int n, ElementId g, ElementId h, ElementId k) const;
  // I_n(k,l): partial isometry in B_n(kl) supported on last leg = l, n >= 2
  Mat intertwiner(int n, ElementId k, ElementId l) const;
  // u_g^n(k) (x) 1 at level n+1 over final source unit z (zero off the
  // corner whose n-prefix ends at s(k))
  Mat u_tensor_id(int n, ElementId g, ElementId k, ElementId z) const;

 private:
  const Groupoid* g_;
  const Cochain* c_;
  mutable std::map<std::tuple<ElementId, ElementId, int>, PathSpace> cache_;
};

// Element of A_n(x) = (+)_{k in G^x} B_n(k): one square block per k.
struct Element {
  int level = 1;
  ElementId base = 0;
  std::map<ElementId, Mat> block;
};

Element identity_element(const Context& ctx, int n, ElementId x);
Element random_element(const Context& ctx, int n, ElementId x, std::mt19937_64& rng);
Element adjoint(const Element& a);
Element multiply(const Element& a, const Element& b);
Element add(const Element& a, const Element& b);
double max_abs_diff(const Element& a, const Element& b);
double max_abs(const Element& a);

// w^n(g,h) as an element of A_n(r(g))
Element w_element(const Context& ctx, int n, ElementId g, ElementId h);
// V(m, gamma) = w(gamma, gamma^-1 m gamma) w(m, gamma)^*, m isotropy at r(gamma)
Element v_element(const Context& ctx, int n, ElementId m, ElementId gamma);

// alpha_g^n: A_n(s(g)) -> A_n(r(g))
Element alpha(const Context& ctx, ElementId g, const Element& a);
// phi_n^x: A_n(x) -> A_{n+1}(x)
Element phi(const Context& ctx, const Element& a);

// Positive diagonal family (one vector per block), used for rho_n and d_g^n.
struct Diagonal {
  int level = 1;
  ElementId base = 0;
  std::map<ElementId, Eigen::VectorXd> diag;
};

// rho_n at x for a full-support mu and an involutive section
Diagonal rho(const Context& ctx, int n, ElementId x, const MeasureFamily<double>& mu,
             const SemidirectPresentation& sect);
std::complex<double> psi(const Context& ctx, const Diagonal& rho_n, const Element& a);
// E_n^x: A_{n+1}(x) -> A_n(x)
Element expectation(const Context& ctx, const MeasureFamily<double>& mu, const Element& b);
// d_g^n, a positive diagonal affiliated with A_n(s(g))
Diagonal density_dg(const Context& ctx, int n, ElementId g, const MeasureFamily<double>& mu,
                    const SemidirectPresentation& sect);
Element diagonal_element(const Context& ctx, const Diagonal& d);

// --- executable lemma verifications -------------------------------------

struct CheckResult {
  std::string name;
  double max_residual = 0;
  long cases = 0;
  std::string worst;  // argument tuple attaining the max
  void fold(double r, const std::string& args);
};

// unitarity of u and w, partial-isometry law of I, exhaustive
std::vector<CheckResult> check_intertwiner_families(const Context& ctx, int n);
// u_g u_h = c(g,h,h^-1g^-1k) w(g,h) u_{gh}
CheckResult check_composition_of_u(const Context& ctx, int n);
// c(g,g^-1k,l) I(k,l)(u_g (x) 1) = u_g^{n+1}(kl) I(g^-1k,l)
CheckResult check_u_versus_intertwiner(const Context& ctx, int n);
// w^{n+1}(g,h) = phi_n(w^n(g,h))
CheckResult check_w_tower(const Context& ctx, int n);
// phi_n o alpha_g^n = alpha_g^{n+1} o phi_n
CheckResult check_equivariance(const Context& ctx, int n, std::mt19937_64& rng);
// alpha_g alpha_h = Ad w(g,h) alpha_{gh}
CheckResult check_composition_law(const Context& ctx, int n, std::mt19937_64& rng);
// alpha_g(w(h,k)) w(g,hk) = c(g,h,k) w(g,h) w(gh,k)
CheckResult check_pentagon(const Context& ctx, int n);

struct StateChecks {
  CheckResult state_normalized;   // psi_n(1) = 1
  CheckResult trace_rho;          // Tr rho_n(k) = mu^{*(n+1),x}(k)
  CheckResult bimodule;           // psi_{n+1}(phi(a) b) = psi_n(a E(b))
  CheckResult tower_state;        // psi_{n+1} o phi_n = psi_n
  CheckResult expectation_alpha;  // alpha_g o E_n = E_n o alpha_g
};
StateChecks check_state_expectation(const Context& ctx, int n, const MeasureFamily<double>& mu,
                                    const SemidirectPresentation& sect, std::mt19937_64& rng);

// E_n restricted to the center equals the Markov operator of mu
CheckResult check_center_markov(const Context& ctx, int n, ElementId x,
                                const MeasureFamily<double>& mu, std::mt19937_64& rng);

struct DgChecks {
  CheckResult transport;      // psi^{r(g)}(alpha_g(a)) = psi^{s(g)}(d a d)
  CheckResult phi_compatible; // phi_n(d_g^n) = d_g^{n+1}
};
DgChecks check_density_dg(const Context& ctx, int n, const MeasureFamily<double>& mu,
                          const SemidirectPresentation& sect, std::mt19937_64& rng);

struct ZetaEtaChecks {
  CheckResult zeta_identity;  // V(g,1) cochain identity inside A_n
  CheckResult eta_identity;
  double scalar_cross_check = 0;  // matrix scalar vs exact formula, max abs
};
ZetaEtaChecks check_zeta_eta(const Context& ctx, int n, const SemidirectPresentation& sect);

}  // namespace gpd::model
