#ifndef ROBEAM_PROX_HPP
#define ROBEAM_PROX_HPP

#include <algorithm>
#include <cassert>
#include <limits>
#include <numeric>
#include <vector>

#include "robeam/array_model.hpp"
#include "robeam/core.hpp"

namespace robeam {

namespace detail {

/// Tolerance for breakpoint membership tests in the sorted scans.
inline constexpr double kBreakpointTol = 1e-12;

template <typename Scalar>
std::vector<Index> stable_order(const RealVector<Scalar>& keys) {
  std::vector<Index> order(static_cast<std::size_t>(keys.size()));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return keys(a) < keys(b); });
  return order;
}

}  // namespace detail

template <typename Scalar = double>
struct SidelobeProxInput {
  ComplexVector<Scalar> c;  // c_m = lambda_m / rho - w^H a_m
  Scalar rho = Scalar(1);
};

template <typename Scalar = double>
struct SidelobeProxOutput {
  Scalar t = Scalar(0);
  ComplexVector<Scalar> x;
  Index k_star = 1;  // 1-based rank of the first clipped entry
};

/// Minimizes t + rho/2 sum_m |x_m + c_m|^2 subject to |x_m| <= t.
///
/// Every x_m points opposite to c_m, so only the magnitudes z_m = min(|c_m|, t)
/// matter. With |c| sorted ascending, t lies in (|c_(K-1)|, |c_(K)|] for a unique
/// K, where it equals Gamma(K) = [(rho sum_{k>=K} |c_(k)| - 1) / (rho (M-K+1))]^+.
/// The scan runs over K with suffix sums, O(M) after the sort.
template <typename Scalar>
SidelobeProxOutput<Scalar> solve_sidelobe_prox(const SidelobeProxInput<Scalar>& in) {
  const Index m_count = in.c.size();
  if (!(in.rho > Scalar(0))) throw DomainError("penalty rho must be positive");
  if (m_count == 0) return {Scalar(0), ComplexVector<Scalar>(0), 1};

  const RealVector<Scalar> mag = in.c.cwiseAbs();
  const std::vector<Index> order = detail::stable_order(mag);
  auto sorted = [&](Index rank) { return mag(order[static_cast<std::size_t>(rank - 1)]); };  // 1-based

  // suffix[k] = sum of sorted magnitudes with rank >= k+1
  std::vector<Scalar> suffix(static_cast<std::size_t>(m_count) + 1, Scalar(0));
  for (Index k = m_count; k >= 1; --k) suffix[k - 1] = suffix[k] + sorted(k);

  const Scalar tol = Scalar(detail::kBreakpointTol);
  auto gamma = [&](Index k) {
    return positive_part((in.rho * suffix[k - 1] - Scalar(1)) / (in.rho * Scalar(m_count - k + 1)));
  };

  Index k_star = 0;
  Scalar t = Scalar(0);
  for (Index k = 1; k <= m_count; ++k) {
    const Scalar g = gamma(k);
    const Scalar below = k == 1 ? Scalar(0) : sorted(k - 1);
    const bool lower_ok = k == 1 ? g >= below : g > below - tol;
    if (lower_ok && g <= sorted(k) + tol) {
      k_star = k;
      t = g;
      break;
    }
  }
  if (k_star == 0) {
    // Only reachable through rounding at a breakpoint; pick the least violated K.
    assert(false && "side-lobe breakpoint scan found no K");
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (Index k = 1; k <= m_count; ++k) {
      const Scalar g = gamma(k);
      const Scalar below = k == 1 ? Scalar(0) : sorted(k - 1);
      const Scalar violation = positive_part(below - g) + positive_part(g - sorted(k));
      if (violation < best) best = violation, k_star = k, t = g;
    }
  }

  SidelobeProxOutput<Scalar> out;
  out.t = t;
  out.k_star = k_star;
  out.x = ComplexVector<Scalar>::Zero(m_count);
  for (Index rank = 1; rank <= m_count; ++rank) {
    const Index m = order[static_cast<std::size_t>(rank - 1)];
    if (mag(m) == Scalar(0)) continue;
    out.x(m) = rank < k_star ? Complex<Scalar>(-in.c(m)) : Complex<Scalar>(-in.c(m) / mag(m) * t);
  }
  return out;
}

template <typename Scalar>
Scalar sidelobe_prox_objective(const SidelobeProxInput<Scalar>& in, Scalar t, const ComplexVector<Scalar>& x) {
  return t + in.rho / Scalar(2) * (x + in.c).squaredNorm();
}

template <typename Scalar = double>
struct MainlobeProxInput {
  Complex<Scalar> c0;       // lambda_0 / rho - w^H a_0
  ComplexVector<Scalar> d;  // gamma / rho - w
  DiskRadii<Scalar> radii;
  Scalar rho = Scalar(1);
};

template <typename Scalar = double>
struct MainlobeProxOutput {
  Scalar x0 = Scalar(1);
  ComplexVector<Scalar> v;
  Scalar xi = Scalar(0);  // multiplier of the main-lobe constraint
};

/// Minimizes sum_n (delta_n |v_n| + rho/2 |v_n + d_n|^2) + rho/2 |x0 + c0|^2
/// over real x0 and complex v, subject to x0 >= sum_n delta_n |v_n| + 1.
///
/// With e_n = |d_n| - delta_n/rho the KKT point is x0 = -Re c0 + xi/2 and
/// |v_n| = [e_n - xi delta_n / 2]^+, phase opposite to d_n. The multiplier xi is
/// zero when the constraint is slack; otherwise it is Omega(L) for the unique
/// breakpoint L in the ascending order of e_n / delta_n. Elements with
/// delta_n = 0 drop out of the constraint and take v_n = -d_n.
template <typename Scalar>
MainlobeProxOutput<Scalar> solve_mainlobe_prox(const MainlobeProxInput<Scalar>& in) {
  const Index n_el = in.d.size();
  if (!(in.rho > Scalar(0))) throw DomainError("penalty rho must be positive");
  if (in.radii.size() != n_el) throw ConstructionError("disk radii length does not match d");
  const RealVector<Scalar>& delta = in.radii.delta;
  const Scalar re_c0 = in.c0.real();

  const RealVector<Scalar> dmag = in.d.cwiseAbs();
  const RealVector<Scalar> e = dmag - delta / in.rho;

  // Elements that actually enter the constraint.
  std::vector<Index> active;
  for (Index n = 0; n < n_el; ++n)
    if (delta(n) > Scalar(0)) active.push_back(n);

  Scalar slack_sum = Scalar(0);
  for (Index n : active) slack_sum += delta(n) * positive_part(e(n));

  Scalar xi = Scalar(0);
  if (-re_c0 < slack_sum + Scalar(1)) {
    const auto p = static_cast<Index>(active.size());
    RealVector<Scalar> ratio(p);
    for (Index k = 0; k < p; ++k) ratio(k) = e(active[k]) / delta(active[k]);
    const std::vector<Index> order = detail::stable_order(ratio);
    auto sorted_ratio = [&](Index rank) {  // 1-based, padded with -inf / +inf
      if (rank < 1) return -std::numeric_limits<Scalar>::infinity();
      if (rank > p) return std::numeric_limits<Scalar>::infinity();
      return ratio(order[static_cast<std::size_t>(rank - 1)]);
    };
    auto element = [&](Index rank) { return active[order[static_cast<std::size_t>(rank - 1)]]; };

    // suffix sums over ranks >= L of delta*e and delta^2
    std::vector<Scalar> sum_de(static_cast<std::size_t>(p) + 2, Scalar(0));
    std::vector<Scalar> sum_dd(static_cast<std::size_t>(p) + 2, Scalar(0));
    for (Index rank = p; rank >= 1; --rank) {
      const Index n = element(rank);
      sum_de[rank] = sum_de[rank + 1] + delta(n) * e(n);
      sum_dd[rank] = sum_dd[rank + 1] + delta(n) * delta(n);
    }
    auto omega = [&](Index rank) {
      return Scalar(2) * (sum_de[rank] + Scalar(1) + re_c0) / (Scalar(1) + sum_dd[rank]);
    };

    const Scalar tol = Scalar(detail::kBreakpointTol);
    bool found = false;
    for (Index rank = 1; rank <= p + 1; ++rank) {
      const Scalar half = omega(rank) / Scalar(2);
      if (sorted_ratio(rank - 1) <= half + tol && half < sorted_ratio(rank) + tol) {
        xi = omega(rank);
        found = true;
        break;
      }
    }
    if (!found) {
      assert(false && "main-lobe breakpoint scan found no L");
      Scalar best = std::numeric_limits<Scalar>::infinity();
      for (Index rank = 1; rank <= p + 1; ++rank) {
        const Scalar half = omega(rank) / Scalar(2);
        const Scalar violation =
            positive_part(sorted_ratio(rank - 1) - half) + positive_part(half - sorted_ratio(rank));
        if (violation < best) best = violation, xi = omega(rank);
      }
    }
    xi = positive_part(xi);
  }

  MainlobeProxOutput<Scalar> out;
  out.xi = xi;
  out.x0 = -re_c0 + xi / Scalar(2);
  out.v = ComplexVector<Scalar>::Zero(n_el);
  for (Index n = 0; n < n_el; ++n) {
    if (delta(n) == Scalar(0)) {
      out.v(n) = -in.d(n);
      continue;
    }
    const Scalar y = positive_part(e(n) - xi * delta(n) / Scalar(2));
    if (y > Scalar(0)) out.v(n) = -in.d(n) / dmag(n) * y;
  }
  return out;
}

template <typename Scalar>
Scalar mainlobe_prox_objective(const MainlobeProxInput<Scalar>& in, Scalar x0, const ComplexVector<Scalar>& v) {
  const Scalar l1 = in.radii.delta.dot(v.cwiseAbs());
  return l1 + in.rho / Scalar(2) * ((v + in.d).squaredNorm() + std::norm(Complex<Scalar>(x0) + in.c0));
}

}  // namespace robeam

#endif  // ROBEAM_PROX_HPP
