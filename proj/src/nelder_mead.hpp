#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "sympcap/symplin.hpp"

namespace sympcap::detail {

struct NelderMeadResult {
  Vec x;
  double value;
  int evals;
  bool converged;
};

/// Minimizes f from the simplex x0, x0 + steps_i e_i. Non-finite values are
/// treated as +inf.
inline NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& f, const Vec& x0, const Vec& steps,
                                    int max_evals, double ftol = 1e-13, double xtol = 1e-10) {
  const Eigen::Index d = x0.size();
  int evals = 0;
  auto eval = [&](const Vec& x) {
    ++evals;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<Vec> pts(d + 1, x0);
  std::vector<double> val(d + 1);
  for (Eigen::Index i = 0; i < d; ++i) pts[i + 1](i) += steps(i);
  for (Eigen::Index i = 0; i <= d; ++i) val[i] = eval(pts[i]);

  std::vector<Eigen::Index> order(d + 1);
  bool converged = false;
  while (evals < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return val[a] < val[b]; });
    const Eigen::Index best = order.front();
    const Eigen::Index worst = order.back();
    const Eigen::Index second = order[d - 1];

    double size = 0.0;
    for (Eigen::Index i = 0; i <= d; ++i) size = std::max(size, (pts[i] - pts[best]).lpNorm<Eigen::Infinity>());
    if (std::abs(val[worst] - val[best]) <= ftol * std::max(1.0, std::abs(val[best])) && size <= xtol) {
      converged = true;
      break;
    }

    Vec centroid = Vec::Zero(d);
    for (Eigen::Index i = 0; i <= d; ++i) {
      if (i != worst) centroid += pts[i];
    }
    centroid /= static_cast<double>(d);

    const Vec reflected = centroid + (centroid - pts[worst]);
    const double fr = eval(reflected);
    if (fr < val[best]) {
      const Vec expanded = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = eval(expanded);
      if (fe < fr) {
        pts[worst] = expanded;
        val[worst] = fe;
      } else {
        pts[worst] = reflected;
        val[worst] = fr;
      }
      continue;
    }
    if (fr < val[second]) {
      pts[worst] = reflected;
      val[worst] = fr;
      continue;
    }
    const bool outside = fr < val[worst];
    const Vec contracted = outside ? Vec(centroid + 0.5 * (reflected - centroid))
                                   : Vec(centroid + 0.5 * (pts[worst] - centroid));
    const double fc = eval(contracted);
    if (fc < (outside ? fr : val[worst])) {
      pts[worst] = contracted;
      val[worst] = fc;
      continue;
    }
    // Shrink towards the best vertex.
    for (Eigen::Index i = 0; i <= d; ++i) {
      if (i == best) continue;
      pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
      val[i] = eval(pts[i]);
    }
  }

  const auto it = std::min_element(val.begin(), val.end());
  const auto idx = static_cast<std::size_t>(it - val.begin());
  return {pts[idx], *it, evals, converged};
}

}  // namespace sympcap::detail
