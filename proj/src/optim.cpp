#include "phosphene/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "phosphene/errors.hpp"

namespace phosphene {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Counts evaluations and maps NaN to +inf so comparisons stay ordered.
class CountingObjective {
 public:
  explicit CountingObjective(const Objective& obj) : obj_(obj) {}

  double operator()(std::span<const double> x) {
    ++count_;
    const double f = obj_.evaluate(x);
    return std::isnan(f) ? kInf : f;
  }
  int count() const { return count_; }

 private:
  const Objective& obj_;
  int count_ = 0;
};

void check_start(const Objective& obj, std::span<const double> x0) {
  if (!obj.evaluate) throw ArgumentError("objective has no evaluate function");
  if (obj.dimension == 0) throw ArgumentError("objective dimension must be >= 1");
  if (x0.size() != obj.dimension) throw ArgumentError("x0 size does not match objective dimension");
  for (double v : x0) {
    if (!std::isfinite(v)) throw ArgumentError("x0 must be finite");
  }
}

int iteration_budget(const OptimOptions& opts, std::size_t n) {
  return opts.max_iters.value_or(200 * static_cast<int>(n));
}

// One-dimensional minimization of phi(alpha) = f(x + alpha * d): golden
// bracketing from [0, 1] followed by Brent's method.
struct LineMinimum {
  double alpha = 0.0;
  double f = 0.0;
};

LineMinimum line_minimize(CountingObjective& f, std::span<const double> x,
                          std::span<const double> d, double f_at_zero) {
  constexpr double kGold = 1.618033988749895;
  constexpr double kCGold = 0.3819660112501051;
  constexpr double kTol = 1e-8;
  constexpr double kZeps = 1e-12;
  constexpr int kMaxExpand = 60;
  constexpr int kMaxBrent = 100;

  std::vector<double> probe(x.size());
  auto phi = [&](double alpha) {
    for (std::size_t i = 0; i < x.size(); ++i) probe[i] = x[i] + alpha * d[i];
    return f(probe);
  };

  LineMinimum best{0.0, f_at_zero};
  auto note = [&](double alpha, double value) {
    if (value < best.f) best = {alpha, value};
  };

  double a = 0.0, fa = f_at_zero;
  double b = 1.0, fb = phi(b);
  note(b, fb);
  if (fb > fa) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  double c = b + kGold * (b - a);
  double fc = phi(c);
  note(c, fc);
  for (int k = 0; k < kMaxExpand && fb > fc; ++k) {
    a = b;
    fa = fb;
    b = c;
    fb = fc;
    c = b + kGold * (b - a);
    fc = phi(c);
    note(c, fc);
  }
  if (fb > fc) return best;  // unbounded descent within the expansion budget

  // Brent on [lo, hi] with the interior point b.
  double lo = std::min(a, c), hi = std::max(a, c);
  double xb = b, w = b, v = b;
  double fx = fb, fw = fb, fv = fb;
  double e = 0.0, step = 0.0;
  for (int it = 0; it < kMaxBrent; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double tol1 = kTol * std::abs(xb) + kZeps;
    const double tol2 = 2.0 * tol1;
    if (std::abs(xb - mid) <= tol2 - 0.5 * (hi - lo)) break;
    bool golden = true;
    if (std::abs(e) > tol1) {
      double r = (xb - w) * (fx - fv);
      double q = (xb - v) * (fx - fw);
      double p = (xb - v) * q - (xb - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      e = step;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (lo - xb) && p < q * (hi - xb)) {
        step = p / q;
        const double u = xb + step;
        if (u - lo < tol2 || hi - u < tol2) step = std::copysign(tol1, mid - xb);
        golden = false;
      }
    }
    if (golden) {
      e = (xb >= mid) ? lo - xb : hi - xb;
      step = kCGold * e;
    }
    const double u = std::abs(step) >= tol1 ? xb + step : xb + std::copysign(tol1, step);
    const double fu = phi(u);
    note(u, fu);
    if (fu <= fx) {
      if (u >= xb) lo = xb; else hi = xb;
      v = w; fv = fw;
      w = xb; fw = fx;
      xb = u; fx = fu;
    } else {
      if (u < xb) lo = u; else hi = u;
      if (fu <= fw || w == xb) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == xb || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return best;
}

}  // namespace

OptResult nelder_mead(const Objective& obj, std::span<const double> x0, const OptimOptions& opts) {
  check_start(obj, x0);
  CountingObjective f(obj);
  const std::size_t n = obj.dimension;
  const double f0 = f(x0);
  if (!std::isfinite(f0)) throw ArgumentError("objective is not finite at x0");

  OptResult result;
  result.method = "nelder-mead";
  result.x_best.assign(x0.begin(), x0.end());
  result.f_best = f0;
  const int budget = iteration_budget(opts, n);
  if (budget <= 0) {
    result.evaluations = f.count();
    return result;
  }

  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

  std::vector<std::vector<double>> simplex(n + 1, std::vector<double>(x0.begin(), x0.end()));
  std::vector<double> values(n + 1, f0);
  for (std::size_t k = 0; k < n; ++k) {
    simplex[k + 1][k] += opts.initial_step;
    values[k + 1] = f(simplex[k + 1]);
  }

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> s(n + 1);
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      s[i] = std::move(simplex[order[i]]);
      v[i] = values[order[i]];
    }
    simplex = std::move(s);
    values = std::move(v);
  };
  auto point = [&](double coef, std::vector<double>& out) {
    const auto& worst = simplex[n];
    for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + coef * (centroid[j] - worst[j]);
  };

  sort_simplex();
  int iter = 0;
  while (true) {
    double spread = values[n] - values[0];
    double size = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        size = std::max(size, std::abs(simplex[i][j] - simplex[0][j]));
      }
    }
    // Both tests must hold: a symmetric simplex straddling the minimum has
    // zero spread while still being wide.
    if (spread <= opts.f_tol && size <= opts.x_tol) {
      result.converged = true;
      break;
    }
    if (iter >= budget) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    point(kReflect, xr);
    const double fr = f(xr);
    bool shrink = false;
    if (fr < values[0]) {
      point(kReflect * kExpand, xe);
      const double fe = f(xe);
      if (fe < fr) {
        simplex[n] = xe;
        values[n] = fe;
      } else {
        simplex[n] = xr;
        values[n] = fr;
      }
    } else if (fr < values[n - 1]) {
      simplex[n] = xr;
      values[n] = fr;
    } else if (fr < values[n]) {
      point(kReflect * kContract, xc);
      const double fc = f(xc);
      if (fc <= fr) {
        simplex[n] = xc;
        values[n] = fc;
      } else {
        shrink = true;
      }
    } else {
      point(-kContract, xc);
      const double fc = f(xc);
      if (fc < values[n]) {
        simplex[n] = xc;
        values[n] = fc;
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          simplex[i][j] = simplex[0][j] + kShrink * (simplex[i][j] - simplex[0][j]);
        }
        values[i] = f(simplex[i]);
      }
    }
    sort_simplex();
    ++iter;
    result.history.push_back(values[0]);
  }

  result.iterations = iter;
  result.evaluations = f.count();
  if (values[0] < f0) {
    result.x_best = simplex[0];
    result.f_best = values[0];
  }
  return result;
}

OptResult powell(const Objective& obj, std::span<const double> x0, const OptimOptions& opts) {
  check_start(obj, x0);
  CountingObjective f(obj);
  const std::size_t n = obj.dimension;
  const double f0 = f(x0);
  if (!std::isfinite(f0)) throw ArgumentError("objective is not finite at x0");

  OptResult result;
  result.method = "powell";
  const int budget = iteration_budget(opts, n);

  std::vector<std::vector<double>> directions(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) directions[i][i] = 1.0;

  std::vector<double> x(x0.begin(), x0.end());
  double fval = f0;
  std::vector<double> x_start(n), extrapolated(n), new_dir(n);

  auto move_along = [&](const std::vector<double>& d) {
    const LineMinimum lm = line_minimize(f, x, d, fval);
    if (lm.f < fval) {
      for (std::size_t j = 0; j < n; ++j) x[j] += lm.alpha * d[j];
      fval = lm.f;
    }
    return lm.alpha;
  };

  int iter = 0;
  while (iter < budget) {
    const double f_start = fval;
    x_start = x;
    double biggest_drop = 0.0;
    std::size_t biggest_index = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double before = fval;
      move_along(directions[i]);
      if (before - fval > biggest_drop) {
        biggest_drop = before - fval;
        biggest_index = i;
      }
    }
    ++iter;
    result.history.push_back(fval);

    double moved = 0.0;
    for (std::size_t j = 0; j < n; ++j) moved = std::max(moved, std::abs(x[j] - x_start[j]));
    if (2.0 * (f_start - fval) <= opts.f_tol * (std::abs(f_start) + std::abs(fval)) + 1e-20 ||
        moved <= opts.x_tol) {
      result.converged = true;
      break;
    }

    for (std::size_t j = 0; j < n; ++j) {
      new_dir[j] = x[j] - x_start[j];
      extrapolated[j] = 2.0 * x[j] - x_start[j];
    }
    const double f_extra = f(extrapolated);
    if (f_start > f_extra) {
      const double a = f_start - fval - biggest_drop;
      const double b = f_start - f_extra;
      const double t = 2.0 * (f_start + f_extra - 2.0 * fval) * a * a - biggest_drop * b * b;
      if (t < 0.0) {
        const double alpha = move_along(new_dir);
        if (alpha != 0.0) {
          directions[biggest_index] = directions[n - 1];
          directions[n - 1] = new_dir;
        }
      }
    }
  }
  // A zero budget never enters the loop; report it as not converged.
  result.iterations = iter;
  result.evaluations = f.count();
  result.x_best = x;
  result.f_best = fval;
  return result;
}

OptResult minimize_chain(const Objective& obj, std::span<const double> x0, const OptimOptions& opts) {
  OptResult first = nelder_mead(obj, x0, opts);
  OptResult second = powell(obj, first.x_best, opts);
  OptResult out = second.f_best <= first.f_best ? std::move(second) : first;
  out.method = "nelder-mead+powell";
  out.iterations = first.iterations + second.iterations;
  out.evaluations = first.evaluations + second.evaluations;
  out.history = first.history;
  out.history.insert(out.history.end(), second.history.begin(), second.history.end());
  return out;
}

BoxTransform::BoxTransform(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) throw ArgumentError("box bounds differ in size");
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] <= upper_[i]) || !std::isfinite(lower_[i]) || !std::isfinite(upper_[i])) {
      throw ArgumentError("box bounds must be finite with lower <= upper");
    }
  }
}

std::vector<double> BoxTransform::to_box(std::span<const double> free) const {
  std::vector<double> out(free.size());
  for (std::size_t i = 0; i < free.size(); ++i) {
    const double width = upper_[i] - lower_[i];
    out[i] = std::clamp(lower_[i] + 0.5 * width * (1.0 + std::sin(free[i])), lower_[i], upper_[i]);
  }
  return out;
}

std::vector<double> BoxTransform::to_free(std::span<const double> boxed) const {
  std::vector<double> out(boxed.size());
  for (std::size_t i = 0; i < boxed.size(); ++i) {
    const double width = upper_[i] - lower_[i];
    if (width == 0.0) {
      out[i] = 0.0;
      continue;
    }
    const double unit = std::clamp(2.0 * (boxed[i] - lower_[i]) / width - 1.0, -1.0, 1.0);
    out[i] = std::asin(unit);
  }
  return out;
}

}  // namespace phosphene
