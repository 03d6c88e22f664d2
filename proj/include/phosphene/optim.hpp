#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace phosphene {

// Scalar cost over an n-dimensional parameter vector. Must be deterministic.
struct Objective {
  std::function<double(std::span<const double>)> evaluate;
  std::size_t dimension = 0;
};

struct OptimOptions {
  double f_tol = 1e-8;
  double x_tol = 1e-8;
  // Unset means 200 * n. Nelder-Mead counts simplex iterations, Powell counts
  // full sweeps over the direction set.
  std::optional<int> max_iters;
  // Absolute edge length of the initial simplex / initial bracket step.
  double initial_step = 0.1;
};

struct OptResult {
  std::vector<double> x_best;
  double f_best = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  std::string method;
  // Best objective value after each iteration; nonincreasing.
  std::vector<double> history;
};

// Simplex method with reflection 1, expansion 2, contraction 0.5 and shrink
// 0.5. Stops once the spread of simplex values is within f_tol and the
// simplex fits inside an x_tol box, or when the iteration budget runs out.
// Throws ArgumentError if f(x0) is not finite or x0 has the wrong size.
OptResult nelder_mead(const Objective& obj, std::span<const double> x0,
                      const OptimOptions& opts = {});

// Powell's direction-set method with Brent line minimization.
OptResult powell(const Objective& obj, std::span<const double> x0, const OptimOptions& opts = {});

// Nelder-Mead followed by Powell from its result; returns the better of the
// two (the Powell result on ties).
OptResult minimize_chain(const Objective& obj, std::span<const double> x0,
                         const OptimOptions& opts = {});

// Maps an unconstrained vector onto a box per coordinate with
// lo + (hi - lo) * (1 + sin u) / 2, so the optimizers above can work without
// constraints. Unlike a logistic map it has no flat tails, so a start sitting
// on a bound can still move off it.
class BoxTransform {
 public:
  BoxTransform(std::vector<double> lower, std::vector<double> upper);

  std::size_t dimension() const { return lower_.size(); }
  std::span<const double> lower() const { return lower_; }
  std::span<const double> upper() const { return upper_; }

  std::vector<double> to_box(std::span<const double> free) const;
  // Points outside the box are clamped onto it first; the result lies in
  // [-pi/2, pi/2].
  std::vector<double> to_free(std::span<const double> boxed) const;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

}  // namespace phosphene
