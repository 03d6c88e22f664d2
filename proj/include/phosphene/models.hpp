#pragma once

#include "phosphene/baseline.hpp"
#include "phosphene/data.hpp"
#include "phosphene/exponential.hpp"
#include "phosphene/fit.hpp"
#include "phosphene/params.hpp"
#include "phosphene/spectral.hpp"

namespace phosphene {

// Evaluates whichever model `params` holds on `grid`.
TimeCourse predict(const ModelParams& params, const Stimulus& stimulus, const Grid& grid);

// Fits a single trial. `m` is only used by the spectral model.
FitResult fit_descriptive(ModelKind kind, const Trial& trial, int m, const FitOptions& options = {});

// Fits one parameter set to a training set.
FitResult fit_predictive(ModelKind kind, TrialSet training, int m, const FitOptions& options = {});

}  // namespace phosphene
