#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "phosphene/data.hpp"
#include "phosphene/fit.hpp"
#include "phosphene/params.hpp"

namespace phosphene {

using Spectrum = std::vector<std::complex<double>>;

// Forward DFT, X[k] = sum_j x[j] exp(-2 pi i j k / n). Radix-2 FFT for powers
// of two, Bluestein's chirp-z otherwise. Throws ArgumentError if n < 2.
Spectrum dft(std::span<const double> samples);

// Inverse DFT including the 1/n normalization.
Spectrum inverse_dft(std::span<const std::complex<double>> spectrum);

// The m positive-frequency bins of largest magnitude (DC excluded, conjugate
// pairs counted once, ties to the lower bin) as real cosine terms for a grid
// of spacing dt. Throws ArgumentError unless 1 <= m <= n/2.
std::vector<SpectrumComponent> top_m_components(std::span<const std::complex<double>> spectrum,
                                                int m, double dt);

// k2 + sum_i amplitude_i cos(2 pi freq_i t + phase_i).
double eval_series(std::span<const SpectrumComponent> components, double k2, double t);

// Smallest i >= start_index with samples[i-1] <= samples[i] >= samples[i+1],
// or start_index when there is none.
std::size_t first_local_max(std::span<const double> samples, std::size_t start_index);

// Piecewise spectral time course: linear rise to k1 at t1, linear connector
// to the decay series' first local maximum t2 strictly after t1 (one sample
// later when the series has none), the series until t3, then 0. Clamped at
// >= 0.
TimeCourse spectral_predict(const SpectralParams& params, const Stimulus& stimulus,
                            const Grid& grid);

// Time after the peak from which the trace stays below 2% of its maximum,
// or the grid end when it never does.
double flatline_time(const TimeCourse& observed);

// Fits one trial: components come from the DFT of the observed decay, k2
// and t3 are refined by the optimizer. Results are nested in m, so the
// objective never increases with m. Throws ArgumentError for m outside
// [1, kMaxComponents] and FitError for an all-zero trial.
FitResult spectral_fit_descriptive(const Trial& trial, int m, const FitOptions& options = {});

// Fits one parameter set to all training trials. Components start from the
// DFT of the onset-aligned mean curve and every parameter is refined; t3 is
// anchored to stimulus offset. Frequencies stay at or above the DFT's bin-1
// frequency for that curve: slower terms act like trends that look fine on
// short training trials and run away on longer held-out ones.
// `extra_starts` (offset-anchored, at most m components) join the starts of
// the step whose component count they match.
FitResult spectral_fit_predictive(TrialSet training, int m, const FitOptions& options = {},
                                  std::span<const SpectralParams> extra_starts = {});

// The nested sequence of predictive fits for m = 1 .. m_max. Element j-1
// holds the fit with j components; objectives are nonincreasing.
std::vector<FitResult> spectral_fit_predictive_path(TrialSet training, int m_max,
                                                    const FitOptions& options = {},
                                                    std::span<const SpectralParams> extra_starts = {});

}  // namespace phosphene
