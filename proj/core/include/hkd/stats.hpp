#pragma once

#include <cstdint>
#include <vector>

namespace hkd {

struct ChiSquareResult {
    double statistic = 0.0;
    double p_value = 0.0;
    size_t df = 0;
};

/// Pearson chi-square of the sample against the uniform byte distribution,
/// 255 degrees of freedom. Requires >= 1280 bytes (5 expected per cell).
ChiSquareResult chi_square_uniformity(const std::vector<uint8_t>& bytes);

/// Chi-square against uniform over `cells` categories; `counts` are observed
/// frequencies summing to the sample size.
ChiSquareResult chi_square_counts(const std::vector<uint64_t>& counts);

/// Upper tail of the chi-square distribution: P[X > x] with k degrees of
/// freedom, via the regularized incomplete gamma function.
double chi_square_sf(double x, double k);

/// Plug-in mutual information in bits between a byte-valued and a bit-valued
/// sample, estimated from the empirical joint distribution.
double mutual_information_plugin(const std::vector<uint8_t>& bytes,
                                 const std::vector<uint8_t>& bits);

/// Bias-corrected plug-in MI: the estimator's bias is measured on
/// `calibration_trials` independent surrogates (bit labels permuted, which
/// preserves both marginals) and subtracted. Reported value can be slightly
/// negative for truly independent inputs.
double mutual_information_corrected(const std::vector<uint8_t>& bytes,
                                    const std::vector<uint8_t>& bits,
                                    int calibration_trials, uint64_t seed);

}  // namespace hkd
