#include "hkd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "hkd/rng.hpp"

namespace hkd {

double chi_square_sf(double x, double k) {
    if (x < 0.0 || k <= 0.0) throw std::invalid_argument("chi_square_sf: bad arguments");
    if (x == 0.0) return 1.0;
    return boost::math::gamma_q(k / 2.0, x / 2.0);
}

ChiSquareResult chi_square_counts(const std::vector<uint64_t>& counts) {
    size_t cells = counts.size();
    if (cells < 2) throw std::invalid_argument("chi_square_counts: need >= 2 cells");
    uint64_t total = std::accumulate(counts.begin(), counts.end(), uint64_t{0});
    if (total < 5 * cells)
        throw std::invalid_argument("chi_square_counts: sample too small (< 5 per cell)");
    double expected = static_cast<double>(total) / static_cast<double>(cells);
    double stat = 0.0;
    for (uint64_t c : counts) {
        double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    ChiSquareResult r;
    r.statistic = stat;
    r.df = cells - 1;
    r.p_value = chi_square_sf(stat, static_cast<double>(r.df));
    return r;
}

ChiSquareResult chi_square_uniformity(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < 1280)
        throw std::invalid_argument("chi_square_uniformity: need >= 1280 bytes, got " +
                                    std::to_string(bytes.size()));
    std::vector<uint64_t> counts(256, 0);
    for (uint8_t b : bytes) ++counts[b];
    return chi_square_counts(counts);
}

double mutual_information_plugin(const std::vector<uint8_t>& bytes,
                                 const std::vector<uint8_t>& bits) {
    if (bytes.size() != bits.size() || bytes.empty())
        throw std::invalid_argument("mutual_information_plugin: mismatched or empty samples");
    size_t n = bytes.size();
    std::vector<uint64_t> joint(256 * 2, 0);
    std::vector<uint64_t> mb(256, 0);
    uint64_t ones = 0;
    for (size_t i = 0; i < n; ++i) {
        uint8_t v = bits[i] & 1;
        ++joint[bytes[i] * 2 + v];
        ++mb[bytes[i]];
        ones += v;
    }
    double pn = static_cast<double>(n);
    double pbit[2] = {(pn - static_cast<double>(ones)) / pn, static_cast<double>(ones) / pn};
    double mi = 0.0;
    for (int b = 0; b < 256; ++b) {
        if (mb[b] == 0) continue;
        double pb = static_cast<double>(mb[b]) / pn;
        for (int v = 0; v < 2; ++v) {
            uint64_t c = joint[b * 2 + v];
            if (c == 0 || pbit[v] == 0.0) continue;
            double pj = static_cast<double>(c) / pn;
            mi += pj * std::log2(pj / (pb * pbit[v]));
        }
    }
    return mi;
}

double mutual_information_corrected(const std::vector<uint8_t>& bytes,
                                    const std::vector<uint8_t>& bits,
                                    int calibration_trials, uint64_t seed) {
    if (calibration_trials < 1)
        throw std::invalid_argument("mutual_information_corrected: need >= 1 trial");
    double raw = mutual_information_plugin(bytes, bits);
    // Permuting the labels yields surrogates that are independent by
    // construction but share both marginals and the sample size, so the mean
    // surrogate MI estimates the plug-in bias at this configuration.
    double bias = 0.0;
    std::vector<uint8_t> shuffled = bits;
    for (int t = 0; t < calibration_trials; ++t) {
        Rng rng(substream_seed(seed, static_cast<uint64_t>(t)));
        for (size_t i = shuffled.size(); i > 1; --i)
            std::swap(shuffled[i - 1], shuffled[rng.next_below(i)]);
        bias += mutual_information_plugin(bytes, shuffled);
    }
    bias /= calibration_trials;
    return raw - bias;
}

}  // namespace hkd
