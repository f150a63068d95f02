#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "hkd/bitstring.hpp"

namespace hkd {

/// Desk-scale model of a Kirchhoff-law--Johnson-noise style exchange. Both
/// parties randomly connect a low or high resistor each period; the wire
/// carries zero-mean Gaussian noise whose variance scales with the parallel
/// resistance, so the noise level separates LL / mixed / HH states while the
/// two mixed assignments stay indistinguishable.
struct KljnConfig {
    double r_low = 1.0;
    double r_high = 9.0;
    double noise_scale = 1.0;
    size_t samples_per_period = 10000;
    size_t periods = 0;
    uint64_t seed = 0;

    void validate() const;
};

enum class ResistorChoice : uint8_t { Low = 0, High = 1 };

enum class PeriodClass : uint8_t {
    SecureBit,   // statistic in the middle band: one low, one high
    DiscardLL,
    DiscardHH,
};

struct PeriodRecord {
    ResistorChoice alice_choice;
    ResistorChoice bob_choice;
    double measured_statistic = 0.0;  // shared empirical variance of the wire noise
    PeriodClass classification = PeriodClass::DiscardLL;
    std::optional<uint8_t> extracted_bit_alice;
    std::optional<uint8_t> extracted_bit_bob;
};

struct RawExchangeResult {
    BitString alice_key;
    BitString bob_key;
    std::vector<double> eve_observations;  // one statistic per period, Eve's whole view
    std::vector<PeriodRecord> periods;
    double error_rate = 0.0;  // fraction of secure positions where the keys disagree
};

/// Theoretical wire-noise variances for the three resistor states.
struct VarianceClasses {
    double ll;
    double mixed;
    double hh;
};
VarianceClasses theoretical_variances(const KljnConfig& config);

/// Threshold rule: band edges at the geometric means of adjacent class
/// variances; a statistic exactly on an edge goes to the lower band.
PeriodClass classify_period(double measured_statistic, const KljnConfig& config);

/// L maps to 0 at Alice and 1 at Bob, so an error-free mixed period gives
/// both parties the same bit. Calling this on a discarded period is a
/// contract violation.
uint8_t extract_bit(ResistorChoice own_choice, bool is_alice, PeriodClass classification);

/// Runs the full exchange. Bit-identical for identical config+seed; periods
/// use independent substreams of the seed.
RawExchangeResult run_exchange(const KljnConfig& config);

struct EveGuessResult {
    BitString guesses;       // one guess per secure period, in order
    double accuracy = 0.0;   // against Alice's key
    size_t secure_bits = 0;
};

/// Eve's best statistic-based rule on secure periods. The mixed states LH and
/// HL produce identically distributed statistics, so no rule can beat a fair
/// coin; the implemented rule thresholds the statistic on the mixed-class
/// center. If `oracle_choices` is true Eve is handed Alice's resistor choices
/// (broken model, test-only upper bound: accuracy 1).
EveGuessResult eve_best_guess(const std::vector<double>& eve_observations,
                              const std::vector<PeriodRecord>& periods,
                              const KljnConfig& config, bool oracle_choices = false);

/// Report format: header "KLJNv1 periods=<p> samples=<s> seed=<seed>", one
/// line per period "idx alice_choice bob_choice statistic classification",
/// footer "error_rate <rate>".
void write_exchange_report(std::ostream& os, const KljnConfig& config,
                           const RawExchangeResult& result);

}  // namespace hkd
