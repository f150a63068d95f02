#include "hkd/kljn.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "hkd/rng.hpp"

namespace hkd {

void KljnConfig::validate() const {
    if (r_low <= 0.0 || r_high <= 0.0) throw std::invalid_argument("kljn: resistances must be positive");
    if (r_low >= r_high) throw std::invalid_argument("kljn: r_low must be strictly below r_high");
    if (noise_scale <= 0.0) throw std::invalid_argument("kljn: noise_scale must be positive");
    if (samples_per_period < 2) throw std::invalid_argument("kljn: samples_per_period must be >= 2");
    if (periods == 0) throw std::invalid_argument("kljn: periods must be >= 1");
}

namespace {

double parallel(double r1, double r2) { return r1 * r2 / (r1 + r2); }

const char* class_name(PeriodClass c) {
    switch (c) {
        case PeriodClass::SecureBit: return "secure";
        case PeriodClass::DiscardLL: return "discard-ll";
        case PeriodClass::DiscardHH: return "discard-hh";
    }
    return "?";
}

}  // namespace

VarianceClasses theoretical_variances(const KljnConfig& config) {
    return {
        config.noise_scale * parallel(config.r_low, config.r_low),
        config.noise_scale * parallel(config.r_low, config.r_high),
        config.noise_scale * parallel(config.r_high, config.r_high),
    };
}

PeriodClass classify_period(double measured_statistic, const KljnConfig& config) {
    if (measured_statistic < 0.0)
        throw std::invalid_argument("classify_period: negative statistic");
    VarianceClasses v = theoretical_variances(config);
    double lower_edge = std::sqrt(v.ll * v.mixed);
    double upper_edge = std::sqrt(v.mixed * v.hh);
    if (measured_statistic <= lower_edge) return PeriodClass::DiscardLL;
    if (measured_statistic <= upper_edge) return PeriodClass::SecureBit;
    return PeriodClass::DiscardHH;
}

uint8_t extract_bit(ResistorChoice own_choice, bool is_alice, PeriodClass classification) {
    if (classification != PeriodClass::SecureBit)
        throw std::logic_error("extract_bit: called on a discarded period");
    uint8_t high = own_choice == ResistorChoice::High ? 1 : 0;
    return is_alice ? high : static_cast<uint8_t>(1 - high);
}

RawExchangeResult run_exchange(const KljnConfig& config) {
    config.validate();
    RawExchangeResult result;
    result.periods.reserve(config.periods);
    result.eve_observations.reserve(config.periods);

    size_t disagreements = 0;
    for (size_t idx = 0; idx < config.periods; ++idx) {
        Rng rng(substream_seed(config.seed, idx));
        auto alice = rng.next_bit() ? ResistorChoice::High : ResistorChoice::Low;
        auto bob = rng.next_bit() ? ResistorChoice::High : ResistorChoice::Low;

        double r_a = alice == ResistorChoice::High ? config.r_high : config.r_low;
        double r_b = bob == ResistorChoice::High ? config.r_high : config.r_low;
        double sigma = std::sqrt(config.noise_scale * parallel(r_a, r_b));

        // Both parties measure the same wire, so they share one variance
        // estimate per period (known zero mean).
        double sum_sq = 0.0;
        for (size_t s = 0; s < config.samples_per_period; ++s) {
            double x = sigma * rng.next_normal();
            sum_sq += x * x;
        }
        double statistic = sum_sq / static_cast<double>(config.samples_per_period);

        PeriodRecord rec;
        rec.alice_choice = alice;
        rec.bob_choice = bob;
        rec.measured_statistic = statistic;
        rec.classification = classify_period(statistic, config);
        if (rec.classification == PeriodClass::SecureBit) {
            rec.extracted_bit_alice = extract_bit(alice, true, rec.classification);
            rec.extracted_bit_bob = extract_bit(bob, false, rec.classification);
            result.alice_key.append_bit(*rec.extracted_bit_alice);
            result.bob_key.append_bit(*rec.extracted_bit_bob);
            if (*rec.extracted_bit_alice != *rec.extracted_bit_bob) ++disagreements;
        }
        result.eve_observations.push_back(statistic);
        result.periods.push_back(rec);
    }
    result.error_rate = result.alice_key.empty()
                            ? 0.0
                            : static_cast<double>(disagreements) / result.alice_key.size();
    return result;
}

EveGuessResult eve_best_guess(const std::vector<double>& eve_observations,
                              const std::vector<PeriodRecord>& periods,
                              const KljnConfig& config, bool oracle_choices) {
    if (eve_observations.size() != periods.size())
        throw std::invalid_argument("eve_best_guess: observations must cover all periods");
    VarianceClasses v = theoretical_variances(config);
    EveGuessResult out;
    size_t correct = 0;
    for (size_t i = 0; i < periods.size(); ++i) {
        if (periods[i].classification != PeriodClass::SecureBit) continue;
        uint8_t guess;
        if (oracle_choices) {
            guess = extract_bit(periods[i].alice_choice, true, PeriodClass::SecureBit);
        } else {
            // Within the secure band the statistic's distribution is the same
            // for LH and HL; thresholding on the class center is as good as
            // any rule available to Eve.
            guess = eve_observations[i] >= v.mixed ? 1 : 0;
        }
        out.guesses.append_bit(guess);
        ++out.secure_bits;
        if (periods[i].extracted_bit_alice && guess == *periods[i].extracted_bit_alice) ++correct;
    }
    out.accuracy = out.secure_bits == 0 ? 0.0 : static_cast<double>(correct) / out.secure_bits;
    return out;
}

void write_exchange_report(std::ostream& os, const KljnConfig& config,
                           const RawExchangeResult& result) {
    os << "KLJNv1 periods=" << config.periods << " samples=" << config.samples_per_period
       << " seed=" << config.seed << '\n';
    char buf[64];
    for (size_t i = 0; i < result.periods.size(); ++i) {
        const auto& p = result.periods[i];
        std::snprintf(buf, sizeof buf, "%.9e", p.measured_statistic);
        os << i << ' ' << (p.alice_choice == ResistorChoice::High ? 'H' : 'L') << ' '
           << (p.bob_choice == ResistorChoice::High ? 'H' : 'L') << ' ' << buf << ' '
           << class_name(p.classification) << '\n';
    }
    std::snprintf(buf, sizeof buf, "%.9e", result.error_rate);
    os << "error_rate " << buf << '\n';
}

}  // namespace hkd
