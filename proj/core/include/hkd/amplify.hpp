#pragma once

#include <iosfwd>
#include <vector>

#include "hkd/bitstring.hpp"

namespace hkd {

struct AmplificationReport {
    size_t rounds = 0;
    size_t input_length = 0;
    size_t output_length = 0;
    /// Modeled per-bit eavesdropper correct-guess probability, one entry per
    /// round boundary (rounds+1 entries, starting at the input probability).
    std::vector<double> eve_prob_model;
};

/// One round replaces the key with XORs of disjoint adjacent pairs
/// (bit 2i ^ bit 2i+1); a trailing odd bit is dropped. Output length halves
/// (floor) per round.
BitString xor_amplify(const BitString& key, size_t rounds);

/// Eavesdropper knowledge after XORing two independently known bits: she is
/// right about the pair's XOR iff she is right about both or wrong about
/// both, so p -> p^2 + (1-p)^2. Domain [0.5, 1].
double eve_knowledge_after_xor(double p);

std::pair<BitString, AmplificationReport> amplify_with_report(const BitString& key,
                                                              size_t rounds, double p0);

/// Plain-text table: "round input_len output_len modeled_p" per round.
void write_amplification_report(std::ostream& os, const AmplificationReport& report);

}  // namespace hkd
