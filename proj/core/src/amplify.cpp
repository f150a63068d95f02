#include "hkd/amplify.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace hkd {

BitString xor_amplify(const BitString& key, size_t rounds) {
    if (rounds > 63 || key.size() < (size_t{1} << rounds))
        throw std::invalid_argument("xor_amplify: key too short for requested rounds");
    BitString current = key;
    for (size_t r = 0; r < rounds; ++r) {
        BitString next;
        size_t pairs = current.size() / 2;
        for (size_t i = 0; i < pairs; ++i)
            next.append_bit(current.bit(2 * i) ^ current.bit(2 * i + 1));
        current = std::move(next);
    }
    return current;
}

double eve_knowledge_after_xor(double p) {
    if (p < 0.5 || p > 1.0)
        throw std::invalid_argument("eve_knowledge_after_xor: p must be in [0.5, 1]");
    return p * p + (1.0 - p) * (1.0 - p);
}

std::pair<BitString, AmplificationReport> amplify_with_report(const BitString& key,
                                                              size_t rounds, double p0) {
    AmplificationReport report;
    report.rounds = rounds;
    report.input_length = key.size();
    report.eve_prob_model.push_back(p0);
    double p = p0;
    for (size_t r = 0; r < rounds; ++r) {
        p = eve_knowledge_after_xor(p);
        report.eve_prob_model.push_back(p);
    }
    BitString out = xor_amplify(key, rounds);
    report.output_length = out.size();
    return {std::move(out), report};
}

void write_amplification_report(std::ostream& os, const AmplificationReport& report) {
    os << "round input_len output_len modeled_p\n";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9f", report.eve_prob_model[0]);
    os << "0 " << report.input_length << ' ' << report.input_length << ' ' << buf << '\n';
    size_t len = report.input_length;
    for (size_t r = 1; r <= report.rounds; ++r) {
        size_t next_len = len / 2;
        std::snprintf(buf, sizeof buf, "%.9f", report.eve_prob_model[r]);
        os << r << ' ' << len << ' ' << next_len << ' ' << buf << '\n';
        len = next_len;
    }
}

}  // namespace hkd
