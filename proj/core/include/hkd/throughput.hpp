#pragma once

#include <cstdint>
#include <iosfwd>

namespace hkd {

struct ThroughputInputs {
    uint64_t physical_bits = 0;       // pool bits produced by the physical layer (N)
    uint64_t expanded_bits = 0;       // software-expanded key bits delivered (M)
    uint64_t pool_bits_consumed = 0;  // pad spent to drive the expansion
    double physical_rate = 0.0;       // physical-exchange throughput, bits/s
    double software_rate = 0.0;       // expansion throughput, bits/s
};

struct ThroughputReport {
    double physical_only_seconds = 0.0;    // delivering M bits physically
    double hybrid_physical_seconds = 0.0;  // physical share of the hybrid path
    double hybrid_software_seconds = 0.0;  // software share of the hybrid path
    double hybrid_total_seconds = 0.0;
    double speedup = 0.0;           // physical-only time over hybrid time
    double expansion_ratio = 0.0;   // M / N
    double pad_cost_ratio = 0.0;    // pool bits consumed per delivered bit
};

ThroughputReport compute_throughput(const ThroughputInputs& in);

/// Plain-text key/value table, one metric per line.
void write_throughput_table(std::ostream& os, const ThroughputInputs& in,
                            const ThroughputReport& report);

}  // namespace hkd
