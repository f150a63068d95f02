#include "hkd/throughput.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace hkd {

ThroughputReport compute_throughput(const ThroughputInputs& in) {
    if (in.physical_rate <= 0.0 || in.software_rate <= 0.0)
        throw std::invalid_argument("throughput: rates must be positive");
    if (in.physical_bits == 0 || in.expanded_bits == 0)
        throw std::invalid_argument("throughput: bit counts must be positive");
    ThroughputReport r;
    double n = static_cast<double>(in.physical_bits);
    double m = static_cast<double>(in.expanded_bits);
    r.physical_only_seconds = m / in.physical_rate;
    r.hybrid_physical_seconds = n / in.physical_rate;
    r.hybrid_software_seconds = m / in.software_rate;
    r.hybrid_total_seconds = r.hybrid_physical_seconds + r.hybrid_software_seconds;
    r.speedup = r.physical_only_seconds / r.hybrid_total_seconds;
    r.expansion_ratio = m / n;
    r.pad_cost_ratio = static_cast<double>(in.pool_bits_consumed) / m;
    return r;
}

void write_throughput_table(std::ostream& os, const ThroughputInputs& in,
                            const ThroughputReport& report) {
    char buf[64];
    auto row = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%-24s %.6f", key, v);
        os << buf << "\n";
    };
    os << "physical_bits " << in.physical_bits << "\n";
    os << "expanded_bits " << in.expanded_bits << "\n";
    os << "pool_bits_consumed " << in.pool_bits_consumed << "\n";
    row("physical_rate", in.physical_rate);
    row("software_rate", in.software_rate);
    row("physical_only_seconds", report.physical_only_seconds);
    row("hybrid_physical_seconds", report.hybrid_physical_seconds);
    row("hybrid_software_seconds", report.hybrid_software_seconds);
    row("hybrid_total_seconds", report.hybrid_total_seconds);
    row("speedup", report.speedup);
    row("expansion_ratio", report.expansion_ratio);
    row("pad_cost_ratio", report.pad_cost_ratio);
}

}  // namespace hkd
