#ifndef MIMOSD_CSV_HPP
#define MIMOSD_CSV_HPP

#include <ostream>
#include <string>
#include <vector>

#include "mimosd/harness.hpp"

namespace mimosd {

// Locale-independent, 10 significant digits, "inf" for infinities.
std::string format_metric(double value);

inline constexpr const char* kCsvHeader =
    "snr_db,ter,mu,n_est,clip_mode,block_index,l_cl,ber_measured,ber_estimated,"
    "avg_visited_nodes,frames";

// Header always, then one row per record in the given order.
void emit_csv(std::ostream& os, const std::vector<MetricsRecord>& records);

}  // namespace mimosd

#endif
