#include "mimosd/csv.hpp"

#include <charconv>
#include <cmath>

namespace mimosd {

std::string format_metric(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 10);
  return std::string(buf, res.ptr);
}

void emit_csv(std::ostream& os, const std::vector<MetricsRecord>& records) {
  os << kCsvHeader << "\n";
  for (const MetricsRecord& r : records) {
    os << format_metric(r.snr_db) << ',' << format_metric(r.ter) << ',' << format_metric(r.mu)
       << ',' << r.n_est << ',' << render_clip_spec(r.clip_mode, r.fixed_clip) << ','
       << r.block_index << ',' << format_metric(r.l_cl) << ',' << format_metric(r.ber_measured)
       << ',' << format_metric(r.ber_estimated) << ',' << format_metric(r.avg_visited_nodes)
       << ',' << r.frames << "\n";
  }
}

}  // namespace mimosd
