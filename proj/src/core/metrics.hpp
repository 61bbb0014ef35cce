#pragma once

#include <fstream>
#include <string>

#include "core/dimapg.hpp"

namespace dimapg {

// True iff the environment variable DIMAPG_DETERMINISTIC is set to "1".
// In that mode wallclock_s is written as 0 so repeated runs produce
// byte-identical metrics files.
bool deterministic_mode();

std::string metrics_header();
std::string format_metrics_row(const IterationRecord& rec);

// Appends one CSV row per iteration, flushed immediately so a crashed run
// still leaves usable metrics behind.
class MetricsWriter {
 public:
  explicit MetricsWriter(const std::string& path);
  void write(const IterationRecord& rec);

 private:
  std::string path_;
  std::ofstream out_;
};

}  // namespace dimapg
