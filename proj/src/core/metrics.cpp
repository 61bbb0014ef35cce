#include "core/metrics.hpp"

#include <cstdlib>
#include <cstring>

#include "core/error.hpp"
#include "core/text.hpp"

namespace dimapg {

bool deterministic_mode() {
  const char* v = std::getenv("DIMAPG_DETERMINISTIC");
  return v != nullptr && std::strcmp(v, "1") == 0;
}

std::string metrics_header() {
  return "iteration,episodes,mean_return,min_agent_return,loss_pre,loss_post,"
         "grad_norm,wallclock_s";
}

std::string format_metrics_row(const IterationRecord& rec) {
  const double wallclock = deterministic_mode() ? 0.0 : rec.wallclock_s;
  std::string row = std::to_string(rec.iteration);
  row += ',';
  row += std::to_string(rec.episodes);
  row += ',';
  row += format_double(rec.mean_return);
  row += ',';
  row += format_double(rec.min_agent_return);
  row += ',';
  row += format_double(rec.loss_pre);
  row += ',';
  row += format_double(rec.loss_post);
  row += ',';
  row += format_double(rec.grad_norm);
  row += ',';
  row += format_double(wallclock);
  return row;
}

MetricsWriter::MetricsWriter(const std::string& path)
    : path_(path), out_(path, std::ios::trunc) {
  if (!out_) throw IoError("cannot open '" + path + "' for writing");
  out_ << metrics_header() << '\n';
  out_.flush();
}

void MetricsWriter::write(const IterationRecord& rec) {
  out_ << format_metrics_row(rec) << '\n';
  out_.flush();
  if (!out_) throw IoError("failed writing metrics to '" + path_ + "'");
}

}  // namespace dimapg
