#include "gradkit/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace gradkit {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trace_csv(const Trace& t, bool include_timing) {
  std::string out = include_timing ? "step,epoch,loss,grad_norm,update_norm,wall_s\n"
                                   : "step,epoch,loss,grad_norm,update_norm\n";
  for (const TraceRecord& r : t.records) {
    out += std::to_string(r.step);
    out += ',';
    out += std::to_string(r.epoch);
    out += ',';
    out += format_double(r.loss);
    out += ',';
    out += format_double(r.grad_norm);
    out += ',';
    out += format_double(r.update_norm);
    if (include_timing) {
      out += ',';
      out += format_double(r.wall_s);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string field_or_empty(double v) {
  return std::isfinite(v) ? format_double(v) : std::string();
}

}  // namespace

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "algorithm,final_loss,test_loss,steps_to_threshold,wall_s,diverged\n";
  for (const SummaryRow& r : rows) {
    out += r.algorithm;
    out += ',';
    out += field_or_empty(r.final_loss);
    out += ',';
    out += field_or_empty(r.test_loss);
    out += ',';
    if (r.steps_to_threshold >= 0) out += std::to_string(r.steps_to_threshold);
    out += ',';
    out += format_double(r.wall_s);
    out += ',';
    out += r.diverged ? "true" : "false";
    out += '\n';
  }
  return out;
}

std::string summary_text(const std::vector<SummaryRow>& rows) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %12s %12s %10s %10s %9s\n", "algorithm",
                "final_loss", "test_loss", "steps_thr", "wall_s", "diverged");
  out += line;
  for (const SummaryRow& r : rows) {
    if (!r.error.empty()) {
      std::snprintf(line, sizeof line, "%-10s error: %s\n", r.algorithm.c_str(),
                    r.error.c_str());
      out += line;
      continue;
    }
    char fl[24] = "-", tl[24] = "-";
    if (std::isfinite(r.final_loss)) std::snprintf(fl, sizeof fl, "%.6g", r.final_loss);
    if (std::isfinite(r.test_loss)) std::snprintf(tl, sizeof tl, "%.6g", r.test_loss);
    const std::string st =
        r.steps_to_threshold >= 0 ? std::to_string(r.steps_to_threshold) : "-";
    std::snprintf(line, sizeof line, "%-10s %12s %12s %10s %10.4f %9s\n",
                  r.algorithm.c_str(), fl, tl, st.c_str(), r.wall_s,
                  r.diverged ? "true" : "false");
    out += line;
  }
  return out;
}

}  // namespace gradkit
