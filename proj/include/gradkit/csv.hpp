#pragma once

#include <string>
#include <vector>

#include "gradkit/harness.hpp"

namespace gradkit {

// Shortest round-trip decimal form, locale-independent.
std::string format_double(double v);

// Header `step,epoch,loss,grad_norm,update_norm,wall_s`, one record per row.
// Without timing the wall_s column is omitted entirely, which makes bodies
// byte-comparable across runs.
std::string trace_csv(const Trace& t, bool include_timing);

// Header `algorithm,final_loss,test_loss,steps_to_threshold,wall_s,diverged`;
// missing values are empty fields.
std::string summary_csv(const std::vector<SummaryRow>& rows);

std::string summary_text(const std::vector<SummaryRow>& rows);

}  // namespace gradkit
