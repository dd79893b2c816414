#pragma once

#include <string>

#include "submatch/pipeline.hpp"

namespace submatch {

// JSON text of a report; stage_timings is {} unless timings were recorded.
std::string report_to_json(const Report& report, bool include_timings, int indent = 2);

}  // namespace submatch
