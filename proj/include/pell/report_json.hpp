#pragma once

#include <json.hpp>

#include "pell/verifier.hpp"

namespace pell::verifier {

/// Stable record schema ("schema": 1). Big integers are serialized as decimal
/// strings; JSON doubles would truncate beyond 53 bits.
nlohmann::ordered_json report_to_json(const VerificationReport& r,
                                      bool include_timings = true);

/// Human-readable multi-line summary.
std::string report_to_text(const VerificationReport& r);

}  // namespace pell::verifier
