#pragma once

#include <string>

#include "qgate/core.hpp"

namespace qgate {

/// Reads a protocol file: {"pulses":[{"area":<rad>,"phi":<rad>}, ...]}.
/// A pulse may instead carry explicit {"a":..,"b":..}; those are checked for
/// unit norm at 1e-9 and renormalized. Throws std::runtime_error on malformed
/// input.
PulseSequence read_protocol(const std::string& path);

void write_protocol(const PulseSequence& seq, const std::string& path);

}  // namespace qgate
