#pragma once

#include <string>

#include "bubble/modal_control.hpp"
#include "bubble/steklov.hpp"

namespace bubble {

/// Bit-exact double <-> string rendering used by the cache layer (hexfloats).
std::string hex_double(double v);
double parse_hex_double(const std::string& s);

/// Versioned, checksummed JSON containers keyed by the config fingerprint.
/// Loading refuses on version, fingerprint, or checksum mismatch.
void save_steklov(const SteklovOperator& P, const std::string& path);
SteklovOperator load_steklov(const std::string& path, const std::string& expected_fingerprint);

void save_feedback(const FeedbackLaw& law, const std::string& path);
FeedbackLaw load_feedback(const std::string& path, const std::string& expected_fingerprint);

}  // namespace bubble
