#pragma once

#include "seaway/kde.hpp"

#include <filesystem>

namespace seaway {

//! Writes `<prefix>.json` (header) and `<prefix>.bin` (nx*ny little-endian
//! f64 values, east index outer, north index inner).
void save_model(const KdeModel& model, const std::filesystem::path& prefix);

//! Reads a model from its JSON header; the payload path is taken from the
//! header relative to the header's directory. Throws FormatError on any
//! header/payload mismatch and IoError when files cannot be read.
KdeModel load_model(const std::filesystem::path& header);

}  // namespace seaway
