#pragma once

#include <string>

#include "nhf/domain.hpp"

namespace nhf {

/// Fields persist as a flat little-endian binary of 64-bit floats in
/// row-major interior order (x slowest, z fastest) at `<base>.f64`, plus a
/// JSON sidecar `<base>.json` recording the domain geometry, the exponent p, and
/// an FNV-1a checksum of the payload bytes.
void save_field(const std::string& path_base, const ScalarField& field, double p);

struct LoadedField {
    ScalarField field;
    double p = 0.0;
};

/// Loads and validates a field written by save_field; throws IoError on
/// checksum or shape mismatch.
LoadedField load_field(const std::string& path_base);

/// FNV-1a 64-bit checksum as a hex string ("fnv1a64:...").
std::string checksum_bytes(const void* data, std::size_t size);

} // namespace nhf
