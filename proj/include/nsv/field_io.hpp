#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "nsv/field.hpp"

namespace nsv {

/// A field plus the header metadata stored alongside it on disk.
struct Snapshot {
    SpectralField field;
    double alpha = 0.0;
    std::optional<double> time;
};

/// Text snapshot format "nsv-field 1"; see docs/formats.md.
void write_snapshot(std::ostream& os, const Snapshot& snap);
Snapshot read_snapshot(std::istream& is);

void save_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot load_snapshot(const std::filesystem::path& path);

}  // namespace nsv
