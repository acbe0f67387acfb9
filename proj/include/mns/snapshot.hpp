#pragma once

#include <filesystem>
#include <string>

#include "mns/fields.hpp"

namespace mns::fields {

inline constexpr std::uint32_t kSnapshotVersion = 1;

struct Snapshot {
  VectorField field;
  double time = 0.0;
};

/// MNSF layout: "MNSF", u32 version, u32 N, f64 L, f64 t, then the three
/// components as N^3 little-endian f64 each, x index fastest.
/// The file is written to a temporary sibling and renamed into place.
void write_snapshot(const std::filesystem::path& path, const VectorField& u, double t);
Snapshot read_snapshot(const std::filesystem::path& path);

/// Replace path's contents atomically (temporary file plus rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace mns::fields
