#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "lrp/metric.hpp"
#include "lrp/model.hpp"

namespace lrp {

inline constexpr std::uint32_t kFormatVersion = 1;

/// Binary edge file: "LRPE", version, d, beta, delta, delta', seed, window,
/// seed trace, edge count, 2d little-endian doubles per edge, and a trailing
/// FNV-1a 64 checksum over the edge records.
std::string encode_edge_file(const EdgeConfiguration& config);
EdgeConfiguration decode_edge_file(std::string_view bytes);
void write_edge_file(const std::string& path, const EdgeConfiguration& config);
EdgeConfiguration read_edge_file(const std::string& path);

/// Binary lattice file: "LRPL", version, params, touching flag, box corners,
/// edge count, 2d little-endian int64 site coordinates per edge, checksum.
std::string encode_lattice_file(const LatticeGraph& graph);
LatticeGraph decode_lattice_file(std::string_view bytes);
void write_lattice_file(const std::string& path, const LatticeGraph& graph);
LatticeGraph read_lattice_file(const std::string& path);

/// "edge" or "lattice" judging by the magic bytes; throws FormatError otherwise.
std::string sniff_sample_file(const std::string& path);

/// Raw little-endian float32 grid at `path` plus a JSON sidecar at
/// path + ".json" describing shape, window, resolution and source.
void write_raster(const std::string& path, const DistanceField& field,
                  const std::string& extra_json = "{}");
DistanceField read_raster(const std::string& path);

/// Shortest decimal form that round-trips a double ("%.17g").
std::string format_double(double v);

/// Writes to a temporary sibling file and renames it over `path`.
void atomic_write(const std::string& path, std::string_view bytes);
std::string read_file(const std::string& path);
/// FNV-1a 64 of the file contents as 16 hex digits.
std::string file_digest(const std::string& path);

}  // namespace lrp
