#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fastpoisson/core_types.hpp"
#include "fastpoisson/solver.hpp"

namespace fastpoisson::io {

/// Unreadable, unwritable or malformed files.
class IoError : public Error {
public:
    using Error::Error;
};

inline constexpr int kFormatVersion = 1;

enum class Precision { Float64, Float32 };

/// Header of the two-part field format. The header is a JSON document; the
/// payload is a separate file of raw little-endian scalars, axis 0 fastest.
struct FieldHeader {
    int version = kFormatVersion;
    Extents extents;
    std::vector<GridSpec> grids;  // optional, one per axis when present
    Precision precision = Precision::Float64;
    std::string payload;          // path relative to the header's directory
};

nlohmann::json to_json(const GridSpec& g);
GridSpec grid_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SolverConfig& c);
nlohmann::json header_to_json(const FieldHeader& h);
FieldHeader header_from_json(const nlohmann::json& j);

/// Writes `<dir>/<stem>.json` and `<dir>/<stem>.bin`.
void write_field(const std::filesystem::path& dir, const std::string& stem, const FieldBuffer<double>& field,
                 const std::vector<GridSpec>& grids, Precision precision = Precision::Float64);

struct LoadedField {
    FieldHeader header;
    FieldBuffer<double> data;  // converted to double
};

/// Reads a header and its payload. Throws IoError on any problem.
LoadedField read_field(const std::filesystem::path& header_path);

/// Serializes JSON with a trailing newline; throws IoError on failure.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace fastpoisson::io
