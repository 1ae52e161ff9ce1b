#include "fastpoisson/field_io.hpp"

#include <bit>
#include <fstream>

namespace fastpoisson::io {

namespace {

static_assert(std::endian::native == std::endian::little, "payload I/O assumes a little-endian host");

std::string_view precision_name(Precision p) { return p == Precision::Float64 ? "float64" : "float32"; }

std::size_t scalar_size(Precision p) { return p == Precision::Float64 ? 8 : 4; }

template <class T>
T required(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw IoError(std::string("field header: missing \"") + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("field header: bad \"") + key + "\": " + e.what());
    }
}

}  // namespace

nlohmann::json to_json(const GridSpec& g) {
    return {{"n", g.n}, {"length", g.length}, {"bc", to_string(g.bc)}, {"grid", to_string(g.kind)}};
}

GridSpec grid_from_json(const nlohmann::json& j) {
    GridSpec g;
    g.n = required<std::size_t>(j, "n");
    g.length = required<double>(j, "length");
    const auto bc = parse_boundary_condition(required<std::string>(j, "bc"));
    const auto kind = parse_grid_kind(required<std::string>(j, "grid"));
    if (!bc || !kind) throw IoError("field header: unknown boundary condition or grid kind");
    g.bc = *bc;
    g.kind = *kind;
    return g;
}

nlohmann::json to_json(const SolverConfig& c) {
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& g : c.axes) axes.push_back(to_json(g));
    return {{"dims", c.dims()}, {"axes", axes}, {"approximation", to_string(c.approximation)}};
}

nlohmann::json header_to_json(const FieldHeader& h) {
    nlohmann::json extents = nlohmann::json::array();
    for (int a = 0; a < h.extents.dims; ++a) extents.push_back(h.extents[static_cast<std::size_t>(a)]);
    nlohmann::json grids = nlohmann::json::array();
    for (const auto& g : h.grids) grids.push_back(to_json(g));
    return {{"version", h.version},       {"dims", h.extents.dims},
            {"extents", extents},         {"grids", grids},
            {"precision", precision_name(h.precision)}, {"byte_order", "little"},
            {"payload", h.payload}};
}

FieldHeader header_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw IoError("field header: not a JSON object");
    FieldHeader h;
    h.version = required<int>(j, "version");
    if (h.version != kFormatVersion)
        throw IoError("field header: unsupported format version " + std::to_string(h.version));
    const int dims = required<int>(j, "dims");
    const auto ext = required<std::vector<std::size_t>>(j, "extents");
    if (dims < 1 || dims > static_cast<int>(kMaxDims) || ext.size() != static_cast<std::size_t>(dims))
        throw IoError("field header: dims and extents disagree");
    Index3 n{1, 1, 1};
    for (std::size_t a = 0; a < ext.size(); ++a) {
        if (ext[a] == 0) throw IoError("field header: zero extent");
        n[a] = ext[a];
    }
    h.extents = Extents::of(dims, n);
    if (j.contains("grids")) {
        for (const auto& g : j.at("grids")) h.grids.push_back(grid_from_json(g));
        if (!h.grids.empty() && h.grids.size() != ext.size())
            throw IoError("field header: one grid spec per axis expected");
    }
    const auto precision = required<std::string>(j, "precision");
    if (precision == "float64") h.precision = Precision::Float64;
    else if (precision == "float32") h.precision = Precision::Float32;
    else throw IoError("field header: unknown precision \"" + precision + "\"");
    if (required<std::string>(j, "byte_order") != "little")
        throw IoError("field header: only little-endian payloads are supported");
    h.payload = required<std::string>(j, "payload");
    return h;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void write_field(const std::filesystem::path& dir, const std::string& stem, const FieldBuffer<double>& field,
                 const std::vector<GridSpec>& grids, Precision precision) {
    FieldHeader h;
    h.extents = field.extents();
    h.grids = grids;
    h.precision = precision;
    h.payload = stem + ".bin";

    std::ofstream out(dir / h.payload, std::ios::binary);
    if (!out) throw IoError("cannot open " + (dir / h.payload).string() + " for writing");
    if (precision == Precision::Float64) {
        out.write(reinterpret_cast<const char*>(field.data().data()),
                  static_cast<std::streamsize>(field.size() * sizeof(double)));
    } else {
        std::vector<float> narrow(field.data().begin(), field.data().end());
        out.write(reinterpret_cast<const char*>(narrow.data()),
                  static_cast<std::streamsize>(narrow.size() * sizeof(float)));
    }
    if (!out) throw IoError("failed writing " + (dir / h.payload).string());
    write_json(dir / (stem + ".json"), header_to_json(h));
}

LoadedField read_field(const std::filesystem::path& header_path) {
    LoadedField f{header_from_json(read_json(header_path)), {}};
    const auto payload = header_path.parent_path() / f.header.payload;
    std::ifstream in(payload, std::ios::binary | std::ios::ate);
    if (!in) throw IoError("cannot open payload " + payload.string());
    const auto bytes = static_cast<std::size_t>(in.tellg());
    const std::size_t count = f.header.extents.size();
    const std::size_t expected = count * scalar_size(f.header.precision);
    if (bytes != expected)
        throw IoError("payload " + payload.string() + " holds " + std::to_string(bytes) + " bytes, header " +
                      to_string(f.header.extents) + " needs " + std::to_string(expected));
    in.seekg(0);
    f.data = FieldBuffer<double>(f.header.extents);
    if (f.header.precision == Precision::Float64) {
        in.read(reinterpret_cast<char*>(f.data.data().data()), static_cast<std::streamsize>(expected));
    } else {
        std::vector<float> narrow(count);
        in.read(reinterpret_cast<char*>(narrow.data()), static_cast<std::streamsize>(expected));
        std::copy(narrow.begin(), narrow.end(), f.data.data().begin());
    }
    if (!in) throw IoError("failed reading " + payload.string());
    return f;
}

}  // namespace fastpoisson::io
