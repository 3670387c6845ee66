#include "nhf/field_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "nhf/errors.hpp"

namespace nhf {

namespace {

std::string json_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Minimal extraction for the flat sidecar schema written below; avoids a
// JSON dependency in the core library.
double extract_number(const std::string& text, const std::string& key) {
    const std::string needle = "\"" + key + "\":";
    const std::size_t pos = text.find(needle);
    if (pos == std::string::npos) throw IoError("sidecar missing key: " + key);
    return std::strtod(text.c_str() + pos + needle.size(), nullptr);
}

std::string extract_string(const std::string& text, const std::string& key) {
    const std::string needle = "\"" + key + "\":\"";
    const std::size_t pos = text.find(needle);
    if (pos == std::string::npos) throw IoError("sidecar missing key: " + key);
    const std::size_t start = pos + needle.size();
    const std::size_t end = text.find('"', start);
    if (end == std::string::npos) throw IoError("sidecar truncated at key: " + key);
    return text.substr(start, end - start);
}

} // namespace

std::string checksum_bytes(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001b3ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(hash));
    return buf;
}

void save_field(const std::string& path_base, const ScalarField& field, double p) {
    const Domain& dom = field.domain();
    const std::size_t bytes = field.size() * sizeof(double);
    {
        std::ofstream os(path_base + ".f64", std::ios::binary);
        if (!os) throw IoError("cannot open for writing: " + path_base + ".f64");
        os.write(reinterpret_cast<const char*>(field.data()),
                 static_cast<std::streamsize>(bytes));
        if (!os.good()) throw IoError("failed writing: " + path_base + ".f64");
    }
    std::ostringstream sidecar;
    sidecar << "{\"lengths\":[" << json_num(dom.lengths()[0]) << ','
            << json_num(dom.lengths()[1]) << ',' << json_num(dom.lengths()[2])
            << "],\"m\":" << dom.resolution() << ",\"p\":" << json_num(p)
            << ",\"count\":" << field.size() << ",\"checksum\":\""
            << checksum_bytes(field.data(), bytes) << "\"}";
    std::ofstream os(path_base + ".json");
    if (!os) throw IoError("cannot open for writing: " + path_base + ".json");
    os << sidecar.str() << '\n';
    if (!os.good()) throw IoError("failed writing: " + path_base + ".json");
}

LoadedField load_field(const std::string& path_base) {
    std::string sidecar;
    {
        std::ifstream is(path_base + ".json");
        if (!is) throw IoError("cannot open: " + path_base + ".json");
        std::ostringstream ss;
        ss << is.rdbuf();
        sidecar = ss.str();
    }
    const double lx = [&] {
        const std::string needle = "\"lengths\":[";
        const std::size_t pos = sidecar.find(needle);
        if (pos == std::string::npos) throw IoError("sidecar missing lengths");
        return std::strtod(sidecar.c_str() + pos + needle.size(), nullptr);
    }();
    // remaining two lengths follow the first comma-separated
    std::array<double, 3> lengths{lx, 0.0, 0.0};
    {
        const std::size_t open = sidecar.find("\"lengths\":[") + 11;
        const std::size_t close = sidecar.find(']', open);
        std::string inner = sidecar.substr(open, close - open);
        if (std::sscanf(inner.c_str(), "%lf,%lf,%lf", &lengths[0], &lengths[1],
                        &lengths[2]) != 3) {
            throw IoError("sidecar lengths malformed");
        }
    }
    const int m = static_cast<int>(extract_number(sidecar, "m"));
    const double p = extract_number(sidecar, "p");
    const auto count = static_cast<std::size_t>(extract_number(sidecar, "count"));
    const std::string checksum = extract_string(sidecar, "checksum");

    Domain dom(lengths, m);
    if (count != dom.node_count()) {
        throw IoError("sidecar count does not match the domain grid");
    }
    std::vector<double> values(count);
    {
        std::ifstream is(path_base + ".f64", std::ios::binary);
        if (!is) throw IoError("cannot open: " + path_base + ".f64");
        is.read(reinterpret_cast<char*>(values.data()),
                static_cast<std::streamsize>(count * sizeof(double)));
        if (is.gcount() != static_cast<std::streamsize>(count * sizeof(double))) {
            throw IoError("field payload truncated: " + path_base + ".f64");
        }
    }
    if (checksum_bytes(values.data(), count * sizeof(double)) != checksum) {
        throw IoError("field checksum mismatch: " + path_base);
    }
    return LoadedField{ScalarField(dom, std::move(values)), p};
}

} // namespace nhf
