#include "metaseg/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts unsupported");

namespace metaseg {

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for reading: " + path);
    return f;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + path);
    return f;
}

// Reads one whitespace-delimited PNM header token (no comment support;
// the writer never emits comments).
std::string pnm_token(std::istream& in) {
    std::string tok;
    in >> tok;
    return tok;
}

struct PnmHeader {
    int width = 0;
    int height = 0;
};

PnmHeader read_pnm_header(std::istream& in, const char* magic, const std::string& path) {
    std::string m = pnm_token(in);
    if (m != magic)
        throw FormatError(std::string("bad magic in ") + path + ": expected " + magic);
    PnmHeader h;
    std::string w = pnm_token(in), ht = pnm_token(in), maxval = pnm_token(in);
    try {
        h.width = std::stoi(w);
        h.height = std::stoi(ht);
    } catch (const std::exception&) {
        throw FormatError("unparsable dimensions in " + path);
    }
    if (h.width < 1 || h.height < 1)
        throw FormatError("non-positive dimensions in " + path);
    if (maxval != "255")
        throw UnsupportedError("unsupported maxval '" + maxval + "' in " + path);
    // Exactly one whitespace byte separates the header from pixel data.
    int c = in.get();
    if (c != '\n' && c != ' ' && c != '\t' && c != '\r')
        throw FormatError("missing header terminator in " + path);
    return h;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

SlideRaster read_raster(const std::string& path) {
    auto f = open_in(path);
    PnmHeader h = read_pnm_header(f, "P6", path);
    SlideRaster r;
    r.width = h.width;
    r.height = h.height;
    r.pixels.resize(static_cast<size_t>(h.width) * h.height * 3);
    f.read(reinterpret_cast<char*>(r.pixels.data()),
           static_cast<std::streamsize>(r.pixels.size()));
    if (static_cast<size_t>(f.gcount()) != r.pixels.size())
        throw FormatError("truncated pixel data in " + path);

    std::ifstream meta(path + ".meta");
    if (!meta) throw MetadataError("missing sidecar: " + path + ".meta");
    bool have_mpp = false;
    std::string line;
    while (std::getline(meta, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        if (key == "mpp") {
            try {
                r.mpp = std::stod(value);
            } catch (const std::exception&) {
                throw MetadataError("unparsable mpp in sidecar of " + path);
            }
            have_mpp = true;
        } else if (key == "magnification") {
            r.magnification_tag = value;
        }
    }
    if (!have_mpp) throw MetadataError("sidecar lacks mpp: " + path + ".meta");
    if (r.mpp <= 0.0) throw MetadataError("mpp must be positive in sidecar of " + path);
    return r;
}

void write_raster(const SlideRaster& r, const std::string& path) {
    r.validate();
    {
        auto f = open_out(path);
        f << "P6\n" << r.width << ' ' << r.height << "\n255\n";
        f.write(reinterpret_cast<const char*>(r.pixels.data()),
                static_cast<std::streamsize>(r.pixels.size()));
        if (!f) throw IoError("write failed: " + path);
    }
    auto meta = open_out(path + ".meta");
    meta << "mpp=" << format_double(r.mpp) << '\n';
    if (!r.magnification_tag.empty())
        meta << "magnification=" << r.magnification_tag << '\n';
    if (!meta) throw IoError("write failed: " + path + ".meta");
}

BinaryMask read_mask(const std::string& path) {
    auto f = open_in(path);
    PnmHeader h = read_pnm_header(f, "P5", path);
    BinaryMask m(h.width, h.height);
    std::vector<uint8_t> raw(m.bits.size());
    f.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<size_t>(f.gcount()) != raw.size())
        throw FormatError("truncated pixel data in " + path);
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == 0) m.bits[i] = 0;
        else if (raw[i] == 255) m.bits[i] = 1;
        else throw FormatError("mask byte not 0/255 in " + path);
    }
    return m;
}

void write_mask(const BinaryMask& m, const std::string& path) {
    if (m.width < 1 || m.height < 1)
        throw ValidationError("mask dimensions must be >= 1");
    auto f = open_out(path);
    f << "P5\n" << m.width << ' ' << m.height << "\n255\n";
    std::vector<uint8_t> raw(m.bits.size());
    for (size_t i = 0; i < raw.size(); ++i) raw[i] = m.bits[i] ? 255 : 0;
    f.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!f) throw IoError("write failed: " + path);
}

ProbabilityMap read_heatmap(const std::string& path) {
    auto f = open_in(path);
    char magic[4];
    f.read(magic, 4);
    if (f.gcount() != 4 || std::memcmp(magic, "HMAP", 4) != 0)
        throw FormatError("bad magic in " + path);
    uint32_t w = 0, h = 0;
    float mpp = 0.0f;
    f.read(reinterpret_cast<char*>(&w), 4);
    f.read(reinterpret_cast<char*>(&h), 4);
    f.read(reinterpret_cast<char*>(&mpp), 4);
    if (!f) throw FormatError("truncated header in " + path);
    if (w == 0 || h == 0) throw FormatError("non-positive dimensions in " + path);
    ProbabilityMap m(static_cast<int>(w), static_cast<int>(h), mpp);
    f.read(reinterpret_cast<char*>(m.values.data()),
           static_cast<std::streamsize>(m.values.size() * sizeof(float)));
    if (static_cast<size_t>(f.gcount()) != m.values.size() * sizeof(float))
        throw FormatError("truncated values in " + path);
    for (float v : m.values) {
        if (std::isnan(v)) throw ValidationError("NaN probability in " + path);
        if (v < 0.0f || v > 1.0f)
            throw ValidationError("probability outside [0,1] in " + path);
    }
    return m;
}

void write_heatmap(const ProbabilityMap& m, const std::string& path) {
    if (m.width < 1 || m.height < 1)
        throw ValidationError("heatmap dimensions must be >= 1");
    auto f = open_out(path);
    f.write("HMAP", 4);
    uint32_t w = static_cast<uint32_t>(m.width), h = static_cast<uint32_t>(m.height);
    f.write(reinterpret_cast<const char*>(&w), 4);
    f.write(reinterpret_cast<const char*>(&h), 4);
    f.write(reinterpret_cast<const char*>(&m.mpp), 4);
    f.write(reinterpret_cast<const char*>(m.values.data()),
            static_cast<std::streamsize>(m.values.size() * sizeof(float)));
    if (!f) throw IoError("write failed: " + path);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path, bool skip_header) {
    auto f = open_in(path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool first = true;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (first && skip_header) {
            first = false;
            continue;
        }
        first = false;
        rows.push_back(split_csv_line(line));
    }
    return rows;
}

std::vector<ManifestRow> read_manifest(const std::string& path) {
    auto rows = read_csv(path, /*skip_header=*/true);
    std::vector<ManifestRow> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        if (r.size() != 5) throw FormatError("manifest row needs 5 fields: " + path);
        ManifestRow m;
        m.patient_id = r[0];
        m.slide_index = std::stoi(r[1]);
        m.raster_path = r[2];
        m.mask_path = r[3];
        m.label = slide_label_from_string(r[4]);
        out.push_back(std::move(m));
    }
    return out;
}

void write_manifest(const std::vector<ManifestRow>& rows, const std::string& path) {
    auto f = open_out(path);
    f << "patient_id,slide_index,raster_path,mask_path,label\n";
    for (const auto& r : rows)
        f << r.patient_id << ',' << r.slide_index << ',' << r.raster_path << ','
          << r.mask_path << ',' << to_string(r.label) << '\n';
    if (!f) throw IoError("write failed: " + path);
}

void write_text_file(const std::string& path, const std::string& content) {
    auto f = open_out(path);
    f << content;
    if (!f) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    auto f = open_in(path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace metaseg
