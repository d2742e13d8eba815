#pragma once

#include <string>
#include <vector>

#include "metaseg/types.hpp"

namespace metaseg {

// Binary PPM (P6, maxval 255) + "<path>.meta" sidecar with mpp and
// optional magnification. Write/read round-trips bit-exactly.
SlideRaster read_raster(const std::string& path);
void write_raster(const SlideRaster& r, const std::string& path);

// Binary PGM (P5, maxval 255); 0 = background, 255 = foreground. Any other
// pixel byte is a format error.
BinaryMask read_mask(const std::string& path);
void write_mask(const BinaryMask& m, const std::string& path);

// HMAP container: "HMAP" magic, u32 width, u32 height, f32 mpp, then
// width*height f32 values, everything little-endian row-major.
ProbabilityMap read_heatmap(const std::string& path);
void write_heatmap(const ProbabilityMap& m, const std::string& path);

// One row of the patient manifest CSV
// "patient_id,slide_index,raster_path,mask_path,label".
struct ManifestRow {
    std::string patient_id;
    int slide_index = 0;
    std::string raster_path;
    std::string mask_path;
    SlideLabel label = SlideLabel::negative;
};

std::vector<ManifestRow> read_manifest(const std::string& path);
void write_manifest(const std::vector<ManifestRow>& rows, const std::string& path);

// Small CSV helpers shared by the stage artifacts.
std::vector<std::string> split_csv_line(const std::string& line);
std::vector<std::vector<std::string>> read_csv(const std::string& path, bool skip_header);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace metaseg
