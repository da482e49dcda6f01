#pragma once

#include <string>
#include <vector>

#include "qmoire/pattern.hpp"
#include "qmoire/photocount.hpp"
#include "qmoire/scan.hpp"

namespace qmoire::harness {

/// Scan CSV: header `step,position_mm,value,expected_rate`, fixed 12-decimal
/// reals with '.' decimal point, '\n' line ends. Counts are written as bare
/// integers in the value column. Files are written to a temp name and renamed
/// into place.
void write_csv(const ScanRecord& record, const std::string& path);
void write_csv(const photocount::CountRecord& record, const std::string& path);

/// Parse a scan CSV back; the record kind is Counts when every value field is
/// integer-formatted.
ScanRecord read_csv(const std::string& path);

/// Binary PGM (P5, maxval 255); pixel byte = round(value * 255).
void write_pgm(const classical::PatternImage& image, const std::string& path);

/// Re-import a P5 PGM; the caller supplies the physical pitch (PGM carries none).
classical::PatternImage read_pgm(const std::string& path, double pitch_mm);

/// Everything one run produced.
struct OutputBundle {
    std::vector<std::string> data_paths;
    std::vector<std::string> image_paths;
    std::string report_path;
    int format_version = 1;
};

}  // namespace qmoire::harness
