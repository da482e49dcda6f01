#include "qmoire/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qmoire::harness {

namespace {

constexpr char kCsvHeader[] = "step,position_mm,value,expected_rate";

std::string fixed12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12f", v);
    return buf;
}

// write to a sibling temp file, then rename into place
void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

}  // namespace

void write_csv(const ScanRecord& record, const std::string& path) {
    record.validate();
    std::string out(kCsvHeader);
    out += '\n';
    for (std::size_t k = 0; k < record.size(); ++k) {
        out += std::to_string(k);
        out += ',';
        out += fixed12(record.positions_mm[k]);
        out += ',';
        if (record.kind == ScanKind::Counts) {
            out += std::to_string(static_cast<long long>(std::llround(record.values[k])));
            out += ',';
            out += fixed12(record.values[k]);
        } else {
            std::string v = fixed12(record.values[k]);
            out += v;
            out += ',';
            out += v;
        }
        out += '\n';
    }
    atomic_write(path, out);
}

void write_csv(const photocount::CountRecord& record, const std::string& path) {
    std::string out(kCsvHeader);
    out += '\n';
    for (std::size_t k = 0; k < record.size(); ++k) {
        out += std::to_string(k);
        out += ',';
        out += fixed12(record.positions_mm[k]);
        out += ',';
        out += std::to_string(record.counts[k]);
        out += ',';
        out += fixed12(record.expected_counts[k]);
        out += '\n';
    }
    atomic_write(path, out);
}

ScanRecord read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw std::runtime_error("bad CSV header in " + path);

    ScanRecord rec;
    bool any_fraction = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string step, pos, value, expected;
        if (!std::getline(row, step, ',') || !std::getline(row, pos, ',') ||
            !std::getline(row, value, ',') || !std::getline(row, expected))
            throw std::runtime_error("bad CSV row in " + path + ": " + line);
        rec.positions_mm.push_back(std::stod(pos));
        rec.values.push_back(std::stod(value));
        if (value.find('.') != std::string::npos) any_fraction = true;
    }
    rec.kind = any_fraction ? ScanKind::AnalyticRate : ScanKind::Counts;
    return rec;
}

void write_pgm(const classical::PatternImage& image, const std::string& path) {
    if (image.pixels.size() != image.width * image.height)
        throw std::invalid_argument("write_pgm: pixel count does not match dimensions");
    std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    out.reserve(out.size() + image.pixels.size());
    for (double v : image.pixels) {
        long q = std::lround(v * 255.0);
        if (q < 0 || q > 255) throw std::invalid_argument("write_pgm: pixel outside [0, 1]");
        out.push_back(static_cast<char>(static_cast<unsigned char>(q)));
    }
    atomic_write(path, out);
}

classical::PatternImage read_pgm(const std::string& path, double pitch_mm) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open PGM: " + path);
    std::string magic;
    in >> magic;
    if (magic != "P5") throw std::runtime_error("not a binary PGM: " + path);
    std::size_t width = 0, height = 0;
    int maxval = 0;
    in >> width >> height >> maxval;
    if (!in || maxval != 255) throw std::runtime_error("unsupported PGM header in " + path);
    in.get();  // single whitespace after maxval

    classical::PatternImage img;
    img.width = width;
    img.height = height;
    img.pitch_mm = pitch_mm;
    img.pixels.resize(width * height);
    std::vector<unsigned char> raw(width * height);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size())
        throw std::runtime_error("truncated PGM payload in " + path);
    for (std::size_t k = 0; k < raw.size(); ++k) img.pixels[k] = raw[k] / 255.0;
    return img;
}

}  // namespace qmoire::harness
