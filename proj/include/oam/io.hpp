#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "oam/grid.hpp"
#include "oam/holo.hpp"
#include "oam/phase_ref.hpp"

namespace oam::io {

// All writers go through a temp file + rename, so readers never see a
// partial artifact.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

// 8-bit binary PGM of a [0,1]-scaled array.
std::string pgm_encode(const Eigen::ArrayXXd& values01);
void write_pgm(const std::filesystem::path& path, const Eigen::ArrayXXd& values01);

// Phase pattern mapped 0..2pi -> 0..255.
void write_pattern_pgm(const std::filesystem::path& path, const PhasePattern& p);

// Intensity image, peak-normalized.
void write_intensity_pgm(const std::filesystem::path& path, const CameraImage& img);
void write_field_intensity_pgm(const std::filesystem::path& path, const TransverseField& f);

// Textual field dump: header line "nx ny dx wavelength", then one "re im"
// pair per pixel in row-major order.
void write_field(const std::filesystem::path& path, const TransverseField& f);
TransverseField read_field(const std::filesystem::path& path);

// CSV with a header row; rows of equal width.
void write_csv(const std::filesystem::path& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

} // namespace oam::io
