#include "oam/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oam::io {

namespace fs = std::filesystem;

void write_text_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

std::string pgm_encode(const Eigen::ArrayXXd& values01) {
    const int ny = static_cast<int>(values01.rows());
    const int nx = static_cast<int>(values01.cols());
    std::string s = "P5\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n255\n";
    s.reserve(s.size() + static_cast<std::size_t>(nx) * ny);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const double v = std::clamp(values01(iy, ix), 0.0, 1.0);
            s.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
        }
    return s;
}

void write_pgm(const fs::path& path, const Eigen::ArrayXXd& values01) {
    write_text_atomic(path, pgm_encode(values01));
}

void write_pattern_pgm(const fs::path& path, const PhasePattern& p) {
    write_pgm(path, p.phase / kTwoPi);
}

void write_intensity_pgm(const fs::path& path, const CameraImage& img) {
    const double peak = img.intensity.maxCoeff();
    write_pgm(path, peak > 0.0 ? (img.intensity / peak).eval() : img.intensity);
}

void write_field_intensity_pgm(const fs::path& path, const TransverseField& f) {
    Eigen::ArrayXXd inten = f.amplitude.abs2();
    const double peak = inten.maxCoeff();
    if (peak > 0.0) inten /= peak;
    write_pgm(path, inten);
}

void write_field(const fs::path& path, const TransverseField& f) {
    std::ostringstream out;
    out.precision(17);
    out << f.grid.nx << " " << f.grid.ny << " " << f.grid.dx << " "
        << f.grid.wavelength << "\n";
    for (int iy = 0; iy < f.grid.ny; ++iy)
        for (int ix = 0; ix < f.grid.nx; ++ix)
            out << f.amplitude(iy, ix).real() << " " << f.amplitude(iy, ix).imag() << "\n";
    write_text_atomic(path, out.str());
}

TransverseField read_field(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    GridSpec g;
    in >> g.nx >> g.ny >> g.dx >> g.wavelength;
    g.validate();
    TransverseField f(g);
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix) {
            double re, im;
            if (!(in >> re >> im))
                throw std::runtime_error("truncated field file " + path.string());
            f.amplitude(iy, ix) = Complex(re, im);
        }
    return f;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ostringstream out;
    out.precision(12);
    for (std::size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? "," : "");
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("write_csv: row width mismatch");
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "");
        out << "\n";
    }
    write_text_atomic(path, out.str());
}

} // namespace oam::io
