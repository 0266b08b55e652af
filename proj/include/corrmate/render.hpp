#pragma once

#include "corrmate/correspondence.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace corrmate {

struct Viewport {
    double x0 = -2.0, x1 = 2.0, y0 = -2.0, y1 = 2.0;
};

/// Plane: pixels are z. Reciprocal: pixels are zeta = 1/z, so the center of a symmetric view is infinity.
enum class Chart { Plane, Reciprocal };

struct RasterJob {
    Viewport view;
    int width = 256, height = 256;
    int max_iter = 200;
    int palette = 0;
    Chart chart = Chart::Plane;

    /// Throws std::invalid_argument on a degenerate view or a size outside [1, 16384].
    void validate() const;
    /// Sphere point at the center of pixel (i, j); row 0 is the top (largest y).
    SpherePoint pixel_point(int i, int j) const;
    /// Pixel containing a sphere point, or false if it falls outside the view.
    bool pixel_of(const SpherePoint& z, int& i, int& j) const;
};

struct LabelRaster {
    int width = 0, height = 0;
    std::vector<Label> labels;
    std::vector<std::uint16_t> ranks;

    Label at(int i, int j) const { return labels[static_cast<std::size_t>(j) * width + i]; }
    std::size_t count(Label l) const;
};

struct Image {
    int width = 0, height = 0;
    std::vector<std::uint8_t> rgb;
};

/// Runs fn(row) for row in [0, rows) on `threads` workers (0: hardware concurrency). Rows are
/// claimed dynamically; callers write into per-row slots so output order does not depend on timing.
void parallel_rows(int rows, int threads, const std::function<void(int)>& fn);

LabelRaster render_classification(const Classifier& classifier, const RasterJob& job, int threads = 0);

/// Colors by label, shaded by escape rank. Deterministic.
Image colorize(const LabelRaster& raster, int palette = 0);

/// Accumulation counts per pixel.
std::vector<std::uint32_t> cloud_density(const RasterJob& job, const std::vector<CloudPoint>& cloud);
/// Log-density heat map; unlit pixels are black.
Image render_cloud(const RasterJob& job, const std::vector<CloudPoint>& cloud);

/// Fraction of decided pixels whose label agrees with the label at the pixel holding the image of
/// their center under 1/z (K1 and K2 merged, since 1/z swaps them). Pixels whose image leaves the
/// view or lands on an undecided pixel are skipped.
double eta_pullback_agreement(const LabelRaster& raster, const RasterJob& job);

/// Fraction of lit pixels whose image under 1/z lands near a lit pixel, where near means within the
/// image of the pixel square (half-diagonal scaled by 1/|c|^2) plus one pixel. Pixels whose image
/// leaves the view are skipped.
double cloud_eta_lighting(const std::vector<std::uint32_t>& density, const RasterJob& job);

void write_ppm(const Image& img, std::ostream& os);
void write_ppm(const Image& img, const std::string& path);
Image read_ppm(const std::string& path);

/// "CMLB", then little-endian uint32 width, height, version (1), then one byte per pixel, row-major.
void write_labels(const LabelRaster& raster, const std::string& path);
LabelRaster read_labels(const std::string& path);

} // namespace corrmate
