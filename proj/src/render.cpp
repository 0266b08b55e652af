#include "corrmate/render.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace corrmate {

void RasterJob::validate() const {
    if (!(view.x1 > view.x0) || !(view.y1 > view.y0)) throw std::invalid_argument("degenerate viewport");
    if (width < 1 || height < 1 || width > 16384 || height > 16384) throw std::invalid_argument("raster size out of range");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
}

SpherePoint RasterJob::pixel_point(int i, int j) const {
    const double x = view.x0 + (i + 0.5) * (view.x1 - view.x0) / width;
    const double y = view.y1 - (j + 0.5) * (view.y1 - view.y0) / height;
    const Complex c(x, y);
    if (chart == Chart::Plane) return c;
    return eta(SpherePoint(c)); // zeta = 1/z
}

bool RasterJob::pixel_of(const SpherePoint& z, int& i, int& j) const {
    const SpherePoint c = chart == Chart::Plane ? z : eta(z);
    if (c.is_infinite()) return false;
    const double fx = (c.value().real() - view.x0) / (view.x1 - view.x0) * width;
    const double fy = (view.y1 - c.value().imag()) / (view.y1 - view.y0) * height;
    if (!(fx >= 0 && fx < width && fy >= 0 && fy < height)) return false;
    i = static_cast<int>(fx);
    j = static_cast<int>(fy);
    return true;
}

std::size_t LabelRaster::count(Label l) const { return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), l)); }

void parallel_rows(int rows, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::min(threads, std::max(rows, 1));
    if (threads == 1) {
        for (int r = 0; r < rows; ++r) fn(r);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int r = next++; r < rows; r = next++) fn(r);
        });
    for (auto& th : pool) th.join();
}

LabelRaster render_classification(const Classifier& classifier, const RasterJob& job, int threads) {
    job.validate();
    LabelRaster out;
    out.width = job.width;
    out.height = job.height;
    out.labels.assign(static_cast<std::size_t>(job.width) * job.height, Label::Undecided);
    out.ranks.assign(out.labels.size(), 0);
    parallel_rows(job.height, threads, [&](int j) {
        for (int i = 0; i < job.width; ++i) {
            const auto c = classifier.classify(job.pixel_point(i, j), job.max_iter);
            const std::size_t k = static_cast<std::size_t>(j) * job.width + i;
            out.labels[k] = c.label;
            out.ranks[k] = static_cast<std::uint16_t>(std::min(c.rank, 65535));
        }
    });
    return out;
}

namespace {

using RGB = std::array<std::uint8_t, 3>;

RGB base_color(Label l, int palette) {
    if (palette == 1) { // grayscale
        switch (l) {
        case Label::Tiling: return {230, 230, 230};
        case Label::K1: return {90, 90, 90};
        case Label::K2: return {60, 60, 60};
        case Label::Limit: return {255, 255, 255};
        case Label::Undecided: return {0, 0, 0};
        }
    }
    switch (l) {
    case Label::Tiling: return {70, 130, 220};
    case Label::K1: return {240, 170, 40};
    case Label::K2: return {200, 60, 50};
    case Label::Limit: return {255, 255, 255};
    case Label::Undecided: return {0, 0, 0};
    }
    return {0, 0, 0};
}

} // namespace

Image colorize(const LabelRaster& raster, int palette) {
    Image img;
    img.width = raster.width;
    img.height = raster.height;
    img.rgb.resize(raster.labels.size() * 3);
    for (std::size_t k = 0; k < raster.labels.size(); ++k) {
        const RGB c = base_color(raster.labels[k], palette);
        // darker with escape rank, never below 35%
        const double shade = raster.labels[k] == Label::Undecided ? 1.0 : 1.0 - 0.65 * std::min(raster.ranks[k], std::uint16_t(24)) / 24.0;
        for (int ch = 0; ch < 3; ++ch) img.rgb[3 * k + ch] = static_cast<std::uint8_t>(std::lround(c[ch] * shade));
    }
    return img;
}

std::vector<std::uint32_t> cloud_density(const RasterJob& job, const std::vector<CloudPoint>& cloud) {
    job.validate();
    std::vector<std::uint32_t> d(static_cast<std::size_t>(job.width) * job.height, 0);
    for (const auto& c : cloud) {
        int i, j;
        if (job.pixel_of(c.z, i, j)) ++d[static_cast<std::size_t>(j) * job.width + i];
    }
    return d;
}

Image render_cloud(const RasterJob& job, const std::vector<CloudPoint>& cloud) {
    if (cloud.empty()) throw std::invalid_argument("empty cloud");
    const auto d = cloud_density(job, cloud);
    const std::uint32_t peak = std::max<std::uint32_t>(1, *std::max_element(d.begin(), d.end()));
    Image img;
    img.width = job.width;
    img.height = job.height;
    img.rgb.assign(d.size() * 3, 0);
    for (std::size_t k = 0; k < d.size(); ++k) {
        if (d[k] == 0) continue;
        const double t = peak == 1 ? 1.0 : std::log1p(static_cast<double>(d[k])) / std::log1p(static_cast<double>(peak));
        // dim red through orange to white
        const double v = 0.3 + 0.7 * t;
        img.rgb[3 * k] = static_cast<std::uint8_t>(std::lround(255 * v));
        img.rgb[3 * k + 1] = static_cast<std::uint8_t>(std::lround(255 * v * t));
        img.rgb[3 * k + 2] = static_cast<std::uint8_t>(std::lround(255 * v * t * t));
    }
    return img;
}

double eta_pullback_agreement(const LabelRaster& raster, const RasterJob& job) {
    auto merged = [](Label l) { return l == Label::K2 ? Label::K1 : l; };
    std::size_t total = 0, agree = 0;
    for (int j = 0; j < raster.height; ++j)
        for (int i = 0; i < raster.width; ++i) {
            const Label a = raster.at(i, j);
            if (a == Label::Undecided) continue;
            int ii, jj;
            if (!job.pixel_of(eta(job.pixel_point(i, j)), ii, jj)) continue;
            const Label b = raster.at(ii, jj);
            if (b == Label::Undecided) continue;
            ++total;
            if (merged(a) == merged(b)) ++agree;
        }
    return total == 0 ? 1.0 : static_cast<double>(agree) / static_cast<double>(total);
}

double cloud_eta_lighting(const std::vector<std::uint32_t>& density, const RasterJob& job) {
    std::size_t total = 0, hit = 0;
    for (int j = 0; j < job.height; ++j)
        for (int i = 0; i < job.width; ++i) {
            if (density[static_cast<std::size_t>(j) * job.width + i] == 0) continue;
            int ii, jj;
            if (!job.pixel_of(eta(job.pixel_point(i, j)), ii, jj)) continue;
            ++total;
            // the pixel square maps to a blob of size 1/|c|^2 pixels around the image of its center
            const SpherePoint c = job.pixel_point(i, j);
            const Complex chart_c = job.chart == Chart::Plane ? c.value() : eta(c).value();
            const int r = static_cast<int>(std::ceil(0.71 + 0.71 / std::max(std::norm(chart_c), 1e-6)));
            bool lit = false;
            for (int dj = -r; dj <= r && !lit; ++dj)
                for (int di = -r; di <= r && !lit; ++di) {
                    const int x = ii + di, y = jj + dj;
                    if (x < 0 || y < 0 || x >= job.width || y >= job.height) continue;
                    lit = density[static_cast<std::size_t>(y) * job.width + x] > 0;
                }
            if (lit) ++hit;
        }
    return total == 0 ? 1.0 : static_cast<double>(hit) / static_cast<double>(total);
}

void write_ppm(const Image& img, std::ostream& os) {
    os << "P6\n" << img.width << " " << img.height << "\n255\n";
    os.write(reinterpret_cast<const char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
}

void write_ppm(const Image& img, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    write_ppm(img, f);
}

Image read_ppm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string magic;
    int maxval = 0;
    Image img;
    f >> magic >> img.width >> img.height >> maxval;
    if (magic != "P6" || maxval != 255) throw std::runtime_error("not a P6 image: " + path);
    f.get();
    img.rgb.resize(static_cast<std::size_t>(img.width) * img.height * 3);
    f.read(reinterpret_cast<char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
    if (!f) throw std::runtime_error("truncated image: " + path);
    return img;
}

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
    const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff), static_cast<char>((v >> 16) & 0xff),
                       static_cast<char>((v >> 24) & 0xff)};
    os.write(b, 4);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 | static_cast<std::uint32_t>(b[2]) << 16 |
           static_cast<std::uint32_t>(b[3]) << 24;
}

} // namespace

void write_labels(const LabelRaster& raster, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f.write("CMLB", 4);
    put_u32(f, static_cast<std::uint32_t>(raster.width));
    put_u32(f, static_cast<std::uint32_t>(raster.height));
    put_u32(f, 1);
    for (auto l : raster.labels) f.put(static_cast<char>(l));
}

LabelRaster read_labels(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    char magic[4];
    f.read(magic, 4);
    if (std::string(magic, 4) != "CMLB") throw std::runtime_error("not a label file: " + path);
    LabelRaster r;
    r.width = static_cast<int>(get_u32(f));
    r.height = static_cast<int>(get_u32(f));
    if (get_u32(f) != 1) throw std::runtime_error("unsupported label file version");
    r.labels.resize(static_cast<std::size_t>(r.width) * r.height);
    for (auto& l : r.labels) {
        const int c = f.get();
        if (c < 0 || c > 4) throw std::runtime_error("bad label in " + path);
        l = static_cast<Label>(c);
    }
    r.ranks.assign(r.labels.size(), 0);
    return r;
}

} // namespace corrmate
