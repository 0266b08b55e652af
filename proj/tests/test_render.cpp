#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "corrmate/bers.hpp"
#include "corrmate/render.hpp"

#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

using namespace corrmate;

namespace {

Classifier family_a_classifier() { return Classifier(Correspondence(build_family_a({2, {}})), DomainSpec::unit_circle(), 4); }

std::string tmp_path(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

} // namespace

TEST_CASE("job validation") {
    RasterJob job;
    CHECK_NOTHROW(job.validate());
    job.view = {1.0, 1.0, 0.0, 1.0};
    CHECK_THROWS_AS(job.validate(), std::invalid_argument);
    job = {};
    job.width = 20000;
    CHECK_THROWS_AS(job.validate(), std::invalid_argument);
}

TEST_CASE("pixel coordinates round trip") {
    RasterJob job;
    job.width = 40;
    job.height = 30;
    for (int j = 0; j < job.height; j += 7)
        for (int i = 0; i < job.width; i += 5) {
            int ii = -1, jj = -1;
            REQUIRE(job.pixel_of(job.pixel_point(i, j), ii, jj));
            CHECK(ii == i);
            CHECK(jj == j);
        }
    CHECK(job.pixel_point(0, 0).value().imag() > 0.0);
}

TEST_CASE("render is deterministic and independent of thread count") {
    const auto K = family_a_classifier();
    RasterJob job;
    job.width = job.height = 48;
    const auto a = render_classification(K, job, 1);
    const auto b = render_classification(K, job, 4);
    CHECK(a.labels == b.labels);
    CHECK(a.ranks == b.ranks);
    std::ostringstream sa, sb;
    write_ppm(colorize(a), sa);
    write_ppm(colorize(b), sb);
    CHECK(sa.str() == sb.str());
}

TEST_CASE("raster agrees with pointwise classification") {
    const auto K = family_a_classifier();
    RasterJob job;
    job.width = job.height = 64;
    const auto r = render_classification(K, job, 2);
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> pick(0, 63);
    for (int k = 0; k < 1000; ++k) {
        const int i = pick(rng), j = pick(rng);
        CHECK(r.at(i, j) == K.classify(job.pixel_point(i, j), job.max_iter).label);
    }
}

TEST_CASE("eta pullback agreement for family A") {
    const auto K = family_a_classifier();
    RasterJob job;
    job.width = job.height = 128;
    const auto r = render_classification(K, job);
    CHECK(eta_pullback_agreement(r, job) >= 0.98);
}

TEST_CASE("far viewport is all tiling") {
    const auto K = family_a_classifier();
    RasterJob job;
    job.view = {0.95, 1.15, 0.95, 1.15};
    job.width = job.height = 16;
    const auto r = render_classification(K, job, 1);
    CHECK(r.count(Label::Tiling) == r.labels.size());
}

TEST_CASE("reciprocal chart center is K1") {
    const auto K = family_a_classifier();
    RasterJob job;
    job.chart = Chart::Reciprocal;
    job.view = {-0.5, 0.5, -0.5, 0.5};
    job.width = job.height = 33;
    const auto r = render_classification(K, job, 1);
    CHECK(r.at(16, 16) == Label::K1);
}

TEST_CASE("label file round trip") {
    const auto K = family_a_classifier();
    RasterJob job;
    job.width = 23;
    job.height = 17;
    const auto r = render_classification(K, job, 1);
    const std::string path = tmp_path("corrmate_labels_test.bin");
    write_labels(r, path);
    const auto back = read_labels(path);
    CHECK(back.width == 23);
    CHECK(back.height == 17);
    CHECK(back.labels == r.labels);
    std::remove(path.c_str());
}

TEST_CASE("ppm round trip") {
    Image img;
    img.width = 3;
    img.height = 2;
    img.rgb = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 10};
    const std::string path = tmp_path("corrmate_ppm_test.ppm");
    write_ppm(img, path);
    const auto back = read_ppm(path);
    CHECK(back.width == 3);
    CHECK(back.height == 2);
    CHECK(back.rgb == img.rgb);
    std::remove(path.c_str());
}

TEST_CASE("cloud rendering") {
    RasterJob job;
    job.width = job.height = 64;
    const std::vector<CloudPoint> one{{SpherePoint(Complex(0.3, 0.2)), 0}};
    const auto img = render_cloud(job, one);
    int lit = 0;
    for (std::size_t k = 0; k < img.rgb.size(); k += 3) lit += (img.rgb[k] | img.rgb[k + 1] | img.rgb[k + 2]) != 0;
    CHECK(lit == 1);
    CHECK_THROWS_AS(render_cloud(job, {}), std::invalid_argument);

    Correspondence C(build_family_a({2, {}}));
    const auto small = cloud_density(job, grand_orbit_cloud(C, 3000, 5));
    const auto big = cloud_density(job, grand_orbit_cloud(C, 6000, 5));
    for (std::size_t k = 0; k < small.size(); ++k)
        if (small[k] > 0) CHECK(big[k] > 0);
}

TEST_CASE("cloud lighting is eta symmetric") {
    RasterJob job;
    job.width = job.height = 256;
    Correspondence C(build_family_a({2, {}}));
    const auto d = cloud_density(job, grand_orbit_cloud(C, 20000, 1));
    CHECK(cloud_eta_lighting(d, job) >= 0.98);
}
