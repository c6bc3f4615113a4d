#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "scenes.hpp"
#include "ufo/error.hpp"
#include "ufo/filter.hpp"
#include "ufo/image.hpp"
#include "ufo/image_io.hpp"
#include "ufo/parallel.hpp"
#include "ufo/patches.hpp"
#include "ufo/pyramid.hpp"
#include "ufo/random.hpp"

namespace fs = std::filesystem;
using namespace ufo;
using scenes::error_of;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("ufo_imaging_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void write_bytes(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

}  // namespace

// ---------------------------------------------------------------- containers

TEST(ImageBuffer, PlanarLayout) {
  ImageBuffer img(3, 2, 3);
  EXPECT_EQ(img.data().size(), 18u);
  img.at(2, 1, 1) = 7.0;
  EXPECT_EQ(img.data()[6 + 1 * 3 + 2], 7.0);
  EXPECT_EQ(img.plane(1)(2, 1), 7.0);
}

TEST(ImageBuffer, LuminanceWeights) {
  ImageBuffer img(1, 1, 3);
  img.at(0, 0, 0) = 100.0;
  img.at(0, 0, 1) = 50.0;
  img.at(0, 0, 2) = 10.0;
  EXPECT_NEAR(luminance(img)(0, 0), 0.299 * 100 + 0.587 * 50 + 0.114 * 10, 1e-12);
}

TEST(ImageBuffer, FromPlanesRoundTrip) {
  const ImageBuffer img = scenes::uniform_noise_image(5, 4, 3, 1);
  EXPECT_EQ(ImageBuffer::from_planes(img.planes()), img);
}

// ---------------------------------------------------------------- frame io

TEST(LoadFrame, PgmBytesMapDirectly) {
  TempDir dir;
  write_bytes(dir.path() / "a.pgm", std::string("P5\n2 2\n255\n") + std::string("\x00\xff\x80\x40", 4));
  const ImageBuffer img = load_frame(dir.path() / "a.pgm");
  ASSERT_EQ(img.width(), 2);
  ASSERT_EQ(img.height(), 2);
  ASSERT_EQ(img.channels(), 1);
  EXPECT_EQ(std::vector<double>(img.data().begin(), img.data().end()), (std::vector<double>{0, 255, 128, 64}));
}

TEST(LoadFrame, SingleRgbPixelPng) {
  TempDir dir;
  ImageBuffer px(1, 1, 3);
  px.at(0, 0, 0) = 10;
  px.at(0, 0, 1) = 20;
  px.at(0, 0, 2) = 30;
  save_png(dir.path() / "p.png", px);
  const ImageBuffer img = load_frame(dir.path() / "p.png");
  ASSERT_EQ(img.channels(), 3);
  EXPECT_EQ(std::vector<double>(img.data().begin(), img.data().end()), (std::vector<double>{10, 20, 30}));
}

TEST(LoadFrame, PngAndPnmRoundTrip) {
  TempDir dir;
  ImageBuffer img = scenes::uniform_noise_image(7, 5, 3, 3);
  for (double& v : img.data()) v = std::round(v);
  save_png(dir.path() / "x.png", img);
  save_pnm(dir.path() / "x.ppm", img);
  EXPECT_EQ(load_frame(dir.path() / "x.png"), img);
  EXPECT_EQ(load_frame(dir.path() / "x.ppm"), img);
}

TEST(LoadFrame, TruncatedPngIsDecodeError) {
  TempDir dir;
  ImageBuffer img = scenes::uniform_noise_image(16, 16, 3, 4);
  for (double& v : img.data()) v = std::round(v);
  save_png(dir.path() / "full.png", img);
  std::ifstream in(dir.path() / "full.png", std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  write_bytes(dir.path() / "cut.png", bytes.substr(0, bytes.size() / 2));
  EXPECT_EQ(error_of([&] { load_frame(dir.path() / "cut.png"); }), ErrorCode::DecodeError);
}

TEST(LoadFrame, MissingFileIsUnreadable) {
  TempDir dir;
  EXPECT_EQ(error_of([&] { load_frame(dir.path() / "none.png"); }), ErrorCode::FileUnreadable);
}

TEST(LoadFrame, SixteenBitPnmIsUnsupported) {
  TempDir dir;
  write_bytes(dir.path() / "d.pgm", std::string("P5\n1 1\n65535\n") + std::string("\x01\x02", 2));
  EXPECT_EQ(error_of([&] { load_frame(dir.path() / "d.pgm"); }), ErrorCode::UnsupportedBitDepth);
}

// ---------------------------------------------------------------- pyramid

TEST(Pyramid, ConstantImageStaysConstant) {
  const Pyramid pyr = build_pyramid(ImageBuffer(64, 48, 3, 77.0), 4);
  ASSERT_EQ(pyr.n_scales(), 4);
  for (const auto& level : pyr.levels) {
    for (double v : level.data()) EXPECT_NEAR(v, 77.0, 1e-9);
  }
}

TEST(Pyramid, DyadicLevelSizes) {
  const Pyramid pyr = build_pyramid(ImageBuffer(64, 64, 1), 4);
  for (int s = 0; s < 4; ++s) {
    EXPECT_EQ(pyr.levels[s].width(), 64 >> s);
    EXPECT_EQ(pyr.levels[s].height(), 64 >> s);
  }
}

TEST(Pyramid, OddSizesFloor) {
  const Pyramid pyr = build_pyramid(ImageBuffer(101, 37, 1), 3);
  EXPECT_EQ(pyr.levels[2].width(), 25);
  EXPECT_EQ(pyr.levels[2].height(), 9);
}

TEST(Pyramid, LevelSmallerThanPatchIsError) {
  EXPECT_EQ(error_of([] { build_pyramid(ImageBuffer(8, 8, 1), 4, 4); }), ErrorCode::ImageTooSmall);
  EXPECT_EQ(max_feasible_scales(8, 8, 4), 2);
}

TEST(Pyramid, LevelZeroIsInput) {
  const ImageBuffer img = scenes::uniform_noise_image(20, 20, 1, 5);
  EXPECT_EQ(build_pyramid(img, 2).levels[0], img);
}

// ---------------------------------------------------------------- patches

TEST(Patches, SinglePatchRowMajor) {
  ImageBuffer img(2, 2, 1);
  img.at(0, 0, 0) = 1;
  img.at(1, 0, 0) = 2;
  img.at(0, 1, 0) = 3;
  img.at(1, 1, 0) = 4;
  const PatchMatrix pm = extract_patches(img, 2, 1);
  ASSERT_EQ(pm.count(), 1);
  EXPECT_EQ(pm.columns.col(0), Eigen::Vector4d(1, 2, 3, 4));
}

TEST(Patches, OriginsEnumerated) {
  const PatchMatrix pm = extract_patches(ImageBuffer(3, 3, 1), 2, 1);
  const std::vector<PatchOrigin> want{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  EXPECT_EQ(pm.origins, want);
}

TEST(Patches, RgbConcatenatesPlanes) {
  ImageBuffer img(2, 2, 3);
  std::iota(img.data().begin(), img.data().end(), 0.0);
  const PatchMatrix pm = extract_patches(img, 2, 1);
  ASSERT_EQ(pm.patch_dim(), 12);
  for (int i = 0; i < 12; ++i) EXPECT_EQ(pm.columns(i, 0), i);
}

TEST(Patches, StrideKeepsLastPosition) {
  EXPECT_EQ(patch_positions(10, 4, 3), (std::vector<int>{0, 3, 6}));
  EXPECT_EQ(patch_positions(11, 4, 3), (std::vector<int>{0, 3, 6, 7}));
}

TEST(Patches, SideLargerThanImageIsError) {
  EXPECT_EQ(error_of([] { extract_patches(ImageBuffer(3, 3, 1), 4, 1); }), ErrorCode::ImageTooSmall);
}

TEST(Patches, PlaceCountsFootprint) {
  PatchAccumulator acc(4, 4, 1);
  place_patches(acc, 2, {{0, 0}}, Eigen::MatrixXd::Ones(4, 1));
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) EXPECT_EQ(acc.counts(x, y), (x < 2 && y < 2) ? 1.0 : 0.0);
  }
}

TEST(Patches, OverlapSumsAndCounts) {
  PatchAccumulator acc(3, 2, 1);
  place_patches(acc, 2, {{0, 0}, {0, 1}}, Eigen::MatrixXd::Ones(4, 2));
  EXPECT_EQ(acc.counts(1, 0), 2.0);
  EXPECT_EQ(acc.sums.at(1, 1, 0), 2.0);
  EXPECT_EQ(acc.counts(0, 0), 1.0);
}

TEST(Patches, FullCoverageCounts) {
  const ImageBuffer img(4, 4, 1);
  const PatchMatrix pm = extract_patches(img, 2, 1);
  PatchAccumulator acc(4, 4, 1);
  place_patches(acc, 2, pm.origins, pm.columns);
  EXPECT_EQ(acc.counts(0, 0), 1.0);
  EXPECT_EQ(acc.counts(3, 3), 1.0);
  EXPECT_EQ(acc.counts(1, 0), 2.0);
  EXPECT_EQ(acc.counts(1, 1), 4.0);
  EXPECT_EQ(acc.counts(2, 2), 4.0);
}

TEST(Patches, ExtractPlaceRoundTrip) {
  const ImageBuffer img = scenes::uniform_noise_image(13, 11, 3, 6);
  for (int stride : {1, 2, 3}) {
    const PatchMatrix pm = extract_patches(img, 4, stride);
    PatchAccumulator acc(13, 11, 3);
    place_patches(acc, 4, pm.origins, pm.columns);
    for (int c = 0; c < 3; ++c) {
      for (int y = 0; y < 11; ++y) {
        for (int x = 0; x < 13; ++x) {
          ASSERT_GT(acc.counts(x, y), 0.0);
          EXPECT_NEAR(acc.sums.at(x, y, c) / acc.counts(x, y), img.at(x, y, c), 1e-9);
        }
      }
    }
  }
}

TEST(Patches, MismatchedColumnsIsError) {
  PatchAccumulator acc(4, 4, 1);
  EXPECT_EQ(error_of([&] { place_patches(acc, 2, {{0, 0}}, Eigen::MatrixXd::Ones(9, 1)); }),
            ErrorCode::DimensionMismatch);
}

// ---------------------------------------------------------------- filtering

TEST(DiskKernel, SupportSizesAndUnitSum) {
  const int sizes[] = {5, 13, 29};
  for (int r = 1; r <= 3; ++r) {
    const DiskKernel k(r);
    EXPECT_EQ(k.support_size(), sizes[r - 1]);
    const auto w = k.weights();
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
    const int side = 2 * r + 1;
    for (int i = 0; i < side * side; ++i) EXPECT_EQ(w[i], w[side * side - 1 - i]);
  }
}

TEST(DiskKernel, RadiusZeroIsError) {
  EXPECT_EQ(error_of([] { DiskKernel k(0); }), ErrorCode::InvalidArgument);
}

TEST(ConvolveDisk, ConstantFixedPoint) {
  const Plane out = convolve_disk(Plane(9, 7, 3.5), DiskKernel(2));
  for (double v : out.data()) EXPECT_NEAR(v, 3.5, 1e-12);
}

TEST(ConvolveDisk, ImpulseSpreadsOverDisk) {
  Plane p(9, 9);
  p(4, 4) = 1.0;
  const Plane out = convolve_disk(p, DiskKernel(1));
  for (int y = 0; y < 9; ++y) {
    for (int x = 0; x < 9; ++x) {
      const int d2 = (x - 4) * (x - 4) + (y - 4) * (y - 4);
      EXPECT_NEAR(out(x, y), d2 <= 1 ? 0.2 : 0.0, 1e-15);
    }
  }
}

TEST(ConvolveDisk, PreservesMeanUnderMirror) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  Plane p(40, 30);
  for (double& v : p.data()) v = u(rng);
  const double before = std::accumulate(p.data().begin(), p.data().end(), 0.0);
  for (int r = 1; r <= 3; ++r) {
    const Plane out = convolve_disk(p, DiskKernel(r));
    const double after = std::accumulate(out.data().begin(), out.data().end(), 0.0);
    EXPECT_NEAR(after / before, 1.0, 1e-2);
  }
}

TEST(ConvolveDisk, PlaneSmallerThanDiskIsError) {
  EXPECT_EQ(error_of([] { convolve_disk(Plane(4, 4), DiskKernel(2)); }), ErrorCode::ImageTooSmall);
}

TEST(Filter, MirrorIndex) {
  EXPECT_EQ(mirror_index(-1, 5), 0);
  EXPECT_EQ(mirror_index(-2, 5), 1);
  EXPECT_EQ(mirror_index(5, 5), 4);
  EXPECT_EQ(mirror_index(6, 5), 3);
  EXPECT_EQ(mirror_index(2, 5), 2);
}

TEST(Filter, GaussianBlurKeepsConstant) {
  const Plane out = gaussian_blur(Plane(10, 10, 9.0), 0.8);
  for (double v : out.data()) EXPECT_NEAR(v, 9.0, 1e-12);
}

// ---------------------------------------------------------------- utilities

TEST(Random, MixSeedSeparatesStreams) {
  EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
  EXPECT_EQ(mix_seed(3, 4), mix_seed(3, 4));
  EXPECT_NE(hash_string("f000"), hash_string("f001"));
}

TEST(Random, UniformIndexInRange) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(uniform_index(rng, 7), 7u);
}

TEST(Parallel, VisitsEveryIndexOnce) {
  for (int threads : {1, 3}) {
    set_thread_count(threads);
    std::vector<std::atomic<int>> hits(100);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
  set_thread_count(0);
}

TEST(Parallel, RethrowsWorkerError) {
  set_thread_count(2);
  EXPECT_THROW(parallel_for(10, [](std::size_t i) {
                 if (i == 7) throw Error(ErrorCode::InvalidArgument, "boom");
               }),
               Error);
  set_thread_count(0);
}

TEST(Parallel, NegativeThreadCountIsError) {
  EXPECT_EQ(error_of([] { set_thread_count(-1); }), ErrorCode::InvalidArgument);
}
