#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ewa/matrix.hpp"
#include "ewa/rng.hpp"

namespace ewa {

// Planar float image, row-major, channel-fastest. Values live on the
// [0, 255] scale but are not clamped until written to disk.
struct Image {
  int height = 0;
  int width = 0;
  int channels = 1;
  std::vector<double> pixels;

  Image() = default;
  Image(int h, int w, int c, double fill = 0.0);

  double& at(int y, int x, int c) { return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c]; }
  double at(int y, int x, int c) const { return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c]; }
  std::size_t size() const { return pixels.size(); }
};

// Binary PPM: P6 for 3-channel, P5 for 1-channel, maxval 255. Writing clamps
// to [0, 255] and rounds; the in-memory image keeps float values.
Image read_ppm(const std::filesystem::path& path);
void write_ppm(const Image& img, const std::filesystem::path& path);

double psnr(const Image& reference, const Image& test, double peak = 255.0);

Image add_gaussian_noise(const Image& img, double sigma, Rng& rng);

// Non-overlapping patch decomposition. Patch rows index the K dimension:
// K = (H/ph) * (W/pw) patches in row-major block order, n = ph * pw * C
// columns in row-major-within-patch, channel-fastest pixel order.
struct PatchGrid {
  int image_h = 0;
  int image_w = 0;
  int channels = 1;
  int patch_h = 10;
  int patch_w = 10;

  Index rows() const { return static_cast<Index>(image_h / patch_h) * (image_w / patch_w); }
  Index cols() const { return static_cast<Index>(patch_h) * patch_w * channels; }
  void validate() const;  // patches must tile the image exactly
};

Matrix patchify(const Image& img, const PatchGrid& grid);
Image unpatchify(const Matrix& m, const PatchGrid& grid);

// Synthetic test target whose patch matrix has exactly the given rank, with
// pixel values spanning [0, 255].
Image make_low_rank_image(int height, int width, int channels, int rank,
                          std::uint64_t seed, int patch = 10);

}  // namespace ewa
