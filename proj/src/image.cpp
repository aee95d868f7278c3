#include "ewa/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace ewa {

Image::Image(int h, int w, int c, double fill)
    : height(h), width(w), channels(c),
      pixels(static_cast<std::size_t>(h) * w * c, fill) {
  if (h < 1 || w < 1 || (c != 1 && c != 3)) {
    throw std::invalid_argument("Image: bad dimensions (channels must be 1 or 3)");
  }
}

namespace {

[[noreturn]] void ppm_error(const std::filesystem::path& path, const std::string& what) {
  throw std::runtime_error("ppm: " + path.string() + ": " + what);
}

// Next whitespace-separated token, skipping '#' comment lines.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (!std::isspace(c)) {
      tok.push_back(static_cast<char>(c));
      while ((c = in.get()) != EOF && !std::isspace(c)) tok.push_back(static_cast<char>(c));
      break;
    }
  }
  return tok;
}

}  // namespace

Image read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ppm_error(path, "cannot open");
  const std::string magic = next_token(in);
  int channels = 0;
  if (magic == "P6") {
    channels = 3;
  } else if (magic == "P5") {
    channels = 1;
  } else {
    ppm_error(path, "unsupported magic '" + magic + "' (want P5 or P6)");
  }
  const int width = std::stoi(next_token(in));
  const int height = std::stoi(next_token(in));
  const int maxval = std::stoi(next_token(in));
  if (maxval != 255) ppm_error(path, "only maxval 255 is supported");

  Image img(height, width, channels);
  std::vector<unsigned char> raw(img.size());
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!in) ppm_error(path, "truncated pixel data");
  for (std::size_t i = 0; i < raw.size(); ++i) img.pixels[i] = static_cast<double>(raw[i]);
  return img;
}

void write_ppm(const Image& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) ppm_error(path, "cannot open for writing");
  out << (img.channels == 3 ? "P6" : "P5") << '\n'
      << img.width << ' ' << img.height << '\n'
      << 255 << '\n';
  std::vector<unsigned char> raw(img.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double v = std::round(img.pixels[i]);
    raw[i] = static_cast<unsigned char>(std::clamp(v, 0.0, 255.0));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) ppm_error(path, "write failed");
}

double psnr(const Image& reference, const Image& test, double peak) {
  if (reference.height != test.height || reference.width != test.width ||
      reference.channels != test.channels) {
    throw std::invalid_argument("psnr: image shape mismatch");
  }
  double mse = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double d = reference.pixels[i] - test.pixels[i];
    mse += d * d;
  }
  mse /= static_cast<double>(reference.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

Image add_gaussian_noise(const Image& img, double sigma, Rng& rng) {
  std::normal_distribution<double> normal(0.0, sigma);
  Image out = img;
  for (double& p : out.pixels) p += normal(rng);
  return out;
}

void PatchGrid::validate() const {
  if (image_h < 1 || image_w < 1 || patch_h < 1 || patch_w < 1 || (channels != 1 && channels != 3)) {
    throw std::invalid_argument("PatchGrid: bad dimensions");
  }
  if (image_h % patch_h != 0 || image_w % patch_w != 0) {
    throw std::invalid_argument("PatchGrid: patches must tile the image exactly");
  }
}

Matrix patchify(const Image& img, const PatchGrid& grid) {
  grid.validate();
  if (img.height != grid.image_h || img.width != grid.image_w || img.channels != grid.channels) {
    throw std::invalid_argument("patchify: image does not match grid");
  }
  const int blocks_x = grid.image_w / grid.patch_w;
  Matrix m(grid.rows(), grid.cols());
  for (Index p = 0; p < m.rows(); ++p) {
    const int by = static_cast<int>(p) / blocks_x;
    const int bx = static_cast<int>(p) % blocks_x;
    Index col = 0;
    for (int dy = 0; dy < grid.patch_h; ++dy) {
      for (int dx = 0; dx < grid.patch_w; ++dx) {
        for (int c = 0; c < grid.channels; ++c) {
          m(p, col++) = img.at(by * grid.patch_h + dy, bx * grid.patch_w + dx, c);
        }
      }
    }
  }
  return m;
}

Image unpatchify(const Matrix& m, const PatchGrid& grid) {
  grid.validate();
  if (m.rows() != grid.rows() || m.cols() != grid.cols()) {
    throw std::invalid_argument("unpatchify: matrix does not match grid");
  }
  const int blocks_x = grid.image_w / grid.patch_w;
  Image img(grid.image_h, grid.image_w, grid.channels);
  for (Index p = 0; p < m.rows(); ++p) {
    const int by = static_cast<int>(p) / blocks_x;
    const int bx = static_cast<int>(p) % blocks_x;
    Index col = 0;
    for (int dy = 0; dy < grid.patch_h; ++dy) {
      for (int dx = 0; dx < grid.patch_w; ++dx) {
        for (int c = 0; c < grid.channels; ++c) {
          img.at(by * grid.patch_h + dy, bx * grid.patch_w + dx, c) = m(p, col++);
        }
      }
    }
  }
  return img;
}

Image make_low_rank_image(int height, int width, int channels, int rank,
                          std::uint64_t seed, int patch) {
  PatchGrid grid{height, width, channels, patch, patch};
  grid.validate();
  if (rank < 1 || rank > std::min(grid.rows(), grid.cols())) {
    throw std::invalid_argument("make_low_rank_image: bad rank");
  }
  Rng rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * 3.141592653589793);
  std::uniform_real_distribution<double> freq(1.0, 4.0);

  // Smooth nonnegative factors keep the picture image-like; the sum of rank
  // outer products is exactly rank deficient by construction.
  Matrix m = Matrix::Zero(grid.rows(), grid.cols());
  for (int r = 0; r < rank; ++r) {
    Vector u(grid.rows()), v(grid.cols());
    const double fu = freq(rng), pu = phase(rng);
    const double fv = freq(rng), pv = phase(rng);
    for (Index i = 0; i < u.size(); ++i) {
      u(i) = 1.0 + std::sin(fu * static_cast<double>(i) / static_cast<double>(u.size()) * 6.28 + pu);
    }
    for (Index j = 0; j < v.size(); ++j) {
      v(j) = 1.0 + std::sin(fv * static_cast<double>(j) / static_cast<double>(v.size()) * 6.28 + pv);
    }
    m += u * v.transpose();
  }
  m *= 255.0 / m.maxCoeff();
  return unpatchify(m, grid);
}

}  // namespace ewa
