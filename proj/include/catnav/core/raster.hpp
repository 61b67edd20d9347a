#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "catnav/core/error.hpp"

namespace catnav {

using Rgb = std::array<std::uint8_t, 3>;

/// Row-major width x height image. Pixel (u, v) is column u, row v.
template <class T>
class Image {
 public:
  Image() = default;
  Image(int width, int height, T fill = T{})
      : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height, fill) {
    if (width < 0 || height < 0) throw Error(ErrorCode::kInvalidArgument, "negative image size");
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool contains(int u, int v) const noexcept { return u >= 0 && v >= 0 && u < width_ && v < height_; }

  T& at(int u, int v) { return data_[index(u, v)]; }
  const T& at(int u, int v) const { return data_[index(u, v)]; }

  std::vector<T>& data() noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int u, int v) const { return static_cast<std::size_t>(v) * width_ + u; }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

// Binary PPM (P6) and PGM (P5) with maxval 255.
std::string encode_ppm(const Image<Rgb>& image);
Image<Rgb> decode_ppm(const std::string& bytes);
std::string encode_pgm(const Image<std::uint8_t>& image);
Image<std::uint8_t> decode_pgm(const std::string& bytes);

void write_file(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace catnav
