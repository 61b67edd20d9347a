#include "catnav/core/raster.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace catnav {

namespace {

std::string header(const char* magic, int width, int height) {
  return std::string(magic) + "\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
}

// Parses "Px <w> <h> 255" followed by exactly one whitespace byte.
std::size_t parse_header(const std::string& bytes, const char* magic, int& width, int& height) {
  if (bytes.size() < 2 || bytes.compare(0, 2, magic) != 0)
    throw Error(ErrorCode::kParseError, std::string("expected ") + magic + " raster");
  std::size_t pos = 2;
  auto next_int = [&]() {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    std::size_t start = pos;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (start == pos) throw Error(ErrorCode::kParseError, "truncated raster header");
    return std::stoi(bytes.substr(start, pos - start));
  };
  width = next_int();
  height = next_int();
  if (next_int() != 255) throw Error(ErrorCode::kParseError, "only maxval 255 is supported");
  if (pos >= bytes.size()) throw Error(ErrorCode::kParseError, "truncated raster");
  return pos + 1;
}

}  // namespace

std::string encode_ppm(const Image<Rgb>& image) {
  std::string out = header("P6", image.width(), image.height());
  out.reserve(out.size() + image.size() * 3);
  for (const auto& px : image.data()) out.append(reinterpret_cast<const char*>(px.data()), 3);
  return out;
}

Image<Rgb> decode_ppm(const std::string& bytes) {
  int w = 0, h = 0;
  std::size_t pos = parse_header(bytes, "P6", w, h);
  Image<Rgb> image(w, h);
  if (bytes.size() - pos < image.size() * 3) throw Error(ErrorCode::kParseError, "truncated PPM payload");
  for (auto& px : image.data()) {
    for (auto& c : px) c = static_cast<std::uint8_t>(bytes[pos++]);
  }
  return image;
}

std::string encode_pgm(const Image<std::uint8_t>& image) {
  std::string out = header("P5", image.width(), image.height());
  out.append(reinterpret_cast<const char*>(image.data().data()), image.size());
  return out;
}

Image<std::uint8_t> decode_pgm(const std::string& bytes) {
  int w = 0, h = 0;
  std::size_t pos = parse_header(bytes, "P5", w, h);
  Image<std::uint8_t> image(w, h);
  if (bytes.size() - pos < image.size()) throw Error(ErrorCode::kParseError, "truncated PGM payload");
  for (auto& px : image.data()) px = static_cast<std::uint8_t>(bytes[pos++]);
  return image;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace catnav
