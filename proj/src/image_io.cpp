#include "lcmwarp/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "lcmwarp/errors.hpp"

namespace lcmwarp {

namespace fs = std::filesystem;

namespace {

// Minimal cursor over a PPM header.
class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned long number() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw IoError("malformed PPM header");
    }
    unsigned long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > (1ul << 24)) throw IoError("PPM header value too large");
    }
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::string lower_extension(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return ext;
}

}  // namespace

ImageFormat format_from_path(const fs::path& path) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return ImageFormat::Png;
  if (ext == ".ppm") return ImageFormat::Ppm;
  throw IoError("unsupported image extension '" + ext + "' for " + path.string() +
                " (expected .png or .ppm)");
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::round(v * 255.0), 0.0, 255.0));
}

ImageBuffer decode_ppm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6') {
    throw IoError("not a binary PPM (P6) file");
  }
  HeaderReader header(bytes);
  header.advance(2);
  const unsigned long width = header.number();
  const unsigned long height = header.number();
  const unsigned long maxval = header.number();
  if (width == 0 || height == 0) throw IoError("PPM has zero width or height");
  if (maxval == 0 || maxval > 255) {
    throw IoError("PPM maxval " + std::to_string(maxval) + " unsupported (8-bit only)");
  }
  // Exactly one whitespace byte separates the header from the raster.
  if (header.pos() >= bytes.size() || !std::isspace(bytes[header.pos()])) {
    throw IoError("malformed PPM header");
  }
  header.advance(1);
  const std::size_t samples = static_cast<std::size_t>(width) * height * 3;
  if (bytes.size() - header.pos() < samples) throw IoError("PPM raster is truncated");

  std::vector<double> data(samples);
  const double scale = static_cast<double>(maxval);
  for (std::size_t i = 0; i < samples; ++i) {
    data[i] = std::min(1.0, bytes[header.pos() + i] / scale);
  }
  return ImageBuffer(width, height, 3, std::move(data));
}

std::vector<std::uint8_t> encode_ppm(const ImageBuffer& img) {
  const std::string header =
      "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + img.width() * img.height() * 3);
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < img.width(); ++x) {
      const auto px = img.pixel(x, y);
      for (std::size_t ch = 0; ch < 3; ++ch) {
        out.push_back(to_byte(img.channels() == 1 ? px[0] : px[ch]));
      }
    }
  }
  return out;
}

ImageBuffer decode_png(std::span<const std::uint8_t> bytes) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw IoError(std::string("PNG decode failed: ") + image.message);
  }
  std::size_t channels = 3;
  if (image.format & PNG_FORMAT_FLAG_ALPHA) {
    image.format = PNG_FORMAT_RGBA;
    channels = 4;
  } else if (image.format & PNG_FORMAT_FLAG_COLOR) {
    image.format = PNG_FORMAT_RGB;
  } else {
    image.format = PNG_FORMAT_GRAY;
    channels = 1;
  }
  std::vector<std::uint8_t> raw(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, raw.data(), 0, nullptr)) {
    const std::string message = image.message;
    png_image_free(&image);
    throw IoError("PNG decode failed: " + message);
  }
  std::vector<double> data(raw.size());
  std::transform(raw.begin(), raw.end(), data.begin(), [](std::uint8_t v) { return v / 255.0; });
  return ImageBuffer(image.width, image.height, channels, std::move(data));
}

std::vector<std::uint8_t> encode_png(const ImageBuffer& img) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = img.channels() == 1   ? PNG_FORMAT_GRAY
                 : img.channels() == 3 ? PNG_FORMAT_RGB
                                       : PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> raw(img.data().size());
  std::transform(img.data().begin(), img.data().end(), raw.begin(), to_byte);

  png_alloc_size_t size = 0;
  if (!png_image_write_get_memory_size(image, size, 0, raw.data(), 0, nullptr)) {
    throw IoError(std::string("PNG encode failed: ") + image.message);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, raw.data(), 0, nullptr)) {
    throw IoError(std::string("PNG encode failed: ") + image.message);
  }
  out.resize(size);
  return out;
}

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read error on " + path.string());
  return bytes;
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write error on " + path.string());
}

ImageBuffer read_image(const fs::path& path) {
  const ImageFormat format = format_from_path(path);
  const std::vector<std::uint8_t> bytes = read_file(path);
  return format == ImageFormat::Png ? decode_png(bytes) : decode_ppm(bytes);
}

void write_image(const fs::path& path, const ImageBuffer& img) {
  const ImageFormat format = format_from_path(path);
  write_file(path, format == ImageFormat::Png ? encode_png(img) : encode_ppm(img));
}

}  // namespace lcmwarp
