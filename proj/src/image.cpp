#include "lcmwarp/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lcmwarp {

namespace {

void check_shape(std::size_t width, std::size_t height, std::size_t channels) {
  if (width == 0 || height == 0) throw std::invalid_argument("image dimensions must be >= 1");
  if (channels != 1 && channels != 3 && channels != 4) {
    throw std::invalid_argument("channel count must be 1, 3 or 4, got " +
                                std::to_string(channels));
  }
}

bool in_unit_range(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

ImageBuffer::ImageBuffer(std::size_t width, std::size_t height, std::size_t channels,
                         double value)
    : width_(width), height_(height), channels_(channels) {
  check_shape(width, height, channels);
  if (!in_unit_range(value)) throw std::invalid_argument("pixel value outside [0,1]");
  data_.assign(width * height * channels, value);
}

ImageBuffer::ImageBuffer(std::size_t width, std::size_t height, std::size_t channels,
                         std::vector<double> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  check_shape(width, height, channels);
  if (data_.size() != width * height * channels) {
    throw std::invalid_argument("pixel buffer length does not match width*height*channels");
  }
  if (!std::all_of(data_.begin(), data_.end(), in_unit_range)) {
    throw std::invalid_argument("pixel value outside [0,1]");
  }
}

double mean_abs_diff(const ImageBuffer& a, const ImageBuffer& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("image shapes differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) sum += std::abs(a.data()[i] - b.data()[i]);
  return sum / static_cast<double>(a.data().size());
}

double max_abs_diff(const ImageBuffer& a, const ImageBuffer& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("image shapes differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  }
  return worst;
}

}  // namespace lcmwarp
