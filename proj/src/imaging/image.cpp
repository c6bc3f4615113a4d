#include "ufo/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ufo/error.hpp"

namespace ufo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::FileUnreadable: return "file unreadable";
    case ErrorCode::DecodeError: return "decode error";
    case ErrorCode::UnsupportedBitDepth: return "unsupported bit depth";
    case ErrorCode::EmptyImage: return "empty image";
    case ErrorCode::ImageTooSmall: return "image too small";
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::OutOfBounds: return "out of bounds";
    case ErrorCode::NotNormalized: return "dictionary not normalized";
    case ErrorCode::NonFinite: return "non-finite value";
    case ErrorCode::InsufficientPatches: return "insufficient patches";
    case ErrorCode::ZeroVariance: return "zero variance";
    case ErrorCode::UnknownFrame: return "unknown frame";
    case ErrorCode::IoError: return "i/o error";
  }
  return "unknown error";
}

namespace {

void check_geometry(int width, int height, int channels) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::InvalidArgument, "negative image dimension");
  }
  if (channels != 1 && channels != 3) {
    throw Error(ErrorCode::InvalidArgument,
                "channel count must be 1 or 3, got " + std::to_string(channels));
  }
}

}  // namespace

Plane::Plane(int width, int height, double fill)
    : width_(width), height_(height),
      data_(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0), fill) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::InvalidArgument, "negative plane dimension");
  }
}

Plane::Plane(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 0 || height < 0 ||
      data_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::DimensionMismatch, "plane data length does not match geometry");
  }
}

ImageBuffer::ImageBuffer(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  check_geometry(width, height, channels);
  data_.assign(plane_size() * channels, fill);
}

ImageBuffer::ImageBuffer(int width, int height, int channels, std::vector<double> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  check_geometry(width, height, channels);
  if (data_.size() != plane_size() * channels) {
    throw Error(ErrorCode::DimensionMismatch, "image data length does not match geometry");
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "image data contains a non-finite value");
  }
}

ImageBuffer ImageBuffer::from_planes(const std::vector<Plane>& planes) {
  if (planes.empty()) throw Error(ErrorCode::InvalidArgument, "no planes given");
  const int w = planes.front().width();
  const int h = planes.front().height();
  ImageBuffer out(w, h, static_cast<int>(planes.size()));
  for (std::size_t c = 0; c < planes.size(); ++c) {
    if (planes[c].width() != w || planes[c].height() != h) {
      throw Error(ErrorCode::DimensionMismatch, "planes differ in geometry");
    }
    std::ranges::copy(planes[c].data(), out.channel(static_cast<int>(c)).begin());
  }
  return out;
}

Plane ImageBuffer::plane(int c) const {
  auto src = channel(c);
  return Plane(width_, height_, std::vector<double>(src.begin(), src.end()));
}

std::vector<Plane> ImageBuffer::planes() const {
  std::vector<Plane> out;
  out.reserve(channels_);
  for (int c = 0; c < channels_; ++c) out.push_back(plane(c));
  return out;
}

Plane luminance(const ImageBuffer& img) {
  if (img.channels() == 1) return img.plane(0);
  Plane out(img.width(), img.height());
  auto r = img.channel(0);
  auto g = img.channel(1);
  auto b = img.channel(2);
  auto dst = out.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
  }
  return out;
}

}  // namespace ufo
