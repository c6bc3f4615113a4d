#include "ufo/patches.hpp"

#include <algorithm>
#include <string>

#include "ufo/error.hpp"

namespace ufo {

std::vector<int> patch_positions(int length, int side, int stride) {
  std::vector<int> pos;
  const int last = length - side;
  for (int p = 0; p <= last; p += stride) pos.push_back(p);
  if (!pos.empty() && pos.back() != last) pos.push_back(last);
  return pos;
}

PatchMatrix extract_patches(const ImageBuffer& img, int side, int stride) {
  if (side < 1) throw Error(ErrorCode::InvalidArgument, "patch side must be >= 1");
  if (stride < 1) throw Error(ErrorCode::InvalidArgument, "patch stride must be >= 1");
  if (side > std::min(img.width(), img.height())) {
    throw Error(ErrorCode::ImageTooSmall, "patch side " + std::to_string(side) + " exceeds image " +
                                              std::to_string(img.width()) + "x" + std::to_string(img.height()));
  }

  const auto ys = patch_positions(img.height(), side, stride);
  const auto xs = patch_positions(img.width(), side, stride);

  PatchMatrix pm;
  pm.side = side;
  pm.channels = img.channels();
  pm.origins.reserve(ys.size() * xs.size());
  for (int y : ys) {
    for (int x : xs) pm.origins.push_back({y, x});
  }
  pm.columns.resize(pm.patch_dim(), pm.count());

  for (int p = 0; p < pm.count(); ++p) {
    const auto [oy, ox] = pm.origins[p];
    double* col = pm.columns.col(p).data();
    for (int c = 0; c < img.channels(); ++c) {
      auto plane = img.channel(c);
      for (int dy = 0; dy < side; ++dy) {
        const double* row = plane.data() + static_cast<std::size_t>(oy + dy) * img.width() + ox;
        col = std::copy(row, row + side, col);
      }
    }
  }
  return pm;
}

void place_patches(PatchAccumulator& acc, int side, const std::vector<PatchOrigin>& origins,
                   const Eigen::MatrixXd& columns) {
  const int w = acc.sums.width();
  const int h = acc.sums.height();
  const int ch = acc.sums.channels();
  if (columns.rows() != static_cast<Eigen::Index>(side) * side * ch ||
      columns.cols() != static_cast<Eigen::Index>(origins.size())) {
    throw Error(ErrorCode::DimensionMismatch, "patch columns do not match accumulator geometry");
  }
  if (acc.counts.width() != w || acc.counts.height() != h) {
    throw Error(ErrorCode::DimensionMismatch, "count plane does not match accumulator geometry");
  }
  for (std::size_t p = 0; p < origins.size(); ++p) {
    const auto [oy, ox] = origins[p];
    if (oy < 0 || ox < 0 || oy + side > h || ox + side > w) {
      throw Error(ErrorCode::OutOfBounds, "patch origin (" + std::to_string(oy) + ", " + std::to_string(ox) +
                                              ") falls outside the accumulator");
    }
  }

  for (std::size_t p = 0; p < origins.size(); ++p) {
    const auto [oy, ox] = origins[p];
    const double* col = columns.col(static_cast<Eigen::Index>(p)).data();
    for (int c = 0; c < ch; ++c) {
      auto plane = acc.sums.channel(c);
      for (int dy = 0; dy < side; ++dy) {
        double* row = plane.data() + static_cast<std::size_t>(oy + dy) * w + ox;
        for (int dx = 0; dx < side; ++dx) row[dx] += *col++;
      }
    }
    for (int dy = 0; dy < side; ++dy) {
      for (int dx = 0; dx < side; ++dx) acc.counts(ox + dx, oy + dy) += 1.0;
    }
  }
}

}  // namespace ufo
