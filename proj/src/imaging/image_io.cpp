#include "ufo/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>
#include <vector>

#include "ufo/error.hpp"

namespace ufo {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const noexcept {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

std::string lower_ext(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::ranges::transform(ext, ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

unsigned char to_byte(double v) {
  return static_cast<unsigned char>(std::clamp(std::lround(v), 0L, 255L));
}

// Messages from libpng are carried back through the longjmp.
struct PngErrorState {
  std::string message;
  bool bit_depth = false;
};

void png_error_fn(png_structp png, png_const_charp msg) {
  auto* state = static_cast<PngErrorState*>(png_get_error_ptr(png));
  if (state) state->message = msg ? msg : "libpng error";
  png_longjmp(png, 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

ImageBuffer load_png(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw Error(ErrorCode::FileUnreadable, "cannot open " + path.string());

  std::array<png_byte, 8> sig{};
  if (std::fread(sig.data(), 1, sig.size(), file.get()) != sig.size() ||
      png_sig_cmp(sig.data(), 0, sig.size()) != 0) {
    throw Error(ErrorCode::DecodeError, "not a PNG file: " + path.string());
  }
  // libpng rejects a zero IHDR dimension as a generic error; peek so that
  // case gets its own code. IHDR width/height sit at bytes 16..23.
  {
    std::array<png_byte, 16> ihdr{};
    if (std::fread(ihdr.data(), 1, ihdr.size(), file.get()) == ihdr.size() &&
        std::equal(ihdr.begin() + 4, ihdr.begin() + 8, "IHDR")) {
      const bool zero_w = std::all_of(ihdr.begin() + 8, ihdr.begin() + 12, [](png_byte b) { return b == 0; });
      const bool zero_h = std::all_of(ihdr.begin() + 12, ihdr.end(), [](png_byte b) { return b == 0; });
      if (zero_w || zero_h) throw Error(ErrorCode::EmptyImage, path.string() + ": zero-sized image");
    }
    std::fseek(file.get(), static_cast<long>(sig.size()), SEEK_SET);
  }

  PngErrorState state;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &state, png_error_fn, png_warning_fn);
  if (!png) throw Error(ErrorCode::DecodeError, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(ErrorCode::DecodeError, "png_create_info_struct failed");
  }
  struct Guard {
    png_structp* png;
    png_infop* info;
    ~Guard() { png_destroy_read_struct(png, info, nullptr); }
  } guard{&png, &info};

  // Everything touched after setjmp that must survive a longjmp lives outside
  // this frame's automatic registers: geometry goes through `meta`, pixels through `rows`.
  std::vector<png_byte> pixels;
  struct Meta {
    png_uint_32 width = 0, height = 0;
    int channels = 0;
    int bit_depth = 0;
    std::size_t rowbytes = 0;
  } meta;
  std::vector<png_bytep> rows;

  if (setjmp(png_jmpbuf(png))) {
    if (state.bit_depth) {
      throw Error(ErrorCode::UnsupportedBitDepth, path.string() + ": " + state.message);
    }
    throw Error(ErrorCode::DecodeError, path.string() + ": " + state.message);
  }

  png_init_io(png, file.get());
  png_set_sig_bytes(png, static_cast<int>(sig.size()));
  png_read_info(png, info);

  meta.width = png_get_image_width(png, info);
  meta.height = png_get_image_height(png, info);
  meta.bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);

  if (meta.bit_depth > 8) {
    state.bit_depth = true;
    png_error(png, ("bit depth " + std::to_string(meta.bit_depth) + " not supported").c_str());
  }
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && meta.bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  meta.channels = png_get_channels(png, info);
  meta.rowbytes = png_get_rowbytes(png, info);
  if (meta.width == 0 || meta.height == 0) {
    png_error(png, "zero-sized image");
  }
  pixels.resize(meta.rowbytes * meta.height);
  rows.resize(meta.height);
  for (png_uint_32 y = 0; y < meta.height; ++y) rows[y] = pixels.data() + y * meta.rowbytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);

  if (meta.channels != 1 && meta.channels != 3) {
    throw Error(ErrorCode::DecodeError, path.string() + ": unexpected channel layout");
  }
  const int w = static_cast<int>(meta.width);
  const int h = static_cast<int>(meta.height);
  ImageBuffer out(w, h, meta.channels);
  for (int y = 0; y < h; ++y) {
    const png_byte* row = rows[y];
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < meta.channels; ++c) out.at(x, y, c) = row[x * meta.channels + c];
    }
  }
  return out;
}

// PNM tokenizer: whitespace separated, '#' starts a comment running to end of line.
class PnmReader {
 public:
  explicit PnmReader(std::vector<unsigned char> bytes) : bytes_(std::move(bytes)) {}

  std::string token() {
    skip_space();
    std::string tok;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#') {
      tok.push_back(static_cast<char>(bytes_[pos_++]));
    }
    return tok;
  }

  long number() {
    const std::string tok = token();
    if (tok.empty() || !std::ranges::all_of(tok, [](unsigned char c) { return std::isdigit(c); })) {
      throw Error(ErrorCode::DecodeError, "malformed PNM header");
    }
    return std::stol(tok);
  }

  // Exactly one whitespace byte separates the header from binary data.
  void skip_single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(ErrorCode::DecodeError, "malformed PNM header");
    }
    ++pos_;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }
  const unsigned char* cursor() const { return bytes_.data() + pos_; }

 private:
  void skip_space() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::vector<unsigned char> bytes_;
  std::size_t pos_ = 0;
};

ImageBuffer load_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileUnreadable, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  PnmReader reader(std::move(bytes));
  const std::string magic = reader.token();
  int channels = 0;
  bool binary = false;
  if (magic == "P5") { channels = 1; binary = true; }
  else if (magic == "P6") { channels = 3; binary = true; }
  else if (magic == "P2") { channels = 1; }
  else if (magic == "P3") { channels = 3; }
  else throw Error(ErrorCode::DecodeError, path.string() + ": unsupported PNM magic '" + magic + "'");

  const long w = reader.number();
  const long h = reader.number();
  const long maxval = reader.number();
  if (w == 0 || h == 0) throw Error(ErrorCode::EmptyImage, path.string() + ": zero-sized image");
  if (maxval <= 0 || maxval > 255) {
    throw Error(ErrorCode::UnsupportedBitDepth,
                path.string() + ": maxval " + std::to_string(maxval) + " is not 8-bit");
  }
  const double scale = 255.0 / static_cast<double>(maxval);
  const std::size_t count = static_cast<std::size_t>(w) * h * channels;

  ImageBuffer out(static_cast<int>(w), static_cast<int>(h), channels);
  auto store = [&](std::size_t i, long v) {
    if (v > maxval) throw Error(ErrorCode::DecodeError, path.string() + ": sample exceeds maxval");
    const std::size_t pixel = i / channels;
    const int c = static_cast<int>(i % channels);
    out.at(static_cast<int>(pixel % w), static_cast<int>(pixel / w), c) = v * scale;
  };

  if (binary) {
    reader.skip_single_space();
    if (reader.remaining() < count) throw Error(ErrorCode::DecodeError, path.string() + ": truncated pixel data");
    const unsigned char* p = reader.cursor();
    for (std::size_t i = 0; i < count; ++i) store(i, p[i]);
  } else {
    for (std::size_t i = 0; i < count; ++i) store(i, reader.number());
  }
  return out;
}

}  // namespace

ImageBuffer load_frame(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::FileUnreadable, "not a readable file: " + path.string());
  }
  const std::string ext = lower_ext(path);
  if (ext == ".png") return load_png(path);
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return load_pnm(path);

  // Unknown extension: sniff the magic bytes.
  std::ifstream in(path, std::ios::binary);
  char magic[2] = {0, 0};
  in.read(magic, 2);
  if (!in) throw Error(ErrorCode::FileUnreadable, "cannot read " + path.string());
  if (magic[0] == 'P') return load_pnm(path);
  return load_png(path);
}

void save_png(const std::filesystem::path& path, const ImageBuffer& img) {
  if (img.empty()) throw Error(ErrorCode::EmptyImage, "refusing to write an empty image");
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");

  PngErrorState state;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &state, png_error_fn, png_warning_fn);
  if (!png) throw Error(ErrorCode::IoError, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp* png;
    png_infop* info;
    ~Guard() { png_destroy_write_struct(png, info); }
  } guard{&png, &info};

  const int w = img.width();
  const int h = img.height();
  const int ch = img.channels();
  std::vector<png_byte> pixels(static_cast<std::size_t>(w) * h * ch);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        pixels[(static_cast<std::size_t>(y) * w + x) * ch + c] = to_byte(img.at(x, y, c));
      }
    }
  }
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) rows[y] = pixels.data() + static_cast<std::size_t>(y) * w * ch;

  if (setjmp(png_jmpbuf(png))) {
    throw Error(ErrorCode::IoError, path.string() + ": " + state.message);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 8,
               ch == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
}

void save_pnm(const std::filesystem::path& path, const ImageBuffer& img) {
  if (img.empty()) throw Error(ErrorCode::EmptyImage, "refusing to write an empty image");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  out << (img.channels() == 3 ? "P6" : "P5") << '\n'
      << img.width() << ' ' << img.height() << "\n255\n";
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < img.channels(); ++c) out.put(static_cast<char>(to_byte(img.at(x, y, c))));
    }
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

}  // namespace ufo
