#include "radix/image.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <zlib.h>

#include "json.hpp"
#include "radix/error.hpp"

namespace radix {

namespace {

class GzReader {
 public:
  explicit GzReader(const std::string& path) : path_(path), file_(gzopen(path.c_str(), "rb")) {
    if (!file_) throw Error(Errc::Io, "cannot open " + path);
  }
  ~GzReader() { gzclose(file_); }
  GzReader(const GzReader&) = delete;
  GzReader& operator=(const GzReader&) = delete;

  void read(void* dst, std::size_t n) {
    const int got = gzread(file_, dst, static_cast<unsigned>(n));
    if (got < 0 || static_cast<std::size_t>(got) != n) {
      throw Error(Errc::Parse, "truncated IDX file " + path_);
    }
  }

  std::uint32_t be32() {
    unsigned char b[4];
    read(b, 4);
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) |
           std::uint32_t(b[3]);
  }

 private:
  std::string path_;
  gzFile file_;
};

void put_be32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {char(v >> 24), char(v >> 16), char(v >> 8), char(v)};
  out.write(b, 4);
}

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

}  // namespace

std::vector<ImageU8> read_idx_images(const std::string& path, std::size_t limit) {
  GzReader in(path);
  const auto magic = in.be32();
  if (magic != kImageMagic) throw Error(Errc::Parse, path + " is not an IDX image file");
  const std::size_t count = in.be32();
  const int rows = static_cast<int>(in.be32());
  const int cols = static_cast<int>(in.be32());
  const std::size_t n = limit ? std::min(limit, count) : count;
  std::vector<ImageU8> images(n);
  for (auto& img : images) {
    img.pixels.resize(rows, cols);
    in.read(img.pixels.data(), static_cast<std::size_t>(rows) * cols);
  }
  return images;
}

std::vector<std::uint8_t> read_idx_labels(const std::string& path, std::size_t limit) {
  GzReader in(path);
  if (in.be32() != kLabelMagic) throw Error(Errc::Parse, path + " is not an IDX label file");
  const std::size_t count = in.be32();
  std::vector<std::uint8_t> labels(limit ? std::min(limit, count) : count);
  if (!labels.empty()) in.read(labels.data(), labels.size());
  return labels;
}

void write_idx_images(const std::string& path, const std::vector<ImageU8>& images) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot open " + path + " for writing");
  const int rows = images.empty() ? 0 : images[0].height();
  const int cols = images.empty() ? 0 : images[0].width();
  put_be32(out, kImageMagic);
  put_be32(out, static_cast<std::uint32_t>(images.size()));
  put_be32(out, rows);
  put_be32(out, cols);
  for (const auto& img : images) {
    if (img.height() != rows || img.width() != cols) {
      throw Error(Errc::ShapeMismatch, "IDX images must share one size");
    }
    out.write(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
  }
}

void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot open " + path + " for writing");
  put_be32(out, kLabelMagic);
  put_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()), labels.size());
}

void write_pgm(std::ostream& out, const ImageU8& img) {
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
}

void write_pgm(const std::string& path, const ImageU8& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot open " + path + " for writing");
  write_pgm(out, img);
}

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  if (tok.empty()) throw Error(Errc::Parse, "truncated PGM header");
  return tok;
}

}  // namespace

ImageU8 read_pgm(std::istream& in) {
  if (pgm_token(in) != "P5") throw Error(Errc::Parse, "only binary P5 PGM is supported");
  const int w = std::stoi(pgm_token(in));
  const int h = std::stoi(pgm_token(in));
  if (std::stoi(pgm_token(in)) != 255) throw Error(Errc::Parse, "PGM maxval must be 255");
  ImageU8 img;
  img.pixels.resize(h, w);
  in.read(reinterpret_cast<char*>(img.pixels.data()), img.pixels.size());
  if (in.gcount() != img.pixels.size()) throw Error(Errc::Parse, "truncated PGM payload");
  return img;
}

ImageU8 rescale_to_u8(const Eigen::MatrixXi& values, Rescale* used) {
  Rescale r;
  if (values.size() > 0) {
    r.min = values.minCoeff();
    r.max = values.maxCoeff();
  }
  r.scale = r.max > r.min ? 255.0 / (r.max - r.min) : 0.0;
  ImageU8 img;
  img.pixels = values.unaryExpr([&r](int v) {
    return static_cast<std::uint8_t>(std::lround((v - r.min) * r.scale));
  });
  if (used) *used = r;
  return img;
}

void write_rescale_metadata(const std::string& path, const Rescale& r) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::Io, "cannot open " + path + " for writing");
  const nlohmann::ordered_json j = {{"min", r.min}, {"max", r.max}, {"scale", r.scale}};
  out << j.dump() << '\n';
}

Rescale read_rescale_metadata(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  try {
    const auto j = nlohmann::json::parse(in);
    return {j.at("min").get<int>(), j.at("max").get<int>(), j.at("scale").get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, std::string("bad rescale metadata: ") + e.what());
  }
}

ImageU8 downsample(const ImageU8& img, int size) {
  if (size <= 0 || size > img.height() || size > img.width()) {
    throw Error(Errc::InvalidArgument, "downsample size must be in [1, image size]");
  }
  const int fy = img.height() / size, fx = img.width() / size;
  const int oy = (img.height() - fy * size) / 2, ox = (img.width() - fx * size) / 2;
  ImageU8 out;
  out.pixels.resize(size, size);
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      const double mean =
          img.pixels.block(oy + r * fy, ox + c * fx, fy, fx).cast<double>().mean();
      out.pixels(r, c) = static_cast<std::uint8_t>(std::lround(mean));
    }
  }
  return out;
}

}  // namespace radix
