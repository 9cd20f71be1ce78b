#include "glcmsample/volume_io.hpp"

#include <algorithm>
#include <csetjmp>
#include <cstdio>
#include <cctype>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>
#include <png.h>

#include "glcmsample/error.hpp"

namespace fs = std::filesystem;

namespace glcmsample {

namespace {

std::string lower_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

bool is_image_file(const fs::path& p) {
  const std::string ext = lower_extension(p);
  return ext == ".png" || ext == ".pgm";
}

std::vector<unsigned char> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// libpng reports errors through longjmp. The functions that call setjmp keep
// no objects with non-trivial destructors alive across it.

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReader() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

struct PngInfo {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
};

bool png_read_header(PngReader& r, std::FILE* f, PngInfo& out) {
  if (setjmp(png_jmpbuf(r.png))) return false;
  png_init_io(r.png, f);
  png_read_info(r.png, r.info);
  out.width = png_get_image_width(r.png, r.info);
  out.height = png_get_image_height(r.png, r.info);
  out.bit_depth = png_get_bit_depth(r.png, r.info);
  out.color_type = png_get_color_type(r.png, r.info);
  if (out.color_type == PNG_COLOR_TYPE_GRAY && out.bit_depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
  png_read_update_info(r.png, r.info);
  return true;
}

bool png_read_pixels(PngReader& r, png_bytepp rows) {
  if (setjmp(png_jmpbuf(r.png))) return false;
  png_read_image(r.png, rows);
  png_read_end(r.png, nullptr);
  return true;
}

Slice read_png(const fs::path& path, SampleType* sample_type) {
  FilePtr f(std::fopen(path.string().c_str(), "rb"));
  if (!f) throw Error("cannot open " + path.string());
  png_byte sig[8];
  if (std::fread(sig, 1, 8, f.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw Error(path.filename().string() + ": not a PNG file");
  PngReader r;
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!r.png) throw Error("libpng initialisation failed");
  r.info = png_create_info_struct(r.png);
  if (!r.info) throw Error("libpng initialisation failed");
  png_set_sig_bytes(r.png, 8);
  PngInfo info;
  if (!png_read_header(r, f.get(), info)) throw Error(path.filename().string() + ": corrupt PNG");
  if (info.color_type != PNG_COLOR_TYPE_GRAY)
    throw Error(path.filename().string() + ": not a single-channel grayscale image");
  const int bytes_per_sample = info.bit_depth == 16 ? 2 : 1;
  const std::size_t row_bytes = static_cast<std::size_t>(info.width) * bytes_per_sample;
  std::vector<png_byte> buffer(row_bytes * info.height);
  std::vector<png_bytep> rows(info.height);
  for (png_uint_32 y = 0; y < info.height; ++y) rows[y] = buffer.data() + y * row_bytes;
  if (!png_read_pixels(r, rows.data())) throw Error(path.filename().string() + ": corrupt PNG");

  Slice slice(info.height, info.width);
  for (png_uint_32 y = 0; y < info.height; ++y)
    for (png_uint_32 x = 0; x < info.width; ++x) {
      const png_byte* p = rows[y] + x * bytes_per_sample;
      slice(y, x) = bytes_per_sample == 2 ? static_cast<std::uint16_t>((p[0] << 8) | p[1]) : p[0];
    }
  if (sample_type) *sample_type = bytes_per_sample == 2 ? SampleType::u16 : SampleType::u8;
  return slice;
}

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriter() { png_destroy_write_struct(&png, info ? &info : nullptr); }
};

bool png_write_all(PngWriter& w, std::FILE* f, png_uint_32 width, png_uint_32 height, int bit_depth,
                   png_bytepp rows) {
  if (setjmp(png_jmpbuf(w.png))) return false;
  png_init_io(w.png, f);
  png_set_IHDR(w.png, w.info, width, height, bit_depth, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(w.png, w.info);
  png_write_image(w.png, rows);
  png_write_end(w.png, nullptr);
  return true;
}

// Binary PGM (P5). Comments in the header are skipped.
Slice read_pgm(const fs::path& path, SampleType* sample_type) {
  const std::vector<unsigned char> bytes = read_bytes(path);
  std::size_t pos = 0;
  auto next_token = [&]() -> std::string {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    std::string tok;
    while (pos < bytes.size() && !std::isspace(bytes[pos])) tok.push_back(static_cast<char>(bytes[pos++]));
    return tok;
  };
  const std::string magic = next_token();
  if (magic != "P5") {
    if (magic == "P6" || magic == "P3")
      throw Error(path.filename().string() + ": not a single-channel grayscale image");
    throw Error(path.filename().string() + ": not a binary PGM file");
  }
  int width = 0, height = 0, maxval = 0;
  try {
    width = std::stoi(next_token());
    height = std::stoi(next_token());
    maxval = std::stoi(next_token());
  } catch (const std::exception&) {
    throw Error(path.filename().string() + ": malformed PGM header");
  }
  ++pos;  // single whitespace after maxval
  if (width < 1 || height < 1 || maxval < 1 || maxval > 65535)
    throw Error(path.filename().string() + ": malformed PGM header");
  const int bps = maxval > 255 ? 2 : 1;
  const std::size_t need = static_cast<std::size_t>(width) * height * bps;
  if (bytes.size() < pos + need) throw Error(path.filename().string() + ": truncated PGM data");
  Slice slice(height, width);
  const unsigned char* p = bytes.data() + pos;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x, p += bps)
      slice(y, x) = bps == 2 ? static_cast<std::uint16_t>((p[0] << 8) | p[1]) : p[0];
  if (sample_type) *sample_type = bps == 2 ? SampleType::u16 : SampleType::u8;
  return slice;
}

std::size_t sample_size(SampleType t) { return t == SampleType::u8 ? 1 : 2; }

}  // namespace

Slice read_image(const fs::path& path, SampleType* sample_type) {
  const std::string ext = lower_extension(path);
  if (ext == ".png") return read_png(path, sample_type);
  if (ext == ".pgm") return read_pgm(path, sample_type);
  throw Error(path.filename().string() + ": unsupported image format");
}

void write_png(const fs::path& path, const Slice& slice, SampleType sample_type) {
  const int bps = sample_type == SampleType::u16 ? 2 : 1;
  const auto height = static_cast<png_uint_32>(slice.rows());
  const auto width = static_cast<png_uint_32>(slice.cols());
  const std::size_t row_bytes = static_cast<std::size_t>(width) * bps;
  std::vector<png_byte> buffer(row_bytes * height);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 y = 0; y < height; ++y) {
    rows[y] = buffer.data() + y * row_bytes;
    for (png_uint_32 x = 0; x < width; ++x) {
      const std::uint16_t v = slice(y, x);
      if (bps == 2) {
        rows[y][2 * x] = static_cast<png_byte>(v >> 8);
        rows[y][2 * x + 1] = static_cast<png_byte>(v & 0xff);
      } else {
        if (v > 255) throw Error(path.filename().string() + ": value " + std::to_string(v) + " does not fit 8 bits");
        rows[y][x] = static_cast<png_byte>(v);
      }
    }
  }
  FilePtr f(std::fopen(path.string().c_str(), "wb"));
  if (!f) throw Error("cannot write " + path.string());
  PngWriter w;
  w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!w.png) throw Error("libpng initialisation failed");
  w.info = png_create_info_struct(w.png);
  if (!w.info) throw Error("libpng initialisation failed");
  if (!png_write_all(w, f.get(), width, height, bps * 8, rows.data()))
    throw Error("failed writing " + path.string());
}

std::vector<fs::path> list_image_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(dir.string() + ": not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  return files;
}

Volume load_image_stack(const fs::path& dir, const std::string& id) {
  const std::vector<fs::path> files = list_image_files(dir);
  if (files.empty()) throw Error(dir.string() + ": empty directory (no image files)");
  std::vector<Slice> slices;
  slices.reserve(files.size());
  bool any16 = false;
  for (const fs::path& file : files) {
    SampleType t = SampleType::u8;
    Slice s = read_image(file, &t);
    any16 = any16 || t == SampleType::u16;
    if (!slices.empty() && (s.rows() != slices.front().rows() || s.cols() != slices.front().cols()))
      throw Error(file.filename().string() + ": mixed dimensions (" + std::to_string(s.cols()) + "x" +
                  std::to_string(s.rows()) + " vs " + std::to_string(slices.front().cols()) + "x" +
                  std::to_string(slices.front().rows()) + ")");
    slices.push_back(std::move(s));
  }
  return Volume(id.empty() ? dir.filename().string() : id, std::move(slices),
                any16 ? SampleType::u16 : SampleType::u8);
}

Volume load_raw_volume(const fs::path& header_path) {
  nlohmann::json header;
  {
    std::ifstream in(header_path);
    if (!in) throw Error("cannot open " + header_path.string());
    try {
      in >> header;
    } catch (const nlohmann::json::exception& e) {
      throw Error(header_path.filename().string() + ": malformed header: " + e.what());
    }
  }
  int width = 0, height = 0, n_slices = 0;
  std::string dtype, endianness = "little", data_file, id;
  try {
    width = header.at("width").get<int>();
    height = header.at("height").get<int>();
    n_slices = header.at("n_slices").get<int>();
    dtype = header.at("dtype").get<std::string>();
    if (header.contains("endianness")) endianness = header.at("endianness").get<std::string>();
    data_file = header.at("data_file").get<std::string>();
    id = header.value("id", header_path.stem().string());
  } catch (const nlohmann::json::exception& e) {
    throw Error(header_path.filename().string() + ": malformed header: " + e.what());
  }
  SampleType type;
  if (dtype == "u8")
    type = SampleType::u8;
  else if (dtype == "u16")
    type = SampleType::u16;
  else
    throw Error(header_path.filename().string() + ": unknown dtype '" + dtype + "'");
  if (endianness != "little")
    throw Error(header_path.filename().string() + ": unsupported endianness '" + endianness + "'");
  if (width < 2 || height < 2 || n_slices < 1)
    throw Error(header_path.filename().string() + ": invalid dimensions");

  const fs::path blob_path = header_path.parent_path() / data_file;
  const std::vector<unsigned char> blob = read_bytes(blob_path);
  const std::size_t bps = sample_size(type);
  const std::size_t expected = static_cast<std::size_t>(width) * height * n_slices * bps;
  if (blob.size() != expected)
    throw Error(blob_path.filename().string() + ": size mismatch: expected " + std::to_string(expected) +
                ", got " + std::to_string(blob.size()));

  std::vector<Slice> slices(static_cast<std::size_t>(n_slices), Slice(height, width));
  const unsigned char* p = blob.data();
  for (auto& s : slices)
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x, p += bps)
        s(y, x) = bps == 2 ? static_cast<std::uint16_t>(p[0] | (p[1] << 8)) : p[0];
  return Volume(id, std::move(slices), type);
}

void write_raw_volume(const Volume& volume, const fs::path& header_path, const std::string& data_file) {
  const std::string blob_name = data_file.empty() ? header_path.stem().string() + ".raw" : data_file;
  const SampleType type = volume.sample_type();
  if (type == SampleType::u8 && volume.global_range().max > 255)
    throw Error("volume '" + volume.id() + "' does not fit dtype u8");
  const std::size_t bps = sample_size(type);
  std::vector<unsigned char> blob;
  blob.reserve(static_cast<std::size_t>(volume.width()) * volume.height() * volume.n_slices() * bps);
  for (const Slice& s : volume.slices())
    for (Eigen::Index y = 0; y < s.rows(); ++y)
      for (Eigen::Index x = 0; x < s.cols(); ++x) {
        const std::uint16_t v = s(y, x);
        blob.push_back(static_cast<unsigned char>(v & 0xff));
        if (bps == 2) blob.push_back(static_cast<unsigned char>(v >> 8));
      }

  nlohmann::ordered_json header;
  header["id"] = volume.id();
  header["width"] = volume.width();
  header["height"] = volume.height();
  header["n_slices"] = volume.n_slices();
  header["dtype"] = type == SampleType::u8 ? "u8" : "u16";
  header["endianness"] = "little";
  header["data_file"] = blob_name;

  const fs::path blob_path = header_path.parent_path() / blob_name;
  {
    std::ofstream out(blob_path, std::ios::binary);
    if (!out) throw Error("cannot write " + blob_path.string());
    out.write(reinterpret_cast<const char*>(blob.data()), static_cast<std::streamsize>(blob.size()));
  }
  std::ofstream out(header_path);
  if (!out) throw Error("cannot write " + header_path.string());
  out << header.dump(2) << '\n';
}

Volume load_volume(const fs::path& path, const std::string& id) {
  if (fs::is_directory(path)) return load_image_stack(path, id);
  if (!fs::exists(path)) throw Error(path.string() + ": no such file or directory");
  Volume v = load_raw_volume(path);
  if (id.empty() || id == v.id()) return v;
  return Volume(id, v.slices(), v.sample_type());
}

}  // namespace glcmsample
