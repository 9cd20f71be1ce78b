#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "glcmsample/volume.hpp"

namespace glcmsample {

/// Loads every *.png / *.pgm file of `dir` as one slice, in lexicographic
/// filename order. Slices must be single-channel 8- or 16-bit.
Volume load_image_stack(const std::filesystem::path& dir, const std::string& id);

/// Reads a JSON header (width, height, n_slices, dtype, endianness, data_file)
/// and the raw blob it names, resolved relative to the header.
Volume load_raw_volume(const std::filesystem::path& header_path);

/// Writes `volume` as header + blob. The blob is placed next to the header
/// under `data_file` (defaults to the header stem + ".raw").
void write_raw_volume(const Volume& volume, const std::filesystem::path& header_path,
                      const std::string& data_file = {});

/// Dispatches on the path: a directory is an image stack, anything else a raw header.
Volume load_volume(const std::filesystem::path& path, const std::string& id = {});

/// Single-slice raster I/O. PNG and binary PGM are recognised by extension.
Slice read_image(const std::filesystem::path& path, SampleType* sample_type = nullptr);
void write_png(const std::filesystem::path& path, const Slice& slice, SampleType sample_type);

/// Files an image stack would load from `dir`, sorted.
std::vector<std::filesystem::path> list_image_files(const std::filesystem::path& dir);

}  // namespace glcmsample
