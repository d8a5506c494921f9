#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "ctxattn/model.hpp"

namespace ctxattn::io {

inline constexpr std::string_view kModelMagic = "CAATMDL1";
inline constexpr std::uint32_t kModelFormatVersion = 1;

/// Model file layout:
///   bytes 0..7   magic "CAATMDL1"
///   bytes 8..11  manifest length N, uint32 little-endian
///   next N bytes UTF-8 JSON manifest
///                {format_version, config, label_names, vocab,
///                 tensors: [{name, shape: [rows, cols], byte_offset}]}
///   remainder    float32 little-endian tensor data, manifest order,
///                offsets relative to the payload start
std::string serialize_model(const model::ModelBundle& bundle);

/// Validates magic, version, manifest, tensor layout and payload size
/// before decoding. Throws FormatError ("not a model file") on bad magic,
/// VersionError on an unknown format_version, IntegrityError on truncation
/// or any layout inconsistency.
model::ModelBundle deserialize_model(std::string_view bytes);

void save_model(const model::ModelBundle& bundle, const std::filesystem::path& path);
model::ModelBundle load_model(const std::filesystem::path& path);

}  // namespace ctxattn::io
