#include "ctxattn/model_io.hpp"

#include <bit>
#include <cstring>

#include <fmt/format.h>

#include "ctxattn/dataset.hpp"
#include "ctxattn/errors.hpp"
#include "json.hpp"

namespace ctxattn::io {

using nlohmann::ordered_json;

namespace {

constexpr std::size_t kHeaderSize = 12;

void put_u32(std::string& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

std::uint32_t get_u32(std::string_view bytes, std::size_t at) {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + b])) << (8 * b);
    return v;
}

std::string_view norm_name(model::AttentionNorm norm) {
    return norm == model::AttentionNorm::Softmax ? "softmax" : "linear";
}

ordered_json config_json(const model::ModelConfig& c) {
    return ordered_json{{"embed_dim", c.embed_dim},
                        {"hidden", c.hidden},
                        {"layers", c.layers},
                        {"classes", c.classes},
                        {"attention_dim", c.attention_size()},
                        {"dropout", c.dropout},
                        {"max_len", c.max_len},
                        {"finetune_embeddings", c.finetune_embeddings},
                        {"attention_norm", norm_name(c.attention_norm)}};
}

model::ModelConfig config_from_json(const ordered_json& j) {
    model::ModelConfig c;
    c.embed_dim = j.at("embed_dim").get<std::size_t>();
    c.hidden = j.at("hidden").get<std::size_t>();
    c.layers = j.at("layers").get<std::size_t>();
    c.classes = j.at("classes").get<std::size_t>();
    c.attention_dim = j.at("attention_dim").get<std::size_t>();
    c.dropout = j.at("dropout").get<double>();
    c.max_len = j.at("max_len").get<std::size_t>();
    c.finetune_embeddings = j.at("finetune_embeddings").get<bool>();
    const auto norm = j.at("attention_norm").get<std::string>();
    if (norm == "softmax") {
        c.attention_norm = model::AttentionNorm::Softmax;
    } else if (norm == "linear") {
        c.attention_norm = model::AttentionNorm::Linear;
    } else {
        throw IntegrityError("unknown attention_norm '" + norm + "'");
    }
    c.validate();
    return c;
}

}  // namespace

std::string serialize_model(const model::ModelBundle& bundle) {
    ordered_json tensors = ordered_json::array();
    std::size_t offset = 0;
    for (const auto& p : bundle.params) {
        tensors.push_back(ordered_json{{"name", p.name},
                                       {"shape", {p.value.rows(), p.value.cols()}},
                                       {"byte_offset", offset}});
        offset += p.value.size() * sizeof(float);
    }
    const ordered_json manifest{{"format_version", kModelFormatVersion},
                                {"config", config_json(bundle.config)},
                                {"label_names", bundle.label_names},
                                {"vocab", bundle.vocab.tokens()},
                                {"tensors", std::move(tensors)}};
    const std::string manifest_text = manifest.dump();

    std::string out;
    out.reserve(kHeaderSize + manifest_text.size() + offset);
    out.append(kModelMagic);
    put_u32(out, static_cast<std::uint32_t>(manifest_text.size()));
    out.append(manifest_text);
    for (const auto& p : bundle.params) {
        for (double v : p.value.values()) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
    return out;
}

model::ModelBundle deserialize_model(std::string_view bytes) {
    if (bytes.size() < kModelMagic.size() || bytes.substr(0, kModelMagic.size()) != kModelMagic) {
        throw FormatError("not a model file");
    }
    if (bytes.size() < kHeaderSize) throw IntegrityError("model file truncated inside the header");
    const std::size_t manifest_len = get_u32(bytes, 8);
    if (bytes.size() - kHeaderSize < manifest_len) throw IntegrityError("model file truncated inside the manifest");

    ordered_json manifest;
    try {
        manifest = ordered_json::parse(bytes.substr(kHeaderSize, manifest_len));
    } catch (const ordered_json::exception& e) {
        throw IntegrityError(std::string("model manifest is not valid JSON: ") + e.what());
    }

    model::ModelBundle bundle;
    std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> listed;
    std::vector<std::size_t> offsets;
    try {
        const auto version = manifest.at("format_version").get<std::uint32_t>();
        if (version != kModelFormatVersion) {
            throw VersionError(
                fmt::format("model format version {} is not supported (expected {})", version, kModelFormatVersion));
        }
        bundle.config = config_from_json(manifest.at("config"));
        bundle.label_names = manifest.at("label_names").get<std::vector<std::string>>();
        bundle.vocab = text::Vocab::from_tokens(manifest.at("vocab").get<std::vector<std::string>>());
        for (const auto& t : manifest.at("tensors")) {
            const auto shape = t.at("shape").get<std::vector<std::size_t>>();
            if (shape.size() != 2) throw IntegrityError("tensor shape must have two dimensions");
            listed.push_back({t.at("name").get<std::string>(), {shape[0], shape[1]}});
            offsets.push_back(t.at("byte_offset").get<std::size_t>());
        }
    } catch (const ordered_json::exception& e) {
        throw IntegrityError(std::string("malformed model manifest: ") + e.what());
    } catch (const FormatError& e) {
        throw IntegrityError(std::string("malformed model manifest: ") + e.what());
    } catch (const ArgumentError& e) {
        throw IntegrityError(std::string("invalid model config: ") + e.what());
    }
    if (bundle.label_names.size() != bundle.config.classes) {
        throw IntegrityError("label count does not match the configured classes");
    }

    const auto expected = model::parameter_layout(bundle.config, bundle.vocab.size());
    if (listed != expected) throw IntegrityError("tensor list does not match the model configuration");

    std::size_t offset = 0;
    for (std::size_t i = 0; i < listed.size(); ++i) {
        if (offsets[i] != offset) throw IntegrityError(fmt::format("tensor {} has a non-contiguous offset", listed[i].first));
        offset += listed[i].second.first * listed[i].second.second * sizeof(float);
    }
    const std::size_t payload_size = bytes.size() - kHeaderSize - manifest_len;
    if (payload_size < offset) {
        throw IntegrityError(fmt::format("payload truncated: {} bytes, manifest requires {}", payload_size, offset));
    }
    if (payload_size > offset) {
        throw IntegrityError(fmt::format("payload has {} trailing bytes", payload_size - offset));
    }

    std::size_t at = kHeaderSize + manifest_len;
    for (const auto& [name, shape] : listed) {
        nn::Tensor2 value(shape.first, shape.second);
        for (auto& v : value.values()) {
            const float f = std::bit_cast<float>(get_u32(bytes, at));
            v = static_cast<double>(f);
            at += sizeof(float);
        }
        if (!value.all_finite()) throw IntegrityError("tensor " + name + " contains non-finite values");
        bundle.params.add(name, std::move(value));
    }
    return bundle;
}

void save_model(const model::ModelBundle& bundle, const std::filesystem::path& path) {
    write_file_atomic(path, serialize_model(bundle));
}

model::ModelBundle load_model(const std::filesystem::path& path) { return deserialize_model(read_file(path)); }

}  // namespace ctxattn::io
