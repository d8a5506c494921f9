#include "ctxattn/embeddings.hpp"

#include <charconv>
#include <fstream>
#include <string_view>

#include <fmt/format.h>

#include "ctxattn/errors.hpp"

namespace ctxattn::text {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

bool parse_size(std::string_view s, std::size_t& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

double parse_real(std::string_view s, std::size_t line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw FormatError(fmt::format("embedding value '{}' is not a real number", s), line_no);
    }
    return v;
}

}  // namespace

EmbeddingTable read_embedding_table(const std::filesystem::path& path, std::size_t expected_dim,
                                    const std::unordered_set<std::string>* keep) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read embedding file " + path.string());

    EmbeddingTable table;
    table.dim = expected_dim;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (line_no == 1 && fields.size() == 2) {
            std::size_t count = 0, dim = 0;
            if (parse_size(fields[0], count) && parse_size(fields[1], dim)) {
                if (table.dim == 0) table.dim = dim;
                continue;
            }
        }
        if (table.dim == 0) table.dim = fields.size() - 1;
        if (fields.size() - 1 != table.dim || table.dim == 0) {
            throw FormatError(
                fmt::format("embedding record has {} values, expected {}", fields.size() - 1, table.dim), line_no);
        }
        std::string token(fields[0]);
        if (keep && !keep->contains(token)) continue;
        if (table.vectors.contains(token)) continue;
        std::vector<double> values(table.dim);
        for (std::size_t k = 0; k < table.dim; ++k) values[k] = parse_real(fields[k + 1], line_no);
        table.vectors.emplace(std::move(token), std::move(values));
    }
    if (in.bad()) throw IoError("error while reading embedding file " + path.string());
    return table;
}

EmbeddingMatrix build_embedding_matrix(const EmbeddingTable& table, const Vocab& vocab, nn::Rng& rng) {
    if (table.dim == 0) throw ArgumentError("embedding dimension must be positive");
    EmbeddingMatrix m{nn::Tensor2(vocab.size(), table.dim), 0, 0};
    for (std::size_t id = 1; id < vocab.size(); ++id) {
        auto row = m.weights.row(id);
        auto it = table.vectors.find(vocab.tokens()[id]);
        if (it != table.vectors.end()) {
            for (std::size_t k = 0; k < table.dim; ++k) row[k] = it->second[k];
            ++m.found;
        } else {
            for (auto& v : row) v = rng.uniform(-kEmbeddingInitRange, kEmbeddingInitRange);
            ++m.missing;
        }
    }
    return m;
}

EmbeddingMatrix random_embedding_matrix(const Vocab& vocab, std::size_t dim, nn::Rng& rng) {
    EmbeddingTable empty;
    empty.dim = dim;
    return build_embedding_matrix(empty, vocab, rng);
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path, const Vocab& vocab, std::size_t dim,
                                nn::Rng& rng) {
    const std::unordered_set<std::string> wanted(vocab.tokens().begin(), vocab.tokens().end());
    return build_embedding_matrix(read_embedding_table(path, dim, &wanted), vocab, rng);
}

}  // namespace ctxattn::text
