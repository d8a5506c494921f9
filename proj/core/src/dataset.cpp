#include "ctxattn/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "ctxattn/errors.hpp"

namespace ctxattn::io {

std::vector<CsvRecord> parse_csv(std::string_view text) {
    std::vector<CsvRecord> records;
    std::size_t line = 1;
    std::size_t i = 0;
    const std::size_t n = text.size();

    while (i < n) {
        // Blank line.
        if (text[i] == '\n' || (text[i] == '\r' && i + 1 < n && text[i + 1] == '\n')) {
            i += text[i] == '\r' ? 2 : 1;
            ++line;
            continue;
        }
        CsvRecord record;
        record.line = line;
        for (;;) {
            std::string field;
            if (i < n && text[i] == '"') {
                const std::size_t quote_line = line;
                ++i;
                for (;;) {
                    if (i >= n) throw FormatError("unterminated quoted field", quote_line);
                    if (text[i] == '"') {
                        if (i + 1 < n && text[i + 1] == '"') {
                            field += '"';
                            i += 2;
                            continue;
                        }
                        ++i;
                        break;
                    }
                    if (text[i] == '\n') ++line;
                    field += text[i++];
                }
                if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
                    throw FormatError("unexpected character after closing quote", line);
                }
            } else {
                while (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
                    if (text[i] == '"') throw FormatError("quote inside unquoted field", line);
                    field += text[i++];
                }
            }
            record.fields.push_back(std::move(field));
            if (i < n && text[i] == ',') {
                ++i;
                continue;
            }
            if (i < n && text[i] == '\r') {
                if (i + 1 < n && text[i + 1] == '\n') {
                    ++i;
                } else {
                    throw FormatError("bare carriage return", line);
                }
            }
            if (i < n && text[i] == '\n') {
                ++i;
                ++line;
            }
            break;
        }
        records.push_back(std::move(record));
    }
    return records;
}

const std::vector<KnownCorpus>& known_corpora() {
    static const std::vector<KnownCorpus> corpora{
        {"racism/sexism/none tweets (15,844)", {1924, 3058, 10862}},
        {"hate/offensive/neither tweets (25,112)", {1498, 4288, 19326}},
        {"harassment positive/negative tweets (20,362)", {5235, 15127}},
    };
    return corpora;
}

std::optional<std::string> match_known_corpus(std::vector<std::size_t> counts) {
    std::sort(counts.begin(), counts.end());
    for (const auto& corpus : known_corpora()) {
        if (corpus.class_counts == counts) return std::string(corpus.name);
    }
    return std::nullopt;
}

Dataset parse_dataset(std::string_view csv) {
    if (csv.starts_with("\xEF\xBB\xBF")) csv.remove_prefix(3);
    auto records = parse_csv(csv);
    if (records.empty()) throw FormatError("dataset is empty");
    const auto& header = records.front();
    if (header.fields.size() != 2 || header.fields[0] != "text" || header.fields[1] != "label") {
        throw FormatError("expected header \"text,label\"", header.line);
    }
    if (records.size() == 1) throw FormatError("dataset has a header but no rows");

    Dataset data;
    std::map<std::string, std::size_t> counts;
    for (std::size_t r = 1; r < records.size(); ++r) {
        auto& rec = records[r];
        if (rec.fields.size() != 2) {
            throw FormatError(fmt::format("expected 2 fields, found {}", rec.fields.size()), rec.line);
        }
        if (rec.fields[1].empty()) throw FormatError("empty label", rec.line);
        ++counts[rec.fields[1]];
        data.examples.push_back({std::move(rec.fields[0]), std::move(rec.fields[1])});
    }
    for (const auto& [label, count] : counts) {
        data.label_names.push_back(label);
        data.class_counts.push_back(count);
    }
    data.known_corpus = match_known_corpus(data.class_counts);
    return data;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("error while reading " + path.string());
    return std::move(buffer).str();
}

Dataset load_dataset(const std::filesystem::path& path) { return parse_dataset(read_file(path)); }

std::string histogram_text(const Dataset& data) {
    std::string out;
    std::size_t total = 0;
    for (std::size_t i = 0; i < data.label_names.size(); ++i) {
        out += fmt::format("  {}: {}\n", data.label_names[i], data.class_counts[i]);
        total += data.class_counts[i];
    }
    out += fmt::format("  total: {}\n", total);
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw IoError("error while writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move output into place at " + path.string());
    }
}

}  // namespace ctxattn::io
