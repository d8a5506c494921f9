#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctxattn/vocab.hpp"

namespace ctxattn::io {

struct CsvRecord {
    std::vector<std::string> fields;
    std::size_t line = 0;  ///< 1-based line where the record starts
};

/// RFC 4180 reader: comma separators, LF or CRLF record ends, double-quoted
/// fields with "" escapes and embedded newlines. Blank lines are skipped.
/// Throws FormatError with the line number on an unterminated quote, text
/// after a closing quote, or a quote inside an unquoted field.
std::vector<CsvRecord> parse_csv(std::string_view text);

struct Dataset {
    std::vector<text::LabeledExample> examples;  ///< file order
    std::vector<std::string> label_names;        ///< sorted ascending
    std::vector<std::size_t> class_counts;       ///< aligned with label_names
    std::optional<std::string> known_corpus;     ///< set when counts match a reference corpus
};

/// Parses "text,label" CSV content. Throws FormatError on a bad header, a
/// row without exactly two fields, an empty label, or no rows.
Dataset parse_dataset(std::string_view csv);

/// Reads and parses a dataset file; IoError when unreadable.
Dataset load_dataset(const std::filesystem::path& path);

/// Class-count signature of a reference abuse corpus.
struct KnownCorpus {
    std::string_view name;
    std::vector<std::size_t> class_counts;  ///< sorted ascending
};

const std::vector<KnownCorpus>& known_corpora();

/// Name of the reference corpus whose class counts equal `counts` (order
/// ignored), if any.
std::optional<std::string> match_known_corpus(std::vector<std::size_t> counts);

/// One indented line per class, "  label: count", then "  total: N".
std::string histogram_text(const Dataset& data);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace ctxattn::io
