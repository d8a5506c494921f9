#include "ctxattn/heatmap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>

#include <fmt/format.h>

#include "ctxattn/errors.hpp"
#include "json.hpp"

namespace ctxattn::explain {

void HeatmapDoc::validate() const {
    if (tokens.empty() || tokens.size() != alpha.size()) {
        throw ArgumentError(fmt::format("heatmap has {} tokens and {} weights", tokens.size(), alpha.size()));
    }
    double total = 0.0;
    for (double a : alpha) total += a;
    if (std::abs(total - 1.0) > 1e-9) throw ArgumentError(fmt::format("attention weights sum to {}", total));
}

HeatmapDoc make_heatmap(const model::Prediction& prediction) {
    HeatmapDoc doc{prediction.tokens, prediction.alpha, prediction.label, prediction.probs, "max"};
    doc.validate();
    return doc;
}

namespace {

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::string fixed6(double v) { return fmt::format("{:.6f}", v); }

double max_weight(const HeatmapDoc& doc) { return *std::max_element(doc.alpha.begin(), doc.alpha.end()); }

double normalized(const HeatmapDoc& doc, std::size_t i, double peak) {
    return peak > 0.0 ? std::clamp(doc.alpha[i] / peak, 0.0, 1.0) : 0.0;
}

}  // namespace

std::string to_json(const HeatmapDoc& doc) {
    doc.validate();
    std::string out = "{\"tokens\":[";
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
        if (i) out += ',';
        out += json_string(doc.tokens[i]);
    }
    out += "],\"weights\":[";
    for (std::size_t i = 0; i < doc.alpha.size(); ++i) {
        if (i) out += ',';
        out += fixed6(doc.alpha[i]);
    }
    out += "],\"label\":" + json_string(doc.label) + ",\"probs\":[";
    for (std::size_t i = 0; i < doc.probs.size(); ++i) {
        if (i) out += ',';
        out += fixed6(doc.probs[i]);
    }
    out += "]}";
    return out;
}

std::string html_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&#39;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string to_html(const HeatmapDoc& doc) {
    doc.validate();
    const double peak = max_weight(doc);
    std::string out;
    out += "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>attention heatmap</title>\n</head>\n";
    out += "<body style=\"font-family: sans-serif;\">\n";
    out += fmt::format("<p>predicted: <b>{}</b></p>\n", html_escape(doc.label));
    out += "<div class=\"heatmap\" style=\"line-height: 2em;\">";
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
        if (i) out += ' ';
        out += fmt::format(
            "<span class=\"token\" style=\"background-color: rgba(220, 20, 60, {:.6f}); padding: 2px;\" "
            "title=\"{:.6f}\">{}</span>",
            normalized(doc, i, peak), doc.alpha[i], html_escape(doc.tokens[i]));
    }
    out += "</div>\n<p>probabilities:";
    for (std::size_t i = 0; i < doc.probs.size(); ++i) out += fmt::format(" {:.6f}", doc.probs[i]);
    out += "</p>\n</body>\n</html>\n";
    return out;
}

int ansi_ramp_step(double r) {
    const int step = static_cast<int>(std::floor(r * kAnsiRampSteps));
    return std::clamp(step, 0, kAnsiRampSteps - 1);
}

std::string to_ansi(const HeatmapDoc& doc, bool color) {
    doc.validate();
    // Light pink to saturated red in the xterm 256-color cube.
    static constexpr std::array<int, kAnsiRampSteps> kRamp{224, 217, 210, 203, 196};
    const double peak = max_weight(doc);
    std::string out;
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
        if (i) out += ' ';
        if (color) {
            const int step = ansi_ramp_step(normalized(doc, i, peak));
            out += fmt::format("\x1b[48;5;{}m\x1b[38;5;16m{}\x1b[0m", kRamp[static_cast<std::size_t>(step)],
                               doc.tokens[i]);
        } else {
            out += fmt::format("{}({:.2f})", doc.tokens[i], doc.alpha[i]);
        }
    }
    return out;
}

bool color_enabled_from_env() {
    const char* value = std::getenv("NO_COLOR");
    return value == nullptr || *value == '\0';
}

}  // namespace ctxattn::explain
