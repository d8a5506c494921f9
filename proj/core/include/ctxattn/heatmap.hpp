#pragma once

#include <string>
#include <vector>

#include "ctxattn/model.hpp"

namespace ctxattn::explain {

/// Per-token attention weights of one prediction.
struct HeatmapDoc {
    std::vector<std::string> tokens;
    std::vector<double> alpha;
    std::string label;
    std::vector<double> probs;
    std::string normalization = "max";  ///< display scaling: alpha / max(alpha)

    /// Throws ArgumentError unless tokens and alpha have equal non-zero
    /// length and alpha sums to 1 within 1e-9.
    void validate() const;
};

HeatmapDoc make_heatmap(const model::Prediction& prediction);

/// {"tokens":[...],"weights":[...],"label":"...","probs":[...]} in that key
/// order; weights and probs printed with six decimals.
std::string to_json(const HeatmapDoc& doc);

/// Standalone HTML page. Each token is a <span> whose background opacity is
/// alpha_i / max(alpha) and whose title holds the raw weight.
std::string to_html(const HeatmapDoc& doc);

/// Number of intensity steps used by to_ansi.
inline constexpr int kAnsiRampSteps = 5;

/// Ramp step (0 .. 4) for a max-normalized weight r in [0, 1]: min(4, floor(5 r)).
int ansi_ramp_step(double normalized);

/// Terminal rendering. With color, tokens get a 256-color background from a
/// five-step ramp; without, tokens print as "token(0.90)".
std::string to_ansi(const HeatmapDoc& doc, bool color);

/// False when the NO_COLOR environment variable is set to a non-empty value.
bool color_enabled_from_env();

/// Minimal HTML escaping of &, <, >, " and '.
std::string html_escape(std::string_view text);

}  // namespace ctxattn::explain
