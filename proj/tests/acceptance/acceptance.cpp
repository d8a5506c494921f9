// Acceptance suite: one PASS/FAIL line per criterion.
//
//   ctxattn_acceptance [path-to-ctxattn-cli] [--only N]
//
// Criterion 10 runs only when CTXATTN_D1_CSV and CTXATTN_D1_VECTORS name a
// labelled corpus and a pretrained vector file.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <fmt/format.h>

#include "ctxattn/cross_validation.hpp"
#include "ctxattn/dataset.hpp"
#include "ctxattn/embeddings.hpp"
#include "ctxattn/errors.hpp"
#include "ctxattn/folds.hpp"
#include "ctxattn/gradcheck.hpp"
#include "ctxattn/metrics.hpp"
#include "ctxattn/model.hpp"
#include "ctxattn/model_io.hpp"
#include "ctxattn/ops.hpp"
#include "ctxattn/tokenizer.hpp"
#include "ctxattn/trainer.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace ctxattn;

namespace {

enum class Outcome { Pass, Fail, Skipped };

struct Verdict {
    Outcome outcome;
    std::string detail;
};

Verdict verdict(bool ok, std::string detail) { return {ok ? Outcome::Pass : Outcome::Fail, std::move(detail)}; }

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---- 1. gradient correctness ------------------------------------------------

Verdict gradient_correctness() {
    const auto start = std::chrono::steady_clock::now();
    model::ModelConfig c;
    c.embed_dim = 4;
    c.hidden = 4;
    c.layers = 2;
    c.classes = 3;
    // weights uniform in [-1, 1]
    auto bundle = testing::random_model(c, 6, 2024, 1.0);
    const std::vector<text::TokenId> ids{8, 3, 10};
    const std::size_t label = 1;
    constexpr std::uint64_t kMaskSeed = 77;

    nn::Rng rng(kMaskSeed);
    const auto out = model::model_forward(bundle, ids, rng);
    bundle.params.zero_grad();
    model::model_backward(bundle, out.cache, nn::cross_entropy_grad(out.probs, label));
    auto loss = [&](const nn::ParamStore& store) {
        model::ModelBundle probe{bundle.config, bundle.vocab, bundle.label_names, store};
        nn::Rng replay(kMaskSeed);
        return nn::cross_entropy(model::model_forward(probe, ids, replay).probs, label);
    };
    const auto r = nn::grad_check(loss, bundle.params, 1e-5);
    const double elapsed = seconds_since(start);
    const bool covered = r.checked == bundle.params.scalar_count();
    return verdict(r.max_rel_error < 1e-4 && elapsed < 10.0 && covered,
                   fmt::format("max relative error {:.3e} (< 1e-4) at {}[{}] (analytic {:.3e}, numeric {:.3e}), {} of {} scalars, {:.2f} s (< 10 s)",
                               r.max_rel_error, r.worst_param, r.worst_index, r.analytic, r.numeric, r.checked,
                               bundle.params.scalar_count(), elapsed));
}

// ---- 2. forward oracle ------------------------------------------------------

// Independent re-evaluation of the network with plain scalar loops.
namespace oracle {

double sig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

using Vec = std::vector<double>;

struct Cell {
    const nn::Tensor2 &w, &u, &b;
};

void step(const Cell& p, std::size_t h, const Vec& x, Vec& hs, Vec& cs) {
    Vec z(4 * h);
    for (std::size_t r = 0; r < 4 * h; ++r) {
        double acc = p.b(r, 0);
        for (std::size_t k = 0; k < x.size(); ++k) acc += p.w(r, k) * x[k];
        for (std::size_t k = 0; k < h; ++k) acc += p.u(r, k) * hs[k];
        z[r] = acc;
    }
    for (std::size_t j = 0; j < h; ++j) {
        const double i = sig(z[j]), f = sig(z[h + j]), g = std::tanh(z[2 * h + j]), o = sig(z[3 * h + j]);
        cs[j] = f * cs[j] + i * g;
        hs[j] = o * std::tanh(cs[j]);
    }
}

Vec probs(const model::ModelBundle& m, const std::vector<text::TokenId>& ids, Vec& alpha_out) {
    const auto& P = m.params;
    const std::size_t T = ids.size(), H = m.config.hidden, D = m.config.embed_dim;
    std::vector<Vec> x(T, Vec(D));
    for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t k = 0; k < D; ++k) x[t][k] = P.value("embedding")(static_cast<std::size_t>(ids[t]), k);
    }
    Cell fwd{P.value("lstm0.fwd.W"), P.value("lstm0.fwd.U"), P.value("lstm0.fwd.b")};
    Cell bwd{P.value("lstm0.bwd.W"), P.value("lstm0.bwd.U"), P.value("lstm0.bwd.b")};
    std::vector<Vec> ann(T, Vec(2 * H));
    Vec h(H, 0.0), c(H, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        step(fwd, H, x[t], h, c);
        for (std::size_t j = 0; j < H; ++j) ann[t][j] = h[j];
    }
    h.assign(H, 0.0);
    c.assign(H, 0.0);
    for (std::size_t t = T; t-- > 0;) {
        step(bwd, H, x[t], h, c);
        for (std::size_t j = 0; j < H; ++j) ann[t][H + j] = h[j];
    }

    const auto &W = P.value("attention.W"), &b = P.value("attention.b"), &uc = P.value("attention.context");
    Vec s(T);
    for (std::size_t t = 0; t < T; ++t) {
        double score = 0.0;
        for (std::size_t a = 0; a < W.rows(); ++a) {
            double acc = b(a, 0);
            for (std::size_t k = 0; k < 2 * H; ++k) acc += W(a, k) * ann[t][k];
            score += std::tanh(acc) * uc(a, 0);
        }
        s[t] = score;
    }
    double smax = s[0];
    for (double v : s) smax = std::max(smax, v);
    double z = 0.0;
    for (double v : s) z += std::exp(v - smax);
    alpha_out.resize(T);
    Vec v(2 * H, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        alpha_out[t] = std::exp(s[t] - smax) / z;
        for (std::size_t k = 0; k < 2 * H; ++k) v[k] += alpha_out[t] * ann[t][k];
    }

    const auto &Wo = P.value("output.W"), &bo = P.value("output.b");
    Vec logits(Wo.rows());
    for (std::size_t r = 0; r < Wo.rows(); ++r) {
        logits[r] = bo(r, 0);
        for (std::size_t k = 0; k < 2 * H; ++k) logits[r] += Wo(r, k) * v[k];
    }
    double lmax = logits[0];
    for (double l : logits) lmax = std::max(lmax, l);
    double lz = 0.0;
    for (double l : logits) lz += std::exp(l - lmax);
    Vec out(logits.size());
    for (std::size_t r = 0; r < logits.size(); ++r) out[r] = std::exp(logits[r] - lmax) / lz;
    return out;
}

}  // namespace oracle

Verdict forward_oracle() {
    model::ModelConfig c;
    c.embed_dim = 2;
    c.hidden = 2;
    c.layers = 1;
    c.classes = 2;
    const auto bundle = testing::random_model(c, 4, 31337, 1.0);
    const std::vector<text::TokenId> ids{7, 2, 9};
    const auto out = model::model_forward(bundle, ids);
    std::vector<double> oracle_alpha;
    const auto oracle_probs = oracle::probs(bundle, ids, oracle_alpha);
    const double probs_err = testing::max_abs_diff(out.probs, oracle_probs);
    const double alpha_err = testing::max_abs_diff(out.attention.alpha, oracle_alpha);

    // h = I, W_h = I, b_h = 0, u_c = [1, 0]; reference weights from a 30-digit evaluation.
    const nn::Tensor2 eye = nn::Tensor2::identity(2), zero(2, 1);
    const auto uc = nn::Tensor2::column(std::vector<double>{1.0, 0.0});
    const auto attn = model::attention_forward(eye, {eye, zero, uc});
    const double ref0 = 0.681699742194526246, ref1 = 0.318300257805473754;
    const double ex_err = std::max({std::abs(attn.result.alpha[0] - ref0), std::abs(attn.result.alpha[1] - ref1),
                                    std::abs(attn.result.v[0] - ref0), std::abs(attn.result.v[1] - ref1)});

    return verdict(probs_err <= 1e-10 && alpha_err <= 1e-10 && ex_err <= 1e-10,
                   fmt::format("T=3 D=2 H=2 L=1 K=2: |probs - oracle| {:.1e}, |alpha - oracle| {:.1e} (<= 1e-10); "
                               "two-word example alpha=[{:.6f}, {:.6f}], error {:.1e}",
                               probs_err, alpha_err, attn.result.alpha[0], attn.result.alpha[1], ex_err));
}

// ---- 3. attention contracts -------------------------------------------------

Verdict attention_contracts() {
    nn::Rng rng(5150);
    double worst_sum = 0.0, worst_shift = 0.0, worst_hull = 0.0;
    std::size_t pad_violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        model::ModelConfig c;
        c.embed_dim = 1 + rng.below(5);
        c.hidden = 1 + rng.below(4);
        c.layers = 1 + rng.below(2);
        c.classes = 2 + rng.below(2);
        c.attention_dim = 1 + rng.below(6);
        c.max_len = 12;
        const auto bundle = testing::random_model(c, 10, rng.next_u64(), 1.0);

        const std::size_t len = 1 + rng.below(12);
        std::vector<std::string> tokens;
        for (std::size_t t = 0; t < len; ++t) tokens.push_back("w" + std::to_string(rng.below(14)));
        const auto seq = text::encode(tokens, bundle.vocab, c.max_len);
        const auto out = model::model_forward(bundle, seq);
        const auto& alpha = out.attention.alpha;
        if (alpha.size() != seq.length) ++pad_violations;

        worst_sum = std::max(worst_sum, std::abs(std::accumulate(alpha.begin(), alpha.end(), 0.0) - 1.0));

        const auto& ann = out.cache.attention.annotations;
        for (std::size_t d = 0; d < ann.cols(); ++d) {
            double lo = ann(0, d), hi = ann(0, d);
            for (std::size_t t = 1; t < ann.rows(); ++t) {
                lo = std::min(lo, ann(t, d));
                hi = std::max(hi, ann(t, d));
            }
            worst_hull = std::max({worst_hull, lo - out.attention.v[d], out.attention.v[d] - hi});
        }

        auto shifted = out.cache.attention.scores;
        const double shift = rng.uniform(-50.0, 50.0);
        for (auto& s : shifted) s += shift;
        const auto alpha_shifted = model::normalize_scores(shifted, model::AttentionNorm::Softmax);
        worst_shift = std::max(worst_shift, testing::max_abs_diff(alpha, alpha_shifted));
    }
    return verdict(worst_sum <= 1e-9 && pad_violations == 0 && worst_hull <= 0.0 && worst_shift <= 1e-12,
                   fmt::format("1000 instances: max |sum(alpha) - 1| {:.1e} (<= 1e-9), padded positions weighted {} "
                               "times, max hull excursion {:.1e} (<= 0), max shift change {:.1e} (<= 1e-12)",
                               worst_sum, pad_violations, std::max(worst_hull, 0.0), worst_shift));
}

// ---- 4. metric oracle -------------------------------------------------------

Verdict metric_oracle() {
    const std::vector<std::size_t> truth{0, 0, 1, 1, 1}, pred{0, 1, 1, 1, 1};
    const double f1 = train::weighted_f1(train::confusion_matrix(truth, pred, 2));
    const double perfect = train::weighted_f1(train::confusion_matrix(truth, truth, 2));
    const double err = std::abs(f1 - 82.0 / 105.0);
    return verdict(err <= 1e-12 && perfect == 1.0,
                   fmt::format("hand case {:.12f} vs 82/105, error {:.1e} (<= 1e-12); perfect = {}", f1, err, perfect));
}

// ---- 5. overfit -------------------------------------------------------------

std::vector<text::LabeledExample> trigger_corpus(std::size_t n, std::uint64_t seed) {
    nn::Rng rng(seed);
    std::vector<text::LabeledExample> out;
    for (std::size_t i = 0; i < n; ++i) {
        const bool positive = i % 2 == 0;
        const std::size_t len = 4 + rng.below(6);
        std::vector<std::string> words;
        for (std::size_t t = 0; t < len; ++t) words.push_back("filler" + std::to_string(rng.below(20)));
        if (positive) words[rng.below(len)] = "trigger";
        std::string text;
        for (const auto& w : words) text += (text.empty() ? "" : " ") + w;
        out.push_back({text, positive ? "pos" : "neg"});
    }
    return out;
}

Verdict overfit() {
    const auto start = std::chrono::steady_clock::now();
    const auto data = trigger_corpus(32, 4);
    const std::vector<std::string> labels{"neg", "pos"};
    const auto truth = train::label_indices(data, labels);

    nn::Rng rng(1);
    std::vector<text::LabeledExample> as_span(data);
    const auto vocab = text::build_vocab(as_span, 1);
    model::ModelConfig mc;  // defaults: D=300, H=64, L=2, A=128, dropout 0.2
    train::TrainConfig tc;  // defaults: Adam lr 0.001, batch 32
    auto emb = text::random_embedding_matrix(vocab, mc.embed_dim, rng);
    auto bundle = model::init_model(mc, vocab, labels, std::move(emb.weights), rng);

    std::vector<train::EncodedExample> encoded;
    for (std::size_t i = 0; i < data.size(); ++i) {
        encoded.push_back({train::encode_text(data[i].text, bundle.vocab, mc.max_len), truth[i]});
    }
    train::Trainer trainer(bundle, tc, rng);
    double accuracy = 0.0;
    std::size_t epochs = 0;
    while (epochs < 200) {
        trainer.run_epoch(encoded);
        ++epochs;
        const auto predicted = train::predict_labels(bundle, encoded);
        std::size_t hits = 0;
        for (std::size_t i = 0; i < predicted.size(); ++i) hits += predicted[i] == truth[i];
        accuracy = static_cast<double>(hits) / static_cast<double>(predicted.size());
        if (accuracy >= 0.96) break;
    }
    const double elapsed = seconds_since(start);
    return verdict(accuracy >= 0.96 && elapsed < 60.0,
                   fmt::format("training accuracy {:.3f} (>= 0.96) after {} epochs (<= 200), {:.1f} s (< 60 s)",
                               accuracy, epochs, elapsed));
}

// ---- 6. context dependence --------------------------------------------------

struct ContextExample {
    text::LabeledExample example;
    std::optional<std::size_t> shared_position;  ///< token index of the shared word, if present
};

// The shared word "pig" is abusive right after a second-person word and
// harmless after a farm word. One message in three is abusive; half of the
// harmless ones mention the shared word in a farm context. Both context
// families also occur away from the shared word.
std::vector<ContextExample> context_corpus(std::size_t n, std::uint64_t seed) {
    static const std::vector<std::string> targeted{"you", "ur", "youre", "u"};
    static const std::vector<std::string> neutral{"farm", "barn", "roast", "little"};
    nn::Rng rng(seed);
    std::vector<ContextExample> out;
    for (std::size_t i = 0; i < n; ++i) {
        const bool positive = i % 3 == 0;
        const bool mentions = positive || rng.bernoulli(0.5);
        const std::size_t len = 6 + rng.below(5);
        std::vector<std::string> words;
        for (std::size_t t = 0; t < len; ++t) words.push_back("word" + std::to_string(rng.below(30)));
        const std::size_t at = 1 + rng.below(len - 1);
        words[at - 1] = positive ? targeted[rng.below(targeted.size())] : neutral[rng.below(neutral.size())];
        std::optional<std::size_t> shared;
        if (mentions) {
            words[at] = "pig";
            shared = at;
        }
        std::size_t other = rng.below(len);
        while (other + 1 == at || other == at) other = rng.below(len);
        words[other] = positive ? neutral[rng.below(neutral.size())] : targeted[rng.below(targeted.size())];
        std::string joined;
        for (const auto& w : words) joined += (joined.empty() ? "" : " ") + w;
        out.push_back({{joined, positive ? "abusive" : "none"}, shared});
    }
    return out;
}

Verdict context_dependence() {
    const auto start = std::chrono::steady_clock::now();
    const auto train_set = context_corpus(600, 11), test_set = context_corpus(300, 12);
    std::vector<text::LabeledExample> train_examples;
    for (const auto& e : train_set) train_examples.push_back(e.example);
    const std::vector<std::string> labels{"abusive", "none"};

    train::PipelineConfig cfg;
    cfg.model.embed_dim = 50;
    cfg.model.layers = 1;
    cfg.train.lr = 0.005;
    cfg.train.epochs = 20;
    cfg.train.seed = 3;
    cfg.min_freq = 1;
    const auto fitted = train::fit(train_examples, labels, cfg, nullptr, cfg.train.seed);

    std::size_t correct_pos = 0, pos_shared_max = 0, neutral_mentions = 0, neg_shared_max = 0, correct = 0;
    for (const auto& e : test_set) {
        const auto pred = model::predict(fitted.bundle, e.example.text);
        const std::size_t peak = model::argmax(pred.alpha);
        const bool positive = e.example.label == "abusive";
        correct += pred.label == e.example.label;
        if (!e.shared_position) continue;
        if (positive && pred.label == "abusive") {
            ++correct_pos;
            pos_shared_max += peak == *e.shared_position;
        } else if (!positive) {
            ++neutral_mentions;
            neg_shared_max += peak == *e.shared_position;
        }
    }
    const double pos_rate = correct_pos ? static_cast<double>(pos_shared_max) / static_cast<double>(correct_pos) : 0.0;
    const double neg_rate =
        neutral_mentions ? static_cast<double>(neg_shared_max) / static_cast<double>(neutral_mentions) : 1.0;
    return verdict(correct_pos > 0 && pos_rate >= 0.8 && neg_rate < 0.5,
                   fmt::format("test accuracy {:.3f}; shared word holds max alpha in {:.3f} of {} correct positives "
                               "(>= 0.8) and {:.3f} of {} negatives mentioning it (< 0.5), {:.1f} s",
                               static_cast<double>(correct) / static_cast<double>(test_set.size()), pos_rate,
                               correct_pos, neg_rate, neutral_mentions, seconds_since(start)));
}

// ---- 7. determinism of the cv command ---------------------------------------

int run_command(const std::string& command) { return std::system((command + " > /dev/null 2>&1").c_str()); }

Verdict cv_determinism(const std::string& cli, const fs::path& work) {
    if (cli.empty()) return {Outcome::Fail, "no CLI path given on the command line"};
    std::string csv = "text,label\n";
    for (const auto& e : trigger_corpus(60, 9)) csv += e.text + "," + e.label + "\n";
    const auto data = work / "cv_data.csv";
    io::write_file_atomic(data, csv);

    std::vector<std::string> reports;
    for (int run = 0; run < 2; ++run) {
        const auto report = work / fmt::format("cv_report_{}.json", run);
        const auto command = fmt::format(
            "\"{}\" cv --data \"{}\" --folds 3 --epochs 2 --embed-dim 16 --hidden 8 --min-freq 1 --seed 5 --jobs 2 "
            "--report \"{}\"",
            cli, data.string(), report.string());
        if (const int rc = run_command(command); rc != 0) return {Outcome::Fail, fmt::format("cv exited with {}", rc)};
        reports.push_back(io::read_file(report));
    }
    return verdict(!reports[0].empty() && reports[0] == reports[1],
                   fmt::format("two cv runs wrote {} and {} bytes, {}", reports[0].size(), reports[1].size(),
                               reports[0] == reports[1] ? "byte-identical" : "different"));
}

// ---- 8. persistence ---------------------------------------------------------

Verdict persistence(const fs::path& work) {
    const auto data = trigger_corpus(80, 21);
    const std::vector<text::LabeledExample> train_part(data.begin(), data.begin() + 60),
        test_part(data.begin() + 60, data.end());
    const std::vector<std::string> labels{"neg", "pos"};
    train::PipelineConfig cfg;
    cfg.model.embed_dim = 16;
    cfg.model.hidden = 8;
    cfg.train.epochs = 5;
    cfg.min_freq = 1;
    const auto fitted = train::fit(train_part, labels, cfg, nullptr, 8);
    const double before = train::evaluate(fitted.bundle, test_part).weighted_f1;

    const auto path = work / "persist.model";
    io::save_model(fitted.bundle, path);
    const auto loaded = io::load_model(path);
    const double after = train::evaluate(loaded, test_part).weighted_f1;

    const auto bytes = io::read_file(path);
    bool magic_rejected = false, truncation_rejected = false;
    try {
        io::deserialize_model("XAATMDL1" + bytes.substr(8));
    } catch (const FormatError&) {
        magic_rejected = true;
    }
    try {
        io::deserialize_model(bytes.substr(0, bytes.size() - 3));
    } catch (const IntegrityError&) {
        truncation_rejected = true;
    }
    const double drift = std::abs(before - after);
    return verdict(drift <= 1e-4 && magic_rejected && truncation_rejected,
                   fmt::format("weighted F1 {:.6f} before save, {:.6f} after load, drift {:.1e} (<= 1e-4); "
                               "bad magic {}, truncation {}",
                               before, after, drift, magic_rejected ? "rejected" : "ACCEPTED",
                               truncation_rejected ? "rejected" : "ACCEPTED"));
}

// ---- 9. stratification ------------------------------------------------------

Verdict stratification() {
    const std::vector<std::size_t> toy{0, 0, 0, 0, 0, 0, 1, 1, 1, 1};
    const auto split = train::stratified_kfold(toy, 2, 0);
    bool toy_ok = split.folds.size() == 2;
    for (const auto& hist : split.class_histograms) toy_ok = toy_ok && hist == std::vector<std::size_t>{3, 2};

    nn::Rng rng(2718);
    std::size_t broken = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 5 + rng.below(300), classes = 1 + rng.below(5), k = 2 + rng.below(std::min<std::size_t>(n - 1, 9));
        std::vector<std::size_t> labels(n);
        for (auto& l : labels) l = rng.below(classes);
        const auto s = train::stratified_kfold(labels, k, rng.next_u64());
        std::vector<int> seen(n, 0);
        for (const auto& f : s.folds) {
            for (std::size_t i : f) ++seen[i];
        }
        if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) ++broken;
    }
    return verdict(toy_ok && broken == 0,
                   fmt::format("6/4 toy with k=2: {}; partition broken in {} of 100 random datasets",
                               toy_ok ? "3/2 per fold" : "WRONG counts", broken));
}

// ---- 10. full-scale run (optional) -----------------------------------------

Verdict full_scale() {
    const char* csv = std::getenv("CTXATTN_D1_CSV");
    const char* vectors = std::getenv("CTXATTN_D1_VECTORS");
    if (!csv || !vectors || !*csv || !*vectors) {
        return {Outcome::Skipped, "set CTXATTN_D1_CSV and CTXATTN_D1_VECTORS to run the 10-fold reference corpus check"};
    }
    const auto start = std::chrono::steady_clock::now();
    const auto data = io::load_dataset(csv);
    const auto vocab_tokens = train::corpus_tokens(data.examples);
    const auto table = text::read_embedding_table(vectors, 0, &vocab_tokens);
    train::PipelineConfig cfg;
    cfg.train.folds = 10;
    if (const char* jobs = std::getenv("CTXATTN_JOBS")) cfg.jobs = std::strtoul(jobs, nullptr, 10);
    const auto report = train::cross_validate(data.examples, data.label_names, cfg, &table);
    return verdict(report.mean_weighted_f1 >= 0.80,
                   fmt::format("mean weighted F1 {:.4f} (>= 0.80) over 10 folds, pooled {:.4f}, {:.0f} s",
                               report.mean_weighted_f1, report.pooled_weighted_f1, seconds_since(start)));
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli;
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            cli = arg;
        }
    }
    const fs::path work = fs::temp_directory_path() / fmt::format("ctxattn_acceptance_{}", ::getpid());
    fs::create_directories(work);

    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"gradient correctness", gradient_correctness},
        {"forward oracle equivalence", forward_oracle},
        {"attention contracts", attention_contracts},
        {"metric oracle", metric_oracle},
        {"overfit check", overfit},
        {"context dependence", context_dependence},
        {"cv determinism", [&] { return cv_determinism(cli, work); }},
        {"persistence", [&] { return persistence(work); }},
        {"stratification", stratification},
        {"full-scale reference run (optional)", full_scale},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only && static_cast<int>(i + 1) != only) continue;
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {Outcome::Fail, std::string("threw: ") + e.what()};
        }
        const char* tag = v.outcome == Outcome::Pass ? "PASS" : v.outcome == Outcome::Fail ? "FAIL" : "SKIPPED";
        if (v.outcome == Outcome::Fail) ++failures;
        fmt::print("[{}] {:>2}. {}: {}\n", tag, i + 1, criteria[i].first, v.detail);
        std::fflush(stdout);
    }
    fs::remove_all(work);
    fmt::print("{} criteria failed\n", failures);
    return failures ? 1 : 0;
}
