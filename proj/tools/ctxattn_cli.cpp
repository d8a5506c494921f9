// Command-line front end: train, cv, eval, predict, explain.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "ctxattn/cross_validation.hpp"
#include "ctxattn/dataset.hpp"
#include "ctxattn/embeddings.hpp"
#include "ctxattn/errors.hpp"
#include "ctxattn/heatmap.hpp"
#include "ctxattn/model_io.hpp"
#include "ctxattn/report.hpp"

namespace fs = std::filesystem;
using namespace ctxattn;

namespace {

struct PipelineOptions {
    std::string data;
    std::string embeddings;
    train::PipelineConfig config;
    std::string attention_norm = "softmax";
    bool freeze_embeddings = false;
    bool no_shuffle = false;
    CLI::Option* embed_dim_option = nullptr;
};

void add_pipeline_options(CLI::App& cmd, PipelineOptions& o) {
    auto& m = o.config.model;
    auto& t = o.config.train;
    cmd.add_option("--data", o.data, "Dataset CSV with header text,label")->required()->check(CLI::ExistingFile);
    cmd.add_option("--embeddings", o.embeddings, "Pretrained vectors: one 'token v1 ... vD' per line")
        ->check(CLI::ExistingFile);
    o.embed_dim_option =
        cmd.add_option("--embed-dim", m.embed_dim, "Embedding size; with --embeddings, the size the file must have")
            ->capture_default_str();
    cmd.add_option("--lr", t.lr, "Adam learning rate")->capture_default_str();
    cmd.add_option("--epochs", t.epochs, "Training epochs")->capture_default_str();
    cmd.add_option("--dropout", t.dropout, "Dropout probability")->capture_default_str();
    cmd.add_option("--layers", m.layers, "Stacked BiLSTM layers")->capture_default_str();
    cmd.add_option("--hidden", m.hidden, "LSTM units per direction")->capture_default_str();
    cmd.add_option("--attention-dim", m.attention_dim, "Attention projection size (0 = 2 * hidden)")
        ->capture_default_str();
    cmd.add_option("--attention-norm", o.attention_norm, "Score normalization")
        ->check(CLI::IsMember({"softmax", "linear"}))
        ->capture_default_str();
    cmd.add_option("--batch", t.batch_size, "Mini-batch size")->capture_default_str();
    cmd.add_option("--max-len", m.max_len, "Tokens kept per message")->capture_default_str();
    cmd.add_option("--min-freq", o.config.min_freq, "Minimum token count for the vocabulary")->capture_default_str();
    cmd.add_option("--seed", t.seed, "Seed for every random draw of the run")->capture_default_str();
    cmd.add_flag("--freeze-embeddings", o.freeze_embeddings, "Keep the embedding layer fixed");
    cmd.add_flag("--no-shuffle", o.no_shuffle, "Do not reshuffle the training set each epoch");
}

void finish_pipeline_options(PipelineOptions& o) {
    o.config.model.attention_norm =
        o.attention_norm == "linear" ? model::AttentionNorm::Linear : model::AttentionNorm::Softmax;
    o.config.model.finetune_embeddings = !o.freeze_embeddings;
    o.config.train.shuffle = !o.no_shuffle;
    o.config.train.validate();
}

io::Dataset load_and_describe(const std::string& path) {
    io::Dataset data = io::load_dataset(path);
    std::cerr << fmt::format("loaded {} examples from {}\n", data.examples.size(), path) << io::histogram_text(data);
    if (data.known_corpus) {
        std::cerr << "class counts match the reference corpus: " << *data.known_corpus << "\n";
    } else {
        std::cerr << "warning: class counts match none of the reference abuse corpora\n";
    }
    return data;
}

std::optional<text::EmbeddingTable> load_pretrained(const PipelineOptions& o, const io::Dataset& data) {
    if (o.embeddings.empty()) return std::nullopt;
    const auto wanted = train::corpus_tokens(data.examples);
    const std::size_t expected = o.embed_dim_option->count() ? o.config.model.embed_dim : 0;
    auto table = text::read_embedding_table(o.embeddings, expected, &wanted);
    std::cerr << fmt::format("embeddings: dim {}, {} of {} corpus tokens covered\n", table.dim, table.vectors.size(),
                             wanted.size());
    return table;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
        if (!std::cout) throw IoError("failed writing to stdout");
    } else {
        io::write_file_atomic(path, content);
    }
}

int run_train(PipelineOptions& o, const std::string& out, std::string log) {
    finish_pipeline_options(o);
    const auto data = load_and_describe(o.data);
    const auto pretrained = load_pretrained(o, data);
    auto fitted = train::fit(data.examples, data.label_names, o.config, pretrained ? &*pretrained : nullptr,
                             o.config.train.seed);
    for (const auto& e : fitted.history) std::cout << fmt::format("epoch {:>3}  loss {:.6f}\n", e.epoch, e.mean_loss);
    io::save_model(fitted.bundle, out);
    if (log.empty()) log = out + ".log.json";
    io::write_file_atomic(log, io::training_log_json(fitted, o.config.train));
    std::cout << fmt::format("model written to {}\ntraining log written to {}\n", out, log);
    return 0;
}

int run_cv(PipelineOptions& o, const std::string& report_path) {
    finish_pipeline_options(o);
    const auto data = load_and_describe(o.data);
    const auto pretrained = load_pretrained(o, data);
    const auto report = train::cross_validate(data.examples, data.label_names, o.config,
                                              pretrained ? &*pretrained : nullptr);
    const std::string json = io::cv_report_json(report);
    if (report_path.empty()) {
        std::cerr << io::cv_report_text(report);
        write_output("", json);
    } else {
        std::cout << io::cv_report_text(report);
        io::write_file_atomic(report_path, json);
        std::cout << "report written to " << report_path << "\n";
    }
    return 0;
}

int run_eval(const std::string& model_path, const std::string& data_path, const std::string& report_path) {
    const auto bundle = io::load_model(model_path);
    const auto data = load_and_describe(data_path);
    const auto metrics = train::evaluate(bundle, data.examples);
    std::cout << io::metrics_text(metrics, bundle.label_names);
    if (!report_path.empty()) io::write_file_atomic(report_path, io::metrics_json(metrics, bundle.label_names));
    return 0;
}

int run_predict(const std::string& model_path, const std::string& text) {
    const auto bundle = io::load_model(model_path);
    const auto pred = model::predict(bundle, text);
    std::string out = fmt::format("label: {}\n", pred.label);
    for (std::size_t c = 0; c < pred.probs.size(); ++c) {
        out += fmt::format("  {}: {:.6f}\n", bundle.label_names[c], pred.probs[c]);
    }
    write_output("", out);
    return 0;
}

int run_explain(const std::string& model_path, const std::string& text, const std::string& format,
                const std::string& out) {
    const auto bundle = io::load_model(model_path);
    const auto doc = explain::make_heatmap(model::predict(bundle, text));
    std::string rendered;
    if (format == "json") {
        rendered = explain::to_json(doc) + "\n";
    } else if (format == "html") {
        rendered = explain::to_html(doc);
    } else {
        const bool to_terminal = out.empty() || out == "-";
        rendered = explain::to_ansi(doc, to_terminal && explain::color_enabled_from_env()) + "\n";
    }
    write_output(out, rendered);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stacked BiLSTM with word-level contextual attention for abusive text classification"};
    app.require_subcommand(1);

    PipelineOptions train_opts;
    std::string train_out, train_log;
    auto* train_cmd = app.add_subcommand("train", "Train a model on a labeled CSV");
    add_pipeline_options(*train_cmd, train_opts);
    train_cmd->add_option("--out", train_out, "Model file to write")->required();
    train_cmd->add_option("--log", train_log, "Training log JSON (default: <out>.log.json)");

    PipelineOptions cv_opts;
    std::string cv_report;
    auto* cv_cmd = app.add_subcommand("cv", "Stratified k-fold cross-validation");
    add_pipeline_options(*cv_cmd, cv_opts);
    cv_cmd->add_option("--folds", cv_opts.config.train.folds, "Number of folds")->capture_default_str();
    cv_cmd->add_option("--jobs", cv_opts.config.jobs, "Folds trained concurrently")->capture_default_str();
    cv_cmd->add_option("--report", cv_report, "JSON report path (default: JSON to stdout, summary to stderr)");

    std::string model_path, data_path, eval_report;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a saved model on a labeled CSV");
    eval_cmd->add_option("--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--data", data_path, "Dataset CSV")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--report", eval_report, "Optional JSON metrics path");

    std::string text;
    auto* predict_cmd = app.add_subcommand("predict", "Classify one message");
    predict_cmd->add_option("--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
    predict_cmd->add_option("--text", text, "Message text")->required();

    std::string format = "json", explain_out;
    auto* explain_cmd = app.add_subcommand("explain", "Attention heatmap for one message");
    explain_cmd->add_option("--model", model_path, "Model file")->required()->check(CLI::ExistingFile);
    explain_cmd->add_option("--text", text, "Message text")->required();
    explain_cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "html", "ansi"}))
        ->capture_default_str();
    explain_cmd->add_option("--out", explain_out, "Output path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train_cmd) return run_train(train_opts, train_out, train_log);
        if (*cv_cmd) return run_cv(cv_opts, cv_report);
        if (*eval_cmd) return run_eval(model_path, data_path, eval_report);
        if (*predict_cmd) return run_predict(model_path, text);
        if (*explain_cmd) return run_explain(model_path, text, format, explain_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
