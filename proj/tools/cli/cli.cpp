// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lema/assembler.hpp"
#include "lema/collector.hpp"
#include "lema/config.hpp"
#include "lema/corpus.hpp"
#include "lema/corrector.hpp"
#include "lema/error.hpp"
#include "lema/eval.hpp"
#include "lema/evolver.hpp"
#include "lema/gateway.hpp"
#include "lema/prompts.hpp"
#include "lema/review.hpp"
#include "lema/stats.hpp"

namespace lema::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct Globals {
    std::string config_path;
    std::string prompts_dir;
    std::string audit_log;
};

/// "<dir>/<stem>.<tag><ext>" next to `out`.
fs::path sibling(const fs::path& out, const std::string& tag, const std::string& ext = "") {
    const std::string extension = ext.empty() ? out.extension().string() : ext;
    return out.parent_path() / (out.stem().string() + "." + tag + extension);
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + path.string());
    f << text;
    if (!f) throw IoError("write failed: " + path.string());
}

std::string read_option_value(const std::vector<std::string>& args, const std::string& flag) {
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == flag && i + 1 < args.size()) return args[i + 1];
        if (args[i].starts_with(flag + "=")) return args[i].substr(flag.size() + 1);
    }
    return {};
}

Corpus load_corpora(const std::vector<std::string>& paths) {
    Corpus corpus;
    for (const auto& p : paths) corpus.extend(load_corpus(p));
    return corpus;
}

std::vector<Correction> kept_only(std::vector<Correction> all) {
    std::erase_if(all, [](const Correction& c) { return c.status != CorrectionStatus::kept; });
    return all;
}

void print_json(std::ostream& out, const Json& j) { out << j.dump() << "\n"; }

std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const UsageError*>(&e)) return "usage";
    if (dynamic_cast<const ParseError*>(&e)) return "parse";
    if (dynamic_cast<const IntegrityError*>(&e)) return "integrity";
    if (dynamic_cast<const ValidationError*>(&e)) return "validation";
    if (dynamic_cast<const AuthError*>(&e)) return "auth";
    if (dynamic_cast<const TransportError*>(&e)) return "transport";
    if (dynamic_cast<const CapabilityError*>(&e)) return "capability";
    if (dynamic_cast<const IoError*>(&e)) return "io";
    return "internal";
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
    Json j;
    j["error"] = {{"kind", kind}, {"message", message}};
    err << j.dump() << "\n";
}

class Runner {
  public:
    Runner(const Globals& globals, Config config) : globals_(globals), config_(std::move(config)) {}

    Gateway& gateway() {
        if (!gateway_) {
            GatewayOptions opts;
            if (!globals_.audit_log.empty()) opts.audit_log = globals_.audit_log;
            gateway_ = std::make_unique<Gateway>(std::move(opts));
        }
        return *gateway_;
    }

    const PromptRegistry& prompts() {
        if (!prompts_) prompts_ = PromptRegistry::load(prompts_dir());
        return *prompts_;
    }

    EndpointSpec endpoint(const std::string& ref) const { return resolve_endpoint(ref, config_); }

  private:
    fs::path prompts_dir() const {
        if (!globals_.prompts_dir.empty()) return globals_.prompts_dir;
        if (config_.prompts_dir) return *config_.prompts_dir;
        if (const char* env = std::getenv("LEMA_PROMPTS_DIR"); env && *env) return env;
        for (const char* candidate : {LEMA_INSTALL_PROMPTS_DIR, LEMA_SOURCE_PROMPTS_DIR}) {
            if (fs::exists(fs::path(candidate) / "registry.json")) return candidate;
        }
        throw UsageError("no prompts registry found; pass --prompts DIR");
    }

    const Globals& globals_;
    Config config_;
    std::unique_ptr<Gateway> gateway_;
    std::optional<PromptRegistry> prompts_;
};

// ---------------------------------------------------------------------------

struct CollectOpts {
    std::vector<std::string> corpus;
    std::string task;
    std::vector<std::string> reasoners;
    CollectConfig cfg;
    std::uint64_t seed = 0;
    std::string out, correct_out, failures_out;
};

void add_collect(CLI::App& app, CollectOpts& o) {
    auto* c = app.add_subcommand("collect", "Sample reasoning paths and keep the ones with wrong final answers");
    c->add_option("--corpus", o.corpus, "Question file(s) (JSONL)")->required()->check(CLI::ExistingFile);
    c->add_option("--task", o.task, "Require every question to have this task");
    c->add_option("--reasoner", o.reasoners, "Reasoner endpoint: config name or model@http://host:port (repeatable)")
        ->required();
    c->add_option("--samples-per-question", o.cfg.samples_per_question, "Paths sampled per question and reasoner")
        ->capture_default_str();
    c->add_option("--temperature", o.cfg.temperature, "Sampling temperature")->capture_default_str();
    c->add_option("--max-tokens", o.cfg.max_tokens, "Completion length limit")->capture_default_str();
    c->add_option("--prompt-id", o.cfg.prompt_id, "Reasoning prompt id")->capture_default_str();
    c->add_option("--seed", o.seed, "Sampling seed sent to the endpoint");
    c->add_option("--out", o.out, "Output file for wrong-answer paths")->required();
    c->add_option("--correct-out", o.correct_out, "Also write correct paths here");
    c->add_option("--failures-out", o.failures_out, "Failure manifest (default: <out>.failures.jsonl)");
}

int run_collect(CLI::App& sub, CollectOpts& o, Runner& r, Streams& io) {
    std::optional<Task> task;
    if (!o.task.empty()) {
        task = parse_task(o.task);
        if (!task) throw UsageError("unknown task '" + o.task + "'");
    }
    std::vector<Question> questions;
    for (const auto& p : o.corpus) {
        auto part = load_corpus(p, task);
        questions.insert(questions.end(), part.begin(), part.end());
    }
    Corpus corpus(questions);
    if (sub.count("--seed")) o.cfg.seed = o.seed;
    std::vector<EndpointSpec> reasoners;
    for (const auto& ref : o.reasoners) reasoners.push_back(r.endpoint(ref));

    const CollectResult result = collect(r.gateway(), r.prompts(), corpus.questions(), reasoners, o.cfg);

    const fs::path failures = o.failures_out.empty() ? sibling(o.out, "failures") : fs::path(o.failures_out);
    std::vector<std::string> lines;
    for (const auto& f : result.failures) lines.push_back(encode(f));
    write_lines(lines, failures);

    std::size_t transport = 0;
    for (const auto& f : result.failures) transport += f.kind == "transport";
    if (!questions.empty() && transport == questions.size() * reasoners.size()) {
        std::string first;
        for (const auto& f : result.failures) {
            if (f.kind == "transport") {
                first = f.detail;
                break;
            }
        }
        throw TransportError("every sample request failed; first error: " + first, 0, 0);
    }

    write_paths(result.incorrect, o.out);
    if (!o.correct_out.empty()) write_paths(result.correct, o.correct_out);
    Json j;
    j["command"] = "collect";
    j["questions"] = questions.size();
    j["incorrect"] = result.incorrect.size();
    j["correct"] = result.correct.size();
    j["unexpected_format"] = result.unexpected_format.size();
    j["transport_failures"] = transport;
    print_json(io.out, j);
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct CorrectOpts {
    std::string paths;
    std::vector<std::string> corpus;
    std::string corrector;
    std::string schema = "full";
    CorrectConfig cfg;
    std::string out, kept_out, manifest;
};

void add_correct(CLI::App& app, CorrectOpts& o) {
    auto* c = app.add_subcommand("correct", "Generate corrections for wrong-answer paths and keep those reaching gold");
    c->add_option("--paths", o.paths, "Wrong-answer paths from collect (JSONL)")->required()->check(CLI::ExistingFile);
    c->add_option("--corpus", o.corpus, "Question file(s) the paths refer to")->required()->check(CLI::ExistingFile);
    c->add_option("--corrector", o.corrector, "Corrector endpoint: config name or model@http://host:port")->required();
    c->add_option("--schema", o.schema, "Correction schema")
        ->check(CLI::IsMember({"full", "no_mistake_step", "no_explanation", "no_corrected_solution"}))
        ->capture_default_str();
    c->add_option("--prompt-id", o.cfg.prompt_id, "Correction prompt id (default: the schema's prompt)");
    c->add_option("--attempts", o.cfg.attempts, "Corrector samples per path; the first kept one wins")
        ->capture_default_str();
    c->add_option("--max-tokens", o.cfg.max_tokens, "Completion length limit")->capture_default_str();
    c->add_option("--out", o.out, "All corrections, any status (JSONL)")->required();
    c->add_option("--kept-out", o.kept_out, "Kept corrections (default: <out>.kept.jsonl)");
    c->add_option("--manifest", o.manifest, "Status counts (default: <out>.manifest.json)");
}

int run_correct(CorrectOpts& o, Runner& r, Streams& io) {
    o.cfg.schema = *parse_schema(o.schema);
    const Corpus corpus = load_corpora(o.corpus);
    const auto pool = load_paths(o.paths);
    check_references(corpus, std::span<const ReasoningPath>(pool));
    const EndpointSpec corrector = r.endpoint(o.corrector);

    std::vector<Correction> corrections;
    if (!pool.empty()) corrections = generate(r.gateway(), r.prompts(), corpus, pool, corrector, o.cfg);

    std::map<CorrectionStatus, std::size_t> counts;
    for (const auto& c : corrections) ++counts[c.status];
    const auto kept = kept_only(corrections);
    write_corrections(corrections, o.out);
    write_corrections(kept, o.kept_out.empty() ? sibling(o.out, "kept") : fs::path(o.kept_out));

    Json m;
    m["v"] = kSchemaVersion;
    m["corrector"] = corrector.id();
    m["schema"] = o.schema;
    m["prompt_id"] = o.cfg.prompt_id.empty() ? default_correction_prompt(o.cfg.schema) : o.cfg.prompt_id;
    m["pool"] = pool.size();
    m["kept"] = counts[CorrectionStatus::kept];
    m["wrong_answer"] = counts[CorrectionStatus::wrong_answer];
    m["parse_failed"] = counts[CorrectionStatus::parse_failed];
    write_text(o.manifest.empty() ? sibling(o.out, "manifest", ".json") : fs::path(o.manifest), m.dump(2) + "\n");

    Json j;
    j["command"] = "correct";
    j["pool"] = pool.size();
    j["kept"] = counts[CorrectionStatus::kept];
    j["wrong_answer"] = counts[CorrectionStatus::wrong_answer];
    j["parse_failed"] = counts[CorrectionStatus::parse_failed];
    print_json(io.out, j);
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct EvolveOpts {
    std::string corrections;
    std::vector<std::string> corpus;
    std::string strategy = "correction_centric";
    std::string weighting = "multiplicity";
    std::string evolver, labeler;
    RoundConfig cfg;
    std::size_t max_new = 0;
    std::string out, discards_out, journal;
};

void add_evolve(CLI::App& app, EvolveOpts& o) {
    auto* c = app.add_subcommand("evolve", "Evolve new questions from seed questions and label them by majority vote");
    c->add_option("--corrections", o.corrections, "Corrections file; kept ones supply the seeds")
        ->check(CLI::ExistingFile);
    c->add_option("--corpus", o.corpus, "Question file(s) (originals and earlier rounds)")
        ->required()
        ->check(CLI::ExistingFile);
    c->add_option("--strategy", o.strategy, "Seed strategy")
        ->check(CLI::IsMember({"correction_centric", "general"}))
        ->capture_default_str();
    c->add_option("--seed-weighting", o.weighting, "Per-question seed weight under correction_centric")
        ->check(CLI::IsMember({"multiplicity", "unique"}))
        ->capture_default_str();
    c->add_option("--n-seeds", o.cfg.n_seeds, "Seed draws (with replacement)")->required();
    c->add_option("--round", o.cfg.round_index, "Evolution round (>= 1)")->capture_default_str();
    c->add_option("--rng-seed", o.cfg.rng_seed, "Seed for the seed draw")->capture_default_str();
    c->add_option("--evolver", o.evolver, "Evolver endpoint")->required();
    c->add_option("--labeler", o.labeler, "Endpoint sampling the answers to vote on (default: the evolver)");
    c->add_option("--votes", o.cfg.votes, "Sampled answers per evolved question")->capture_default_str();
    c->add_option("--evolve-temperature", o.cfg.evolve_temperature, "Evolver temperature")->capture_default_str();
    c->add_option("--label-temperature", o.cfg.label_temperature, "Labeler temperature")->capture_default_str();
    c->add_option("--evolve-prompt-id", o.cfg.evolve_prompt_id, "Evolution prompt id")->capture_default_str();
    c->add_option("--label-prompt-id", o.cfg.label_prompt_id, "Reasoning prompt used for voting")
        ->capture_default_str();
    c->add_option("--journal", o.journal, "Progress journal for resuming (default: <out>.journal.jsonl)");
    c->add_option("--max-new-items", o.max_new, "Stop after this many new draws; rerun to continue");
    c->add_option("--out", o.out, "Evolved questions (JSONL)")->required();
    c->add_option("--discards-out", o.discards_out, "Discard manifest (default: <out>.discards.jsonl)");
}

int run_evolve(CLI::App& sub, EvolveOpts& o, Runner& r, Streams& io) {
    o.cfg.strategy = *parse_seed_strategy(o.strategy);
    o.cfg.weighting = *parse_seed_weighting(o.weighting);
    if (o.cfg.strategy == SeedStrategy::correction_centric && o.corrections.empty()) {
        throw UsageError("--corrections is required for the correction_centric strategy");
    }
    const Corpus corpus = load_corpora(o.corpus);
    std::vector<Correction> corrections;
    if (!o.corrections.empty()) corrections = load_corrections(o.corrections);
    check_references(corpus, std::span<const Correction>(corrections));
    const EndpointSpec evolver = r.endpoint(o.evolver);
    const EndpointSpec labeler = r.endpoint(o.labeler.empty() ? o.evolver : o.labeler);
    o.cfg.journal = o.journal.empty() ? sibling(o.out, "journal") : fs::path(o.journal);
    if (sub.count("--max-new-items")) o.cfg.max_new_items = o.max_new;

    const RoundResult result =
        o.cfg.n_seeds == 0 ? RoundResult{}
                           : run_round(r.gateway(), r.prompts(), corrections, corpus, evolver, labeler, o.cfg);
    Json j;
    j["command"] = "evolve";
    j["round"] = o.cfg.round_index;
    j["complete"] = result.complete;
    if (result.complete) {
        write_questions(result.evolved, o.out);
        std::vector<std::string> lines;
        for (const auto& d : result.discards) lines.push_back(encode(d));
        write_lines(lines, o.discards_out.empty() ? sibling(o.out, "discards") : fs::path(o.discards_out));
        j["evolved"] = result.evolved.size();
        j["discarded"] = result.discards.size();
    } else {
        j["journal"] = o.cfg.journal->string();
    }
    print_json(io.out, j);
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct AssembleOpts {
    std::string variant = "lema";
    std::size_t target_size = 0;
    std::int64_t target_tokens = 0;
    AssemblyPlan plan;
    std::vector<std::string> corpus;
    std::string cot, corrections, extra_cot;
    std::string out, manifest;
};

void add_assemble(CLI::App& app, AssembleOpts& o) {
    auto* c = app.add_subcommand("assemble", "Build a fine-tuning dataset variant and its manifest");
    c->add_option("--variant", o.variant, "Dataset variant")
        ->check(CLI::IsMember({"cot_only", "lema", "lema_size_matched", "cot_from_corrections", "cot_token_matched"}))
        ->capture_default_str();
    c->add_option("--target-size", o.target_size, "Record count for lema_size_matched");
    c->add_option("--target-tokens", o.target_tokens, "Token count for cot_token_matched");
    c->add_option("--tokenizer", o.plan.tokenizer_id, "Tokenizer id for token counts")->capture_default_str();
    c->add_option("--rng-seed", o.plan.rng_seed, "Seed for subsampling and the final shuffle")->capture_default_str();
    c->add_option("--corpus", o.corpus, "Question file(s) the pools refer to")->required()->check(CLI::ExistingFile);
    c->add_option("--cot", o.cot, "Correct reasoning paths (JSONL)")->check(CLI::ExistingFile);
    c->add_option("--corrections", o.corrections, "Corrections; only kept ones are used")->check(CLI::ExistingFile);
    c->add_option("--extra-cot", o.extra_cot, "Extra correct paths for token-matched growth")
        ->check(CLI::ExistingFile);
    c->add_option("--out", o.out, "Dataset file (JSONL)")->required();
    c->add_option("--manifest", o.manifest, "Manifest file (default: <out>.manifest.json)");
}

int run_assemble(CLI::App& sub, AssembleOpts& o, Streams& io) {
    o.plan.variant = *parse_variant(o.variant);
    if (sub.count("--target-size")) o.plan.target_size = o.target_size;
    if (sub.count("--target-tokens")) o.plan.target_tokens = o.target_tokens;
    validate(o.plan);
    const Corpus corpus = load_corpora(o.corpus);
    std::vector<ReasoningPath> cot, extra;
    std::vector<Correction> corrections;
    if (!o.cot.empty()) cot = load_paths(o.cot);
    if (!o.extra_cot.empty()) extra = load_paths(o.extra_cot);
    if (!o.corrections.empty()) corrections = load_corrections(o.corrections);

    Assembly a = assemble(o.plan, corpus, cot, corrections, extra);
    write_corpus(a.records, o.out);
    write_text(o.manifest.empty() ? sibling(o.out, "manifest", ".json") : fs::path(o.manifest), encode(a.manifest));
    Json j;
    j["command"] = "assemble";
    j["variant"] = a.manifest.variant;
    j["records"] = a.manifest.records;
    j["cot"] = a.manifest.cot_records;
    j["correction"] = a.manifest.correction_records;
    j["tokens"] = a.manifest.tokens;
    print_json(io.out, j);
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct EvalOpts {
    std::string endpoint;
    std::string test_set;
    EvalConfig cfg;
    bool numeric_only = false;
    std::string out;
};

void add_eval(CLI::App& app, EvalOpts& o) {
    auto* c = app.add_subcommand("eval", "Greedy-decoding accuracy of an endpoint on a test set");
    c->add_option("--endpoint", o.endpoint, "Endpoint under evaluation")->required();
    c->add_option("--test-set", o.test_set, "Test questions (JSONL)")->required()->check(CLI::ExistingFile);
    c->add_option("--max-tokens", o.cfg.max_tokens, "Completion length limit")->capture_default_str();
    c->add_option("--prompt-id", o.cfg.prompt_id, "Instruction prompt id")->capture_default_str();
    c->add_option("--checkpoint", o.cfg.checkpoint, "Checkpoint id recorded in the report");
    c->add_flag("--strict", o.cfg.strict, "Fail when any question cannot be scored");
    c->add_flag("--numeric-only", o.numeric_only, "Drop questions whose gold answer is not numeric");
    c->add_option("--out", o.out, "Report file (JSONL)")->required();
}

int run_eval(EvalOpts& o, Runner& r, Streams& io) {
    auto questions = load_corpus(o.test_set);
    std::size_t dropped = 0;
    if (o.numeric_only) std::tie(questions, dropped) = filter_numeric_gradable(questions);
    const EvalReport report = evaluate(r.gateway(), r.prompts(), r.endpoint(o.endpoint), questions, o.cfg);
    write_text(o.out, encode(report));
    Json j;
    j["command"] = "eval";
    j["questions"] = report.verdicts.size();
    if (o.numeric_only) j["dropped_non_numeric"] = dropped;
    j["correct"] = report.correct;
    j["scored"] = report.scored();
    j["unexpected_format"] = report.unexpected_format;
    j["unscored"] = report.unscored;
    j["accuracy_percent"] = render_percent(report.accuracy, 1);
    print_json(io.out, j);
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct PplOpts {
    std::string endpoint;
    std::string triples;
    std::string corrections;
    std::vector<std::string> corpus;
    std::string out;
};

void add_ppl(CLI::App& app, PplOpts& o) {
    auto* c = app.add_subcommand("ppl-diff", "Mean perplexity gap between mistaken and corrected reasoning");
    c->add_option("--endpoint", o.endpoint, "Endpoint with forced-continuation scoring")->required();
    c->add_option("--triples", o.triples, "Triples file (JSONL: question_id, question, mistaken, correct)")
        ->check(CLI::ExistingFile);
    c->add_option("--corrections", o.corrections, "Build triples from kept corrections instead")
        ->check(CLI::ExistingFile);
    c->add_option("--corpus", o.corpus, "Question file(s), needed with --corrections")->check(CLI::ExistingFile);
    c->add_option("--out", o.out, "Per-triple terms and summary (JSONL)")->required();
}

int run_ppl(PplOpts& o, Runner& r, Streams& io) {
    std::vector<PplTriple> triples;
    if (!o.triples.empty()) {
        for_each_line(o.triples, [&](std::size_t line_no, std::string_view line) {
            try {
                triples.push_back(decode_triple(line));
            } catch (const ValidationError& e) {
                throw ParseError(o.triples, line_no, e.what());
            } catch (const std::exception& e) {
                throw ParseError(o.triples, line_no, e.what());
            }
        });
    } else if (!o.corrections.empty()) {
        if (o.corpus.empty()) throw UsageError("--corrections needs --corpus");
        const Corpus corpus = load_corpora(o.corpus);
        triples = triples_from_corrections(load_corrections(o.corrections), corpus.questions());
    } else {
        throw UsageError("give --triples or --corrections");
    }
    const DeltaPpl d = delta_ppl(r.gateway(), r.endpoint(o.endpoint), triples);
    write_text(o.out, encode(d));
    Json j;
    j["command"] = "ppl-diff";
    j["delta_ppl"] = d.value;
    j["scored"] = d.terms.size();
    j["unscored"] = d.unscored.size();
    print_json(io.out, j);
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct ReviewOpts {
    std::string corrections;
    std::vector<std::string> corpus;
    std::size_t sample = 50;
    std::uint64_t rng_seed = 0;
    std::string grades_file;
    std::string out;
};

void add_review(CLI::App& app, ReviewOpts& o) {
    auto* c = app.add_subcommand("review", "Grade a sample of kept corrections as excellent, good or poor");
    c->add_option("--corrections", o.corrections, "Corrections file; kept ones are sampled")
        ->required()
        ->check(CLI::ExistingFile);
    c->add_option("--corpus", o.corpus, "Question file(s)")->required()->check(CLI::ExistingFile);
    c->add_option("--sample", o.sample, "Corrections to review")->capture_default_str();
    c->add_option("--rng-seed", o.rng_seed, "Seed for the sample")->capture_default_str();
    c->add_option("--grades-file", o.grades_file, "Read grade commands from this file instead of the terminal")
        ->check(CLI::ExistingFile);
    c->add_option("--out", o.out, "Grades file (JSONL); an existing file is resumed")->required();
}

int run_review_cmd(ReviewOpts& o, Streams& io) {
    if (o.grades_file.empty() && !io.interactive) {
        throw UsageError("review needs a terminal; pass --grades-file for non-interactive runs");
    }
    const Corpus corpus = load_corpora(o.corpus);
    const auto kept = kept_only(load_corrections(o.corrections));
    const ReviewSelection selection = select_for_review(kept, o.sample, o.rng_seed);
    if (!selection.note.empty()) io.err << "note: " << selection.note << "\n";

    std::ifstream scripted;
    if (!o.grades_file.empty()) {
        scripted.open(o.grades_file, std::ios::binary);
        if (!scripted) throw IoError("cannot read " + o.grades_file);
    }
    std::istream& in = o.grades_file.empty() ? io.in : scripted;
    const ReviewSession session = run_review(kept, selection, corpus, o.out, in, io.out);

    std::vector<Grade> grades;
    for (const auto& g : session.grades) grades.push_back(g.grade);
    const ReviewSummary summary = review_summary(grades);
    io.out << to_table(summary).to_text();
    Json j;
    j["command"] = "review";
    j["graded"] = session.grades.size();
    j["sample"] = selection.order.size();
    j["complete"] = session.complete;
    j["proportions"] = summary.proportions();
    print_json(io.out, j);
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct StatsOpts {
    std::vector<std::string> pools;
    std::string out;
};

void add_stats(CLI::App& app, StatsOpts& o) {
    auto* c = app.add_subcommand("stats", "Pool sizes, per-level correction success and review aggregates");
    c->add_option("--pools", o.pools,
                  "KIND=PATH, repeatable. KIND: corpus, test, cot, paths (wrong-answer paths), corrections, grades")
        ->required();
    c->add_option("--out", o.out, "Directory for CSV tables");
}

int run_stats(StatsOpts& o, Streams& io) {
    std::vector<Question> questions, test;
    std::vector<ReasoningPath> cot, paths;
    std::vector<Correction> corrections;
    std::vector<GradeRecord> grades;
    bool have_paths = false, have_corrections = false, have_grades = false;
    for (const auto& spec : o.pools) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) throw UsageError("--pools expects KIND=PATH, got '" + spec + "'");
        const std::string kind = spec.substr(0, eq);
        const fs::path path = spec.substr(eq + 1);
        if (!fs::exists(path)) throw UsageError("no such file: " + path.string());
        if (kind == "corpus") {
            auto part = load_corpus(path);
            questions.insert(questions.end(), part.begin(), part.end());
        } else if (kind == "test") {
            auto part = load_corpus(path);
            test.insert(test.end(), part.begin(), part.end());
        } else if (kind == "cot") {
            auto part = load_paths(path);
            cot.insert(cot.end(), part.begin(), part.end());
        } else if (kind == "paths") {
            auto part = load_paths(path);
            paths.insert(paths.end(), part.begin(), part.end());
            have_paths = true;
        } else if (kind == "corrections") {
            auto part = load_corrections(path);
            corrections.insert(corrections.end(), part.begin(), part.end());
            have_corrections = true;
        } else if (kind == "grades") {
            auto part = load_grades(path);
            grades.insert(grades.end(), part.begin(), part.end());
            have_grades = true;
        } else {
            throw UsageError("unknown pool kind '" + kind + "'");
        }
    }
    const Corpus corpus(questions);
    std::vector<std::pair<std::string, Table>> tables;
    tables.emplace_back("corpus_stats", corpus_stats({&corpus, cot, corrections, test}));
    if (have_corrections) {
        Table t;
        t.header = {"generator", "attempts", "kept", "success_rate"};
        for (const auto& row : success_rate(corrections, SuccessGroup::generator)) {
            t.rows.push_back({row.group, std::to_string(row.attempts), std::to_string(row.kept), render_rate(row.rate)});
        }
        tables.emplace_back("success_by_generator", std::move(t));
    }
    if (have_paths) tables.emplace_back("difficulty", to_table(difficulty_breakdown(paths, corrections, corpus)));
    if (have_grades) {
        std::vector<Grade> g;
        for (const auto& r : grades) g.push_back(r.grade);
        tables.emplace_back("review", to_table(review_summary(g)));
    }
    for (std::size_t i = 0; i < tables.size(); ++i) {
        if (i) io.out << "\n";
        io.out << "# " << tables[i].first << "\n" << tables[i].second.to_text();
        if (!o.out.empty()) write_text(fs::path(o.out) / (tables[i].first + ".csv"), tables[i].second.to_csv());
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct ReportOpts {
    std::string reports_dir;
    std::size_t k = 3;
    std::string curve_out;
};

void add_report(CLI::App& app, ReportOpts& o) {
    auto* c = app.add_subcommand("report", "Best-k checkpoints and training curve from eval reports");
    c->add_option("--reports-dir", o.reports_dir, "Directory of per-checkpoint eval reports (*.jsonl)")
        ->required()
        ->check(CLI::ExistingDirectory);
    c->add_option("--k", o.k, "Checkpoints to average")->capture_default_str();
    c->add_option("--curve-out", o.curve_out, "Write the training curve CSV here");
}

int run_report(ReportOpts& o, Streams& io) {
    std::vector<CheckpointScore> scores;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(o.reports_dir)) {
        if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        const EvalReport r = load_report_summary(f);
        scores.push_back({r.checkpoint, r.accuracy});
    }
    const BestCheckpoints best = best_checkpoints(std::move(scores), o.k);
    Table t;
    t.header = {"rank", "checkpoint", "accuracy"};
    for (std::size_t i = 0; i < best.top.size(); ++i) {
        t.rows.push_back({std::to_string(i + 1), best.top[i].checkpoint, render_percent(best.top[i].accuracy, 1)});
    }
    if (!best.top.empty()) t.rows.push_back({"avg", "", render_percent(best.average, 1)});
    io.out << t.to_text();
    if (!best.note.empty()) io.out << "note: " << best.note << "\n";
    if (!o.curve_out.empty()) write_text(o.curve_out, training_curve_csv(o.reports_dir));
    Json j;
    j["command"] = "report";
    j["reports"] = files.size();
    j["top"] = Json::array();
    for (const auto& s : best.top) j["top"].push_back(s.checkpoint);
    if (!best.top.empty()) j["average_percent"] = render_percent(best.average, 1);
    if (!best.note.empty()) j["note"] = best.note;
    print_json(io.out, j);
    return kExitOk;
}

/// Applies config defaults for `sub` to options the user did not give.
void apply_defaults(CLI::App& sub, const Config& config) {
    auto it = config.defaults.find(sub.get_name());
    if (it == config.defaults.end()) return;
    for (const auto& [flag, value] : it->second) {
        const std::string name = flag.starts_with("--") ? flag : "--" + flag;
        CLI::Option* opt = nullptr;
        try {
            opt = sub.get_option(name);
        } catch (const CLI::OptionNotFound&) {
            throw ValidationError("config default for unknown flag " + sub.get_name() + " " + name);
        }
        opt->default_val(value);
    }
}

}  // namespace

int run(const std::vector<std::string>& args, Streams io) {
    CLI::App app{"Mistake-correction training data pipeline", "lema-forge"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", "lema-forge 0.1.0");
    Globals globals;
    app.add_option("--config", globals.config_path, "Pipeline config file (JSON)")->check(CLI::ExistingFile);
    app.add_option("--prompts", globals.prompts_dir, "Prompt registry directory")->check(CLI::ExistingDirectory);
    app.add_option("--audit-log", globals.audit_log, "Append every endpoint request and response here (JSONL)");

    CollectOpts collect_opts;
    CorrectOpts correct_opts;
    EvolveOpts evolve_opts;
    AssembleOpts assemble_opts;
    EvalOpts eval_opts;
    PplOpts ppl_opts;
    ReviewOpts review_opts;
    StatsOpts stats_opts;
    ReportOpts report_opts;
    add_collect(app, collect_opts);
    add_correct(app, correct_opts);
    add_evolve(app, evolve_opts);
    add_assemble(app, assemble_opts);
    add_eval(app, eval_opts);
    add_ppl(app, ppl_opts);
    add_review(app, review_opts);
    add_stats(app, stats_opts);
    add_report(app, report_opts);

    try {
        Config config;
        if (const std::string path = read_option_value(args, "--config"); !path.empty()) {
            config = load_config(path);
            for (CLI::App* sub : app.get_subcommands({})) apply_defaults(*sub, config);
        }

        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e, io.out, io.err);
        } catch (const CLI::CallForAllHelp& e) {
            return app.exit(e, io.out, io.err);
        } catch (const CLI::CallForVersion& e) {
            return app.exit(e, io.out, io.err);
        } catch (const CLI::ParseError& e) {
            report_error(io.err, "usage", e.what());
            return kExitUsage;
        }

        Runner runner(globals, std::move(config));
        CLI::App* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "collect") return run_collect(*sub, collect_opts, runner, io);
        if (name == "correct") return run_correct(correct_opts, runner, io);
        if (name == "evolve") return run_evolve(*sub, evolve_opts, runner, io);
        if (name == "assemble") return run_assemble(*sub, assemble_opts, io);
        if (name == "eval") return run_eval(eval_opts, runner, io);
        if (name == "ppl-diff") return run_ppl(ppl_opts, runner, io);
        if (name == "review") return run_review_cmd(review_opts, io);
        if (name == "stats") return run_stats(stats_opts, io);
        if (name == "report") return run_report(report_opts, io);
        throw UsageError("unknown subcommand " + name);
    } catch (const UsageError& e) {
        report_error(io.err, "usage", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        report_error(io.err, error_kind(e), e.what());
        return kExitFailure;
    }
}

}  // namespace lema::cli
