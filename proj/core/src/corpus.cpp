// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include "lema/corpus.hpp"

#include <fstream>
#include <unordered_set>

#include "json_codec.hpp"
#include "lema/answer.hpp"
#include "lema/error.hpp"
#include "lema/text.hpp"

namespace lema {

using detail::Json;

namespace detail {

Json answer_to_json(const AnswerValue& a) {
    Json j;
    j["kind"] = std::string(to_string(a.kind()));
    j["value"] = a.render();
    return j;
}

AnswerValue answer_from_json(const Json& j, Task task) {
    if (j.is_string()) return parse_gold(j.get<std::string>(), task);
    if (j.is_number()) return parse_gold(j.dump(), task);
    const auto kind = j.at("kind").get<std::string>();
    const auto value = j.at("value").get<std::string>();
    if (kind == "numeric") {
        auto d = Decimal::parse(value);
        if (!d) throw ValidationError("numeric answer is not a decimal: " + value);
        if (d->str() != value) throw ValidationError("numeric answer not in canonical form: " + value);
        return AnswerValue::numeric(*d);
    }
    if (kind == "choice") {
        if (value.size() != 1) throw ValidationError("choice answer must be one letter: " + value);
        return AnswerValue::choice(value[0]);
    }
    if (kind == "text") return AnswerValue::text(value);
    throw ValidationError("unknown answer kind: " + kind);
}

std::string dump_line(const Json& j) { return j.dump(-1, ' ', false, Json::error_handler_t::replace); }

Json parse_object(std::string_view line) {
    Json j;
    try {
        j = Json::parse(line);
    } catch (const Json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("record is not a JSON object");
    if (auto v = j.find("v"); v != j.end() && *v != kSchemaVersion) {
        throw ValidationError("unsupported schema version " + v->dump());
    }
    return j;
}

}  // namespace detail

namespace {

using detail::answer_from_json;
using detail::answer_to_json;
using detail::dump_line;
using detail::parse_object;

template <typename T>
std::optional<T> opt(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<T>();
}

Json header() {
    Json j;
    j["v"] = kSchemaVersion;
    return j;
}

Task task_field(const Json& j) {
    const auto name = j.at("task").get<std::string>();
    auto task = parse_task(name);
    if (!task) throw ValidationError("unknown task: " + name);
    return *task;
}

template <typename T, typename Decode>
std::vector<T> load_lines(const std::filesystem::path& path, Decode decode) {
    std::vector<T> out;
    for_each_line(path, [&](std::size_t number, std::string_view line) {
        try {
            out.push_back(decode(line));
        } catch (const ParseError&) {
            throw;
        } catch (const Json::exception& e) {
            throw ParseError(path.string(), number, e.what());
        } catch (const ValidationError& e) {
            throw ParseError(path.string(), number, e.what());
        }
    });
    return out;
}

template <typename T>
std::size_t write_encoded(std::span<const T> items, const std::filesystem::path& path) {
    std::vector<std::string> lines;
    lines.reserve(items.size());
    for (const auto& item : items) {
        validate(item);
        lines.push_back(encode(item));
    }
    return write_lines(lines, path);
}

}  // namespace

std::string encode(const Question& q) {
    Json j = header();
    j["id"] = q.id;
    j["task"] = std::string(to_string(q.task));
    j["text"] = q.text;
    j["gold_answer"] = answer_to_json(q.gold_answer);
    if (q.difficulty) j["difficulty"] = *q.difficulty;
    j["origin"] = std::string(to_string(q.origin));
    if (q.parent_id) j["parent_id"] = *q.parent_id;
    return dump_line(j);
}

std::string encode(const ReasoningPath& p) {
    Json j = header();
    j["question_id"] = p.question_id;
    j["generator"] = p.generator;
    j["text"] = p.text;
    j["path_hash"] = path_hash(p.text);
    if (p.extracted) j["extracted"] = answer_to_json(*p.extracted);
    j["correct"] = p.correct;
    j["unexpected_format"] = p.unexpected_format;
    Json params;
    params["temperature"] = p.sample_params.temperature;
    if (p.sample_params.seed) params["seed"] = *p.sample_params.seed;
    params["prompt_id"] = p.sample_params.prompt_id;
    j["sample_params"] = std::move(params);
    j["provenance"] = p.provenance;
    return dump_line(j);
}

std::string encode(const Correction& c) {
    Json j = header();
    j["question_id"] = c.question_id;
    j["generator"] = c.generator;
    j["path_text"] = c.path_text;
    j["path_hash"] = c.path_hash;
    if (c.incorrect_step) j["incorrect_step"] = *c.incorrect_step;
    if (c.explanation) j["explanation"] = *c.explanation;
    j["corrected_solution"] = c.corrected_solution;
    if (c.extracted) j["extracted"] = answer_to_json(*c.extracted);
    j["status"] = std::string(to_string(c.status));
    j["schema"] = std::string(to_string(c.schema));
    if (c.difficulty) j["difficulty"] = *c.difficulty;
    j["raw"] = c.raw;
    if (c.parse_error) j["parse_error"] = *c.parse_error;
    return dump_line(j);
}

std::string encode(const DatasetRecord& r) {
    Json j = header();
    j["input"] = r.input;
    j["output"] = r.output;
    j["kind"] = std::string(to_string(r.kind));
    Json src;
    src["question_id"] = r.source_ids.question_id;
    if (r.source_ids.path_hash) src["path_hash"] = *r.source_ids.path_hash;
    if (r.source_ids.derived_from) src["derived_from"] = *r.source_ids.derived_from;
    j["source_ids"] = std::move(src);
    if (r.token_count) j["token_count"] = *r.token_count;
    return dump_line(j);
}

Question decode_question(std::string_view line) {
    const Json j = parse_object(line);
    Question q;
    q.id = j.at("id").get<std::string>();
    q.task = task_field(j);
    q.text = j.at("text").get<std::string>();
    q.gold_answer = answer_from_json(j.at("gold_answer"), q.task);
    q.difficulty = opt<int>(j, "difficulty");
    if (auto origin = opt<std::string>(j, "origin")) {
        auto parsed = parse_origin(*origin);
        if (!parsed) throw ValidationError("unknown origin: " + *origin);
        q.origin = *parsed;
    }
    q.parent_id = opt<std::string>(j, "parent_id");
    validate(q);
    return q;
}

ReasoningPath decode_path(std::string_view line) {
    const Json j = parse_object(line);
    ReasoningPath p;
    p.question_id = j.at("question_id").get<std::string>();
    p.generator = j.at("generator").get<std::string>();
    p.text = j.at("text").get<std::string>();
    if (auto it = j.find("extracted"); it != j.end() && !it->is_null()) {
        // Extracted answers are always stored in object form; the task only
        // matters for plain-string answers.
        p.extracted = answer_from_json(*it, Task::CUSTOM);
    }
    p.correct = j.at("correct").get<bool>();
    p.unexpected_format = j.value("unexpected_format", false);
    if (auto it = j.find("sample_params"); it != j.end()) {
        p.sample_params.temperature = it->value("temperature", 0.0);
        p.sample_params.seed = opt<std::uint64_t>(*it, "seed");
        p.sample_params.prompt_id = it->value("prompt_id", std::string{});
    }
    p.provenance = j.value("provenance", std::vector<std::string>{});
    validate(p);
    return p;
}

Correction decode_correction(std::string_view line) {
    const Json j = parse_object(line);
    Correction c;
    c.question_id = j.at("question_id").get<std::string>();
    c.generator = j.value("generator", std::string{});
    c.path_text = j.at("path_text").get<std::string>();
    c.path_hash = j.value("path_hash", path_hash(c.path_text));
    c.incorrect_step = opt<std::string>(j, "incorrect_step");
    c.explanation = opt<std::string>(j, "explanation");
    c.corrected_solution = j.value("corrected_solution", std::string{});
    if (auto it = j.find("extracted"); it != j.end() && !it->is_null()) {
        c.extracted = answer_from_json(*it, Task::CUSTOM);
    }
    const auto status = j.at("status").get<std::string>();
    auto parsed_status = parse_status(status);
    if (!parsed_status) throw ValidationError("unknown correction status: " + status);
    c.status = *parsed_status;
    const auto schema = j.value("schema", std::string("full"));
    auto parsed_schema = parse_schema(schema);
    if (!parsed_schema) throw ValidationError("unknown correction schema: " + schema);
    c.schema = *parsed_schema;
    c.difficulty = opt<int>(j, "difficulty");
    c.raw = j.value("raw", std::string{});
    c.parse_error = opt<std::string>(j, "parse_error");
    validate(c);
    return c;
}

DatasetRecord decode_record(std::string_view line) {
    const Json j = parse_object(line);
    DatasetRecord r;
    r.input = j.at("input").get<std::string>();
    r.output = j.at("output").get<std::string>();
    const auto kind = j.at("kind").get<std::string>();
    auto parsed = parse_record_kind(kind);
    if (!parsed) throw ValidationError("unknown record kind: " + kind);
    r.kind = *parsed;
    const auto& src = j.at("source_ids");
    r.source_ids.question_id = src.at("question_id").get<std::string>();
    r.source_ids.path_hash = opt<std::string>(src, "path_hash");
    r.source_ids.derived_from = opt<std::string>(src, "derived_from");
    r.token_count = opt<std::int64_t>(j, "token_count");
    validate(r);
    return r;
}

std::vector<Question> load_corpus(const std::filesystem::path& path, std::optional<Task> expected_task) {
    std::vector<Question> out;
    std::unordered_set<std::string> seen;
    for_each_line(path, [&](std::size_t number, std::string_view line) {
        Question q;
        try {
            q = decode_question(line);
        } catch (const Json::exception& e) {
            throw ParseError(path.string(), number, e.what());
        } catch (const ValidationError& e) {
            throw ParseError(path.string(), number, e.what());
        }
        if (expected_task && q.task != *expected_task) {
            throw ParseError(path.string(), number,
                             "task mismatch: expected " + std::string(to_string(*expected_task)) + ", found " +
                                 std::string(to_string(q.task)));
        }
        if (!seen.insert(q.id).second) throw ParseError(path.string(), number, "duplicate question id " + q.id);
        out.push_back(std::move(q));
    });
    return out;
}

std::size_t write_corpus(std::span<const DatasetRecord> records, const std::filesystem::path& path) {
    return write_encoded(records, path);
}

std::vector<DatasetRecord> load_records(const std::filesystem::path& path) {
    return load_lines<DatasetRecord>(path, decode_record);
}

std::vector<ReasoningPath> load_paths(const std::filesystem::path& path) {
    return load_lines<ReasoningPath>(path, decode_path);
}

std::vector<Correction> load_corrections(const std::filesystem::path& path) {
    return load_lines<Correction>(path, decode_correction);
}

std::size_t write_questions(std::span<const Question> questions, const std::filesystem::path& path) {
    return write_encoded(questions, path);
}

std::size_t write_paths(std::span<const ReasoningPath> paths, const std::filesystem::path& path) {
    return write_encoded(paths, path);
}

std::size_t write_corrections(std::span<const Correction> corrections, const std::filesystem::path& path) {
    return write_encoded(corrections, path);
}

std::size_t write_lines(std::span<const std::string> lines, const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    for (const auto& line : lines) {
        out.write(line.data(), static_cast<std::streamsize>(line.size()));
        out.put('\n');
    }
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
    return lines.size();
}

Corpus::Corpus(std::vector<Question> questions) { extend(std::move(questions)); }

void Corpus::extend(std::vector<Question> more) {
    for (auto& q : more) {
        if (index_.contains(q.id)) throw ValidationError("duplicate question id " + q.id);
        index_.emplace(q.id, questions_.size());
        questions_.push_back(std::move(q));
    }
}

const Question* Corpus::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? nullptr : &questions_[it->second];
}

const Question& Corpus::at(std::string_view id) const {
    if (const auto* q = find(id)) return *q;
    throw IntegrityError("unknown question id " + std::string(id));
}

void check_references(const Corpus& corpus, std::span<const ReasoningPath> paths) {
    for (const auto& p : paths) corpus.at(p.question_id);
}

void check_references(const Corpus& corpus, std::span<const Correction> corrections) {
    for (const auto& c : corrections) corpus.at(c.question_id);
}

void check_references(const Corpus& corpus, std::span<const DatasetRecord> records) {
    for (const auto& r : records) corpus.at(r.source_ids.question_id);
}

void check_parent_links(const Corpus& corpus) {
    for (const auto& q : corpus.questions()) {
        std::unordered_set<std::string> visited{q.id};
        const Question* cur = &q;
        while (cur->origin == Origin::evolved) {
            const Question* parent = corpus.find(*cur->parent_id);
            if (!parent) throw IntegrityError("question " + cur->id + " has missing parent " + *cur->parent_id);
            if (!visited.insert(parent->id).second) throw IntegrityError("parent cycle through " + parent->id);
            cur = parent;
        }
    }
}

}  // namespace lema
