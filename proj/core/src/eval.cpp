// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include "lema/eval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "json_codec.hpp"
#include "lema/answer.hpp"
#include "lema/assembler.hpp"
#include "lema/corpus.hpp"
#include "lema/error.hpp"
#include "lema/parallel.hpp"

namespace lema {
namespace {

using detail::Json;

std::optional<std::int64_t> trailing_number(std::string_view id) {
    std::size_t end = id.size();
    while (end > 0 && !std::isdigit(static_cast<unsigned char>(id[end - 1]))) --end;
    if (end == 0) return std::nullopt;
    std::size_t begin = end;
    while (begin > 0 && std::isdigit(static_cast<unsigned char>(id[begin - 1]))) --begin;
    if (end - begin > 18) return std::nullopt;
    return std::stoll(std::string(id.substr(begin, end - begin)));
}

}  // namespace

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::correct: return "correct";
        case Verdict::wrong: return "wrong";
        case Verdict::unexpected_format: return "unexpected_format";
        case Verdict::unscored: return "unscored";
    }
    return "unscored";
}

std::pair<std::vector<Question>, std::size_t> filter_numeric_gradable(std::span<const Question> questions) {
    std::vector<Question> kept;
    for (const auto& q : questions) {
        if (is_numeric_gradable(q)) kept.push_back(q);
    }
    const std::size_t dropped = questions.size() - kept.size();
    return {std::move(kept), dropped};
}

QuestionVerdict grade_output(const Question& q, std::string output) {
    QuestionVerdict v;
    v.question_id = q.id;
    v.extracted = extract_answer(output, q.task);
    if (!v.extracted) {
        v.verdict = Verdict::unexpected_format;
    } else {
        v.verdict = answers_equal(*v.extracted, q.gold_answer) ? Verdict::correct : Verdict::wrong;
    }
    v.output = std::move(output);
    return v;
}

EvalReport summarize(std::string endpoint, std::string checkpoint, std::vector<QuestionVerdict> verdicts) {
    EvalReport r;
    r.endpoint = std::move(endpoint);
    r.checkpoint = std::move(checkpoint);
    for (const auto& v : verdicts) {
        switch (v.verdict) {
            case Verdict::correct: ++r.correct; break;
            case Verdict::wrong: ++r.wrong; break;
            case Verdict::unexpected_format: ++r.unexpected_format; break;
            case Verdict::unscored: ++r.unscored; break;
        }
    }
    if (r.scored() > 0) r.accuracy = Rational(r.correct, r.scored());
    r.verdicts = std::move(verdicts);
    return r;
}

EvalReport evaluate(Gateway& gateway, const PromptRegistry& prompts, const EndpointSpec& endpoint,
                    std::span<const Question> test_set, const EvalConfig& cfg) {
    if (test_set.empty()) throw ValidationError("empty test set: accuracy is undefined");
    for (const auto& q : test_set) {
        if (q.task == Task::ASDiv && !is_numeric_gradable(q)) {
            throw ValidationError("ASDiv question " + q.id + " has a non-numeric gold answer; filter the test set first");
        }
    }
    const Prompt& prompt = prompts.get(cfg.prompt_id, PromptRole::instruction);
    std::vector<SampleRequest> requests;
    requests.reserve(test_set.size());
    for (const auto& q : test_set) {
        SampleRequest req;
        req.prompt = prompt.render(q.text);
        req.temperature = 0.0;
        req.max_tokens = cfg.max_tokens;
        requests.push_back(std::move(req));
    }
    const auto outcomes = gateway.sample_all(endpoint, requests);

    std::vector<QuestionVerdict> verdicts;
    verdicts.reserve(test_set.size());
    for (std::size_t i = 0; i < test_set.size(); ++i) {
        const auto& outcome = outcomes[i];
        if (outcome.auth_failure) throw AuthError(outcome.error, outcome.status, 1);
        if (!outcome.ok() || outcome.value->texts.empty()) {
            if (cfg.strict) {
                throw TransportError("question " + test_set[i].id + " could not be scored: " + outcome.error,
                                     outcome.status, 0);
            }
            QuestionVerdict v;
            v.question_id = test_set[i].id;
            v.verdict = Verdict::unscored;
            v.error = outcome.ok() ? "empty response" : outcome.error;
            verdicts.push_back(std::move(v));
            continue;
        }
        verdicts.push_back(grade_output(test_set[i], outcome.value->texts.front()));
    }
    EvalReport report = summarize(endpoint.id(), cfg.checkpoint, std::move(verdicts));
    if (report.scored() == 0) throw Error("no question could be scored");
    return report;
}

std::string encode(const EvalReport& report) {
    std::string out;
    for (const auto& v : report.verdicts) {
        Json j;
        j["v"] = kSchemaVersion;
        j["question_id"] = v.question_id;
        j["verdict"] = std::string(to_string(v.verdict));
        if (v.extracted) j["extracted"] = detail::answer_to_json(*v.extracted);
        if (!v.error.empty()) j["error"] = v.error;
        j["output"] = v.output;
        out += detail::dump_line(j);
        out += '\n';
    }
    Json s;
    s["v"] = kSchemaVersion;
    s["summary"] = true;
    s["endpoint"] = report.endpoint;
    s["checkpoint"] = report.checkpoint;
    s["questions"] = report.verdicts.size();
    s["scored"] = report.scored();
    s["correct"] = report.correct;
    s["wrong"] = report.wrong;
    s["unexpected_format"] = report.unexpected_format;
    s["unscored"] = report.unscored;
    s["accuracy"] = {{"num", report.accuracy.num}, {"den", report.accuracy.den}};
    s["accuracy_percent"] = render_percent(report.accuracy, 1);
    out += detail::dump_line(s);
    out += '\n';
    return out;
}

EvalReport load_report_summary(const std::filesystem::path& path) {
    std::optional<EvalReport> found;
    for_each_line(path, [&](std::size_t line_no, std::string_view line) {
        Json j;
        try {
            j = detail::parse_object(line);
        } catch (const std::exception& e) {
            throw ParseError(path.string(), line_no, e.what());
        }
        if (!j.value("summary", false)) return;
        EvalReport r;
        r.endpoint = j.value("endpoint", "");
        r.checkpoint = j.value("checkpoint", "");
        r.correct = j.at("correct").get<std::int64_t>();
        r.wrong = j.at("wrong").get<std::int64_t>();
        r.unexpected_format = j.at("unexpected_format").get<std::int64_t>();
        r.unscored = j.at("unscored").get<std::int64_t>();
        const auto& acc = j.at("accuracy");
        const auto den = acc.at("den").get<std::int64_t>();
        if (den <= 0) throw ParseError(path.string(), line_no, "accuracy denominator must be positive");
        r.accuracy = Rational(acc.at("num").get<std::int64_t>(), den);
        found = std::move(r);
    });
    if (!found) throw ValidationError("report " + path.string() + " has no summary line");
    if (found->checkpoint.empty()) found->checkpoint = path.stem().string();
    return *found;
}

BestCheckpoints best_checkpoints(std::vector<CheckpointScore> scores, std::size_t k) {
    if (k == 0) throw ValidationError("k must be >= 1");
    std::sort(scores.begin(), scores.end(), [](const CheckpointScore& a, const CheckpointScore& b) {
        if (a.accuracy == b.accuracy) return a.checkpoint < b.checkpoint;
        return b.accuracy < a.accuracy;
    });
    BestCheckpoints out;
    if (scores.size() < k) {
        out.note = "only " + std::to_string(scores.size()) + " of " + std::to_string(k) + " checkpoints available";
    } else {
        scores.resize(k);
    }
    out.top = std::move(scores);
    if (!out.top.empty()) {
        Rational sum;
        for (const auto& s : out.top) sum = sum + s.accuracy;
        out.average = sum / static_cast<std::int64_t>(out.top.size());
    }
    return out;
}

std::string training_curve_csv(const std::filesystem::path& dir) {
    struct Point {
        std::optional<std::int64_t> step;
        std::string checkpoint;
        Rational accuracy;
    };
    std::vector<Point> points;
    if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".jsonl") continue;
        const EvalReport r = load_report_summary(entry.path());
        points.push_back({trailing_number(r.checkpoint), r.checkpoint, r.accuracy});
    }
    std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
        const auto sa = a.step.value_or(INT64_MAX);
        const auto sb = b.step.value_or(INT64_MAX);
        if (sa != sb) return sa < sb;
        return a.checkpoint < b.checkpoint;
    });
    std::string out = "checkpoint,step,accuracy\n";
    for (const auto& p : points) {
        out += p.checkpoint + "," + (p.step ? std::to_string(*p.step) : "") + "," + render_percent(p.accuracy, 1) + "\n";
    }
    return out;
}

double ppl(std::span<const double> logprobs) {
    if (logprobs.empty()) throw ValidationError("perplexity of an empty continuation");
    const double sum = std::accumulate(logprobs.begin(), logprobs.end(), 0.0);
    return std::exp(-sum / static_cast<double>(logprobs.size()));
}

double ppl(Gateway& gateway, const EndpointSpec& endpoint, std::string_view context, std::string_view continuation) {
    const auto logprobs = gateway.score_forced(endpoint, context, continuation);
    return ppl(logprobs);
}

std::vector<PplTriple> triples_from_corrections(std::span<const Correction> corrections,
                                                std::span<const Question> questions) {
    std::map<std::string_view, const Question*> by_id;
    for (const auto& q : questions) by_id[q.id] = &q;
    std::vector<PplTriple> out;
    for (const auto& c : corrections) {
        if (c.status != CorrectionStatus::kept || c.corrected_solution.empty()) continue;
        auto it = by_id.find(c.question_id);
        if (it == by_id.end()) throw IntegrityError("correction references unknown question " + c.question_id);
        out.push_back({c.question_id, it->second->text, c.path_text, c.corrected_solution});
    }
    return out;
}

std::string encode(const PplTriple& t) {
    Json j;
    j["v"] = kSchemaVersion;
    j["question_id"] = t.question_id;
    j["question"] = t.question;
    j["mistaken"] = t.mistaken;
    j["correct"] = t.correct;
    return detail::dump_line(j);
}

PplTriple decode_triple(std::string_view line) {
    const Json j = detail::parse_object(line);
    PplTriple t;
    t.question_id = j.at("question_id").get<std::string>();
    t.question = j.at("question").get<std::string>();
    t.mistaken = j.at("mistaken").get<std::string>();
    t.correct = j.at("correct").get<std::string>();
    if (t.mistaken.empty() || t.correct.empty()) throw ValidationError("degenerate triple for " + t.question_id);
    return t;
}

double delta_ppl(std::span<const PplTerm> terms) {
    if (terms.empty()) throw ValidationError("no scored triples");
    double sum = 0;
    for (const auto& t : terms) sum += t.diff();
    return sum / static_cast<double>(terms.size());
}

DeltaPpl delta_ppl(Gateway& gateway, const EndpointSpec& endpoint, std::span<const PplTriple> triples) {
    if (!endpoint.capabilities.forced_logprobs) {
        throw CapabilityError("endpoint " + endpoint.id() + " does not support forced-continuation scoring");
    }
    std::vector<std::optional<PplTerm>> slots(triples.size());
    std::vector<std::string> errors(triples.size());
    parallel_for(triples.size(), endpoint.max_concurrency, [&](std::size_t i) {
        const PplTriple& t = triples[i];
        const std::string context = cot_input(t.question);
        try {
            PplTerm term;
            term.question_id = t.question_id;
            term.ppl_mistaken = ppl(gateway, endpoint, context, t.mistaken);
            term.ppl_correct = ppl(gateway, endpoint, context, t.correct);
            slots[i] = std::move(term);
        } catch (const CapabilityError&) {
            throw;
        } catch (const AuthError&) {
            throw;
        } catch (const Error& e) {
            errors[i] = e.what();
        }
    });
    DeltaPpl out;
    for (std::size_t i = 0; i < triples.size(); ++i) {
        if (slots[i]) {
            out.terms.push_back(std::move(*slots[i]));
        } else {
            out.unscored.push_back(triples[i].question_id);
        }
    }
    out.value = delta_ppl(out.terms);
    return out;
}

std::string encode(const DeltaPpl& d) {
    std::string out;
    for (const auto& t : d.terms) {
        Json j;
        j["v"] = kSchemaVersion;
        j["question_id"] = t.question_id;
        j["ppl_mistaken"] = t.ppl_mistaken;
        j["ppl_correct"] = t.ppl_correct;
        j["diff"] = t.diff();
        out += detail::dump_line(j) + "\n";
    }
    Json s;
    s["v"] = kSchemaVersion;
    s["summary"] = true;
    s["delta_ppl"] = d.value;
    s["scored"] = d.terms.size();
    s["unscored"] = d.unscored.size();
    s["unscored_ids"] = d.unscored;
    out += detail::dump_line(s) + "\n";
    return out;
}

}  // namespace lema
