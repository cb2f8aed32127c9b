// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include "lema/stats.hpp"

#include <algorithm>
#include <map>

#include "lema/corrector.hpp"
#include "lema/text.hpp"

namespace lema {
namespace {

bool numeric_cell(const std::string& s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return (c >= '0' && c <= '9') || c == '.' || c == '%' || c == '-'; });
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string percent_of(std::int64_t part, std::int64_t total) {
    if (total == 0) return "0%";
    return render_percent_compact(Rational(part, total), 1) + "%";
}

}  // namespace

std::string Table::to_csv() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += csv_cell(cells[i]);
        }
        out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
}

std::string Table::to_text() const {
    std::vector<std::size_t> width(header.size(), 0);
    auto measure = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size() && i < width.size(); ++i) width[i] = std::max(width[i], cells[i].size());
    };
    measure(header);
    for (const auto& r : rows) measure(r);

    std::string out;
    auto line = [&](const std::vector<std::string>& cells, bool is_header) {
        std::string text;
        for (std::size_t i = 0; i < width.size(); ++i) {
            const std::string cell = i < cells.size() ? cells[i] : "";
            const std::string pad(width[i] - cell.size(), ' ');
            if (i) text += "  ";
            text += (!is_header && i > 0 && numeric_cell(cell)) ? pad + cell : cell + pad;
        }
        while (!text.empty() && text.back() == ' ') text.pop_back();
        out += text + '\n';
    };
    line(header, true);
    for (const auto& r : rows) line(r, false);
    return out;
}

Table corpus_stats(const Pools& pools) {
    struct Counts {
        std::int64_t cot = 0, corrections = 0, test = 0;
    };
    // Ordered by task enum, "unknown" last.
    std::map<int, Counts> by_task;
    constexpr int kUnknown = 1000;
    auto task_of = [&](const std::string& id) {
        if (pools.corpus) {
            if (const Question* q = pools.corpus->find(id)) return static_cast<int>(q->task);
        }
        return kUnknown;
    };
    for (const auto& p : pools.cot) ++by_task[task_of(p.question_id)].cot;
    for (const auto& c : pools.corrections) {
        if (c.status == CorrectionStatus::kept) ++by_task[task_of(c.question_id)].corrections;
    }
    for (const auto& q : pools.test) ++by_task[static_cast<int>(q.task)].test;

    Table t;
    t.header = {"task", "cot", "corrections", "test"};
    Counts total;
    for (const auto& [task, c] : by_task) {
        const std::string name = task == kUnknown ? "unknown" : std::string(to_string(static_cast<Task>(task)));
        t.rows.push_back({name, std::to_string(c.cot), std::to_string(c.corrections), std::to_string(c.test)});
        total.cot += c.cot;
        total.corrections += c.corrections;
        total.test += c.test;
    }
    t.rows.push_back({"total", std::to_string(total.cot), std::to_string(total.corrections), std::to_string(total.test)});
    return t;
}

std::vector<LevelRow> difficulty_breakdown(std::span<const ReasoningPath> paths,
                                           std::span<const Correction> corrections, const Corpus& corpus) {
    constexpr int kUnknown = 1000;
    auto level_of = [&](const std::string& id, std::optional<int> fallback) {
        const Question* q = corpus.find(id);
        const auto d = q ? q->difficulty : fallback;
        return d ? *d : kUnknown;
    };
    std::map<int, std::pair<std::int64_t, std::int64_t>> counts;
    for (const auto& p : paths) {
        if (!p.correct && !p.unexpected_format) ++counts[level_of(p.question_id, std::nullopt)].first;
    }
    for (const auto& c : corrections) {
        if (c.status == CorrectionStatus::kept) ++counts[level_of(c.question_id, c.difficulty)].second;
    }
    std::vector<LevelRow> rows;
    for (const auto& [level, c] : counts) {
        if (c.first == 0) continue;
        rows.push_back({level == kUnknown ? "unknown" : "Level " + std::to_string(level), c.first, c.second,
                        Rational(c.second, c.first)});
    }
    return rows;
}

Table to_table(std::span<const LevelRow> rows) {
    Table t;
    t.header = {"level", "mistakes", "kept", "success_rate"};
    for (const auto& r : rows) {
        t.rows.push_back({r.level, std::to_string(r.mistakes), std::to_string(r.kept), render_rate(r.rate)});
    }
    return t;
}

std::string_view to_string(Grade g) noexcept {
    switch (g) {
        case Grade::excellent: return "excellent";
        case Grade::good: return "good";
        case Grade::poor: return "poor";
    }
    return "poor";
}

std::optional<Grade> parse_grade(std::string_view text) noexcept {
    for (auto g : {Grade::excellent, Grade::good, Grade::poor}) {
        if (iequals(to_string(g), text)) return g;
    }
    return std::nullopt;
}

std::string ReviewSummary::proportions() const {
    const auto n = total();
    return percent_of(excellent, n) + "/" + percent_of(good, n) + "/" + percent_of(poor, n);
}

ReviewSummary review_summary(std::span<const Grade> grades) {
    ReviewSummary s;
    for (Grade g : grades) {
        switch (g) {
            case Grade::excellent: ++s.excellent; break;
            case Grade::good: ++s.good; break;
            case Grade::poor: ++s.poor; break;
        }
    }
    return s;
}

Table to_table(const ReviewSummary& s) {
    Table t;
    t.header = {"grade", "count", "share"};
    const auto n = s.total();
    t.rows.push_back({"excellent", std::to_string(s.excellent), percent_of(s.excellent, n)});
    t.rows.push_back({"good", std::to_string(s.good), percent_of(s.good, n)});
    t.rows.push_back({"poor", std::to_string(s.poor), percent_of(s.poor, n)});
    t.rows.push_back({"total", std::to_string(n), n ? "100%" : "0%"});
    return t;
}

}  // namespace lema
