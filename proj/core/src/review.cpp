// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0

#include "lema/review.hpp"

#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "json_codec.hpp"
#include "lema/corrector.hpp"
#include "lema/error.hpp"
#include "lema/rng.hpp"
#include "lema/text.hpp"

namespace lema {

ReviewSelection select_for_review(std::span<const Correction> kept, std::size_t n, std::uint64_t rng_seed) {
    ReviewSelection s;
    s.order.resize(kept.size());
    std::iota(s.order.begin(), s.order.end(), std::size_t{0});
    Rng rng(rng_seed);
    rng.shuffle(s.order);
    if (n > kept.size()) {
        s.note = "sample of " + std::to_string(n) + " exceeds the pool; reviewing all " + std::to_string(kept.size()) +
                 " corrections";
    } else {
        s.order.resize(n);
    }
    return s;
}

std::string encode(const GradeRecord& g) {
    detail::Json j;
    j["v"] = kSchemaVersion;
    j["position"] = g.position;
    j["question_id"] = g.question_id;
    j["path_hash"] = g.path_hash;
    j["grade"] = std::string(to_string(g.grade));
    if (!g.note.empty()) j["note"] = g.note;
    return detail::dump_line(j);
}

GradeRecord decode_grade(std::string_view line) {
    const auto j = detail::parse_object(line);
    GradeRecord g;
    g.position = j.at("position").get<std::size_t>();
    g.question_id = j.at("question_id").get<std::string>();
    g.path_hash = j.at("path_hash").get<std::string>();
    const auto grade = parse_grade(j.at("grade").get<std::string>());
    if (!grade) throw ValidationError("unknown grade " + j.at("grade").get<std::string>());
    g.grade = *grade;
    g.note = j.value("note", "");
    return g;
}

std::vector<GradeRecord> load_grades(const std::filesystem::path& path) {
    std::vector<GradeRecord> out;
    std::ifstream in(path, std::ios::binary);
    if (!in) return out;
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string content = buffer.str();
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < content.size()) {
        std::size_t end = content.find('\n', pos);
        const bool torn = end == std::string::npos;
        if (torn) end = content.size();
        ++line_no;
        const std::string_view line(content.data() + pos, end - pos);
        pos = end + 1;
        if (trim(line).empty()) continue;
        try {
            out.push_back(decode_grade(line));
        } catch (const std::exception& e) {
            if (torn) break;
            throw ParseError(path.string(), line_no, e.what());
        }
    }
    return out;
}

std::optional<GradeCommand> parse_grade_command(std::string_view line) {
    const std::string_view s = trim(line);
    const std::size_t split = s.find_first_of(" \t");
    const std::string word = to_lower(s.substr(0, split));
    const std::string_view note = split == std::string_view::npos ? std::string_view{} : trim(s.substr(split));
    GradeCommand cmd;
    if (word == "q" || word == "quit") {
        cmd.quit = true;
        return cmd;
    }
    if (word == "e" || word == "excellent") {
        cmd.grade = Grade::excellent;
    } else if (word == "g" || word == "good") {
        cmd.grade = Grade::good;
    } else if (word == "p" || word == "poor") {
        cmd.grade = Grade::poor;
    } else {
        return std::nullopt;
    }
    cmd.note = std::string(note);
    return cmd;
}

std::string render_review_item(const Question& q, const Correction& c, std::size_t position, std::size_t total) {
    std::ostringstream out;
    out << "=== [" << position + 1 << "/" << total << "] " << q.id << " ===\n";
    out << "Question:\n" << q.text << "\n\n";
    out << "Inaccurate solution:\n" << trim(c.path_text) << "\n\n";
    out << "Correction:\n" << trim(render_correction(c)) << "\n\n";
    out << "Gold answer: " << q.gold_answer.render() << "\n";
    return out.str();
}

ReviewSession run_review(std::span<const Correction> kept, const ReviewSelection& selection, const Corpus& corpus,
                         const std::filesystem::path& grades_path, std::istream& in, std::ostream& out) {
    ReviewSession session;
    session.grades = load_grades(grades_path);
    if (session.grades.size() > selection.order.size()) {
        throw IntegrityError("grades file " + grades_path.string() + " has more entries than the review sample");
    }
    for (std::size_t i = 0; i < session.grades.size(); ++i) {
        const Correction& c = kept[selection.order[i]];
        const GradeRecord& g = session.grades[i];
        if (g.position != i || g.question_id != c.question_id || g.path_hash != c.path_hash) {
            throw IntegrityError("grades file " + grades_path.string() + " does not match this review sample at entry " +
                                 std::to_string(i + 1));
        }
    }
    // Rewrite without any torn tail before appending.
    {
        std::vector<std::string> lines;
        for (const auto& g : session.grades) lines.push_back(encode(g));
        write_lines(lines, grades_path);
    }
    std::ofstream file(grades_path, std::ios::binary | std::ios::app);
    if (!file) throw IoError("cannot open grades file " + grades_path.string());

    const std::size_t total = selection.order.size();
    if (!session.grades.empty() && session.grades.size() < total) {
        out << "Resuming at item " << session.grades.size() + 1 << " of " << total << "\n";
    }
    for (std::size_t i = session.grades.size(); i < total; ++i) {
        const Correction& c = kept[selection.order[i]];
        out << render_review_item(corpus.at(c.question_id), c, i, total);
        std::optional<GradeCommand> cmd;
        std::string line;
        while (true) {
            out << "Grade [E]xcellent/[G]ood/[P]oor (optional note), q to quit: " << std::flush;
            if (!std::getline(in, line)) return session;
            cmd = parse_grade_command(line);
            if (cmd) break;
            out << "Unrecognized input.\n";
        }
        if (cmd->quit) return session;
        GradeRecord g{i, c.question_id, c.path_hash, *cmd->grade, cmd->note};
        file << encode(g) << '\n';
        file.flush();
        session.grades.push_back(std::move(g));
    }
    session.complete = true;
    return session;
}

}  // namespace lema
