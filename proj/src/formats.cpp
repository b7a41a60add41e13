#include "slcd/formats.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "slcd/fsio.hpp"

namespace slcd {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(std::string_view field, const std::string& where) {
    double v = 0.0;
    const auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError(where + ": bad number '" + std::string(field) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> fields;
    size_t start = 0;
    while (true) {
        const size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

// Splits text into lines; tolerates CRLF and a missing final newline.
std::vector<std::string_view> text_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    size_t start = 0;
    while (start < text.size()) {
        size_t pos = text.find('\n', start);
        if (pos == std::string_view::npos) pos = text.size();
        std::string_view line = text.substr(start, pos - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = pos + 1;
    }
    return lines;
}

}  // namespace

void save_candidates(const CandidateSet& candidates, const std::string& path) {
    std::ostringstream out;
    out << "rho,theta,prob,d_rho,d_theta\n";
    for (size_t i = 0; i < candidates.size(); ++i) {
        out << format_double(candidates.lines[i].rho) << ','
            << format_double(candidates.lines[i].theta) << ','
            << format_double(candidates.probs[i]) << ','
            << format_double(candidates.offsets[i].d_rho) << ','
            << format_double(candidates.offsets[i].d_theta) << '\n';
    }
    write_file_atomic(path, out.str());
}

CandidateSet load_candidates(const std::string& path) {
    const std::string text = read_text_file(path);
    const auto lines = text_lines(text);
    if (lines.empty() || lines[0] != "rho,theta,prob,d_rho,d_theta") {
        throw ParseError(path + ": expected header rho,theta,prob,d_rho,d_theta");
    }
    CandidateSet set;
    for (size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::string where = path + ":" + std::to_string(i + 1);
        const auto fields = split(lines[i], ',');
        if (fields.size() != 5) {
            throw ParseError(where + ": expected 5 fields");
        }
        const double rho = parse_double(fields[0], where);
        const double theta = parse_double(fields[1], where);
        const double prob = parse_double(fields[2], where);
        if (prob < 0.0 || prob > 1.0) {
            throw ParseError(where + ": prob outside [0, 1]");
        }
        set.lines.push_back(make_canonical(rho, theta));
        set.probs.push_back(prob);
        set.offsets.push_back({parse_double(fields[3], where),
                               parse_double(fields[4], where)});
    }
    if (set.lines.empty()) throw ParseError(path + ": no candidate rows");
    return set;
}

void save_score_report(const ScoreReport& report, const std::string& path) {
    std::ostringstream out;
    out << "combo_id,mask_bits,score,rank\n";
    char buf[40];
    for (size_t rank = 0; rank < report.ranking.size(); ++rank) {
        const uint32_t id = report.ranking[rank];
        const ScoreRecord* rec = nullptr;
        for (const ScoreRecord& r : report.records) {
            if (r.id == id) {
                rec = &r;
                break;
            }
        }
        if (!rec) throw Error("save_score_report: ranking id missing");
        std::string bits(rec->mask.size(), '0');
        for (size_t b = 0; b < rec->mask.size(); ++b) {
            if (rec->mask[b]) bits[rec->mask.size() - 1 - b] = '1';
        }
        std::snprintf(buf, sizeof(buf), "%.6f", rec->score);
        out << id << ',' << bits << ',' << buf << ',' << (rank + 1) << '\n';
    }
    write_file_atomic(path, out.str());
}

void save_retrieval_index(const std::vector<RetrievalEntry>& entries,
                          const std::string& path) {
    std::ostringstream out;
    for (const RetrievalEntry& e : entries) {
        out << e.identifier << '\t' << format_double(e.composition_score)
            << '\t';
        for (size_t i = 0; i < e.embedding.size(); ++i) {
            if (i) out << ',';
            out << format_double(e.embedding[i]);
        }
        out << '\n';
    }
    write_file_atomic(path, out.str());
}

std::vector<RetrievalEntry> load_retrieval_index(const std::string& path) {
    const std::string text = read_text_file(path);
    std::vector<RetrievalEntry> entries;
    size_t lineno = 0;
    for (std::string_view line : text_lines(text)) {
        ++lineno;
        if (line.empty()) continue;
        const std::string where = path + ":" + std::to_string(lineno);
        const auto fields = split(line, '\t');
        if (fields.size() != 3 || fields[0].empty()) {
            throw ParseError(where + ": expected id<TAB>score<TAB>values");
        }
        RetrievalEntry e;
        e.identifier = std::string(fields[0]);
        e.composition_score = parse_double(fields[1], where);
        for (std::string_view v : split(fields[2], ',')) {
            e.embedding.push_back(parse_double(v, where));
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

void append_retrieval_entry(const RetrievalEntry& entry,
                            const std::string& path) {
    std::ifstream probe(path);
    std::vector<RetrievalEntry> entries;
    if (probe.good()) {
        probe.close();
        entries = load_retrieval_index(path);
    }
    entries.push_back(entry);
    save_retrieval_index(entries, path);
}

}  // namespace slcd
