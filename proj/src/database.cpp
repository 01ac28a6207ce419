#include "seqpred/database.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "seqpred/errors.hpp"

namespace seqpred {

void SequenceDatabase::add(SymbolSequence word, std::uint64_t count) {
    if (count == 0) return;
    total_sequences_ += count;
    total_events_ += count * word.size();
    auto it = index_.find(word);
    if (it != index_.end()) {
        entries_[it->second].count += count;
        return;
    }
    index_.emplace(word, entries_.size());
    entries_.push_back({std::move(word), count});
}

Alphabet SequenceDatabase::alphabet() const {
    std::vector<Symbol> symbols;
    for (const auto& entry : entries_) {
        for (Symbol s : entry.word) symbols.push_back(s);
    }
    return Alphabet(std::move(symbols));
}

bool SequenceDatabase::operator==(const SequenceDatabase& other) const {
    if (total_sequences_ != other.total_sequences_ || entries_.size() != other.entries_.size()) {
        return false;
    }
    for (const auto& entry : entries_) {
        auto it = other.index_.find(entry.word);
        if (it == other.index_.end() || other.entries_[it->second].count != entry.count) return false;
    }
    return true;
}

namespace {

void reject_reserved(std::string_view token, std::size_t line_no) {
    if (token == Symbol::reserved_tau) {
        throw ParseError("line " + std::to_string(line_no) + ": symbol name \"tau\" is reserved");
    }
}

// --- RFC 3339 timestamps, compared as (seconds since epoch, nanoseconds) ---

struct TimestampKey {
    std::int64_t seconds = 0;
    std::uint32_t nanos = 0;
    auto operator<=>(const TimestampKey&) const = default;
};

bool parse_fixed_digits(std::string_view s, std::size_t& pos, int width, int& out) {
    if (pos + static_cast<std::size_t>(width) > s.size()) return false;
    int value = 0;
    for (int i = 0; i < width; ++i) {
        char c = s[pos + static_cast<std::size_t>(i)];
        if (c < '0' || c > '9') return false;
        value = value * 10 + (c - '0');
    }
    pos += static_cast<std::size_t>(width);
    out = value;
    return true;
}

// days since 1970-01-01 for a proleptic Gregorian date (Howard Hinnant's algorithm)
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

TimestampKey parse_rfc3339(std::string_view s, std::size_t line_no) {
    auto fail = [&]() -> TimestampKey {
        throw ParseError("line " + std::to_string(line_no) + ": invalid RFC 3339 timestamp \"" +
                         std::string(s) + "\"");
    };
    std::size_t pos = 0;
    int year, month, day, hour, minute, second;
    if (!parse_fixed_digits(s, pos, 4, year)) return fail();
    if (pos >= s.size() || s[pos++] != '-') return fail();
    if (!parse_fixed_digits(s, pos, 2, month)) return fail();
    if (pos >= s.size() || s[pos++] != '-') return fail();
    if (!parse_fixed_digits(s, pos, 2, day)) return fail();
    if (pos >= s.size() || (s[pos] != 'T' && s[pos] != 't' && s[pos] != ' ')) return fail();
    ++pos;
    if (!parse_fixed_digits(s, pos, 2, hour)) return fail();
    if (pos >= s.size() || s[pos++] != ':') return fail();
    if (!parse_fixed_digits(s, pos, 2, minute)) return fail();
    if (pos >= s.size() || s[pos++] != ':') return fail();
    if (!parse_fixed_digits(s, pos, 2, second)) return fail();
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60) {
        return fail();
    }

    std::uint32_t nanos = 0;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        std::uint64_t frac = 0;
        int digits = 0;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
            if (digits < 9) {
                frac = frac * 10 + static_cast<std::uint64_t>(s[pos] - '0');
                ++digits;
            }
            ++pos;
        }
        if (digits == 0) return fail();
        while (digits < 9) {
            frac *= 10;
            ++digits;
        }
        nanos = static_cast<std::uint32_t>(frac);
    }

    std::int64_t offset_seconds = 0;
    if (pos < s.size() && (s[pos] == 'Z' || s[pos] == 'z')) {
        ++pos;
    } else if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        const bool negative = s[pos] == '-';
        ++pos;
        int oh, om;
        if (!parse_fixed_digits(s, pos, 2, oh)) return fail();
        if (pos >= s.size() || s[pos++] != ':') return fail();
        if (!parse_fixed_digits(s, pos, 2, om)) return fail();
        offset_seconds = (negative ? -1 : 1) * (oh * 3600 + om * 60);
    } else {
        return fail(); // RFC 3339 requires an offset
    }
    if (pos != s.size()) return fail();

    TimestampKey key;
    key.seconds = days_from_civil(year, month, day) * 86400 + hour * 3600 + minute * 60 + second -
                  offset_seconds;
    key.nanos = nanos;
    return key;
}

// --- RFC 4180 CSV reader (quoted fields may span lines) ---

struct CsvRow {
    std::vector<std::string> fields;
    std::size_t line_no = 0; // line where the row started
};

std::vector<CsvRow> read_csv(const std::string& text) {
    std::vector<CsvRow> rows;
    std::vector<std::string> fields;
    std::string field;
    std::size_t line_no = 1;
    std::size_t row_start_line = 1;
    bool in_quotes = false;
    bool row_has_content = false;

    auto end_field = [&]() {
        fields.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&]() {
        end_field();
        rows.push_back({std::move(fields), row_start_line});
        fields.clear();
        row_has_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line_no;
                field += c;
            }
            continue;
        }
        switch (c) {
        case '"':
            in_quotes = true;
            row_has_content = true;
            break;
        case ',':
            end_field();
            row_has_content = true;
            break;
        case '\r':
            break;
        case '\n':
            if (row_has_content || !field.empty() || !fields.empty()) end_row();
            ++line_no;
            row_start_line = line_no;
            break;
        default:
            field += c;
            row_has_content = true;
            break;
        }
    }
    if (in_quotes) throw ParseError("line " + std::to_string(row_start_line) + ": unterminated quoted field");
    if (row_has_content || !field.empty() || !fields.empty()) end_row();
    return rows;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

} // namespace

SequenceDatabase parse_line_format(const std::string& text, const IngestionOptions& options) {
    SequenceDatabase db;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!options.comment_prefix.empty() && line.rfind(options.comment_prefix, 0) == 0) continue;
        std::vector<Symbol> symbols;
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && line[pos] == ' ') ++pos;
            std::size_t start = pos;
            while (pos < line.size() && line[pos] != ' ') ++pos;
            if (pos == start) break;
            std::string_view token(line.data() + start, pos - start);
            for (char c : token) {
                if (std::isspace(static_cast<unsigned char>(c)) || !std::isprint(static_cast<unsigned char>(c))) {
                    throw ParseError("line " + std::to_string(line_no) + ": malformed symbol token");
                }
            }
            reject_reserved(token, line_no);
            symbols.push_back(Symbol::intern(token));
        }
        // blank lines are skipped; the empty sequence is not representable
        if (!symbols.empty()) db.add(SymbolSequence(std::move(symbols)));
    }
    if (db.empty()) throw EmptyDatabaseError("input contains no sequences");
    return db;
}

SequenceDatabase parse_csv_format(const std::string& text) {
    std::vector<CsvRow> rows = read_csv(text);
    if (rows.empty()) throw EmptyDatabaseError("input contains no sequences");

    const CsvRow& header = rows.front();
    std::ptrdiff_t case_col = -1, activity_col = -1, timestamp_col = -1;
    for (std::size_t i = 0; i < header.fields.size(); ++i) {
        std::string name = lower(header.fields[i]);
        if (name == "case") case_col = static_cast<std::ptrdiff_t>(i);
        else if (name == "activity") activity_col = static_cast<std::ptrdiff_t>(i);
        else if (name == "timestamp") timestamp_col = static_cast<std::ptrdiff_t>(i);
    }
    if (case_col < 0 || activity_col < 0) {
        throw ParseError("line " + std::to_string(header.line_no) +
                         ": header must declare `case` and `activity` columns");
    }

    struct Event {
        TimestampKey timestamp;
        std::size_t file_order;
        Symbol activity;
    };
    // cases keep first-appearance order for determinism
    std::vector<std::pair<std::string, std::vector<Event>>> cases;
    std::unordered_map<std::string, std::size_t> case_index;

    for (std::size_t r = 1; r < rows.size(); ++r) {
        const CsvRow& row = rows[r];
        auto get = [&](std::ptrdiff_t col) -> const std::string& {
            static const std::string empty;
            if (col < 0 || static_cast<std::size_t>(col) >= row.fields.size()) return empty;
            return row.fields[static_cast<std::size_t>(col)];
        };
        const std::string& case_id = get(case_col);
        const std::string& activity = get(activity_col);
        if (case_id.empty()) {
            throw ParseError("line " + std::to_string(row.line_no) + ": missing case id");
        }
        if (activity.empty()) {
            throw ParseError("line " + std::to_string(row.line_no) + ": missing activity");
        }
        reject_reserved(activity, row.line_no);
        TimestampKey ts;
        if (timestamp_col >= 0) {
            const std::string& raw = get(timestamp_col);
            if (!raw.empty()) ts = parse_rfc3339(raw, row.line_no);
        }
        auto [it, inserted] = case_index.emplace(case_id, cases.size());
        if (inserted) cases.push_back({case_id, {}});
        cases[it->second].second.push_back({ts, r, Symbol::intern(activity)});
    }
    if (cases.empty()) throw EmptyDatabaseError("input contains no sequences");

    SequenceDatabase db;
    for (auto& [case_id, events] : cases) {
        std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
            if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
            return a.file_order < b.file_order; // ties broken by original file order
        });
        std::vector<Symbol> word;
        word.reserve(events.size());
        for (const Event& e : events) word.push_back(e.activity);
        db.add(SymbolSequence(std::move(word)));
    }
    return db;
}

SequenceDatabase load_database(const std::filesystem::path& path, LogFormat format,
                               const IngestionOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    switch (format) {
    case LogFormat::line: return parse_line_format(text, options);
    case LogFormat::csv: return parse_csv_format(text);
    }
    throw ParseError("unknown log format");
}

void for_each_prediction_point(
    const SequenceDatabase& db, bool include_empty_prefix,
    const std::function<void(const SymbolSequence&, std::size_t, Symbol, std::uint64_t)>& fn) {
    for (const auto& entry : db.entries()) {
        const SymbolSequence& word = entry.word;
        if (word.empty()) continue;
        std::size_t first = include_empty_prefix ? 0 : 1;
        for (std::size_t k = first; k < word.size(); ++k) {
            fn(word, k, word.at(k), entry.count);
        }
    }
}

std::vector<PredictionPoint> enumerate_prediction_points(const SequenceDatabase& db,
                                                         bool include_empty_prefix) {
    std::vector<PredictionPoint> points;
    for_each_prediction_point(db, include_empty_prefix,
                              [&](const SymbolSequence& word, std::size_t k, Symbol actual,
                                  std::uint64_t multiplicity) {
                                  for (std::uint64_t i = 0; i < multiplicity; ++i) {
                                      points.push_back({word.head(k), actual});
                                  }
                              });
    return points;
}

} // namespace seqpred
