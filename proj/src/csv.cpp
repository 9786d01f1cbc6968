#include "nfbench/csv.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace nfb::csv {

bool Reader::next(std::vector<std::string>& row) {
    row.clear();
    int c = in_.get();
    if (c == EOF) return false;

    std::string field;
    bool in_quotes = false;
    bool any = false;
    while (true) {
        if (c == EOF) {
            row.push_back(std::move(field));
            return true;
        }
        char ch = static_cast<char>(c);
        if (in_quotes) {
            if (ch == '"') {
                int peek = in_.get();
                if (peek == '"') {
                    field.push_back('"');
                } else {
                    in_quotes = false;
                    c = peek;
                    continue;
                }
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"' && field.empty() && !any) {
            in_quotes = true;
        } else if (ch == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = false;
            c = in_.get();
            continue;
        } else if (ch == '\r') {
            int peek = in_.get();
            if (peek == '\n' || peek == EOF) {
                row.push_back(std::move(field));
                return true;
            }
            field.push_back(ch);
            c = peek;
            continue;
        } else if (ch == '\n') {
            row.push_back(std::move(field));
            return true;
        } else {
            field.push_back(ch);
            any = true;
        }
        c = in_.get();
    }
}

std::vector<std::vector<std::string>> read_all(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    Reader reader(in);
    std::vector<std::string> row;
    while (reader.next(row)) rows.push_back(row);
    return rows;
}

static bool needs_quotes(const std::string& f) {
    return f.find_first_of(",\"\r\n") != std::string::npos;
}

void write_row(std::ostream& out, std::span<const std::string> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out << ',';
        const std::string& f = fields[i];
        if (needs_quotes(f)) {
            out << '"';
            for (char c : f) {
                if (c == '"') out << "\"\"";
                else out << c;
            }
            out << '"';
        } else {
            out << f;
        }
    }
    out << '\n';
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return std::string(buf);
}

double parse_double(std::string_view s) {
    // skip surrounding spaces; NetFlow exports pad occasionally
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t");
    if (b == std::string_view::npos) throw std::invalid_argument("empty numeric field");
    s = s.substr(b, e - b + 1);
    double out = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    return out;
}

long parse_long(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t");
    if (b == std::string_view::npos) throw std::invalid_argument("empty integer field");
    s = s.substr(b, e - b + 1);
    long out = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    return out;
}

}  // namespace nfb::csv
