#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nfb::csv {

// Incremental RFC 4180 reader: quoted fields, escaped quotes, CRLF line ends.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    // Reads one record into `row` (cleared first). Returns false on EOF.
    bool next(std::vector<std::string>& row);

private:
    std::istream& in_;
};

std::vector<std::vector<std::string>> read_all(std::istream& in);

// Writes one record, quoting fields that need it. Line end is '\n'.
void write_row(std::ostream& out, std::span<const std::string> fields);

// Shortest decimal string that round-trips the double exactly.
std::string format_double(double v);

// Fixed decimal places (reporting columns).
std::string format_fixed(double v, int decimals);

// Strict parse of a full field; throws std::invalid_argument on junk.
double parse_double(std::string_view s);

long parse_long(std::string_view s);

}  // namespace nfb::csv
