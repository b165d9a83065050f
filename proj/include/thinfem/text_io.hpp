#pragma once

// Line-oriented text helpers shared by the mesh and cover-plan formats.

#include <charconv>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "thinfem/error.hpp"

namespace thinfem::text {

/// 17 significant digits: every double survives a write/read round trip.
inline std::string format_exact(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, end);
}

/// Shortest decimal that reads back to the same double.
inline std::string format_shortest(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

/// Whitespace-separated tokens of one logical line. Blank lines and lines
/// starting with '#' are skipped.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    /// False at end of input.
    bool next(std::vector<std::string_view>& tokens) {
        while (std::getline(in_, buffer_)) {
            ++line_;
            tokens.clear();
            std::string_view s = buffer_;
            std::size_t pos = 0;
            while (pos < s.size()) {
                while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\r')) ++pos;
                std::size_t start = pos;
                while (pos < s.size() && s[pos] != ' ' && s[pos] != '\t' && s[pos] != '\r') ++pos;
                if (pos > start) tokens.push_back(s.substr(start, pos - start));
            }
            if (tokens.empty() || tokens.front().front() == '#') continue;
            return true;
        }
        return false;
    }

    std::vector<std::string_view> expect_line(const char* what) {
        std::vector<std::string_view> t;
        if (!next(t)) throw ParseError(line_ + 1, std::string("unexpected end of file, expected ") + what);
        return t;
    }

    std::size_t line() const { return line_; }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, what); }

    template <typename T>
    T parse(std::string_view tok, const char* what) const {
        T v{};
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) {
            fail(std::string("invalid ") + what + " '" + std::string(tok) + "'");
        }
        return v;
    }

    /// Reads "<keyword> <count>".
    std::size_t expect_header(std::string_view keyword) {
        auto t = expect_line(std::string(keyword).c_str());
        if (t.size() != 2 || t[0] != keyword) fail("expected '" + std::string(keyword) + " <count>'");
        return parse<std::size_t>(t[1], "count");
    }

private:
    std::istream& in_;
    std::string buffer_;
    std::size_t line_ = 0;
};

}  // namespace thinfem::text
