#pragma once

#include <cctype>
#include <charconv>
#include <complex>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <system_error>

#include "mcs/errors.hpp"
#include "mcs/hilbert.hpp"

namespace molcs {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Parses a leading real number; returns characters consumed (0 on failure).
inline std::size_t parse_real_prefix(const std::string& s, std::size_t pos, double& out) {
    const char* first = s.data() + pos;
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc()) return 0;
    return std::size_t(ptr - (s.data() + pos));
}

}  // namespace detail

// Accepts "a", "bi", "a+bi", "a-bi", "i", "-i", "a+i" and "(a,b)"; whitespace is ignored.
inline cplx parse_complex(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw ParseError("empty complex number");
    if (s.front() == '(' && s.back() == ')') {
        const auto comma = s.find(',');
        if (comma == std::string::npos) throw ParseError("expected (re,im): " + text);
        double re = 0, im = 0;
        const std::string a = s.substr(1, comma - 1), b = s.substr(comma + 1, s.size() - comma - 2);
        if (detail::parse_real_prefix(a, 0, re) != a.size() || detail::parse_real_prefix(b, 0, im) != b.size())
            throw ParseError("malformed complex number: " + text);
        return {re, im};
    }
    auto imag_unit = [&](const std::string& t) -> std::optional<double> {
        if (t.empty() || t.back() != 'i') return std::nullopt;
        const std::string c = t.substr(0, t.size() - 1);
        if (c.empty() || c == "+") return 1.0;
        if (c == "-") return -1.0;
        double v = 0;
        if (detail::parse_real_prefix(c, 0, v) != c.size()) throw ParseError("malformed complex number: " + text);
        return v;
    };
    std::size_t split = std::string::npos;  // last sign that is not part of an exponent
    for (std::size_t i = s.size(); i-- > 1;)
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    if (split == std::string::npos && s.back() == 'i') return {0.0, *imag_unit(s)};
    if (split != std::string::npos && s.back() == 'i') {
        double re = 0;
        const std::string a = s.substr(0, split);
        if (detail::parse_real_prefix(a, 0, re) != a.size()) throw ParseError("malformed complex number: " + text);
        return {re, *imag_unit(s.substr(split))};
    }
    double re = 0;
    if (detail::parse_real_prefix(s, 0, re) != s.size()) throw ParseError("malformed complex number: " + text);
    return {re, 0.0};
}

inline double parse_real(const std::string& text) {
    const std::string s = detail::trim(text);
    double v = 0;
    if (s.empty() || detail::parse_real_prefix(s, 0, v) != s.size()) throw ParseError("malformed number: " + text);
    return v;
}

// "key = value" lines; '#' starts a comment; later keys override earlier ones.
inline std::map<std::string, std::string> parse_key_values(std::istream& is) {
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = detail::trim(line.substr(0, eq)), val = detail::trim(line.substr(eq + 1));
        if (val.size() >= 2 && val.front() == '"' && val.back() == '"') val = val.substr(1, val.size() - 2);
        if (key.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty key");
        out[key] = val;
    }
    return out;
}

}  // namespace molcs
