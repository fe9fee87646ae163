#include "bgptypo/path_model.hpp"

#include "bgptypo/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <utility>

namespace bgptypo {

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](unsigned char c) { return c >= '0' && c <= '9'; });
}

std::uint64_t parse_saturating_u64(std::string_view digits) {
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t value = 0;
    for (char c : digits) {
        std::uint64_t digit = static_cast<std::uint64_t>(c - '0');
        if (value > (kMax - digit) / 10)
            return kMax;
        value = value * 10 + digit;
    }
    return value;
}

} // namespace

AsToken AsToken::parse(std::string_view digits) {
    if (!all_digits(digits))
        throw ParseError("invalid AS token: '" + std::string(digits) + "'");
    return AsToken{std::string(digits), parse_saturating_u64(digits)};
}

Prefix Prefix::make(std::uint32_t base, int length) {
    if (length < 0 || length > 32)
        throw ParseError("prefix length out of range: " + std::to_string(length));
    if (length < 32)
        base &= ~((std::uint32_t{1} << (32 - length)) - 1);
    return Prefix{base, length};
}

Prefix Prefix::parse(std::string_view cidr) {
    auto fail = [&] { throw ParseError("invalid prefix: '" + std::string(cidr) + "'"); };

    auto slash = cidr.find('/');
    if (slash == std::string_view::npos)
        fail();
    std::string_view addr = cidr.substr(0, slash);
    std::string_view len = cidr.substr(slash + 1);

    std::uint32_t base = 0;
    std::size_t pos = 0;
    for (int octet = 0; octet < 4; ++octet) {
        if (octet > 0) {
            if (pos >= addr.size() || addr[pos] != '.')
                fail();
            ++pos;
        }
        std::size_t start = pos;
        unsigned v = 0;
        while (pos < addr.size() && addr[pos] >= '0' && addr[pos] <= '9') {
            v = v * 10 + static_cast<unsigned>(addr[pos] - '0');
            if (v > 255)
                fail();
            ++pos;
        }
        if (pos == start || pos - start > 3)
            fail();
        base = (base << 8) | v;
    }
    if (pos != addr.size())
        fail();

    int length = -1;
    if (!len.empty() && len.size() <= 2) {
        int v = 0;
        auto [p, ec] = std::from_chars(len.data(), len.data() + len.size(), v);
        if (ec == std::errc() && p == len.data() + len.size())
            length = v;
    }
    if (length < 0 || length > 32)
        fail();

    return make(base, length);
}

bool Prefix::contains(const Prefix& other) const {
    if (length > other.length)
        return false;
    if (length == 0)
        return true;
    std::uint32_t mask = ~((std::uint32_t{1} << (32 - length)) - 1);
    if (length == 32)
        mask = ~std::uint32_t{0};
    return (base & mask) == (other.base & mask);
}

std::string Prefix::to_string() const {
    std::string out;
    out.reserve(18);
    for (int shift = 24; shift >= 0; shift -= 8) {
        out += std::to_string((base >> shift) & 0xFF);
        if (shift > 0)
            out += '.';
    }
    out += '/';
    out += std::to_string(length);
    return out;
}

std::string AsPath::to_string() const {
    if (contains_as_set)
        return as_set_text;
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0)
            out += ' ';
        out += tokens[i].text;
    }
    return out;
}

bool valid_month_label(std::string_view label) {
    if (label.size() != 7 || label[4] != '-')
        return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u})
        if (label[i] < '0' || label[i] > '9')
            return false;
    int month = (label[5] - '0') * 10 + (label[6] - '0');
    return month >= 1 && month <= 12;
}

AsPath parse_path(std::string_view text) {
    AsPath path;
    std::vector<std::string> raw;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
        if (pos >= text.size())
            break;
        std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
        raw.emplace_back(text.substr(start, pos - start));
    }
    if (raw.empty())
        throw ParseError("empty AS path");

    // Trailing origin-protocol letter from text dumps.
    const std::string& last = raw.back();
    if (last == "i" || last == "e" || last == "?") {
        raw.pop_back();
        if (raw.empty())
            throw ParseError("AS path has only a protocol letter");
    }

    for (const std::string& tok : raw) {
        if (tok.front() == '{') {
            if (tok.size() < 3 || tok.back() != '}')
                throw ParseError("malformed AS_SET group: '" + tok + "'");
            std::string_view inner(tok.data() + 1, tok.size() - 2);
            std::size_t p = 0;
            while (p < inner.size()) {
                std::size_t comma = inner.find(',', p);
                std::string_view member =
                    inner.substr(p, comma == std::string_view::npos ? std::string_view::npos
                                                                    : comma - p);
                AsToken::parse(member); // validate only; groups are not expanded
                if (comma == std::string_view::npos)
                    break;
                p = comma + 1;
            }
            path.contains_as_set = true;
        } else {
            path.tokens.push_back(AsToken::parse(tok));
        }
    }
    if (path.contains_as_set) {
        std::string joined;
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (i > 0)
                joined += ' ';
            joined += raw[i];
        }
        path.as_set_text = std::move(joined);
    }
    return path;
}

std::vector<Run> collapse_runs(const AsPath& path) {
    if (path.contains_as_set)
        throw UnsupportedPathError("cannot collapse a path containing an AS_SET");
    std::vector<Run> runs;
    for (const AsToken& tok : path.tokens) {
        if (!runs.empty() && runs.back().token.text == tok.text)
            ++runs.back().count;
        else
            runs.push_back(Run{tok, 1});
    }
    return runs;
}

bool has_loop(const AsPath& path) {
    std::vector<Run> runs = collapse_runs(path);
    std::vector<std::uint64_t> values;
    values.reserve(runs.size());
    for (const Run& r : runs)
        values.push_back(r.token.value);
    std::sort(values.begin(), values.end());
    return std::adjacent_find(values.begin(), values.end()) != values.end();
}

std::uint64_t address_count(std::span<const Prefix> prefixes) {
    // Interval union over [base, base + size).
    std::vector<std::pair<std::uint64_t, std::uint64_t>> intervals;
    intervals.reserve(prefixes.size());
    for (const Prefix& p : prefixes)
        intervals.emplace_back(p.base, std::uint64_t{p.base} + p.address_count());
    std::sort(intervals.begin(), intervals.end());

    std::uint64_t total = 0;
    std::uint64_t cur_lo = 0, cur_hi = 0;
    bool open = false;
    for (auto [lo, hi] : intervals) {
        if (!open) {
            cur_lo = lo;
            cur_hi = hi;
            open = true;
        } else if (lo <= cur_hi) {
            cur_hi = std::max(cur_hi, hi);
        } else {
            total += cur_hi - cur_lo;
            cur_lo = lo;
            cur_hi = hi;
        }
    }
    if (open)
        total += cur_hi - cur_lo;
    return total;
}

std::uint64_t address_count_sum(std::span<const Prefix> prefixes) {
    std::uint64_t total = 0;
    for (const Prefix& p : prefixes)
        total += p.address_count();
    return total;
}

} // namespace bgptypo
