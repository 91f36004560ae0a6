#include "tvqc/grid.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <type_traits>
#include <cmath>
#include <string_view>

#include "tvqc/errors.hpp"

namespace tvqc {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

template <class T>
T parse_number(std::string_view s, const std::string& whole) {
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw UsageError(fmt::format("cannot parse '{}' in '{}'", s, whole));
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(v)) throw UsageError(fmt::format("non-finite value in '{}'", whole));
    }
    return v;
}

} // namespace

std::vector<double> parse_grid(const std::string& text) {
    const std::string_view t = trim(text);
    if (t.empty()) throw UsageError("empty grid");
    if (t.find(':') != std::string_view::npos) {
        const auto parts = split(t, ':');
        if (parts.size() != 3) throw UsageError(fmt::format("grid '{}' must be start:stop:count", text));
        const double a = parse_number<double>(parts[0], text);
        const double b = parse_number<double>(parts[1], text);
        const long n = parse_number<long>(parts[2], text);
        if (n < 1) throw UsageError(fmt::format("grid '{}' needs count >= 1", text));
        if (n == 1) {
            if (a != b) throw UsageError(fmt::format("grid '{}' with count 1 needs start == stop", text));
            return {a};
        }
        std::vector<double> out(static_cast<std::size_t>(n));
        for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
        out.back() = b;
        return out;
    }
    std::vector<double> out;
    for (auto p : split(t, ',')) out.push_back(parse_number<double>(p, text));
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    if (trim(text).empty()) throw UsageError("empty integer list");
    std::vector<int> out;
    for (auto p : split(trim(text), ',')) out.push_back(parse_number<int>(p, text));
    return out;
}

std::vector<std::string> parse_name_list(const std::string& text) {
    std::vector<std::string> out;
    if (trim(text).empty()) return out;
    for (auto p : split(trim(text), ',')) {
        if (p.empty()) throw UsageError(fmt::format("empty item in '{}'", text));
        out.emplace_back(p);
    }
    return out;
}

} // namespace tvqc
