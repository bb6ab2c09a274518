#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

namespace qstack::detail {

/// Shortest decimal text that parses back to exactly `value`.
inline std::string format_double(double value) {
    if (value == 0.0) {
        return "0"; // also folds -0.0
    }
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

/// Fixed-precision rendering for human-facing output.
inline std::string format_fixed(double value, int precision) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                   std::chars_format::fixed, precision);
    if (res.ec != std::errc{}) {
        return format_double(value);
    }
    return std::string(buf.data(), res.ptr);
}

inline bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool is_ident_char(char c) {
    return is_ident_start(c) || (c >= '0' && c <= '9');
}
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
           c == '\v';
}

inline std::string to_upper(std::string_view s) {
    std::string out(s);
    for (char &c : out) {
        if (c >= 'a' && c <= 'z') {
            c = static_cast<char>(c - 'a' + 'A');
        }
    }
    return out;
}

/// Largest qubit or classical index accepted by the parsers.
inline constexpr std::size_t kMaxIndex = (std::size_t{1} << 24) - 1;

/// Parses a run of decimal digits at `pos`. Returns nullopt on no digits or
/// overflow past kMaxIndex; `pos` is advanced past the digits either way.
inline std::optional<std::size_t> parse_index(std::string_view text,
                                              std::size_t &pos) {
    const std::size_t start = pos;
    std::size_t value = 0;
    bool overflow = false;
    while (pos < text.size() && is_digit(text[pos])) {
        value = value * 10 + static_cast<std::size_t>(text[pos] - '0');
        if (value > kMaxIndex) {
            overflow = true;
            value = kMaxIndex;
        }
        ++pos;
    }
    if (pos == start || overflow) {
        return std::nullopt;
    }
    return value;
}

/// Arithmetic over real literals and `pi`: + - * / unary minus, parentheses.
/// On failure `error_pos` holds the offending offset into `text`.
class AngleParser {
  public:
    explicit AngleParser(std::string_view text) : text_(text) {}

    std::optional<double> parse_all() {
        pos_ = 0;
        auto v = expr(0);
        skip_ws();
        if (!v || pos_ != text_.size()) {
            if (v) {
                error_pos_ = pos_;
            }
            return std::nullopt;
        }
        if (!std::isfinite(*v)) {
            error_pos_ = 0;
            return std::nullopt;
        }
        return v;
    }

    [[nodiscard]] std::size_t error_pos() const noexcept { return error_pos_; }

  private:
    static constexpr int kMaxNesting = 64;

    void skip_ws() {
        while (pos_ < text_.size() && is_space(text_[pos_])) {
            ++pos_;
        }
    }

    std::optional<double> fail() {
        error_pos_ = pos_;
        return std::nullopt;
    }

    std::optional<double> expr(int nesting) {
        auto lhs = term(nesting);
        while (lhs) {
            skip_ws();
            if (pos_ >= text_.size() ||
                (text_[pos_] != '+' && text_[pos_] != '-')) {
                break;
            }
            const char op = text_[pos_++];
            auto rhs = term(nesting);
            if (!rhs) {
                return std::nullopt;
            }
            lhs = op == '+' ? *lhs + *rhs : *lhs - *rhs;
        }
        return lhs;
    }

    std::optional<double> term(int nesting) {
        auto lhs = unary(nesting);
        while (lhs) {
            skip_ws();
            if (pos_ >= text_.size() ||
                (text_[pos_] != '*' && text_[pos_] != '/')) {
                break;
            }
            const char op = text_[pos_++];
            auto rhs = unary(nesting);
            if (!rhs) {
                return std::nullopt;
            }
            lhs = op == '*' ? *lhs * *rhs : *lhs / *rhs;
        }
        return lhs;
    }

    std::optional<double> unary(int nesting) {
        if (nesting > kMaxNesting) {
            return fail();
        }
        skip_ws();
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
            const bool negate = text_[pos_++] == '-';
            auto v = unary(nesting + 1);
            if (!v) {
                return std::nullopt;
            }
            return negate ? -*v : *v;
        }
        return primary(nesting);
    }

    std::optional<double> primary(int nesting) {
        skip_ws();
        if (pos_ >= text_.size()) {
            return fail();
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            auto v = expr(nesting + 1);
            if (!v) {
                return std::nullopt;
            }
            skip_ws();
            if (pos_ >= text_.size() || text_[pos_] != ')') {
                return fail();
            }
            ++pos_;
            return v;
        }
        if (is_ident_start(c)) {
            std::size_t end = pos_;
            while (end < text_.size() && is_ident_char(text_[end])) {
                ++end;
            }
            if (to_upper(text_.substr(pos_, end - pos_)) == "PI") {
                pos_ = end;
                return std::numbers::pi;
            }
            return fail();
        }
        if (is_digit(c) || c == '.') {
            double value = 0.0;
            const char *first = text_.data() + pos_;
            const char *last = text_.data() + text_.size();
            const auto res = std::from_chars(first, last, value,
                                             std::chars_format::general);
            if (res.ec != std::errc{}) {
                return fail();
            }
            pos_ += static_cast<std::size_t>(res.ptr - first);
            return value;
        }
        return fail();
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t error_pos_ = 0;
};

} // namespace qstack::detail
