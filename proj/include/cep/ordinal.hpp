#pragma once

// Ordinals below w^w in Cantor normal form, and the max-plus semiring over
// them that weights every automaton and trace size in this library.

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cep {

class ordinal_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An ordinal w^e1*c1 + ... + w^ek*ck with e1 > ... > ek and every ci >= 1.
/// The empty term list is 0.
class Ordinal {
public:
    struct Term {
        std::uint32_t exponent = 0;
        std::uint64_t coefficient = 0;

        friend bool operator==(const Term&, const Term&) = default;
    };

    Ordinal() = default;
    explicit Ordinal(std::uint64_t n)
    {
        if (n != 0)
            terms_.push_back({0, n});
    }

    static Ordinal omega() { return power(1, 1); }

    /// w^exponent * coefficient
    static Ordinal power(std::uint32_t exponent, std::uint64_t coefficient = 1)
    {
        Ordinal o;
        if (coefficient != 0)
            o.terms_.push_back({exponent, coefficient});
        return o;
    }

    static Ordinal from_terms(std::vector<Term> terms)
    {
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (terms[i].coefficient == 0)
                throw ordinal_error("ordinal term with zero coefficient");
            if (i > 0 && terms[i - 1].exponent <= terms[i].exponent)
                throw ordinal_error("ordinal terms not strictly descending by exponent");
        }
        Ordinal o;
        o.terms_ = std::move(terms);
        return o;
    }

    const std::vector<Term>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_finite() const noexcept { return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent == 0); }

    std::optional<std::uint64_t> finite_value() const noexcept
    {
        if (terms_.empty())
            return 0;
        if (is_finite())
            return terms_[0].coefficient;
        return std::nullopt;
    }

    friend bool operator==(const Ordinal&, const Ordinal&) = default;

    friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) noexcept
    {
        const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
        for (std::size_t i = 0; i < n; ++i) {
            const Term& x = a.terms_[i];
            const Term& y = b.terms_[i];
            if (x.exponent != y.exponent)
                return x.exponent <=> y.exponent;
            if (x.coefficient != y.coefficient)
                return x.coefficient <=> y.coefficient;
        }
        return a.terms_.size() <=> b.terms_.size();
    }

    /// Ordinal addition: every term of `a` below the leading exponent of `b`
    /// is absorbed.
    friend Ordinal operator+(const Ordinal& a, const Ordinal& b)
    {
        if (b.is_zero())
            return a;
        const std::uint32_t lead = b.terms_.front().exponent;
        Ordinal r;
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0;
        for (; i < a.terms_.size() && a.terms_[i].exponent > lead; ++i)
            r.terms_.push_back(a.terms_[i]);
        Term head = b.terms_.front();
        if (i < a.terms_.size() && a.terms_[i].exponent == lead) {
            if (head.coefficient > std::numeric_limits<std::uint64_t>::max() - a.terms_[i].coefficient)
                throw ordinal_error("ordinal coefficient overflow");
            head.coefficient += a.terms_[i].coefficient;
        }
        r.terms_.push_back(head);
        r.terms_.insert(r.terms_.end(), b.terms_.begin() + 1, b.terms_.end());
        return r;
    }

    Ordinal& operator+=(const Ordinal& b) { return *this = *this + b; }

    /// Renders as "w^k*c + ... + w*c1 + c0"; coefficient 1 and exponent 1 are elided.
    std::string to_string() const
    {
        if (terms_.empty())
            return "0";
        std::string out;
        for (const Term& t : terms_) {
            if (!out.empty())
                out += " + ";
            if (t.exponent == 0) {
                out += std::to_string(t.coefficient);
                continue;
            }
            out += 'w';
            if (t.exponent > 1)
                out += '^' + std::to_string(t.exponent);
            if (t.coefficient > 1)
                out += '*' + std::to_string(t.coefficient);
        }
        return out;
    }

    /// Parses sums of terms, each a natural number or `w[^k][*c]` ("ω" is
    /// accepted for `w`). Summands are added left to right with ordinal
    /// addition, so "1 + w" denotes w.
    static Ordinal parse(std::string_view text);

private:
    std::vector<Term> terms_;
};

inline Ordinal ord_add(const Ordinal& a, const Ordinal& b) { return a + b; }

namespace detail {

class OrdinalParser {
public:
    explicit OrdinalParser(std::string_view s) : s_(s) {}

    Ordinal run()
    {
        skip_ws();
        if (pos_ == s_.size())
            fail("empty ordinal literal");
        Ordinal acc = term();
        skip_ws();
        while (pos_ < s_.size() && s_[pos_] == '+') {
            ++pos_;
            acc = acc + term();
            skip_ws();
        }
        if (pos_ != s_.size())
            fail("unexpected character");
        return acc;
    }

private:
    Ordinal term()
    {
        skip_ws();
        if (eat_omega()) {
            std::uint64_t exponent = 1;
            std::uint64_t coefficient = 1;
            skip_ws();
            if (pos_ < s_.size() && s_[pos_] == '^') {
                ++pos_;
                exponent = natural();
                if (exponent > std::numeric_limits<std::uint32_t>::max())
                    fail("exponent overflow");
                skip_ws();
            }
            if (pos_ < s_.size() && s_[pos_] == '*') {
                ++pos_;
                coefficient = natural();
            }
            if (exponent == 0)
                return Ordinal(coefficient);
            return Ordinal::power(static_cast<std::uint32_t>(exponent), coefficient);
        }
        return Ordinal(natural());
    }

    bool eat_omega()
    {
        if (pos_ < s_.size() && s_[pos_] == 'w') {
            ++pos_;
            return true;
        }
        constexpr std::string_view utf8_omega = "\xCF\x89";
        if (s_.substr(pos_, utf8_omega.size()) == utf8_omega) {
            pos_ += utf8_omega.size();
            return true;
        }
        return false;
    }

    std::uint64_t natural()
    {
        skip_ws();
        const std::size_t start = pos_;
        std::uint64_t v = 0;
        while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') {
            const auto digit = static_cast<std::uint64_t>(s_[pos_] - '0');
            if (v > (std::numeric_limits<std::uint64_t>::max() - digit) / 10)
                fail("natural number overflow");
            v = v * 10 + digit;
            ++pos_;
        }
        if (pos_ == start)
            fail("expected a natural number");
        return v;
    }

    void skip_ws()
    {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t'))
            ++pos_;
    }

    [[noreturn]] void fail(const char* what) const
    {
        throw ordinal_error(std::string(what) + " at offset " + std::to_string(pos_) + " in \"" +
                            std::string(s_) + "\"");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Ordinal Ordinal::parse(std::string_view text) { return detail::OrdinalParser(text).run(); }

/// Element of the max-plus semiring over ordinals extended with a least
/// element bottom ("no value").
class Weight {
public:
    Weight() = default; // bottom
    Weight(Ordinal v) : value_(std::move(v)) {} // NOLINT(google-explicit-constructor)

    static Weight bottom() { return Weight(); }
    static Weight zero() { return Weight(Ordinal()); }

    bool is_bottom() const noexcept { return !value_.has_value(); }
    const Ordinal& value() const
    {
        if (!value_)
            throw ordinal_error("bottom has no ordinal value");
        return *value_;
    }

    friend bool operator==(const Weight&, const Weight&) = default;
    friend std::strong_ordering operator<=>(const Weight& a, const Weight& b) noexcept
    {
        if (a.is_bottom() || b.is_bottom())
            return !a.is_bottom() <=> !b.is_bottom();
        return *a.value_ <=> *b.value_;
    }

    std::string to_string() const { return value_ ? value_->to_string() : std::string("\xE2\x8A\xA5"); }

private:
    std::optional<Ordinal> value_;
};

/// Semiring addition: max, bottom is the identity.
inline Weight trop_oplus(const Weight& a, const Weight& b) { return a < b ? b : a; }

/// Semiring product: a (x) b = b + a, bottom absorbs. With this orientation a
/// product of transition weights taken in run order is the reverse ordinal sum.
inline Weight trop_otimes(const Weight& a, const Weight& b)
{
    if (a.is_bottom() || b.is_bottom())
        return Weight::bottom();
    return Weight(b.value() + a.value());
}

} // namespace cep
