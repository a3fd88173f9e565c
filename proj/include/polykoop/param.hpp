#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace polykoop {

using Rational = boost::rational<std::int64_t>;

/// Symbolic system parameter: the linear coefficient a_i of state i, or the coefficient
/// alpha^n_{j_1...j_{n-1}} of a polynomial term in state equation n.
class ParamId {
public:
    enum class Kind { LinearCoeff, PolyCoeff };

    ParamId() = default;

    static ParamId linear(std::size_t state, std::string label = {});
    static ParamId poly(std::size_t state, std::vector<int> multi_index, std::string label = {});

    Kind kind() const noexcept { return kind_; }
    std::size_t state() const noexcept { return state_; }
    const std::vector<int>& multi_index() const noexcept { return multi_index_; }
    const std::string& label() const noexcept { return label_; }

    /// Identifier used in spec files: "a1", "alpha3_11", or the label override.
    std::string name() const;
    /// Identifier used in matrix rendering: "a_1", "alpha3_11", or the label override.
    std::string symbol() const;
    /// Canonical name ignoring any label.
    std::string default_name() const;

    friend bool operator==(const ParamId&, const ParamId&) = default;
    friend std::strong_ordering operator<=>(const ParamId&, const ParamId&) = default;

private:
    Kind kind_ = Kind::LinearCoeff;
    std::size_t state_ = 0;
    std::vector<int> multi_index_;
    std::string label_;
};

/// Numeric parameter bindings.
class ParamAssignment {
public:
    void bind(const ParamId& id, double value) { values_[id] = value; }
    bool contains(const ParamId& id) const { return values_.contains(id); }
    /// Throws UnboundParameter naming the missing parameter.
    double value(const ParamId& id) const;
    const std::map<ParamId, double>& values() const noexcept { return values_; }

    friend bool operator==(const ParamAssignment&, const ParamAssignment&) = default;

private:
    std::map<ParamId, double> values_;
};

/// Sum of parameters with exact rational multipliers. Zero multipliers are never stored.
class ParamLinForm {
public:
    ParamLinForm() = default;
    explicit ParamLinForm(const ParamId& id, Rational multiplier = 1);

    static ParamLinForm combine(const ParamLinForm& f1, const ParamLinForm& f2, Rational c1, Rational c2);

    bool is_zero() const noexcept { return terms_.empty(); }
    const std::map<ParamId, Rational>& terms() const noexcept { return terms_; }
    Rational coefficient(const ParamId& id) const;

    ParamLinForm& operator+=(const ParamLinForm& other);
    friend ParamLinForm operator+(ParamLinForm a, const ParamLinForm& b) { return a += b; }
    friend ParamLinForm operator*(Rational c, const ParamLinForm& f);

    double evaluate(const ParamAssignment& params) const;

    friend bool operator==(const ParamLinForm&, const ParamLinForm&) = default;

private:
    void add(const ParamId& id, Rational multiplier);

    std::map<ParamId, Rational> terms_;
};

/// "3a_1", "a_1+a_2+a_3", "2alpha2_3", "-a_1+(1/2)alpha3_11"; "0" for the zero form.
std::string to_string(const ParamLinForm& f);

std::string to_string(const Rational& r);

} // namespace polykoop
