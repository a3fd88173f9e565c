#include "polykoop/param.hpp"

#include "polykoop/error.hpp"

#include <algorithm>

namespace polykoop {

ParamId ParamId::linear(std::size_t state, std::string label) {
    ParamId id;
    id.kind_ = Kind::LinearCoeff;
    id.state_ = state;
    id.label_ = std::move(label);
    return id;
}

ParamId ParamId::poly(std::size_t state, std::vector<int> multi_index, std::string label) {
    ParamId id;
    id.kind_ = Kind::PolyCoeff;
    id.state_ = state;
    id.multi_index_ = std::move(multi_index);
    id.label_ = std::move(label);
    return id;
}

std::string ParamId::default_name() const {
    if (kind_ == Kind::LinearCoeff) { return "a" + std::to_string(state_ + 1); }
    // Digits are concatenated as in alpha4_111 unless some exponent needs two digits.
    const bool wide = std::any_of(multi_index_.begin(), multi_index_.end(), [](int j) { return j > 9; });
    std::string out = "alpha" + std::to_string(state_ + 1) + "_";
    for (std::size_t k = 0; k < multi_index_.size(); ++k) {
        if (wide && k > 0) { out += '_'; }
        out += std::to_string(multi_index_[k]);
    }
    return out;
}

std::string ParamId::name() const { return label_.empty() ? default_name() : label_; }

std::string ParamId::symbol() const {
    if (!label_.empty()) { return label_; }
    if (kind_ == Kind::LinearCoeff) { return "a_" + std::to_string(state_ + 1); }
    return default_name();
}

double ParamAssignment::value(const ParamId& id) const {
    auto it = values_.find(id);
    if (it == values_.end()) { throw UnboundParameter(id.name()); }
    return it->second;
}

ParamLinForm::ParamLinForm(const ParamId& id, Rational multiplier) { add(id, multiplier); }

void ParamLinForm::add(const ParamId& id, Rational multiplier) {
    if (multiplier.numerator() == 0) { return; }
    auto [it, inserted] = terms_.try_emplace(id, multiplier);
    if (inserted) { return; }
    it->second += multiplier;
    if (it->second.numerator() == 0) { terms_.erase(it); }
}

ParamLinForm ParamLinForm::combine(const ParamLinForm& f1, const ParamLinForm& f2, Rational c1, Rational c2) {
    ParamLinForm out;
    for (const auto& [id, m] : f1.terms_) { out.add(id, c1 * m); }
    for (const auto& [id, m] : f2.terms_) { out.add(id, c2 * m); }
    return out;
}

Rational ParamLinForm::coefficient(const ParamId& id) const {
    auto it = terms_.find(id);
    return it == terms_.end() ? Rational(0) : it->second;
}

ParamLinForm& ParamLinForm::operator+=(const ParamLinForm& other) {
    for (const auto& [id, m] : other.terms_) { add(id, m); }
    return *this;
}

ParamLinForm operator*(Rational c, const ParamLinForm& f) {
    ParamLinForm out;
    for (const auto& [id, m] : f.terms_) { out.add(id, c * m); }
    return out;
}

double ParamLinForm::evaluate(const ParamAssignment& params) const {
    double sum = 0.0;
    for (const auto& [id, m] : terms_) {
        sum += boost::rational_cast<double>(m) * params.value(id);
    }
    return sum;
}

std::string to_string(const Rational& r) {
    if (r.denominator() == 1) { return std::to_string(r.numerator()); }
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string to_string(const ParamLinForm& f) {
    if (f.is_zero()) { return "0"; }
    std::string out;
    for (const auto& [id, m] : f.terms()) {
        const bool negative = m.numerator() < 0;
        const Rational mag = negative ? -m : m;
        if (negative) {
            out += '-';
        } else if (!out.empty()) {
            out += '+';
        }
        if (mag.denominator() != 1) {
            out += "(" + to_string(mag) + ")";
        } else if (mag.numerator() != 1) {
            out += to_string(mag);
        }
        out += id.symbol();
    }
    return out;
}

} // namespace polykoop
