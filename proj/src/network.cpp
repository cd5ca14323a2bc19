#include "crnldp/network.hpp"

#include <algorithm>

namespace crnldp {

Complex::Complex(std::map<std::size_t, std::int64_t> coeffs) {
    for (const auto& [idx, c] : coeffs) {
        if (c < 0) throw std::invalid_argument("complex coefficient must be nonnegative");
        if (c > 0) coeffs_.emplace(idx, c);
    }
}

std::int64_t Complex::coeff(std::size_t species) const {
    auto it = coeffs_.find(species);
    return it == coeffs_.end() ? 0 : it->second;
}

void Complex::set_coeff(std::size_t species, std::int64_t value) {
    if (value < 0) throw std::invalid_argument("complex coefficient must be nonnegative");
    if (value == 0)
        coeffs_.erase(species);
    else
        coeffs_[species] = value;
}

std::int64_t Complex::order() const {
    std::int64_t total = 0;
    for (const auto& [idx, c] : coeffs_) total += c;
    return total;
}

std::size_t Complex::max_species_index() const {
    if (coeffs_.empty()) return 0;
    return coeffs_.rbegin()->first;
}

std::vector<std::int64_t> Complex::dense(std::size_t d) const {
    std::vector<std::int64_t> out(d, 0);
    for (const auto& [idx, c] : coeffs_) out.at(idx) = c;
    return out;
}

ReactionVector reaction_vector(const Reaction& r) {
    std::size_t d = std::max(r.input.is_empty() ? 0 : r.input.max_species_index() + 1,
                             r.output.is_empty() ? 0 : r.output.max_species_index() + 1);
    ReactionVector v;
    v.delta.resize(d, 0);
    for (const auto& [idx, c] : r.output.coeffs()) v.delta[idx] += c;
    for (const auto& [idx, c] : r.input.coeffs()) v.delta[idx] -= c;
    return v;
}

Network::Network(std::vector<std::string> species, std::vector<Reaction> reactions)
    : species_(std::move(species)), reactions_(std::move(reactions)) {
    if (reactions_.empty()) throw std::invalid_argument("network needs at least one reaction");
    for (std::size_t i = 0; i < species_.size(); ++i)
        for (std::size_t j = i + 1; j < species_.size(); ++j)
            if (species_[i] == species_[j])
                throw std::invalid_argument("duplicate species name: " + species_[i]);
    const std::size_t d = species_.size();
    for (const auto& r : reactions_) {
        if (r.rate_constant <= 0.0)
            throw std::invalid_argument("rate constant must be positive");
        if (r.input == r.output) throw std::invalid_argument("no-op reaction");
        if (!r.input.is_empty() && r.input.max_species_index() >= d)
            throw std::invalid_argument("species index out of range in input complex");
        if (!r.output.is_empty() && r.output.max_species_index() >= d)
            throw std::invalid_argument("species index out of range in output complex");
    }
    vectors_.reserve(reactions_.size());
    for (const auto& r : reactions_) {
        ReactionVector v = reaction_vector(r);
        v.delta.resize(d, 0);
        vectors_.push_back(std::move(v));
    }
}

std::size_t Network::species_index(const std::string& name) const {
    auto it = std::find(species_.begin(), species_.end(), name);
    if (it == species_.end()) throw std::out_of_range("unknown species: " + name);
    return static_cast<std::size_t>(it - species_.begin());
}

}  // namespace crnldp
