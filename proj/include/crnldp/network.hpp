#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace crnldp {

/// A complex: nonnegative integer multiplicities of the species taking part
/// in one side of a reaction. Absent indices mean multiplicity zero; the
/// all-zero complex denotes the empty complex.
class Complex {
public:
    Complex() = default;
    explicit Complex(std::map<std::size_t, std::int64_t> coeffs);

    std::int64_t coeff(std::size_t species) const;
    void set_coeff(std::size_t species, std::int64_t value);

    const std::map<std::size_t, std::int64_t>& coeffs() const { return coeffs_; }

    bool is_empty() const { return coeffs_.empty(); }
    std::int64_t order() const;  // total molecularity, ||c||_1
    std::size_t max_species_index() const;

    /// Dense multiplicity vector of length d.
    std::vector<std::int64_t> dense(std::size_t d) const;

    bool operator==(const Complex& other) const { return coeffs_ == other.coeffs_; }
    bool operator!=(const Complex& other) const { return !(*this == other); }

private:
    // invariant: stored coefficients are strictly positive
    std::map<std::size_t, std::int64_t> coeffs_;
};

struct Reaction {
    Complex input;
    Complex output;
    double rate_constant = 0.0;
};

/// Jump direction of a reaction, output minus input.
struct ReactionVector {
    std::vector<std::int64_t> delta;
};

class Network {
public:
    Network(std::vector<std::string> species, std::vector<Reaction> reactions);

    std::size_t num_species() const { return species_.size(); }
    std::size_t num_reactions() const { return reactions_.size(); }

    const std::vector<std::string>& species() const { return species_; }
    const std::string& species_name(std::size_t i) const { return species_.at(i); }
    const std::vector<Reaction>& reactions() const { return reactions_; }
    const Reaction& reaction(std::size_t r) const { return reactions_.at(r); }

    const ReactionVector& reaction_vec(std::size_t r) const { return vectors_.at(r); }

    /// Index of a species name, or throws std::out_of_range.
    std::size_t species_index(const std::string& name) const;

private:
    std::vector<std::string> species_;
    std::vector<Reaction> reactions_;
    std::vector<ReactionVector> vectors_;
};

ReactionVector reaction_vector(const Reaction& r);

/// Concentration state x in R_+^d.
struct Concentration {
    std::vector<double> values;
};

/// Volume-scaled count state: molecule numbers at volume v.
struct CountState {
    double volume = 1.0;
    std::vector<std::int64_t> counts;

    Concentration concentration() const {
        Concentration x;
        x.values.reserve(counts.size());
        for (auto n : counts) x.values.push_back(static_cast<double>(n) / volume);
        return x;
    }
};

}  // namespace crnldp
