#pragma once

#include "perfhom/linalg.hpp"

namespace perfhom {

enum class Definiteness { positive_definite, positive_semidefinite, indefinite };

// Symmetric rational N x N form; only the upper triangle is stored.
class SymForm {
public:
    SymForm() = default;
    explicit SymForm(int n);
    static SymForm identity(int n);
    static SymForm from_rows(const std::vector<std::vector<Rat>>& rows);

    int dim() const { return n_; }
    const Rat& at(int i, int j) const { return tri_[idx(i, j)]; }
    void set(int i, int j, const Rat& v) { tri_[idx(i, j)] = v; }

    Rat evaluate(const IntVec& v) const;            // v^t A v
    Rat inner(const IntVec& v, const IntVec& w) const; // v^t A w
    Rat determinant() const;
    Definiteness definiteness() const;
    bool is_positive_definite() const { return definiteness() == Definiteness::positive_definite; }

    SymForm scaled(const Rat& c) const;
    SymForm plus(const SymForm& other, const Rat& coeff) const; // this + coeff*other
    SymForm act(const IntMat& g) const;             // g^t A g; g must be unimodular
    SymForm conjugated(const IntMat& g) const;      // g^t A g without the unimodularity demand

    RatMat to_mat() const;
    // Scale to integer entries with gcd 1 (sign preserved; zero form stays zero).
    SymForm primitive() const;

    bool operator==(const SymForm& o) const { return n_ == o.n_ && tri_ == o.tri_; }
    bool operator!=(const SymForm& o) const { return !(*this == o); }
    bool operator<(const SymForm& o) const; // lexicographic on (n, triangle)

private:
    size_t idx(int i, int j) const;
    int n_ = 0;
    std::vector<Rat> tri_;
};

// v v^t as a symmetric form.
SymForm rank_one(const IntVec& v);

} // namespace perfhom
