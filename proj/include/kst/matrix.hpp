#pragma once

#include "kst/poly.hpp"

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace kst {

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0)) : r_(rows), c_(cols), a_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<T>> rows) {
        r_ = rows.size();
        c_ = r_ ? rows.begin()->size() : 0;
        for (const auto& row : rows) {
            if (row.size() != c_) throw std::invalid_argument("matrix: ragged rows");
            a_.insert(a_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    bool square() const { return r_ == c_; }

    T& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    void swap_rows(std::size_t i, std::size_t k) {
        for (std::size_t j = 0; j < c_; ++j) std::swap((*this)(i, j), (*this)(k, j));
    }

    Matrix transpose() const {
        Matrix t(c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool symmetric() const {
        if (!square()) return false;
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = i + 1; j < c_; ++j)
                if ((*this)(i, j) != (*this)(j, i)) return false;
        return true;
    }

    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        if (x.c_ != y.r_) throw std::invalid_argument("matrix: dimension mismatch in product");
        Matrix z(x.r_, y.c_);
        for (std::size_t i = 0; i < x.r_; ++i)
            for (std::size_t k = 0; k < x.c_; ++k) {
                if (x(i, k) == T(0)) continue;
                for (std::size_t j = 0; j < y.c_; ++j) z(i, j) += x(i, k) * y(k, j);
            }
        return z;
    }

    friend bool operator==(const Matrix& x, const Matrix& y) {
        return x.r_ == y.r_ && x.c_ == y.c_ && x.a_ == y.a_;
    }

    std::string str() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < r_; ++i) {
            os << "[";
            for (std::size_t j = 0; j < c_; ++j) os << (j ? ", " : "") << (*this)(i, j);
            os << "]";
        }
        return os.str();
    }

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<T> a_;
};

using RatMatrix = Matrix<Rational>;
using PolyMatrix = Matrix<Poly>;

Rational det(RatMatrix m);
Poly det(PolyMatrix m);
std::size_t rank(RatMatrix m);
std::vector<std::vector<Rational>> kernel(const RatMatrix& m);  // basis, reduced echelon form
RatMatrix inverse(const RatMatrix& m);                          // throws if singular
std::vector<Rational> solve(const RatMatrix& m, const std::vector<Rational>& rhs);

// Substitutes rational values into every entry.
RatMatrix specialize(const PolyMatrix& m, const VarValues& at);
PolyMatrix to_poly(const RatMatrix& m);

struct LinearSolution {
    bool polynomial = true;
    std::vector<Poly> values;  // when polynomial
    std::vector<Poly> nums;    // always: x_i = nums[i] / den
    Poly den;
};

// Cramer's rule over the polynomial ring; throws on a singular system.
LinearSolution solve_linear(const PolyMatrix& m, const std::vector<Poly>& rhs);

}  // namespace kst
