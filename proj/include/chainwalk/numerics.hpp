#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace chainwalk {

using cdouble = std::complex<double>;
using ComplexVector = std::vector<cdouble>;

inline constexpr double kDefaultTol = 1e-10;

/// Dense complex matrix, row-major. Values are immutable by convention once
/// built; every operation below returns a fresh matrix.
struct ComplexMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<cdouble> data;

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
    ComplexMatrix(std::size_t r, std::size_t c, std::initializer_list<cdouble> entries);

    cdouble &operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    const cdouble &operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    bool square() const { return rows == cols; }

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zero(std::size_t r, std::size_t c);
};

ComplexMatrix identity2();
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

ComplexMatrix matmul(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix dagger(const ComplexMatrix &m);
ComplexMatrix add(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix scale(cdouble factor, const ComplexMatrix &m);
void add_in_place(ComplexMatrix &acc, const ComplexMatrix &m, cdouble factor = 1.0);
ComplexVector mat_vec(const ComplexMatrix &m, const ComplexVector &v);

cdouble det2(const ComplexMatrix &m);

double max_abs(const ComplexMatrix &m);
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);
double max_abs(const ComplexVector &v);
double max_abs_diff(const ComplexVector &a, const ComplexVector &b);
double norm(const ComplexVector &v);
bool is_normalized(const ComplexVector &v, double tol = kDefaultTol);
bool is_hermitian(const ComplexMatrix &m, double tol = kDefaultTol);
bool is_unitary(const ComplexMatrix &m, double tol = kDefaultTol);

/// exp(-i h t) for Hermitian h, via eigendecomposition. hbar = 1, so t carries
/// the full phase. Throws NotHermitianError when h deviates from h^dagger by
/// more than 1e-10, ScaleError above dim 2^14.
ComplexMatrix hermitian_exp(const ComplexMatrix &h, double t);

struct PhaseMatch {
    bool equal = false;
    cdouble phase{1.0, 0.0};
    double deviation = 0.0;  // max |a - phase*b| at the extracted phase
};

/// True iff a == phase * b for some unit-modulus phase, within tol in the
/// entrywise max norm. The phase is extracted at the largest-magnitude entry
/// of b, which keeps the division away from near-zeros.
PhaseMatch equal_up_to_global_phase(const ComplexMatrix &a, const ComplexMatrix &b,
                                    double tol = kDefaultTol);
PhaseMatch equal_up_to_global_phase(const ComplexVector &a, const ComplexVector &b,
                                    double tol = kDefaultTol);

}  // namespace chainwalk
