#pragma once

// Thin LAPACK wrappers. Internal to the core library.

#include <complex>
#include <cstddef>
#include <vector>

namespace qtrap::linalg {

using cplx = std::complex<double>;

struct RealEigen {
    std::vector<double> values;
    std::vector<double> vectors;  // column-major n x k
};

struct ComplexEigen {
    std::vector<double> values;
    std::vector<cplx> vectors;  // column-major n x k
};

/// k lowest eigenpairs of the symmetric tridiagonal matrix (diag, off).
RealEigen tridiagonal_lowest(const std::vector<double>& diag, const std::vector<double>& off, std::size_t k,
                             bool want_vectors);

/// k lowest eigenpairs of a dense Hermitian matrix (column-major, lower part used).
ComplexEigen hermitian_lowest(std::vector<cplx> dense, std::size_t n, std::size_t k, bool want_vectors);

/// All eigenpairs of a small dense Hermitian matrix, ascending.
ComplexEigen hermitian_all(std::vector<cplx> dense, std::size_t n);

/// LU factorization of a complex tridiagonal matrix, reused across solves.
class TridiagonalLU {
public:
    TridiagonalLU(std::vector<cplx> lower, std::vector<cplx> diag, std::vector<cplx> upper);
    /// Solves A x = b in place.
    void solve(std::vector<cplx>& b) const;
    std::size_t size() const { return d_.size(); }

private:
    std::vector<cplx> dl_, d_, du_, du2_;
    std::vector<int> ipiv_;
};

}  // namespace qtrap::linalg
