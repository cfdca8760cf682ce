#include "linalg.hpp"

#include <algorithm>
#include <string>

#define lapack_complex_double std::complex<double>
#define lapack_complex_float std::complex<float>
#include <lapacke.h>

#include "qtrap/errors.hpp"

namespace qtrap::linalg {

namespace {

void check(lapack_int info, const char* routine) {
    if (info != 0) throw NumericalError(std::string(routine) + " failed, info = " + std::to_string(info));
}

}  // namespace

RealEigen tridiagonal_lowest(const std::vector<double>& diag, const std::vector<double>& off, std::size_t k,
                             bool want_vectors) {
    const auto n = static_cast<lapack_int>(diag.size());
    if (k == 0 || k > diag.size()) throw DomainError("tridiagonal_lowest: bad k");
    std::vector<double> d = diag;
    std::vector<double> e(diag.size(), 0.0);
    std::copy(off.begin(), off.end(), e.begin());
    lapack_int found = 0;
    RealEigen out;
    out.values.resize(diag.size());
    if (want_vectors) out.vectors.resize(diag.size() * k);
    std::vector<lapack_int> isuppz(2 * k);
    const lapack_int info =
        LAPACKE_dstevr(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'I', n, d.data(), e.data(), 0.0, 0.0, 1,
                       static_cast<lapack_int>(k), 0.0, &found, out.values.data(),
                       want_vectors ? out.vectors.data() : nullptr, n, isuppz.data());
    check(info, "dstevr");
    if (static_cast<std::size_t>(found) != k) throw NumericalError("dstevr: wrong eigenvalue count");
    out.values.resize(k);
    return out;
}

ComplexEigen hermitian_lowest(std::vector<cplx> dense, std::size_t n, std::size_t k, bool want_vectors) {
    if (k == 0 || k > n) throw DomainError("hermitian_lowest: bad k");
    lapack_int found = 0;
    ComplexEigen out;
    out.values.resize(n);
    if (want_vectors) out.vectors.resize(n * k);
    std::vector<lapack_int> isuppz(2 * k);
    const auto ln = static_cast<lapack_int>(n);
    const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'I', 'L', ln, dense.data(),
                                           ln, 0.0, 0.0, 1, static_cast<lapack_int>(k), 0.0, &found,
                                           out.values.data(), want_vectors ? out.vectors.data() : nullptr, ln,
                                           isuppz.data());
    check(info, "zheevr");
    if (static_cast<std::size_t>(found) != k) throw NumericalError("zheevr: wrong eigenvalue count");
    out.values.resize(k);
    return out;
}

ComplexEigen hermitian_all(std::vector<cplx> dense, std::size_t n) {
    ComplexEigen out;
    out.values.resize(n);
    const auto ln = static_cast<lapack_int>(n);
    const lapack_int info = LAPACKE_zheev(LAPACK_COL_MAJOR, 'V', 'L', ln, dense.data(), ln, out.values.data());
    check(info, "zheev");
    out.vectors = std::move(dense);
    return out;
}

TridiagonalLU::TridiagonalLU(std::vector<cplx> lower, std::vector<cplx> diag, std::vector<cplx> upper)
    : dl_(std::move(lower)), d_(std::move(diag)), du_(std::move(upper)) {
    const auto n = static_cast<lapack_int>(d_.size());
    if (n == 0 || dl_.size() + 1 != d_.size() || du_.size() + 1 != d_.size())
        throw StructuralError("TridiagonalLU: inconsistent band sizes");
    du2_.resize(d_.size());
    ipiv_.resize(d_.size());
    check(LAPACKE_zgttrf(n, dl_.data(), d_.data(), du_.data(), du2_.data(), ipiv_.data()), "zgttrf");
}

void TridiagonalLU::solve(std::vector<cplx>& b) const {
    const auto n = static_cast<lapack_int>(d_.size());
    if (b.size() != d_.size()) throw StructuralError("TridiagonalLU::solve: size mismatch");
    check(LAPACKE_zgttrs(LAPACK_COL_MAJOR, 'N', n, 1, dl_.data(), d_.data(), du_.data(), du2_.data(),
                         ipiv_.data(), b.data(), n),
          "zgttrs");
}

}  // namespace qtrap::linalg
