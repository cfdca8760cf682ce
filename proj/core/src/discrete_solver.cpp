#include "qtrap/discrete_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "linalg.hpp"

namespace qtrap::discrete_solver {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void reject_singular_point(const Grid& grid, const char* name) {
    const double scale = std::max(1.0, grid.interval().length());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (std::abs(grid.point(j)) <= 1e-12 * scale)
            throw DomainError(std::string(name) + ": singular point x = 0 lies on the grid");
    }
}

bool is_cell_interval(const Interval& iv) {
    return std::abs(iv.a()) <= 1e-12 && std::abs(iv.b() - kPi) <= 1e-12;
}

std::size_t first_of_largest(std::span<const cplx> v) {
    double best = 0.0;
    for (auto z : v) best = std::max(best, std::abs(z));
    for (std::size_t j = 0; j < v.size(); ++j)
        if (std::abs(v[j]) >= best * (1.0 - 1e-9)) return j;
    return 0;
}

}  // namespace

double potential::PeriodicCell::min() const {
    return samples.empty() ? 0.0 : *std::min_element(samples.begin(), samples.end());
}

std::vector<double> sample_potential(const PotentialSpec& v, const Grid& grid) {
    const std::size_t n = grid.size();
    std::vector<double> out(n, 0.0);
    std::visit(overloaded{
                   [&](const potential::Zero&) {},
                   [&](const potential::Calogero& c) {
                       if (!(c.gamma > -0.25)) throw DomainError("Calogero potential requires gamma > -1/4");
                       reject_singular_point(grid, "Calogero potential");
                       for (std::size_t j = 0; j < n; ++j) {
                           const double x = grid.point(j);
                           out[j] = x * x + c.gamma / (x * x);
                       }
                   },
                   [&](const potential::Centrifugal& c) {
                       if (c.n < 2) throw DomainError("centrifugal potential requires n >= 2");
                       reject_singular_point(grid, "centrifugal potential");
                       const double coupling = static_cast<double>(c.n) * static_cast<double>(c.n - 1);
                       for (std::size_t j = 0; j < n; ++j) {
                           const double x = grid.point(j);
                           out[j] = coupling / (x * x);
                       }
                   },
                   [&](const potential::PeriodicCell& cell) {
                       const std::size_t cells = cell.intervals();
                       if (cells < 2) throw DomainError("PeriodicCell: needs at least 3 samples");
                       double scale = 1.0;
                       for (double s : cell.samples) scale = std::max(scale, std::abs(s));
                       if (std::abs(cell.samples.front()) > 1e-12 * scale ||
                           std::abs(cell.samples.back()) > 1e-12 * scale)
                           throw DomainError("PeriodicCell: potential must vanish at both cell ends");
                       if (!is_cell_interval(grid.interval()))
                           throw DomainError("PeriodicCell: grid must cover [0, pi]");
                       if (grid.is_periodic() && n == cells) {
                           for (std::size_t j = 0; j < n; ++j) out[j] = cell.samples[j];
                       } else if (!grid.is_periodic() && n + 1 == cells) {
                           for (std::size_t j = 0; j < n; ++j) out[j] = cell.samples[j + 1];
                       } else {
                           throw DomainError("PeriodicCell: sample count does not match the grid");
                       }
                   },
                   [&](const potential::Custom& c) {
                       if (c.samples.size() != n) throw DomainError("Custom potential: sample count mismatch");
                       for (std::size_t j = 0; j < n; ++j) {
                           if (j < c.valid.size() && !c.valid[j])
                               throw DomainError("Custom potential: masked sample at x = " +
                                                 std::to_string(grid.point(j)));
                           out[j] = c.samples[j];
                       }
                   },
               },
               v);
    return out;
}

// ------------------------------------------------------------ DiscreteOperator

DiscreteOperator::DiscreteOperator(Grid grid, BoundaryCondition bc, PotentialSpec potential,
                                   std::vector<double> diagonal, std::vector<double> off_diagonal, cplx corner)
    : grid_(std::move(grid)),
      bc_(std::move(bc)),
      potential_(std::move(potential)),
      diagonal_(std::move(diagonal)),
      off_diagonal_(std::move(off_diagonal)),
      corner_(corner) {
    if (diagonal_.size() != grid_.size() || off_diagonal_.size() + 1 != diagonal_.size())
        throw StructuralError("DiscreteOperator: band sizes do not match the grid");
}

cplx DiscreteOperator::entry(std::size_t row, std::size_t col) const {
    const std::size_t n = size();
    if (row == col) return diagonal_[row];
    if (row + 1 == col) return off_diagonal_[row];
    if (col + 1 == row) return off_diagonal_[col];
    if (n > 2 && row == 0 && col == n - 1) return corner_;
    if (n > 2 && row == n - 1 && col == 0) return std::conj(corner_);
    return 0.0;
}

CVector DiscreteOperator::dense() const {
    const std::size_t n = size();
    CVector a(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        a[j + j * n] = diagonal_[j];
        if (j + 1 < n) {
            a[j + (j + 1) * n] = off_diagonal_[j];
            a[(j + 1) + j * n] = off_diagonal_[j];
        }
    }
    if (n > 2 && corner_ != cplx{}) {
        a[0 + (n - 1) * n] += corner_;
        a[(n - 1) + 0 * n] += std::conj(corner_);
    }
    return a;
}

CVector DiscreteOperator::apply(std::span<const cplx> v) const {
    const std::size_t n = size();
    if (v.size() != n) throw StructuralError("DiscreteOperator::apply: size mismatch");
    CVector out(n);
    for (std::size_t j = 0; j < n; ++j) {
        cplx s = diagonal_[j] * v[j];
        if (j > 0) s += off_diagonal_[j - 1] * v[j - 1];
        if (j + 1 < n) s += off_diagonal_[j] * v[j + 1];
        out[j] = s;
    }
    if (n > 2) {
        out[0] += corner_ * v[n - 1];
        out[n - 1] += std::conj(corner_) * v[0];
    }
    return out;
}

WaveFunction DiscreteOperator::apply(const WaveFunction& f) const {
    if (!(f.grid() == grid_)) throw StructuralError("DiscreteOperator::apply: grid mismatch");
    return WaveFunction(grid_, apply(f.values()));
}

double DiscreteOperator::hermiticity_defect() const {
    const std::size_t n = size();
    const CVector a = dense();
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) d = std::max(d, std::abs(a[i + j * n] - std::conj(a[j + i * n])));
    return d;
}

CVector reflect(const Grid& grid, std::span<const cplx> v) {
    const std::size_t n = grid.size();
    CVector out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t r = grid.is_periodic() ? (n - j) % n : n - 1 - j;
        out[j] = v[r];
    }
    return out;
}

bool DiscreteOperator::reflection_symmetric() const {
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> normal;
    const std::size_t n = size();
    double scale = 0.0;
    for (double d : diagonal_) scale = std::max(scale, std::abs(d));
    for (double o : off_diagonal_) scale = std::max(scale, std::abs(o));
    for (int trial = 0; trial < 2; ++trial) {
        CVector v(n);
        for (auto& z : v) z = cplx(normal(rng), normal(rng));
        const CVector lhs = apply(reflect(grid_, v));
        const CVector rhs = reflect(grid_, apply(v));
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(lhs[j] - rhs[j]) > 1e-12 * scale * 10.0) return false;
    }
    return true;
}

DiscreteOperator assemble(const Grid& grid, const PotentialSpec& potential, const BoundaryCondition& bc) {
    const std::size_t n = grid.size();
    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    cplx corner{};
    if (std::holds_alternative<GeneralU>(bc))
        throw DomainError("assemble: general U(2) boundary conditions are handled analytically, not discretized");
    if (std::holds_alternative<Dirichlet>(bc)) {
        if (grid.is_periodic()) throw DomainError("assemble: Dirichlet problems need an interior grid");
    } else {
        const double alpha = std::get<QuasiPeriodic>(bc).alpha;
        if (!grid.is_periodic()) throw DomainError("assemble: quasi-periodic problems need a periodic grid");
        if (std::abs(grid.interval().length() - kPi) > 1e-12)
            throw DomainError("assemble: quasi-periodic conditions are defined on an interval of length pi");
        if (n < 3) throw DomainError("assemble: quasi-periodic grid needs at least 3 points");
        corner = -std::exp(cplx(0.0, alpha)) * inv_h2;
    }
    std::vector<double> diag = sample_potential(potential, grid);
    for (double& d : diag) d += 2.0 * inv_h2;
    std::vector<double> off(n - 1, -inv_h2);
    return DiscreteOperator(grid, bc, potential, std::move(diag), std::move(off), corner);
}

// ---------------------------------------------------------------- eigensolve

namespace {

struct RawEigen {
    std::vector<double> values;
    std::vector<CVector> vectors;  // unit l2 norm
};

RawEigen raw_eigensolve(const DiscreteOperator& op, std::size_t k, bool want_vectors) {
    const std::size_t n = op.size();
    if (k > n) throw DomainError("eigensolve: k = " + std::to_string(k) + " exceeds grid size " + std::to_string(n));
    RawEigen out;
    if (k == 0) return out;
    if (op.corner() == cplx{}) {
        std::vector<double> diag(op.diagonal().begin(), op.diagonal().end());
        std::vector<double> off(op.off_diagonal().begin(), op.off_diagonal().end());
        auto r = linalg::tridiagonal_lowest(diag, off, k, want_vectors);
        out.values = std::move(r.values);
        if (want_vectors) {
            for (std::size_t c = 0; c < k; ++c)
                out.vectors.emplace_back(r.vectors.begin() + static_cast<std::ptrdiff_t>(c * n),
                                         r.vectors.begin() + static_cast<std::ptrdiff_t>((c + 1) * n));
        }
    } else {
        auto r = linalg::hermitian_lowest(op.dense(), n, k, want_vectors);
        out.values = std::move(r.values);
        if (want_vectors) {
            for (std::size_t c = 0; c < k; ++c)
                out.vectors.emplace_back(r.vectors.begin() + static_cast<std::ptrdiff_t>(c * n),
                                         r.vectors.begin() + static_cast<std::ptrdiff_t>((c + 1) * n));
        }
    }
    return out;
}

cplx dot(const CVector& a, const CVector& b) {
    cplx s{};
    for (std::size_t j = 0; j < a.size(); ++j) s += std::conj(a[j]) * b[j];
    return s;
}

// Rotates a degenerate cluster [first, last) onto reflection eigenvectors, even first.
void symmetrize_cluster(const Grid& grid, std::vector<CVector>& vecs, std::size_t first, std::size_t last) {
    const std::size_t m = last - first;
    std::vector<CVector> reflected;
    for (std::size_t a = first; a < last; ++a) reflected.push_back(reflect(grid, vecs[a]));
    std::vector<cplx> s(m * m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) s[a + b * m] = dot(vecs[first + a], reflected[b]);
    auto eig = linalg::hermitian_all(std::move(s), m);
    std::vector<CVector> rotated;
    for (std::size_t c = m; c-- > 0;) {  // descending parity: even (+1) first
        CVector v(vecs[first].size(), 0.0);
        for (std::size_t a = 0; a < m; ++a) {
            const cplx coef = eig.vectors[a + c * m];
            for (std::size_t j = 0; j < v.size(); ++j) v[j] += coef * vecs[first + a][j];
        }
        rotated.push_back(std::move(v));
    }
    for (std::size_t a = 0; a < m; ++a) vecs[first + a] = std::move(rotated[a]);
}

}  // namespace

Spectrum eigensolve(const DiscreteOperator& op, std::size_t k) {
    RawEigen raw = raw_eigensolve(op, k, true);
    const Grid& grid = op.grid();
    const bool symmetric = op.reflection_symmetric();

    // degenerate clusters
    std::size_t start = 0;
    for (std::size_t i = 1; i <= raw.values.size(); ++i) {
        const bool split = i == raw.values.size() ||
                           std::abs(raw.values[i] - raw.values[i - 1]) >
                               1e-9 * std::max(1.0, std::abs(raw.values[i]));
        if (!split) continue;
        if (i - start > 1) {
            if (symmetric) {
                symmetrize_cluster(grid, raw.vectors, start, i);
            } else {
                std::stable_sort(raw.vectors.begin() + static_cast<std::ptrdiff_t>(start),
                                 raw.vectors.begin() + static_cast<std::ptrdiff_t>(i),
                                 [](const CVector& l, const CVector& r) {
                                     return first_of_largest(l) < first_of_largest(r);
                                 });
            }
        }
        start = i;
    }

    Spectrum s;
    const double scale = 1.0 / std::sqrt(grid.spacing());
    for (std::size_t i = 0; i < raw.values.size(); ++i) {
        CVector& v = raw.vectors[i];
        const std::size_t j = first_of_largest(v);
        const cplx phase = std::abs(v[j]) > 0.0 ? std::conj(v[j]) / std::abs(v[j]) : 1.0;
        const double nrm = std::sqrt(std::real(dot(v, v)));
        for (auto& z : v) z *= phase * scale / nrm;
        s.labels.push_back(static_cast<long>(i));
        s.eigenvalues.push_back(raw.values[i]);
        s.vectors.emplace_back(grid, std::move(v));
    }
    return s;
}

std::vector<double> eigenvalues(const DiscreteOperator& op, std::size_t k) {
    return raw_eigensolve(op, k, false).values;
}

ConvergenceReport convergence_report(const PotentialSpec& potential, const BoundaryCondition& bc,
                                     const Spectrum& oracle, const std::vector<Grid>& grids, std::size_t k) {
    if (oracle.size() < k) throw DomainError("convergence_report: oracle shorter than k");
    if (grids.size() < 2) throw DomainError("convergence_report: needs at least two grids");
    for (std::size_t i = 1; i < grids.size(); ++i)
        if (!(grids[i].spacing() < grids[i - 1].spacing()))
            throw DomainError("convergence_report: grid spacings must decrease");

    std::vector<double> exact(oracle.eigenvalues.begin(), oracle.eigenvalues.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(exact.begin(), exact.end());

    ConvergenceReport report;
    for (const Grid& grid : grids) {
        const auto lambda = eigenvalues(assemble(grid, potential, bc), k);
        double err = 0.0;
        for (std::size_t i = 0; i < k; ++i)
            err = std::max(err, std::abs(lambda[i] - exact[i]) / std::max(1.0, std::abs(exact[i])));
        report.rows.push_back({grid.spacing(), err});
    }
    for (std::size_t i = 0; i + 1 < report.rows.size(); ++i) {
        const auto& a = report.rows[i];
        const auto& b = report.rows[i + 1];
        report.orders.push_back(std::log(a.max_relative_error / b.max_relative_error) / std::log(a.h / b.h));
    }
    return report;
}

}  // namespace qtrap::discrete_solver
