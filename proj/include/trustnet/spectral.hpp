#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "trustnet/errors.hpp"
#include "trustnet/matrix.hpp"

namespace trustnet {

// Similarity of two object-side trust vectors through the recommendation
// matrix: s(phi, psi) = <A phi | A psi>, the inner product of the induced
// recommender vectors. Equals <phi | A^T A psi>.
inline double similarity(const std::vector<double>& phi, const std::vector<double>& psi,
                         const Matrix& a) {
    if (phi.size() != a.cols() || psi.size() != a.cols())
        throw std::invalid_argument("similarity: vector length must match matrix columns");
    return dot(a * phi, a * psi);
}

namespace detail {

struct JacobiResult {
    std::vector<double> eigenvalues;
    Matrix eigenvectors; // columns
    int sweeps = 0;
};

// Cyclic Jacobi rotations for a symmetric matrix. Small dense problems
// only; convergence when the off-diagonal Frobenius mass drops below
// tol * ||S||_F.
inline JacobiResult jacobi_eigensymmetric(Matrix s, double tol = 1e-12,
                                          int max_sweeps = 100) {
    const std::size_t n = s.rows();
    if (n != s.cols())
        throw std::invalid_argument("jacobi: matrix must be square");
    JacobiResult result;
    result.eigenvectors = Matrix::identity(n);
    Matrix& v = result.eigenvectors;

    const double scale = s.frobenius_norm();
    const double threshold = tol * (scale > 0.0 ? scale : 1.0);

    auto off_diagonal_norm = [&]() {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) acc += 2.0 * s(i, j) * s(i, j);
        return std::sqrt(acc);
    };

    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm() <= threshold) {
            converged = true;
            break;
        }
        ++result.sweeps;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = s(p, q);
                if (apq == 0.0) continue;
                const double app = s(p, p);
                const double aqq = s(q, q);
                const double theta = 0.5 * (aqq - app) / apq;
                // smaller root of t^2 + 2 theta t - 1 = 0 for stability
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double skp = s(k, p);
                    const double skq = s(k, q);
                    s(k, p) = c * skp - sn * skq;
                    s(k, q) = sn * skp + c * skq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double spk = s(p, k);
                    const double sqk = s(q, k);
                    s(p, k) = c * spk - sn * sqk;
                    s(q, k) = sn * spk + c * sqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }

    if (!converged && off_diagonal_norm() > threshold)
        throw NumericError("jacobi eigensolver did not converge");
    result.eigenvalues.resize(n);
    for (std::size_t i = 0; i < n; ++i) result.eigenvalues[i] = s(i, i);
    return result;
}

} // namespace detail

// Spectral decomposition of A^T A into trust communities. Eigenvalues
// within grouping_tol of each other are merged into a single community
// (degenerate eigenspaces get one projector); eigenvalues below
// 1e-12 * lambda_1 belong to the kernel and get no SVD factor, which keeps
// lambda^(-1/2) finite.
struct CommunityDecomposition {
    std::vector<double> eigenvalues;  // one per community, descending
    std::vector<Matrix> projectors;   // P_k, symmetric idempotent, J x J
    std::vector<Matrix> svd_factors;  // Pi_k = A P_k / sqrt(lambda_k), U x J
    Matrix kernel_projector;          // projector onto the nullspace of A^T A

    std::size_t communities() const { return eigenvalues.size(); }
};

inline CommunityDecomposition decompose(const Matrix& a, double grouping_tol = -1.0) {
    const std::size_t j = a.cols();
    const Matrix gram = a.transposed() * a;
    auto eig = detail::jacobi_eigensymmetric(gram);

    std::vector<std::size_t> order(j);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return eig.eigenvalues[x] > eig.eigenvalues[y];
    });

    CommunityDecomposition out;
    out.kernel_projector = Matrix(j, j);
    if (j == 0) return out;

    const double lambda1 = std::max(0.0, eig.eigenvalues[order[0]]);
    const double kernel_cut = 1e-12 * lambda1;
    if (grouping_tol < 0.0) grouping_tol = 1e-8 * lambda1;

    std::size_t idx = 0;
    while (idx < j) {
        const double lead = eig.eigenvalues[order[idx]];
        if (lead <= kernel_cut) break; // the rest is kernel
        Matrix p(j, j);
        double lambda_sum = 0.0;
        std::size_t members = 0;
        while (idx < j) {
            const double lam = eig.eigenvalues[order[idx]];
            if (lam <= kernel_cut || lead - lam > grouping_tol) break;
            const std::size_t col = order[idx];
            for (std::size_t r = 0; r < j; ++r)
                for (std::size_t c2 = 0; c2 < j; ++c2)
                    p(r, c2) += eig.eigenvectors(r, col) * eig.eigenvectors(c2, col);
            lambda_sum += lam;
            ++members;
            ++idx;
        }
        const double lambda = lambda_sum / static_cast<double>(members);
        out.svd_factors.push_back((a * p).scaled(1.0 / std::sqrt(lambda)));
        out.eigenvalues.push_back(lambda);
        out.projectors.push_back(std::move(p));
    }

    out.kernel_projector = Matrix::identity(j);
    for (const auto& p : out.projectors) out.kernel_projector = out.kernel_projector - p;
    return out;
}

// Community-specific trust vector tau^k = P_k tau.
inline std::vector<double> community_trust(const std::vector<double>& tau,
                                           const CommunityDecomposition& decomp,
                                           std::size_t k) {
    if (k >= decomp.communities())
        throw std::out_of_range("community index out of range");
    return decomp.projectors[k] * tau;
}

// Affinity of tau for community k: s(tau, tau^k) = <tau | P_k tau>.
inline double community_affinity(const std::vector<double>& tau,
                                 const CommunityDecomposition& decomp, std::size_t k) {
    if (k >= decomp.communities())
        throw std::out_of_range("community index out of range");
    return dot(tau, decomp.projectors[k] * tau);
}

// Personalized recommendation matrix: the SVD of A remixed with the
// user's community affinities, A_tau = sum_k sqrt(<tau|P_k tau>) Pi_k.
// When the affinities equal the eigenvalues this reproduces A itself.
inline Matrix personalized_matrix(const Matrix& a, const std::vector<double>& tau,
                                  const CommunityDecomposition& decomp) {
    Matrix out(a.rows(), a.cols());
    for (std::size_t k = 0; k < decomp.communities(); ++k) {
        const double affinity = community_affinity(tau, decomp, k);
        if (affinity <= 0.0) continue;
        out = out + decomp.svd_factors[k].scaled(std::sqrt(affinity));
    }
    return out;
}

} // namespace trustnet
