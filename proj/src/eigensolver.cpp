#include "bellchain/eigensolver.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace bellchain {

namespace {

constexpr std::int64_t kDenseCap = 2048;
constexpr std::int64_t kDimCap = 1 << 14;

int sites_for_dim(std::int64_t dim, int local_dim) {
    int sites = 0;
    std::int64_t d = 1;
    while (d < dim) { d *= local_dim; ++sites; }
    if (d != dim) throw DimensionError("matrix dimension is not a power of local_dim");
    return std::max(sites, 1);
}

// Groups the lowest eigenvalues within window into one degenerate set.
EigenSet collect_lowest(const Eigen::VectorXd& evals, const OperatorMatrix& evecs, double window,
                        int local_dim, int sites, const HamiltonianTerms* H_for_residual) {
    EigenSet set;
    set.energy = evals(0);
    for (Eigen::Index i = 0; i < evals.size(); ++i) {
        if (evals(i) > set.energy + window) break;
        PureState s{local_dim, sites, evecs.col(i)};
        set.states.push_back(std::move(s));
    }
    if (H_for_residual) {
        for (const auto& s : set.states) {
            PureState hs = H_for_residual->apply(s);
            double res = (hs.amplitudes - set.energy * s.amplitudes).norm();
            set.max_residual = std::max(set.max_residual, res);
        }
    }
    return set;
}

// Lanczos with full reorthogonalization for the smallest eigenvalue of the
// operator psi -> H psi restricted to the orthogonal complement of `deflate`.
Eigenpair lanczos_lowest(const HamiltonianTerms& H, const std::vector<PureState>& deflate, double tol,
                         RngStream& rng) {
    const std::int64_t n = H.dim();
    const int max_basis = 250;
    const int max_restarts = 40;

    auto project_out = [&](CVec<double>& v) {
        for (const auto& d : deflate) v -= d.amplitudes.dot(v) * d.amplitudes;
    };

    PureState seed = random_haar_state(n, rng, H.local_dim, H.sites);
    CVec<double> v0 = seed.amplitudes;
    project_out(v0);
    if (v0.norm() < 1e-12) throw SolverError("lanczos: deflation space exhausts the operator domain", 1.0);
    v0 /= v0.norm();

    double best_res = 1e300;
    for (int restart = 0; restart < max_restarts; ++restart) {
        std::vector<CVec<double>> basis;
        std::vector<double> alpha, beta;
        basis.push_back(v0);
        CVec<double> w;
        for (int j = 0; j < max_basis; ++j) {
            PureState cur{H.local_dim, H.sites, basis[j]};
            w = H.apply(cur).amplitudes;
            project_out(w);
            double a = std::real(basis[j].dot(w));
            alpha.push_back(a);
            w -= a * basis[j];
            if (j > 0) w -= beta[j - 1] * basis[j - 1];
            // full reorthogonalization, twice for stability
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& b : basis) w -= b.dot(w) * b;
            double bnorm = w.norm();
            if (bnorm < 1e-13 || j + 1 == max_basis) break;
            beta.push_back(bnorm);
            basis.push_back(w / bnorm);
        }
        const int m = static_cast<int>(alpha.size());
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            T(i, i) = alpha[i];
            if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        Eigen::VectorXd y = es.eigenvectors().col(0);
        CVec<double> ritz = CVec<double>::Zero(n);
        for (int i = 0; i < m; ++i) ritz += y(i) * basis[i];
        ritz /= ritz.norm();
        PureState rs{H.local_dim, H.sites, ritz};
        CVec<double> hr = H.apply(rs).amplitudes;
        project_out(hr);
        double energy = std::real(ritz.dot(hr));
        double res = (hr - energy * ritz).norm();
        best_res = std::min(best_res, res);
        if (res <= std::max(tol, 1e-12) * std::max(1.0, std::abs(energy))) {
            return Eigenpair{energy, rs, res};
        }
        v0 = ritz;
    }
    throw SolverError("lanczos: failed to converge", best_res);
}

} // namespace

PureState HamiltonianTerms::apply(const PureState& psi) const {
    if (psi.local_dim != local_dim || psi.sites != sites)
        throw DimensionError("HamiltonianTerms::apply: state shape mismatch");
    PureState out{local_dim, sites, constant * psi.amplitudes};
    for (const auto& t : terms) out.amplitudes += apply_local(psi, t.sites, t.op).amplitudes;
    return out;
}

OperatorMatrix HamiltonianTerms::to_dense() const {
    const std::int64_t n = dim();
    if (n > kDenseCap) throw DimensionError("HamiltonianTerms::to_dense: dimension above dense cap");
    OperatorMatrix H = constant * OperatorMatrix::Identity(n, n);
    for (const auto& t : terms) {
        auto ix = detail::local_indexing(local_dim, sites, t.sites);
        const std::int64_t dk = t.op.rows();
        for (std::int64_t base : ix.rest_offsets)
            for (std::int64_t r = 0; r < dk; ++r)
                for (std::int64_t c = 0; c < dk; ++c)
                    H(base + ix.sub_offsets[r], base + ix.sub_offsets[c]) += t.op(r, c);
    }
    return H;
}

EigenSet lowest_eigenpair(const HamiltonianTerms& H, double tol) {
    const std::int64_t n = H.dim();
    if (n > kDimCap) throw DimensionError("lowest_eigenpair: dimension above 2^14 cap");
    if (n <= kDenseCap) {
        OperatorMatrix dense = H.to_dense();
        if ((dense - dense.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
            throw ValidationError("lowest_eigenpair: Hamiltonian is not Hermitian");
        Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(dense);
        double hnorm = std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(n - 1)));
        return collect_lowest(es.eigenvalues(), es.eigenvectors(), tol * std::max(hnorm, 1.0), H.local_dim,
                              H.sites, &H);
    }

    // Iterative path: find the lowest state, then deflate until the next level
    // exceeds the degeneracy window.
    RngStream rng(0x6c616e637a6f73ULL); // fixed seed: deterministic solver output
    std::vector<PureState> found;
    EigenSet set;
    // Rough ‖H‖ estimate for the degeneracy window: power-iterate on H².
    double hnorm = 1.0;
    {
        PureState p = random_haar_state(n, rng, H.local_dim, H.sites);
        for (int i = 0; i < 20; ++i) {
            PureState q = H.apply(p);
            double qn = q.amplitudes.norm();
            if (qn < 1e-300) break;
            hnorm = qn;
            q.amplitudes /= qn;
            p = q;
        }
    }
    const double window = tol * std::max(hnorm, 1.0);
    const int max_states = 16;
    for (int k = 0; k < max_states; ++k) {
        Eigenpair pair = lanczos_lowest(H, found, tol, rng);
        if (k == 0) {
            set.energy = pair.energy;
        } else if (pair.energy > set.energy + window) {
            break;
        }
        set.max_residual = std::max(set.max_residual, pair.residual);
        found.push_back(pair.state);
        set.states.push_back(std::move(pair.state));
    }
    return set;
}

EigenSet lowest_eigenpair(const OperatorMatrix& H, double tol, int local_dim) {
    const std::int64_t n = H.rows();
    if (H.cols() != n) throw DimensionError("lowest_eigenpair: matrix is not square");
    if (n > kDimCap) throw DimensionError("lowest_eigenpair: dimension above 2^14 cap");
    if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw ValidationError("lowest_eigenpair: matrix is not Hermitian");
    int sites = sites_for_dim(n, local_dim);
    Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(H);
    double hnorm = std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(n - 1)));
    EigenSet set = collect_lowest(es.eigenvalues(), es.eigenvectors(), tol * std::max(hnorm, 1.0), local_dim,
                                  sites, nullptr);
    for (const auto& s : set.states) {
        double res = (H * s.amplitudes - set.energy * s.amplitudes).norm();
        set.max_residual = std::max(set.max_residual, res);
    }
    return set;
}

} // namespace bellchain
