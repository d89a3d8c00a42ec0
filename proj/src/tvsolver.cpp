#include "triadyn/tvsolver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "triadyn/error.hpp"

namespace triadyn {

namespace {

constexpr std::size_t kM = static_cast<std::size_t>(kTriadTypeCount) * kTriadTypeCount;

void check_shapes(std::span<const TransitionMatrix> p_seq,
                  std::span<const TransitionMatrix> phat_seq) {
    if (p_seq.size() != phat_seq.size()) {
        throw InputError("objective: sequence lengths differ");
    }
    if (p_seq.empty()) throw InputError("objective: empty sequence");
    for (const TransitionMatrix& m : p_seq) {
        if (m.p.size() != kM) throw InputError("objective: matrix has wrong shape");
    }
    for (const TransitionMatrix& m : phat_seq) {
        if (m.p.size() != kM) throw InputError("objective: matrix has wrong shape");
    }
}

double penalty_of_diff(const double* prev, const double* curr, double lambda1, double lambda2,
                       PenaltyMode mode) {
    double l1 = 0.0;
    double value = 0.0;
    if (mode == PenaltyMode::Matrix) {
        double sq = 0.0;
        for (std::size_t e = 0; e < kM; ++e) {
            const double d = curr[e] - prev[e];
            l1 += std::abs(d);
            sq += d * d;
        }
        value = lambda1 * l1 + lambda2 * std::sqrt(sq);
    } else {
        double group = 0.0;
        for (int i = 0; i < kTriadTypeCount; ++i) {
            double sq = 0.0;
            const std::size_t base = static_cast<std::size_t>(i) * kTriadTypeCount;
            for (int j = 0; j < kTriadTypeCount; ++j) {
                const double d = curr[base + j] - prev[base + j];
                l1 += std::abs(d);
                sq += d * d;
            }
            group += std::sqrt(sq);
        }
        value = lambda1 * l1 + lambda2 * group;
    }
    return value;
}

}  // namespace

double objective(std::span<const TransitionMatrix> p_seq,
                 std::span<const TransitionMatrix> phat_seq, double lambda1, double lambda2,
                 PenaltyMode mode) {
    check_shapes(p_seq, phat_seq);
    const std::size_t T = p_seq.size();
    double fidelity = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        double sq = 0.0;
        for (std::size_t e = 0; e < kM; ++e) {
            const double d = phat_seq[t].p[e] - p_seq[t].p[e];
            sq += d * d;
        }
        fidelity += sq;
    }
    double value = fidelity / (2.0 * static_cast<double>(T));
    for (std::size_t t = 1; t < T; ++t) {
        value += penalty_of_diff(p_seq[t - 1].p.data(), p_seq[t].p.data(), lambda1, lambda2, mode);
    }
    return value;
}

void project_row_simplex(std::span<double> v, double floor) {
    const std::size_t n = v.size();
    if (n == 0) throw InputError("project_row_simplex: empty vector");
    if (floor < 0.0 || floor * static_cast<double>(n) >= 1.0) {
        throw InputError("project_row_simplex: floor * len must lie in [0, 1)");
    }
    const double radius = 1.0 - floor * static_cast<double>(n);
    // Project u = v - floor onto the simplex of the given radius.
    static thread_local std::vector<double> sorted;
    sorted.assign(v.begin(), v.end());
    for (double& x : sorted) x -= floor;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double cumsum = 0.0;
    double tau = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        cumsum += sorted[k];
        const double candidate = (cumsum - radius) / static_cast<double>(k + 1);
        if (sorted[k] - candidate > 0.0) {
            tau = candidate;
        } else {
            break;
        }
    }
    for (double& x : v) {
        x = std::max(x - floor - tau, 0.0) + floor;
    }
}

namespace {

void validate_config(const SolverConfig& c) {
    if (c.lambda1 < 0 || c.lambda2 < 0) throw InputError("solver: lambda weights must be >= 0");
    if (!(c.epsilon_floor > 0.0) || c.epsilon_floor >= 1.0 / kTriadTypeCount) {
        throw InputError("solver: epsilon_floor must lie in (0, 1/138)");
    }
    if (!(c.tol > 0.0)) throw InputError("solver: tol must be positive");
    if (c.max_iters < 1) throw InputError("solver: max_iters must be >= 1");
}

void validate_stochastic(std::span<const TransitionMatrix> phat_seq) {
    for (const TransitionMatrix& m : phat_seq) {
        if (m.p.size() != kM) throw InputError("solver: matrix has wrong shape");
        for (int i = 0; i < kTriadTypeCount; ++i) {
            double sum = 0.0;
            for (int j = 0; j < kTriadTypeCount; ++j) {
                const double x = m.at(i, j);
                if (x < -1e-12 || !std::isfinite(x)) {
                    throw InputError("solver: empirical matrix is not row-stochastic");
                }
                sum += x;
            }
            if (std::abs(sum - 1.0) > 1e-6) {
                throw InputError("solver: empirical matrix row does not sum to 1");
            }
        }
    }
}

// Objective over flat arrays; per-period partials are accumulated in index
// order so the result does not depend on thread count.
double flat_objective(const std::vector<double>& p, const std::vector<double>& phat,
                      std::size_t T, double lambda1, double lambda2, PenaltyMode mode) {
    std::vector<double> partial(T, 0.0);
#pragma omp parallel for schedule(static)
    for (long t = 0; t < static_cast<long>(T); ++t) {
        const double* a = &p[static_cast<std::size_t>(t) * kM];
        const double* b = &phat[static_cast<std::size_t>(t) * kM];
        double sq = 0.0;
        for (std::size_t e = 0; e < kM; ++e) {
            const double d = b[e] - a[e];
            sq += d * d;
        }
        double value = sq / (2.0 * static_cast<double>(T));
        if (t >= 1) {
            value += penalty_of_diff(&p[(static_cast<std::size_t>(t) - 1) * kM],
                                     &p[static_cast<std::size_t>(t) * kM], lambda1, lambda2, mode);
        }
        partial[t] = value;
    }
    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

SolveResult exact_separable_solution(std::span<const TransitionMatrix> phat_seq,
                                     const SolverConfig& config) {
    SolveResult result;
    result.matrices.assign(phat_seq.begin(), phat_seq.end());
    for (TransitionMatrix& m : result.matrices) {
        for (int i = 0; i < kTriadTypeCount; ++i) {
            project_row_simplex(std::span<double>(&m.at(i, 0), kTriadTypeCount),
                                config.epsilon_floor);
        }
    }
    result.final_objective = objective(result.matrices, phat_seq, config.lambda1, config.lambda2,
                                       config.penalty_mode);
    result.objective_trace.push_back(result.final_objective);
    result.converged = true;
    result.iterations = 0;
    result.message = "separable problem solved by exact row-simplex projection";
    return result;
}

struct Tridiagonal {
    // M = (1/T + rho) I + rho * Delta^T Delta along the time axis; Thomas
    // factorization shared by every matrix entry.
    std::vector<double> inv_main;  // 1 / m_t
    std::vector<double> upper;     // c'_t

    void factor(std::size_t T, double rho) {
        const double a = -rho;
        inv_main.resize(T);
        upper.resize(T > 0 ? T - 1 : 0);
        double m_prev = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            const double lap = (t == 0 || t + 1 == T) ? 1.0 : 2.0;
            const double diag = 1.0 / static_cast<double>(T) + rho + rho * lap;
            const double m = (t == 0) ? diag : diag - a * (a / m_prev);
            // upper[t-1] = a / m_{t-1}
            if (t > 0) upper[t - 1] = a / m_prev;
            inv_main[t] = 1.0 / m;
            m_prev = m;
        }
    }
};

}  // namespace

SolveResult estimate(std::span<const TransitionMatrix> phat_seq, const SolverConfig& config) {
    validate_config(config);
    if (phat_seq.empty()) throw InputError("solver: need at least one empirical matrix");
    validate_stochastic(phat_seq);
    const std::size_t T = phat_seq.size();

    if (T == 1 || (config.lambda1 == 0.0 && config.lambda2 == 0.0)) {
        return exact_separable_solution(phat_seq, config);
    }

    const double lam1 = config.lambda1;
    const double lam2 = config.lambda2;
    const double floor = config.epsilon_floor;
    const std::size_t TD = T - 1;

    std::vector<double> phat(T * kM), P(T * kM), Z(T * kM), UZ(T * kM, 0.0);
    std::vector<double> D(TD * kM, 0.0), UD(TD * kM, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
        std::memcpy(&phat[t * kM], phat_seq[t].p.data(), kM * sizeof(double));
    }

    // Feasible start: projected empirical matrices.
    Z = phat;
#pragma omp parallel for schedule(static)
    for (long r = 0; r < static_cast<long>(T * kTriadTypeCount); ++r) {
        project_row_simplex(
            std::span<double>(&Z[static_cast<std::size_t>(r) * kTriadTypeCount], kTriadTypeCount),
            floor);
    }
    P = Z;
    for (std::size_t s = 0; s < TD; ++s) {
        for (std::size_t e = 0; e < kM; ++e) {
            D[s * kM + e] = P[(s + 1) * kM + e] - P[s * kM + e];
        }
    }

    double rho = 1.0 / static_cast<double>(T) + lam1 + lam2;  // scale-aware start
    Tridiagonal tri;
    tri.factor(T, rho);

    SolveResult result;
    std::vector<double> best = Z;
    double best_obj = flat_objective(Z, phat, T, lam1, lam2, config.penalty_mode);
    result.objective_trace.push_back(best_obj);

    std::vector<double> z_old(T * kM), d_old(TD * kM);
    constexpr int kWindow = 50;
    constexpr std::size_t kBlock = 512;
    const int rho_adapt_every = 25;
    bool converged = false;
    int iter = 0;

    for (iter = 1; iter <= config.max_iters; ++iter) {
        // --- P update: per-entry tridiagonal solve along time, blocked for locality.
#pragma omp parallel
        {
            std::vector<double> tile(T * kBlock);
#pragma omp for schedule(static)
            for (long blk = 0; blk < static_cast<long>((kM + kBlock - 1) / kBlock); ++blk) {
                const std::size_t e0 = static_cast<std::size_t>(blk) * kBlock;
                const std::size_t width = std::min(kBlock, kM - e0);
                for (std::size_t t = 0; t < T; ++t) {
                    double* row = &tile[t * width];
                    const double* ph = &phat[t * kM + e0];
                    const double* z = &Z[t * kM + e0];
                    const double* uz = &UZ[t * kM + e0];
                    for (std::size_t w = 0; w < width; ++w) {
                        row[w] = ph[w] / static_cast<double>(T) + rho * (z[w] - uz[w]);
                    }
                    if (t > 0) {
                        const double* d = &D[(t - 1) * kM + e0];
                        const double* ud = &UD[(t - 1) * kM + e0];
                        for (std::size_t w = 0; w < width; ++w) row[w] += rho * (d[w] - ud[w]);
                    }
                    if (t < TD) {
                        const double* d = &D[t * kM + e0];
                        const double* ud = &UD[t * kM + e0];
                        for (std::size_t w = 0; w < width; ++w) row[w] -= rho * (d[w] - ud[w]);
                    }
                }
                // Thomas forward/back substitution across time, vectorized over lanes.
                for (std::size_t t = 0; t < T; ++t) {
                    double* row = &tile[t * width];
                    if (t == 0) {
                        for (std::size_t w = 0; w < width; ++w) row[w] *= tri.inv_main[0];
                    } else {
                        const double* prev = &tile[(t - 1) * width];
                        const double inv_m = tri.inv_main[t];
                        for (std::size_t w = 0; w < width; ++w) {
                            row[w] = (row[w] + rho * prev[w]) * inv_m;
                        }
                    }
                }
                for (std::size_t t = T - 1; t-- > 0;) {
                    double* row = &tile[t * width];
                    const double* next = &tile[(t + 1) * width];
                    const double up = tri.upper[t];
                    for (std::size_t w = 0; w < width; ++w) row[w] -= up * next[w];
                }
                for (std::size_t t = 0; t < T; ++t) {
                    std::memcpy(&P[t * kM + e0], &tile[t * width], width * sizeof(double));
                }
            }
        }

        // --- Z update: exact projection of P + UZ, row by row.
        z_old.swap(Z);
#pragma omp parallel for schedule(static)
        for (long r = 0; r < static_cast<long>(T * kTriadTypeCount); ++r) {
            const std::size_t base = static_cast<std::size_t>(r) * kTriadTypeCount;
            double* z = &Z[base];
            for (int j = 0; j < kTriadTypeCount; ++j) z[j] = P[base + j] + UZ[base + j];
            project_row_simplex(std::span<double>(z, kTriadTypeCount), floor);
        }

        // --- D update: sparse-group prox of Delta P + UD.
        d_old.swap(D);
        const double kappa1 = lam1 / rho;
        const double kappa2 = lam2 / rho;
#pragma omp parallel for schedule(static)
        for (long s = 0; s < static_cast<long>(TD); ++s) {
            double* d = &D[static_cast<std::size_t>(s) * kM];
            const double* p_lo = &P[static_cast<std::size_t>(s) * kM];
            const double* p_hi = &P[(static_cast<std::size_t>(s) + 1) * kM];
            const double* ud = &UD[static_cast<std::size_t>(s) * kM];
            for (std::size_t e = 0; e < kM; ++e) {
                const double g = p_hi[e] - p_lo[e] + ud[e];
                d[e] = g > kappa1 ? g - kappa1 : (g < -kappa1 ? g + kappa1 : 0.0);
            }
            if (kappa2 > 0.0) {
                if (config.penalty_mode == PenaltyMode::Matrix) {
                    double sq = 0.0;
                    for (std::size_t e = 0; e < kM; ++e) sq += d[e] * d[e];
                    const double norm = std::sqrt(sq);
                    const double scale = norm > kappa2 ? 1.0 - kappa2 / norm : 0.0;
                    for (std::size_t e = 0; e < kM; ++e) d[e] *= scale;
                } else {
                    for (int i = 0; i < kTriadTypeCount; ++i) {
                        double* row = d + static_cast<std::size_t>(i) * kTriadTypeCount;
                        double sq = 0.0;
                        for (int j = 0; j < kTriadTypeCount; ++j) sq += row[j] * row[j];
                        const double norm = std::sqrt(sq);
                        const double scale = norm > kappa2 ? 1.0 - kappa2 / norm : 0.0;
                        for (int j = 0; j < kTriadTypeCount; ++j) row[j] *= scale;
                    }
                }
            }
        }

        // --- dual updates and residuals.
        std::vector<double> prim_partial(T, 0.0), dual_partial(T, 0.0);
#pragma omp parallel for schedule(static)
        for (long t = 0; t < static_cast<long>(T); ++t) {
            const std::size_t base = static_cast<std::size_t>(t) * kM;
            double prim = 0.0, dual = 0.0;
            for (std::size_t e = 0; e < kM; ++e) {
                const double rz = P[base + e] - Z[base + e];
                UZ[base + e] += rz;
                prim += rz * rz;
                const double dz = Z[base + e] - z_old[base + e];
                dual += dz * dz;
            }
            if (t < static_cast<long>(TD)) {
                for (std::size_t e = 0; e < kM; ++e) {
                    const double rd = P[base + kM + e] - P[base + e] - D[base + e];
                    UD[base + e] += rd;
                    prim += rd * rd;
                    const double dd = D[base + e] - d_old[base + e];
                    dual += dd * dd;
                }
            }
            prim_partial[t] = prim;
            dual_partial[t] = dual;
        }
        double prim_sq = 0.0, dual_sq = 0.0;
        for (std::size_t t = 0; t < T; ++t) {
            prim_sq += prim_partial[t];
            dual_sq += dual_partial[t];
        }
        const double prim_res = std::sqrt(prim_sq);
        const double dual_res = rho * std::sqrt(dual_sq);

        // --- objective bookkeeping on the feasible iterate.
        const double obj = flat_objective(Z, phat, T, lam1, lam2, config.penalty_mode);
        if (obj < best_obj) {
            best_obj = obj;
            best = Z;
        }
        result.objective_trace.push_back(best_obj);

        const std::size_t k = result.objective_trace.size() - 1;
        if (k >= static_cast<std::size_t>(kWindow)) {
            const double drop = result.objective_trace[k - kWindow] - result.objective_trace[k];
            const double scale = std::max(1.0, std::abs(result.objective_trace[k]));
            const double dim = std::sqrt(static_cast<double>(T * kM + TD * kM));
            if (drop <= config.tol * scale && prim_res <= 1e-8 * dim && dual_res <= 1e-6 * dim) {
                converged = true;
                break;
            }
        }

        // --- residual balancing keeps rho useful across wide lambda ranges.
        if (iter % rho_adapt_every == 0 && iter < config.max_iters / 2) {
            if (prim_res > 10.0 * dual_res) {
                rho *= 2.0;
                for (double& u : UZ) u *= 0.5;
                for (double& u : UD) u *= 0.5;
                tri.factor(T, rho);
            } else if (dual_res > 10.0 * prim_res) {
                rho *= 0.5;
                for (double& u : UZ) u *= 2.0;
                for (double& u : UD) u *= 2.0;
                tri.factor(T, rho);
            }
        }
    }

    result.iterations = std::min(iter, config.max_iters);
    result.converged = converged;
    result.final_objective = best_obj;
    result.matrices.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
        result.matrices[t].from_period = phat_seq[t].from_period;
        std::memcpy(result.matrices[t].p.data(), &best[t * kM], kM * sizeof(double));
    }
    result.message = converged
                         ? "converged (objective plateau and small residuals)"
                         : "did not converge within max_iters; returning best feasible iterate";
    return result;
}

double total_variation(std::span<const TransitionMatrix> p_seq) {
    if (p_seq.size() < 2) throw InputError("total_variation: need at least 2 matrices");
    double tv = 0.0;
    for (std::size_t t = 1; t < p_seq.size(); ++t) {
        for (std::size_t e = 0; e < kM; ++e) {
            tv += std::abs(p_seq[t].p[e] - p_seq[t - 1].p[e]);
        }
    }
    return tv;
}

}  // namespace triadyn
