// SPDX-License-Identifier: Apache-2.0
//
// hsdest - hybrid sparse/diffuse channel estimation and CRB analysis toolbox
// Copyright (C) 2026 hsdest contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "hsdest/hals_solver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "dual_poly.hpp"
#include "hsdest/postprocess.hpp"
#include "hsdest/signal_model.hpp"
#include "hsdest/structured_linalg.hpp"

namespace hsdest {

namespace {

// First column of a(f) a(f)^H, i.e. the Toeplitz generator of one atom.
CVec atom_generator(double f, int N) {
    CVec v(N);
    for (int k = 0; k < N; ++k) {
        double ph = 2.0 * M_PI * k * f;
        v(k) = cxd(std::cos(ph), std::sin(ph));
    }
    return v;
}

// (D^H D + lam I)^{-1} products and the residual map
// phi(u) = u - D (D^H D + lam I)^{-1} D^H u shared by the gamma updates.
struct RidgeKernel {
    const CMat* D = nullptr;
    int L = 0;
    double lam = 0.0;
    CMat V;
    RVec d;

    void init(const CMat& Dm, double lam_) {
        D = &Dm;
        L = static_cast<int>(Dm.cols());
        lam = lam_;
        if (L > 0) {
            Eigen::SelfAdjointEigenSolver<CMat> es(Dm.adjoint() * Dm);
            if (es.info() != Eigen::Success)
                throw std::runtime_error("hals_solver: Gram eigendecomposition failed");
            V = es.eigenvectors();
            d = es.eigenvalues();
        }
    }

    CVec solve(const CVec& v) const {  // (D^H D + lam I)^{-1} v
        CVec w = V.adjoint() * v;
        for (int i = 0; i < L; ++i) w(i) /= (d(i) + lam);
        return V * w;
    }

    CVec gamma_of(const CVec& u) const {  // ridge coefficients for target u
        if (L == 0) return CVec(0);
        return solve(D->adjoint() * u);
    }

    CVec phi(const CVec& u) const {
        if (L == 0) return u;
        return u - (*D) * gamma_of(u);
    }
};

struct AdmmResult {
    CVec h_s, gamma, iota;
    double t = 0.0;
    int iters = 0;
    bool converged = false;
    double rho_final = 0.0;
};

// ADMM with consensus splitting: the quadratic block (t, iota, h_s, gamma)
// has a closed-form update, the slack is projected onto the PSD cone and
// the scaled dual is updated. `equality` selects the noiseless program in
// which h_s is pinned to y - D*gamma and the objective is (t + iota_1)/2.
AdmmResult run_admm(const CVec& y, const CMat& D, double tau, double lam, bool equality,
                    const SolverOptions& opts, double stop_abs, double stop_rel,
                    const char* who) {
    const int N = static_cast<int>(y.size());
    const int L = static_cast<int>(D.cols());
    const int M = N + 1;
    const double tau_eff = equality ? 1.0 : tau;

    RidgeKernel kern;
    CMat gramV;
    RVec gramd;
    if (L > 0) {
        kern.init(D, 0.0);  // only the eigen pair is reused below
        gramV = kern.V;
        gramd = kern.d;
    }

    double rho = opts.rho;
    CMat Z = CMat::Zero(M, M), W = CMat::Zero(M, M);
    CMat Psi = CMat::Zero(M, M), Zprev, Tmp;
    CVec iota = CVec::Zero(N), h_s = CVec::Zero(N), gamma = CVec::Zero(L);
    double t = 0.0;

    AdmmResult out;
    const double dim = static_cast<double>(M);

    int it = 0;
    for (; it < opts.max_iters; ++it) {
        // x-update against M = Z - W
        const double c = 2.0 * rho / (1.0 + 2.0 * rho);
        CVec m12(N);
        for (int a = 0; a < N; ++a) m12(a) = Z(a, N) - W(a, N);
        const double m22 = (Z(N, N) - W(N, N)).real();

        for (int dgn = 0; dgn < N; ++dgn) {
            cxd s(0, 0);
            for (int a = dgn; a < N; ++a) s += Z(a, a - dgn) - W(a, a - dgn);
            iota(dgn) = s / static_cast<double>(N - dgn);
        }
        iota(0) = cxd(iota(0).real() - tau_eff / (2.0 * rho * N), 0.0);
        t = m22 - tau_eff / (2.0 * rho);

        if (equality) {
            if (L > 0) {
                CVec rhs = D.adjoint() * (y - m12);
                CVec w = gramV.adjoint() * rhs;
                for (int i = 0; i < L; ++i) w(i) /= gramd(i);
                gamma = gramV * w;
                h_s = y - D * gamma;
            } else {
                h_s = y;
            }
        } else {
            if (L > 0) {
                CVec rhs = c * (D.adjoint() * (y - m12));
                CVec w = gramV.adjoint() * rhs;
                for (int i = 0; i < L; ++i) w(i) /= (lam + c * gramd(i));
                gamma = gramV * w;
                h_s = (y - D * gamma + 2.0 * rho * m12) / (1.0 + 2.0 * rho);
            } else {
                h_s = (y + 2.0 * rho * m12) / (1.0 + 2.0 * rho);
            }
        }

        // assemble Psi = [[Toep(iota), h_s], [h_s^H, t]]
        for (int a = 0; a < N; ++a) {
            Psi(a, a) = cxd(iota(0).real(), 0.0);
            for (int b = 0; b < a; ++b) {
                Psi(a, b) = iota(a - b);
                Psi(b, a) = std::conj(iota(a - b));
            }
            Psi(a, N) = h_s(a);
            Psi(N, a) = std::conj(h_s(a));
        }
        Psi(N, N) = cxd(t, 0.0);

        Zprev = Z;
        Tmp = opts.relax * Psi + (1.0 - opts.relax) * Z + W;
        Z = psd_project(Tmp);
        W += opts.relax * Psi + (1.0 - opts.relax) * Zprev - Z;

        const double r_norm = (Psi - Z).norm();
        const double s_norm = rho * (Z - Zprev).norm();
        const double eps_pri = dim * stop_abs + stop_rel * std::max(Psi.norm(), Z.norm());
        const double eps_dua = dim * stop_abs + stop_rel * rho * W.norm();
        if (r_norm <= eps_pri && s_norm <= eps_dua) {
            out.converged = true;
            ++it;
            break;
        }

        if (opts.adaptive_rho && (it % 20 == 19)) {
            if (r_norm > 10.0 * s_norm && rho < 1e4) {
                rho *= 2.0;
                W *= 0.5;
            } else if (s_norm > 10.0 * r_norm && rho > 1e-4) {
                rho *= 0.5;
                W *= 2.0;
            }
        }

        if (it % 50 == 49) {
            if (!std::isfinite(t) || !h_s.allFinite())
                throw std::runtime_error(std::string(who) + ": NaN detected at iteration " +
                                         std::to_string(it) + " (rho=" + std::to_string(rho) + ")");
        }
    }

    out.h_s = std::move(h_s);
    out.gamma = std::move(gamma);
    out.iota = std::move(iota);
    out.t = t;
    out.iters = it;
    out.rho_final = rho;
    return out;
}

double primal_objective(const CVec& y, const CMat& D, double tau, double lam,
                        const CVec& h_s, const CVec& gamma, double atomic_value) {
    CVec z = y - h_s;
    if (D.cols() > 0) z -= D * gamma;
    double obj = 0.5 * z.squaredNorm() + tau * atomic_value;
    if (D.cols() > 0) obj += 0.5 * lam * gamma.squaredNorm();
    return obj;
}

struct PolishOut {
    std::vector<double> freqs;
    CVec c;
    CVec gamma;
    CVec z;
    double primal = 0.0, dual = 0.0, gap = 0.0;
    double dual_norm = 0.0;
    bool certified = false;
    int rounds = 0;
};

// Fully corrective refinement on an explicit support: coordinate descent on
// the restricted problem, Newton moves of the frequencies, and an exchange
// step that inserts atoms wherever the dual polynomial exceeds tau. The
// returned solution carries its own optimality certificate (duality gap at
// the residual).
PolishOut polish_p1(const CVec& y, const CMat& D, double tau, double lam,
                    std::vector<double> freqs, const SolverOptions& opts) {
    const int N = static_cast<int>(y.size());
    const int L = static_cast<int>(D.cols());
    const int coarse_grid = std::max(1024, opts.grid_size / 2);
    const double merge_dist = 0.05 / N;

    RidgeKernel kern;
    if (L > 0) kern.init(D, lam);
    const CVec phiy = kern.phi(y);

    std::vector<cxd> coef(freqs.size(), cxd(0, 0));

    CMat A, B, KB, G;
    CVec beta;
    auto rebuild = [&]() {
        const int k = static_cast<int>(freqs.size());
        A = steering_matrix(freqs, N);
        beta = A.adjoint() * phiy;
        G = A.adjoint() * A;
        if (L > 0 && k > 0) {
            B = D.adjoint() * A;
            KB = CMat(L, k);
            for (int i = 0; i < k; ++i) KB.col(i) = kern.solve(B.col(i));
            G -= B.adjoint() * KB;
        }
    };
    rebuild();

    auto run_cd = [&]() {
        const int k = static_cast<int>(freqs.size());
        if (k == 0) return;
        CVec c = Eigen::Map<CVec>(coef.data(), k);
        CVec Gc = G * c;
        for (int sweep = 0; sweep < 2000; ++sweep) {
            double max_delta = 0.0, scale = 1e-300;
            for (int i = 0; i < k; ++i) {
                const double gii = std::max(G(i, i).real(), 1e-12);
                cxd w = beta(i) - Gc(i) + gii * c(i);
                cxd cn(0, 0);
                double aw = std::abs(w);
                if (aw > tau) cn = w * ((aw - tau) / (gii * aw));
                cxd dc = cn - c(i);
                if (std::abs(dc) > 0) {
                    Gc += G.col(i) * dc;
                    c(i) = cn;
                }
                max_delta = std::max(max_delta, std::abs(dc));
                scale = std::max(scale, std::abs(c(i)));
            }
            if (max_delta <= 1e-15 * std::max(1.0, scale)) break;
        }
        for (int i = 0; i < k; ++i) coef[i] = c(i);
    };

    auto drop_zeros = [&]() {
        bool changed = false;
        for (int i = static_cast<int>(freqs.size()) - 1; i >= 0; --i) {
            if (std::abs(coef[i]) == 0.0) {
                freqs.erase(freqs.begin() + i);
                coef.erase(coef.begin() + i);
                changed = true;
            }
        }
        if (changed) rebuild();
    };

    auto residual = [&]() -> CVec {
        CVec u = y;
        for (size_t i = 0; i < freqs.size(); ++i) u -= coef[i] * A.col(static_cast<int>(i));
        return kern.phi(u);
    };

    auto current_gap = [&](const CVec& z) {
        double l1 = 0.0;
        for (const cxd& ci : coef) l1 += std::abs(ci);
        double primal = 0.5 * z.squaredNorm() + tau * l1;
        if (L > 0) {
            CVec u = y;
            for (size_t i = 0; i < freqs.size(); ++i) u -= coef[i] * A.col(static_cast<int>(i));
            primal += 0.5 * lam * kern.gamma_of(u).squaredNorm();
        }
        double dual = dual_objective(z, y, D, lam);
        return std::pair<double, double>(primal, primal - dual);
    };

    PolishOut out;
    int round = 0;
    bool added_last = true;
    double max_df = 1.0;
    for (; round < opts.polish_max_rounds; ++round) {
        run_cd();
        drop_zeros();

        // frequency refinement by damped Newton on the restricted objective
        CVec z = residual();
        max_df = 0.0;
        for (size_t i = 0; i < freqs.size(); ++i) {
            detail::DualPolyEval e = detail::eval_dual_poly(z, freqs[i]);
            const cxd ci = coef[i];
            const double J1 = -(std::conj(ci) * e.dq).real();
            CVec da = CVec(N);
            {
                const double half = (N - 1) / 2.0;
                CVec a = A.col(static_cast<int>(i));
                for (int k2 = 0; k2 < N; ++k2) da(k2) = cxd(0, 2.0 * M_PI * (k2 - half)) * a(k2);
            }
            double curv = da.squaredNorm();
            if (L > 0) {
                CVec Bd = D.adjoint() * da;
                curv -= Bd.dot(kern.solve(Bd)).real();
            }
            double J2 = std::norm(ci) * curv - (std::conj(ci) * e.ddq).real();
            if (J2 <= 0) J2 = std::norm(ci) * curv + 1e-300;
            double df = -J1 / J2;
            const double cap = 0.25 / N;
            df = std::clamp(df, -cap, cap);
            if (df != 0.0) {
                freqs[i] = canonical_frequency(freqs[i] + df);
                max_df = std::max(max_df, std::abs(df));
            }
        }
        if (max_df > 0) rebuild();

        // merge near-coincident atoms
        bool merged = false;
        for (size_t i = 0; i < freqs.size(); ++i) {
            for (size_t j = i + 1; j < freqs.size();) {
                if (wrap_distance(freqs[i], freqs[j]) < merge_dist) {
                    if (std::abs(coef[j]) > std::abs(coef[i])) std::swap(freqs[i], freqs[j]);
                    coef[i] += coef[j];
                    freqs.erase(freqs.begin() + j);
                    coef.erase(coef.begin() + j);
                    merged = true;
                } else {
                    ++j;
                }
            }
        }
        if (merged) rebuild();
        if (merged || max_df > 1e-10) {
            run_cd();
            drop_zeros();
        }

        // exchange step: insert atoms at all separated dual violations
        z = residual();
        const bool stationary = (!added_last && !merged && max_df <= 1e-12);
        auto insert_violations = [&](int grid) {
            std::vector<detail::Peak> viol =
                detail::scan_local_maxima(z, grid, tau * (1.0 + 1e-9));
            std::sort(viol.begin(), viol.end(),
                      [](const detail::Peak& a, const detail::Peak& b) { return a.value > b.value; });
            bool any = false;
            for (const auto& pk : viol) {
                double dist = 1.0;
                for (double f : freqs) dist = std::min(dist, wrap_distance(f, pk.f));
                if (dist >= merge_dist) {
                    freqs.push_back(pk.f);
                    coef.push_back(cxd(0, 0));
                    any = true;
                }
            }
            if (any) rebuild();
            return any;
        };
        added_last = false;
        if (insert_violations(coarse_grid)) {
            added_last = true;
            continue;
        }

        // coarse-feasible: exit once the certificate is tight enough (full
        // stationarity of the frequency moves is not required for that)
        auto [primal, gap] = current_gap(z);
        if (std::abs(gap) <= 1e-8 * std::max(1.0, primal) || stationary) {
            if (insert_violations(opts.grid_size)) {
                added_last = true;
                continue;
            }
            out.dual_norm = detail::max_abs_q(z, opts.grid_size).value;
            ++round;
            break;
        }
    }

    const int k = static_cast<int>(freqs.size());
    out.freqs = freqs;
    out.c = CVec(k);
    for (int i = 0; i < k; ++i) out.c(i) = coef[i];
    CVec u = y;
    if (k > 0) u -= steering_matrix(freqs, N) * out.c;
    out.gamma = kern.gamma_of(u);
    out.z = u;
    if (L > 0) out.z -= D * out.gamma;
    double l1 = 0.0;
    for (int i = 0; i < k; ++i) l1 += std::abs(out.c(i));
    out.primal = 0.5 * out.z.squaredNorm() + tau * l1;
    if (L > 0) out.primal += 0.5 * lam * out.gamma.squaredNorm();
    out.dual = dual_objective(out.z, y, D, lam);
    out.gap = out.primal - out.dual;
    if (out.dual_norm == 0.0) out.dual_norm = detail::max_abs_q(out.z, opts.grid_size).value;
    out.rounds = round;
    const double scale = std::max(1.0, out.primal);
    out.certified = (out.dual_norm <= tau * (1.0 + 1e-6)) && (out.gap <= 1e-7 * scale) &&
                    (out.gap >= -1e-7 * scale);
    return out;
}

HalsSolution package_polish(const CVec& y, const CMat& D, double tau, double lam,
                            PolishOut&& p, int admm_iters) {
    const int N = static_cast<int>(y.size());
    HalsSolution sol;
    sol.h_s = CVec::Zero(N);
    sol.iota = CVec::Zero(N);
    sol.t = 0.0;
    for (size_t i = 0; i < p.freqs.size(); ++i) {
        sol.h_s += p.c(static_cast<int>(i)) * build_steering(p.freqs[i], N);
        double w = std::abs(p.c(static_cast<int>(i)));
        sol.iota += w * atom_generator(p.freqs[i], N);
        sol.t += w;
    }
    sol.gamma = p.gamma;
    sol.z = p.z;
    sol.primal_obj = p.primal;
    sol.dual_obj = p.dual;
    sol.gap = p.gap;
    sol.tau = tau;
    sol.lam = lam;
    sol.iters = admm_iters + p.rounds;
    sol.converged = p.certified;
    return sol;
}

std::vector<double> support_from_residual(const CVec& z, double tau, int grid) {
    std::vector<detail::Peak> peaks = detail::scan_local_maxima(z, grid, 0.85 * tau);
    std::vector<double> freqs;
    freqs.reserve(peaks.size());
    for (const auto& p : peaks) freqs.push_back(p.f);
    return freqs;
}

HalsSolution package_admm(const CVec& y, const CMat& D, double tau, double lam,
                          AdmmResult&& a, const char* note) {
    HalsSolution sol;
    sol.h_s = std::move(a.h_s);
    sol.gamma = std::move(a.gamma);
    sol.iota = std::move(a.iota);
    sol.t = a.t;
    sol.z = y - sol.h_s;
    if (D.cols() > 0) sol.z -= D * sol.gamma;
    sol.tau = tau;
    sol.lam = lam;
    sol.primal_obj = primal_objective(y, D, tau, lam, sol.h_s, sol.gamma, sol.atomic_value());
    sol.dual_obj = dual_objective(sol.z, y, D, lam);
    sol.gap = sol.primal_obj - sol.dual_obj;
    sol.iters = a.iters;
    sol.converged = a.converged;
    sol.message = note;
    return sol;
}

HalsSolution solve_p1_impl(const CVec& y, const CMat& D, double tau, double lam,
                           const SolverOptions& opts, const std::vector<double>* warm_support) {
    const int L = static_cast<int>(D.cols());
    if (L > 0 && D.rows() != y.size())
        throw std::invalid_argument("solve_p1: dimension mismatch between y_avg and D");
    if (!(tau > 0)) throw std::invalid_argument("solve_p1: tau must be > 0");
    if (L > 0 && !(lam > 0)) throw std::invalid_argument("solve_p1: lam must be > 0");

    if (opts.polish && warm_support != nullptr) {
        PolishOut p = polish_p1(y, D, tau, lam, *warm_support, opts);
        if (p.certified) return package_polish(y, D, tau, lam, std::move(p), 0);
    }

    // localization pass (loose tolerances and capped budget when a polish
    // stage follows; the exchange step corrects a rough support anyway)
    SolverOptions loc = opts;
    const double loc_abs = opts.polish ? std::max(opts.eps_abs, 1e-6) : opts.eps_abs;
    const double loc_rel = opts.polish ? std::max(opts.eps_rel, opts.localization_tol) : opts.eps_rel;
    if (opts.polish) loc.max_iters = std::min(opts.max_iters, opts.admm_budget);
    AdmmResult a = run_admm(y, D, tau, lam, false, loc, loc_abs, loc_rel, "solve_p1");
    if (!opts.polish) return package_admm(y, D, tau, lam, std::move(a), "");

    CVec z = y - a.h_s;
    if (L > 0) z -= D * a.gamma;
    PolishOut p = polish_p1(y, D, tau, lam, support_from_residual(z, tau, opts.grid_size), opts);
    if (p.certified) return package_polish(y, D, tau, lam, std::move(p), a.iters);

    // fall back to a deeper ADMM pass, then try once more
    SolverOptions deep = opts;
    deep.max_iters = std::min(opts.max_iters, 10 * opts.admm_budget);
    AdmmResult b = run_admm(y, D, tau, lam, false, deep, opts.eps_abs, opts.eps_rel, "solve_p1");
    CVec z2 = y - b.h_s;
    if (L > 0) z2 -= D * b.gamma;
    PolishOut p2 = polish_p1(y, D, tau, lam, support_from_residual(z2, tau, opts.grid_size), opts);
    if (p2.certified) return package_polish(y, D, tau, lam, std::move(p2), a.iters + b.iters);

    HalsSolution sol = package_admm(y, D, tau, lam, std::move(b), "polish not certified");
    sol.iters += a.iters;
    return sol;
}

// Newton-refined nonlinear fit of y on k atoms plus the diffuse basis.
// Returns true when the residual reaches the noiseless floor.
bool nls_exact_fit(const CVec& y, const CMat& D, std::vector<double>& freqs, CVec& c, CVec& gamma,
                   double& resid) {
    const int N = static_cast<int>(y.size());
    const int L = static_cast<int>(D.cols());
    const double yscale = std::max(1.0, y.norm());
    double prev = std::numeric_limits<double>::infinity();
    for (int round = 0; round < 80; ++round) {
        const int k = static_cast<int>(freqs.size());
        CMat E(N, k + L);
        if (k > 0) E.leftCols(k) = steering_matrix(freqs, N);
        if (L > 0) E.rightCols(L) = D;
        CVec x = E.completeOrthogonalDecomposition().solve(y);
        c = x.head(k);
        gamma = x.tail(L);
        CVec r = y - E * x;
        resid = r.norm();
        if (resid <= 1e-13 * yscale) return true;
        if (resid > 0.999999 * prev && round > 4) break;
        prev = std::min(prev, resid);

        const double half = (N - 1) / 2.0;
        for (int i = 0; i < k; ++i) {
            CVec a = E.col(i);
            CVec da(N), dda(N);
            for (int k2 = 0; k2 < N; ++k2) {
                double w = 2.0 * M_PI * (k2 - half);
                da(k2) = cxd(0, w) * a(k2);
                dda(k2) = -w * w * a(k2);
            }
            const cxd ci = c(i);
            double J1 = -(std::conj(ci) * (da.dot(r))).real();
            double J2 = std::norm(ci) * da.squaredNorm() - (std::conj(ci) * (dda.dot(r))).real();
            if (J2 <= 0) J2 = std::norm(ci) * da.squaredNorm() + 1e-300;
            double df = std::clamp(-J1 / J2, -0.25 / N, 0.25 / N);
            freqs[i] = canonical_frequency(freqs[i] + df);
        }
    }
    return resid <= 1e-9 * yscale;
}

std::vector<double> esprit_frequencies(const CMat& T, int k) {
    const int N = static_cast<int>(T.rows());
    Eigen::SelfAdjointEigenSolver<CMat> es(T);
    CMat Us = es.eigenvectors().rightCols(k);
    CMat M1 = Us.topRows(N - 1);
    CMat M2 = Us.bottomRows(N - 1);
    CMat X = M1.completeOrthogonalDecomposition().solve(M2);
    Eigen::ComplexEigenSolver<CMat> ces(X);
    std::vector<double> freqs;
    for (int i = 0; i < k; ++i)
        freqs.push_back(canonical_frequency(std::arg(ces.eigenvalues()(i)) / (2.0 * M_PI)));
    std::sort(freqs.begin(), freqs.end());
    return freqs;
}

}  // namespace

Hyperparams select_hyperparams(int N, double sigma, double expected_gamma_energy,
                               double tau_scale, double lam_scale, double ed_headroom) {
    if (sigma < 0) throw std::invalid_argument("select_hyperparams: sigma must be >= 0");
    if (!(expected_gamma_energy > 0))
        throw std::invalid_argument("select_hyperparams: expected_gamma_energy must be > 0");
    Hyperparams hp;
    hp.tau = tau_scale * sigma * std::sqrt(static_cast<double>(N) * std::log(static_cast<double>(N)));
    hp.lam = lam_scale * static_cast<double>(N) * sigma * sigma / expected_gamma_energy;
    hp.e_d = expected_gamma_energy * ed_headroom;
    return hp;
}

HalsSolution solve_p1(const CVec& y_avg, const CMat& D, const Hyperparams& hp,
                      const SolverOptions& opts) {
    return solve_p1_impl(y_avg, D, hp.tau, hp.lam, opts, nullptr);
}

HalsSolution solve_p2(const CVec& y_avg, const CMat& D, double tau, double e_d,
                      const SolverOptions& opts) {
    const int N = static_cast<int>(y_avg.size());
    const int L = static_cast<int>(D.cols());
    if (!(tau > 0)) throw std::invalid_argument("solve_p2: tau must be > 0");
    if (e_d < 0) throw std::invalid_argument("solve_p2: e_d must be >= 0");

    if (e_d == 0.0) {
        // gamma pinned to zero: vanilla atomic norm denoising
        HalsSolution sol = solve_p1_impl(y_avg, CMat(N, 0), tau, 0.0, opts, nullptr);
        sol.gamma = CVec::Zero(L);
        sol.lam = 0.0;
        sol.message = "e_d = 0: vanilla ANM (gamma pinned to zero)";
        return sol;
    }

    double lam_lo = 1e-8 * N;
    double lam_hi = 1e8 * N;
    std::ostringstream traj;

    HalsSolution lo = solve_p1_impl(y_avg, D, tau, lam_lo, opts, nullptr);
    double e_lo = lo.gamma.squaredNorm();
    traj << "lam=" << lam_lo << " |gamma|^2=" << e_lo;
    if (e_lo <= e_d * 1.01) {
        lo.message = "e_d constraint inactive at smallest lam in bracket";
        return lo;
    }

    std::vector<double> warm = lo.h_s.size() ? support_from_residual(lo.z, tau, opts.grid_size)
                                             : std::vector<double>{};
    auto probe = [&](double lam) {
        HalsSolution s = solve_p1_impl(y_avg, D, tau, lam, opts, &warm);
        warm = support_from_residual(s.z, tau, opts.grid_size);
        traj << "; lam=" << lam << " |gamma|^2=" << s.gamma.squaredNorm();
        return s;
    };

    HalsSolution hi = probe(lam_hi);
    double e_hi = hi.gamma.squaredNorm();
    if (e_hi > e_d) {
        hi.converged = false;
        hi.message = "solve_p2: bisection bracket failure; trajectory: " + traj.str();
        return hi;
    }
    if (e_hi >= e_d * 0.99) return hi;

    HalsSolution best = std::move(hi);
    for (int it = 0; it < 80; ++it) {
        double lam_mid = std::sqrt(lam_lo * lam_hi);
        HalsSolution mid = probe(lam_mid);
        double e_mid = mid.gamma.squaredNorm();
        if (std::abs(e_mid - e_d) <= 0.01 * e_d) return mid;
        if (e_mid > e_d)
            lam_lo = lam_mid;
        else {
            lam_hi = lam_mid;
            best = std::move(mid);
        }
        if (lam_hi / lam_lo < 1.0 + 1e-12) break;
    }
    best.message = "solve_p2: energy tolerance not met in bisection; trajectory: " + traj.str();
    return best;
}

HalsSolution solve_p0(const CVec& y_avg, const CMat& D, const SolverOptions& opts) {
    const int N = static_cast<int>(y_avg.size());
    const int L = static_cast<int>(D.cols());
    if (L > 0 && D.rows() != y_avg.size())
        throw std::invalid_argument("solve_p0: dimension mismatch between y_avg and D");

    SolverOptions loc = opts;
    const double loc_abs = opts.polish ? std::max(opts.eps_abs, 1e-6) : opts.eps_abs;
    const double loc_rel = opts.polish ? std::max(opts.eps_rel, opts.localization_tol) : opts.eps_rel;
    if (opts.polish) loc.max_iters = std::min(opts.max_iters, 3 * opts.admm_budget);
    AdmmResult a = run_admm(y_avg, D, 1.0, 0.0, true, loc, loc_abs, loc_rel, "solve_p0");

    auto finalize_admm = [&](AdmmResult&& res, const char* note) {
        HalsSolution sol;
        sol.h_s = std::move(res.h_s);
        sol.gamma = std::move(res.gamma);
        sol.iota = std::move(res.iota);
        sol.t = res.t;
        sol.z = y_avg - sol.h_s;
        if (L > 0) sol.z -= D * sol.gamma;
        sol.primal_obj = sol.atomic_value();
        sol.dual_obj = sol.primal_obj;
        sol.gap = 0.0;
        sol.tau = 1.0;
        sol.lam = 0.0;
        sol.iters = res.iters;
        sol.converged = res.converged;
        sol.message = note;
        return sol;
    };

    if (!opts.polish) return finalize_admm(std::move(a), "");

    const double admm_value = 0.5 * (a.t + a.iota(0).real());
    CMat T = toeplitz_from_gen(a.iota);
    Eigen::SelfAdjointEigenSolver<CMat> es(T);
    const double lmax = es.eigenvalues().size() ? es.eigenvalues().maxCoeff() : 0.0;
    int k0 = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > std::max(1e-3 * lmax, 1e-9 * (1.0 + lmax))) ++k0;
    k0 = std::min(k0, (N - 1) / 2);

    for (int k : {k0, k0 - 1, k0 + 1}) {
        if (k < 0 || k > (N - 1) / 2) continue;
        std::vector<double> freqs = k > 0 ? esprit_frequencies(T, k) : std::vector<double>{};
        CVec c, gamma;
        double resid = 0.0;
        if (!nls_exact_fit(y_avg, D, freqs, c, gamma, resid)) continue;

        // prune vanished atoms and refit once
        double cmax = 0.0;
        for (int i = 0; i < c.size(); ++i) cmax = std::max(cmax, std::abs(c(i)));
        std::vector<double> kept;
        for (int i = 0; i < c.size(); ++i)
            if (std::abs(c(i)) > 1e-9 * cmax) kept.push_back(freqs[i]);
        if (kept.size() != freqs.size()) {
            freqs = kept;
            if (!nls_exact_fit(y_avg, D, freqs, c, gamma, resid)) continue;
        }

        double l1 = 0.0;
        for (int i = 0; i < c.size(); ++i) l1 += std::abs(c(i));
        if (l1 > admm_value + 0.2 * (1.0 + std::abs(admm_value))) continue;

        HalsSolution sol;
        sol.h_s = CVec::Zero(N);
        sol.iota = CVec::Zero(N);
        for (size_t i = 0; i < freqs.size(); ++i) {
            sol.h_s += c(static_cast<int>(i)) * build_steering(freqs[i], N);
            sol.iota += std::abs(c(static_cast<int>(i))) * atom_generator(freqs[i], N);
        }
        sol.t = l1;
        sol.gamma = gamma;
        sol.z = y_avg - sol.h_s;
        if (L > 0) sol.z -= D * sol.gamma;
        sol.primal_obj = sol.atomic_value();
        sol.dual_obj = sol.primal_obj;
        sol.gap = 0.0;
        sol.tau = 1.0;
        sol.lam = 0.0;
        sol.iters = a.iters;
        sol.converged = true;
        return sol;
    }

    AdmmResult b = run_admm(y_avg, D, 1.0, 0.0, true, opts, opts.eps_abs, opts.eps_rel, "solve_p0");
    b.iters += a.iters;
    return finalize_admm(std::move(b), "exact-fit refinement rejected; strict ADMM iterate returned");
}

OptimalityDiagnostics check_optimality(const HalsSolution& sol, const CVec& y_avg,
                                       const CMat& D, const Hyperparams& hp) {
    OptimalityDiagnostics d;
    CVec z = y_avg - sol.h_s;
    if (D.cols() > 0) z -= D * sol.gamma;

    d.dual_norm_value = dual_atomic_norm(z);
    d.dual_excess_rel = std::max(0.0, d.dual_norm_value - hp.tau) / hp.tau;

    if (D.cols() > 0) {
        CVec r = D.adjoint() * z - hp.lam * sol.gamma;
        d.ridge_residual = r.norm();
        d.ridge_residual_rel =
            d.ridge_residual / std::max({hp.tau, hp.lam * sol.gamma.norm(), 1e-300});
    }

    const double av = sol.atomic_value();
    const double lhs = (sol.h_s.dot(z)).real();  // Re<z, h_s>
    d.alignment_residual = std::abs(lhs - hp.tau * av);
    d.alignment_residual_rel =
        av > 0 ? d.alignment_residual / (hp.tau * av)
               : (d.alignment_residual > 0 ? d.alignment_residual / hp.tau : 0.0);
    return d;
}

double dual_objective(const CVec& z, const CVec& y_avg, const CMat& D, double lam) {
    double v = 0.5 * y_avg.squaredNorm() - 0.5 * (y_avg - z).squaredNorm();
    if (D.cols() > 0 && lam > 0 && std::isfinite(lam))
        v -= (D.adjoint() * z).squaredNorm() / (2.0 * lam);
    return v;
}

double duality_gap(const HalsSolution& sol, const CVec& y_avg, const CMat& D) {
    return sol.primal_obj - dual_objective(sol.z, y_avg, D, sol.lam);
}

double dual_atomic_norm(const CVec& z, int grid_size) {
    if (z.size() == 0 || z.norm() == 0.0) return 0.0;
    return detail::max_abs_q(z, grid_size).value;
}

TuneResult tune_tau(const CVec& y_avg, const CMat& D, int target_m, double e_d, double sigma,
                    const SolverOptions& opts) {
    if (target_m < 0) throw std::invalid_argument("tune_tau: target_m must be >= 0");
    if (!(sigma > 0)) throw std::invalid_argument("tune_tau: sigma must be > 0");
    const int N = static_cast<int>(y_avg.size());
    const double tau0 = sigma * std::sqrt(static_cast<double>(N) * std::log(static_cast<double>(N)));

    struct Probe {
        double tau;
        int count;
        double resid;
    };
    std::vector<Probe> probes;
    TuneResult best;
    best.hp.e_d = e_d;
    double best_score = std::numeric_limits<double>::infinity();
    std::ostringstream log;

    for (int j = 0, step = 0; step < 20; ++step) {
        const double tau = tau0 * std::pow(1.5, j);
        HalsSolution sol = solve_p2(y_avg, D, tau, e_d, opts);
        std::vector<double> sup = extract_support(sol.z, tau, opts.grid_size);
        auto [h_db, amps] = debias(y_avg, D, sol.gamma, sup);
        std::vector<bool> kept = threshold_support(amps, sol.gamma);
        int count = 0;
        for (bool b : kept) count += b ? 1 : 0;
        const double resid = sol.z.norm();
        probes.push_back({tau, count, resid});
        log << "tau=" << tau << " |T_th|=" << count << " |z|=" << resid << "\n";

        const double score = std::abs(count - target_m) * 1e12 + resid;
        if (score < best_score) {
            best_score = score;
            best.hp.tau = tau;
            best.hp.lam = sol.lam;
            best.achieved_support = count;
            best.matched = (count == target_m);
        }
        // alternate up/down around tau0: 0, +1, -1, +2, -2, ...
        j = (j >= 0) ? -(j + 1) : -j;
        if (best.matched && std::abs(j) > 3) break;
    }

    std::sort(probes.begin(), probes.end(), [](const Probe& a, const Probe& b) { return a.tau < b.tau; });
    for (size_t i = 1; i < probes.size(); ++i)
        if (probes[i].count > probes[i - 1].count)
            log << "monotonicity violation: tau " << probes[i - 1].tau << "->" << probes[i].tau
                << " support " << probes[i - 1].count << "->" << probes[i].count << "\n";
    best.log = log.str();
    return best;
}

}  // namespace hsdest
