// Copyright 2026 The graphcode authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRAPHCODE_MEMORY_HPP
#define GRAPHCODE_MEMORY_HPP

/// Quantum-memory simulation: a one-parameter semigroup of Weyl-diagonal
/// decoherence channels, the decoherence time under the channel-distance
/// proxy, and the concatenated decode/re-encode memory.
///
/// The canonical model is per-site uniform Weyl noise with rate lambda:
///   p_0(t)  = (1 + (d^2-1) e^{-lambda t}) / d^2
///   p_xi(t) = (1 - e^{-lambda t}) / d^2          for xi != 0,
/// tensored over sites; it satisfies T_s T_t = T_{s+t} exactly. The
/// truncated variant conditions the distribution on weight <= t_max and is
/// used for exact-correction demonstrations.

#include <limits>

#include "channel.hpp"

namespace graphcode {

/// A Weyl-diagonal (generalized Pauli) channel: probabilities over the
/// discrete phase space, indexed by p_index * d^n + q_index.
struct NoiseModel {
    Sites sites;
    std::vector<double> probs;

    explicit NoiseModel(Sites s) : sites(std::move(s)), probs(sites.dim() * sites.dim(), 0.0) {}

    static NoiseModel identity(const Sites &s) {
        NoiseModel n(s);
        n.probs[0] = 1.0;
        return n;
    }

    size_t phase_dim() const {
        return probs.size();
    }

    PhaseVec point(size_t idx) const {
        size_t dim = sites.dim();
        return PhaseVec(index_to_fvec(idx / dim, sites), index_to_fvec(idx % dim, sites));
    }

    double total() const {
        double s = 0;
        for (double p : probs) {
            s += p;
        }
        return s;
    }
};

/// Conjugation rho -> w(xi) rho w(xi)^*, using the monomial structure of
/// Weyl operators: O(dim^2) instead of a dense sandwich.
inline Mat weyl_conjugate(const PhaseVec &xi, const Sites &reg, const Mat &rho) {
    uint32_t d = reg.d;
    size_t n = reg.n(), dim = reg.dim();
    std::vector<size_t> src(dim);
    std::vector<cplx> phase(dim);
    std::vector<uint32_t> cfg(n);
    for (size_t u = 0; u < dim; u++) {
        index_to_config(u, n, d, cfg.data());
        uint32_t e = 0;
        for (size_t k = 0; k < n; k++) {
            e = fp_add(e, fp_mul(xi.p.v[k], cfg[k], d), d);
            cfg[k] = fp_add(cfg[k], xi.q.v[k], d);
        }
        src[u] = config_to_index(cfg.data(), n, d);
        phase[u] = unit_root(e, d);
    }
    Mat out(dim, dim);
    for (size_t u = 0; u < dim; u++) {
        for (size_t v = 0; v < dim; v++) {
            out.at(u, v) = phase[u] * std::conj(phase[v]) * rho.at(src[u], src[v]);
        }
    }
    return out;
}

/// Schroedinger action of the Weyl-diagonal channel.
inline Mat apply_noise(const NoiseModel &n, const Mat &rho) {
    Mat out(rho.nr, rho.nc);
    for (size_t idx = 0; idx < n.phase_dim(); idx++) {
        if (n.probs[idx] <= 0) {
            continue;
        }
        Mat term = weyl_conjugate(n.point(idx), n.sites, rho);
        for (size_t k = 0; k < out.a.size(); k++) {
            out.a[k] += n.probs[idx] * term.a[k];
        }
    }
    return out;
}

inline QChannel noise_to_channel(const NoiseModel &n) {
    std::vector<std::pair<PhaseVec, double>> probs;
    for (size_t idx = 0; idx < n.phase_dim(); idx++) {
        if (n.probs[idx] > 0) {
            probs.emplace_back(n.point(idx), n.probs[idx]);
        }
    }
    return weyl_diagonal_noise(n.sites, probs);
}

/// Weyl operators are eigenoperators of a Weyl-diagonal channel; the
/// eigenvalue at xi is sum_eta p_eta eps(p_xi.q_eta - p_eta.q_xi).
inline std::vector<cplx> weyl_eigenvalues(const NoiseModel &n) {
    size_t dim = n.sites.dim();
    uint32_t d = n.sites.d;
    size_t pd = n.phase_dim();
    std::vector<cplx> out(pd);
    for (size_t xi_idx = 0; xi_idx < pd; xi_idx++) {
        PhaseVec xi = n.point(xi_idx);
        cplx acc = 0;
        for (size_t eta_idx = 0; eta_idx < pd; eta_idx++) {
            if (n.probs[eta_idx] == 0) {
                continue;
            }
            PhaseVec eta = n.point(eta_idx);
            uint32_t e = fp_sub(dot(xi.p, eta.q), dot(eta.p, xi.q), d);
            acc += n.probs[eta_idx] * unit_root(e, d);
        }
        out[xi_idx] = acc;
        (void)dim;
    }
    return out;
}

/// Channel-distance proxy between two Weyl-diagonal channels: the max
/// Weyl-basis deviation (exactly max |lambda1 - lambda2|) plus the exact
/// l1 distance of the probability vectors.
struct NoiseDistance {
    double weyl_deviation = 0;
    double l1 = 0;
};

inline NoiseDistance noise_distance(const NoiseModel &a, const NoiseModel &b) {
    if (!(a.sites == b.sites)) {
        throw std::invalid_argument("noise models live on different registers");
    }
    NoiseDistance out;
    auto la = weyl_eigenvalues(a), lb = weyl_eigenvalues(b);
    for (size_t k = 0; k < la.size(); k++) {
        out.weyl_deviation = std::max(out.weyl_deviation, std::abs(la[k] - lb[k]));
        out.l1 += std::abs(a.probs[k] - b.probs[k]);
    }
    return out;
}

/// Composition of Weyl-diagonal channels: convolution of the probability
/// vectors over phase-space addition (the commutation phases cancel).
inline NoiseModel compose(const NoiseModel &second, const NoiseModel &first) {
    if (!(second.sites == first.sites)) {
        throw std::invalid_argument("noise models live on different registers");
    }
    size_t dim = first.sites.dim();
    uint32_t d = first.sites.d;
    NoiseModel out(first.sites);
    for (size_t i = 0; i < first.phase_dim(); i++) {
        if (first.probs[i] == 0) {
            continue;
        }
        PhaseVec xi = first.point(i);
        for (size_t j = 0; j < second.phase_dim(); j++) {
            if (second.probs[j] == 0) {
                continue;
            }
            PhaseVec eta = second.point(j);
            PhaseVec sum = xi + eta;
            size_t idx = fvec_to_index(sum.p, d) * dim + fvec_to_index(sum.q, d);
            out.probs[idx] += first.probs[i] * second.probs[j];
        }
    }
    return out;
}

struct DecoherenceModel {
    Sites sites;
    double lambda = 0.0;  // per-site rate, 1/time
    bool truncated = false;
    uint32_t max_weight = 1;  // only used when truncated
};

/// T_t of the semigroup; truncation conditions on weight <= max_weight.
inline NoiseModel semigroup_channel(const DecoherenceModel &model, double t) {
    if (t < 0) {
        throw std::invalid_argument("negative time");
    }
    uint32_t d = model.sites.d;
    double decay = std::exp(-model.lambda * t);
    double d2 = double(d) * double(d);
    double p0 = (1.0 + (d2 - 1.0) * decay) / d2;
    double prest = (1.0 - decay) / d2;
    NoiseModel out(model.sites);
    size_t dim = model.sites.dim();
    for (size_t pi = 0; pi < dim; pi++) {
        FVec p = index_to_fvec(pi, model.sites);
        for (size_t qi = 0; qi < dim; qi++) {
            FVec q = index_to_fvec(qi, model.sites);
            double prob = 1.0;
            uint32_t w = 0;
            for (size_t k = 0; k < model.sites.n(); k++) {
                bool hit = p.v[k] != 0 || q.v[k] != 0;
                prob *= hit ? prest : p0;
                w += hit;
            }
            if (model.truncated && w > model.max_weight) {
                prob = 0;
            }
            out.probs[pi * dim + qi] = prob;
        }
    }
    if (model.truncated) {
        double total = out.total();
        if (total <= 0) {
            throw std::runtime_error("truncated noise model has empty support");
        }
        for (auto &p : out.probs) {
            p /= total;
        }
    }
    return out;
}

/// Largest time s with distance(T_s, id) <= eps, to relative precision
/// 1e-6 by bisection; infinity when the threshold is never reached.
inline double decoherence_time(const DecoherenceModel &model, double eps, double rel_prec = 1e-6) {
    if (eps <= 0 || eps >= 2) {
        throw std::invalid_argument("threshold must lie in (0, 2)");
    }
    NoiseModel id = NoiseModel::identity(model.sites);
    auto dist = [&](double t) {
        return noise_distance(semigroup_channel(model, t), id).weyl_deviation;
    };
    double hi = 1.0;
    int guard = 0;
    while (dist(hi) < eps) {
        hi *= 2;
        if (++guard > 200) {
            return std::numeric_limits<double>::infinity();
        }
    }
    double lo = 0;
    while (hi - lo > rel_prec * hi) {
        double mid = 0.5 * (lo + hi);
        (dist(mid) <= eps ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct MemoryRun {
    double t_c = 0;
    uint64_t cycles = 0;
    double threshold = 0;
    std::vector<double> residuals;   // accumulated deviation from identity after each cycle
    double free_decay_distance = 0;  // distance(T_{cycles * t_c}, id) without correction
    bool all_within_threshold = false;
};

/// Concatenated memory: k cycles of encode, decohere for t_c, decode.
/// The accumulated channel is evaluated on the full input operator basis
/// (probe operators pushed through the cycles), not as a superoperator.
inline MemoryRun simulate_memory(const Scheme &s, const DecoherenceModel &model, double t_c, uint64_t cycles,
                                 double threshold = 1e-8) {
    if (!(model.sites == Sites(s.g.outputs, s.g.d))) {
        throw std::invalid_argument("decoherence model must act on the scheme's output register");
    }
    if (cycles < 1) {
        throw std::invalid_argument("need at least one cycle");
    }
    MemoryRun run;
    run.t_c = t_c;
    run.cycles = cycles;
    run.threshold = threshold;

    QChannel enc = encoder_channel(s);
    QChannel dec = decoder_channel(s);
    NoiseModel noise = semigroup_channel(model, t_c);

    Sites in = s.input_sites();
    size_t dim = in.dim();
    std::vector<Mat> probes, targets;
    probes.reserve(dim * dim);
    for (size_t pi = 0; pi < dim; pi++) {
        for (size_t qi = 0; qi < dim; qi++) {
            PhaseVec xi(index_to_fvec(pi, in), index_to_fvec(qi, in));
            probes.push_back(weyl_op(xi).m);
            targets.push_back(probes.back());
        }
    }
    double wnorm = std::sqrt(double(dim));
    run.residuals.reserve(cycles);
    for (uint64_t k = 0; k < cycles; k++) {
        double worst = 0;
        for (size_t b = 0; b < probes.size(); b++) {
            probes[b] = dec.apply(apply_noise(noise, enc.apply(probes[b])));
            worst = std::max(worst, mat_distance(probes[b], targets[b]) / wnorm);
        }
        run.residuals.push_back(worst);
    }
    NoiseModel free_decay = semigroup_channel(model, t_c * double(cycles));
    run.free_decay_distance = noise_distance(free_decay, NoiseModel::identity(model.sites)).weyl_deviation;
    run.all_within_threshold = true;
    for (double r : run.residuals) {
        run.all_within_threshold = run.all_within_threshold && r <= threshold;
    }
    return run;
}

struct StoringReport {
    double storing_time = 0;
    double decoherence_time = 0;  // infinity when the threshold is unreachable
    double ratio = 0;             // storing / decoherence
    double best_t_c = 0;
    uint64_t best_cycles = 0;
    bool budget_ceiling = false;  // the scan never left the threshold
};

/// Scans cycle times and cycle counts for the largest total storage time
/// whose accumulated residual stays within eps.
inline StoringReport storing_time(const Scheme &s, const DecoherenceModel &model, double eps,
                                  const std::vector<double> &t_c_grid, uint64_t max_cycles) {
    StoringReport rep;
    rep.decoherence_time = decoherence_time(model, eps);
    bool every_point_ok = true;
    for (double t_c : t_c_grid) {
        MemoryRun run = simulate_memory(s, model, t_c, max_cycles, eps);
        uint64_t ok_cycles = 0;
        for (uint64_t k = 0; k < run.cycles; k++) {
            if (run.residuals[k] <= eps) {
                ok_cycles = k + 1;
            } else {
                every_point_ok = false;
                break;
            }
        }
        double total = double(ok_cycles) * t_c;
        if (total > rep.storing_time) {
            rep.storing_time = total;
            rep.best_t_c = t_c;
            rep.best_cycles = ok_cycles;
        }
    }
    rep.budget_ceiling = every_point_ok;
    rep.ratio = std::isinf(rep.decoherence_time) ? 0.0 : rep.storing_time / rep.decoherence_time;
    return rep;
}

}  // namespace graphcode

#endif
