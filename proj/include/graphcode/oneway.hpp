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

#ifndef GRAPHCODE_ONEWAY_HPP
#define GRAPHCODE_ONEWAY_HPP

/// Measurement-based realisation of the encoding and decoding channels:
/// elementary steps (local preparation, one step of graph dynamics, local
/// x/z measurements, outcome-conditioned phase-space translations), program
/// assembly for the encoder / syndrome measurement / decoder, a branch
/// compiler that enumerates all measurement outcomes exactly, and numerical
/// verification that the compiled programs reproduce the direct channel
/// constructions.
///
/// Classical devices are stored as affine maps over F_d (plus the syndrome
/// table for the decode lookups), never as opaque closures, so programs
/// serialize bit-exactly.

#include <map>
#include <memory>

#include "channel.hpp"

namespace graphcode {

enum class StepKind { Prepare, Dynamics, MeasureX, MeasureZ, Translate };

struct Device {
    enum class Kind { Affine, SyndromeLookup, DecodeLookup };

    Kind kind = Kind::Affine;
    std::vector<std::string> records;  // measurement records consumed, in order
    Labels targets;                    // sites receiving the translation

    // Affine: xi = (momentum_map m, position_map m) over the concatenated
    // record vector m.
    FMat momentum_map, position_map;

    // SyndromeLookup: syndrome q^L = -m^L, correction xi^I = table(q^L).
    //
    // DecodeLookup over (m^J, m^L): syndrome q^L = syndrome_map m^J - m^L,
    // (p,q) = table(q^L), translation (p, q + shift_map m^J); the applied
    // unitary carries the scalar eps(-p . shift_map m^J) which makes the
    // fused Kraus operators match the two-device route exactly.
    FMat syndrome_map;  // rows L, cols J
    FMat shift_map;     // rows I, cols J

    friend bool operator==(const Device &a, const Device &b) {
        return a.kind == b.kind && a.records == b.records && a.targets == b.targets &&
               a.momentum_map == b.momentum_map && a.position_map == b.position_map &&
               a.syndrome_map == b.syndrome_map && a.shift_map == b.shift_map;
    }
};

/// A conditional unitary: scalar phase times an adjoint Weyl translation.
struct Translation {
    uint32_t phase_exponent = 0;  // applied unitary is eps(phase) * w(xi)^*
    PhaseVec xi;
};

inline Translation device_output(const Device &dev, const SyndromeTable *table,
                                 const std::map<std::string, FVec> &records, uint32_t d) {
    auto fetch = [&](const std::string &name) -> const FVec & {
        auto it = records.find(name);
        if (it == records.end()) {
            throw std::invalid_argument("device consumes unrecorded outcome '" + name + "'");
        }
        return it->second;
    };
    Translation out;
    switch (dev.kind) {
        case Device::Kind::Affine: {
            FVec m = fetch(dev.records.at(0));
            for (size_t k = 1; k < dev.records.size(); k++) {
                m = concat(m, fetch(dev.records[k]));
            }
            FVec mm(dev.momentum_map.cols, m.v, d);
            out.xi = PhaseVec(dev.momentum_map * mm, dev.position_map * mm);
            break;
        }
        case Device::Kind::SyndromeLookup: {
            if (!table) {
                throw std::invalid_argument("lookup device without a syndrome table");
            }
            FVec m = fetch(dev.records.at(0));
            FVec q_l(table->l_labels, (-m).v, d);
            out.xi = table->correction(q_l);
            break;
        }
        case Device::Kind::DecodeLookup: {
            if (!table) {
                throw std::invalid_argument("lookup device without a syndrome table");
            }
            FVec m_j = fetch(dev.records.at(0));
            FVec m_l = fetch(dev.records.at(1));
            FVec mj(dev.syndrome_map.cols, m_j.v, d);
            FVec q_l = dev.syndrome_map * mj - FVec(table->l_labels, m_l.v, d);
            PhaseVec corr = table->correction(q_l);
            FVec shift = dev.shift_map * mj;
            out.xi = PhaseVec(corr.p, corr.q + shift);
            out.phase_exponent = fp_neg(dot(corr.p, shift), d);
            break;
        }
    }
    return out;
}

struct Step {
    StepKind kind = StepKind::Prepare;
    Labels sites;        // prepare / measure sites
    std::string record;  // measurement record name
    FMat graph;          // dynamics interaction pattern
    int sign = +1;       // dynamics sign
    Device device;       // translate

    friend bool operator==(const Step &a, const Step &b) {
        return a.kind == b.kind && a.sites == b.sites && a.record == b.record && a.graph == b.graph &&
               a.sign == b.sign && a.device == b.device;
    }
};

struct OneWayProgram {
    uint32_t d = 2;
    Labels ambient;  // global site order; all registers are subsets of it
    Labels input_register;
    Labels output_register;
    std::vector<Step> steps;
    std::shared_ptr<const SyndromeTable> table;  // bound for lookup devices
    uint64_t table_ref = 0;                      // graph hash of the table

    friend bool operator==(const OneWayProgram &a, const OneWayProgram &b) {
        return a.d == b.d && a.ambient == b.ambient && a.input_register == b.input_register &&
               a.output_register == b.output_register && a.steps == b.steps && a.table_ref == b.table_ref;
    }
};

/// Static well-formedness: sites exist and are tracked through the steps,
/// translations only consume already-recorded outcomes, and the final
/// quantum register is the declared output.
inline void validate_program(const OneWayProgram &prog) {
    auto in_ambient = [&](const Labels &ls) {
        for (const auto &l : ls) {
            label_index(prog.ambient, l);
        }
    };
    in_ambient(prog.input_register);
    in_ambient(prog.output_register);
    Labels live = prog.input_register;
    std::vector<std::string> seen_records;
    auto contains = [](const Labels &ls, const Label &l) {
        return std::find(ls.begin(), ls.end(), l) != ls.end();
    };
    for (const Step &st : prog.steps) {
        switch (st.kind) {
            case StepKind::Prepare:
                in_ambient(st.sites);
                for (const auto &l : st.sites) {
                    if (contains(live, l)) {
                        throw std::invalid_argument("prepare collides with live site '" + l + "'");
                    }
                    live.push_back(l);
                }
                break;
            case StepKind::Dynamics:
                for (const auto &l : st.graph.rows) {
                    if (!contains(live, l)) {
                        throw std::invalid_argument("dynamics touches absent site '" + l + "'");
                    }
                }
                break;
            case StepKind::MeasureX:
            case StepKind::MeasureZ: {
                Labels rest;
                for (const auto &l : live) {
                    if (!contains(st.sites, l)) {
                        rest.push_back(l);
                    }
                }
                if (live.size() != rest.size() + st.sites.size()) {
                    throw std::invalid_argument("measurement of absent site");
                }
                live = rest;
                seen_records.push_back(st.record);
                break;
            }
            case StepKind::Translate:
                for (const auto &r : st.device.records) {
                    if (std::find(seen_records.begin(), seen_records.end(), r) == seen_records.end()) {
                        throw std::invalid_argument("feed-forward before its source measurement: '" + r + "'");
                    }
                }
                for (const auto &l : st.device.targets) {
                    if (!contains(live, l)) {
                        throw std::invalid_argument("translation targets absent site '" + l + "'");
                    }
                }
                break;
        }
    }
    // Registers are kept in ambient order throughout, so direct comparison
    // is the correct final check.
    if (live != prog.output_register) {
        throw std::invalid_argument("program does not end on the declared output register");
    }
}

// ---------------------------------------------------------------------------
// Branch compiler: a small register simulator.
// ---------------------------------------------------------------------------

namespace detail {

/// Quantum register during simulation: `sites` in ambient order; matrix
/// rows are configurations of `sites`, columns fixed to the program input.
struct RegState {
    Labels sites;
    uint32_t d = 2;
    Mat m;

    size_t dim() const {
        size_t out = 1;
        for (size_t k = 0; k < sites.size(); k++) {
            out *= d;
        }
        return out;
    }
};

inline std::vector<size_t> positions_of(const Labels &inside, const Labels &what) {
    std::vector<size_t> out;
    out.reserve(what.size());
    for (const auto &l : what) {
        out.push_back(label_index(inside, l));
    }
    return out;
}

inline Labels merge_in_ambient_order(const Labels &ambient, const Labels &a, const Labels &b) {
    Labels out;
    for (const auto &l : ambient) {
        bool in_a = std::find(a.begin(), a.end(), l) != a.end();
        bool in_b = std::find(b.begin(), b.end(), l) != b.end();
        if (in_a || in_b) {
            out.push_back(l);
        }
    }
    return out;
}

inline void apply_prepare(RegState &st, const Labels &ambient, const Labels &new_sites) {
    Labels merged = merge_in_ambient_order(ambient, st.sites, new_sites);
    RegState next{merged, st.d, Mat()};
    size_t nd = next.dim();
    next.m = Mat(nd, st.m.nc);
    double amp = 1.0;
    for (size_t k = 0; k < new_sites.size(); k++) {
        amp /= std::sqrt(double(st.d));
    }
    auto old_pos = positions_of(merged, st.sites);
    size_t n = merged.size();
    std::vector<uint32_t> cfg(n), old_cfg(st.sites.size());
    for (size_t r = 0; r < nd; r++) {
        index_to_config(r, n, st.d, cfg.data());
        for (size_t k = 0; k < old_pos.size(); k++) {
            old_cfg[k] = cfg[old_pos[k]];
        }
        size_t src = config_to_index(old_cfg.data(), old_cfg.size(), st.d);
        for (size_t c = 0; c < st.m.nc; c++) {
            next.m.at(r, c) = amp * st.m.at(src, c);
        }
    }
    st = std::move(next);
}

inline void apply_dynamics(RegState &st, const FMat &graph, int sign) {
    FMat g = sign >= 0 ? graph : -graph;
    require_symmetric_zero_diagonal(g);
    auto pos = positions_of(st.sites, g.rows);
    // edge list once, evaluated per row configuration
    struct Edge {
        size_t a, b;
        uint32_t w;
    };
    std::vector<Edge> edges;
    for (size_t r = 0; r < g.nrows(); r++) {
        for (size_t c = r + 1; c < g.ncols(); c++) {
            if (g.at(r, c) != 0) {
                edges.push_back({pos[r], pos[c], g.at(r, c)});
            }
        }
    }
    size_t n = st.sites.size(), nd = st.dim();
    std::vector<uint32_t> cfg(n);
    for (size_t r = 0; r < nd; r++) {
        index_to_config(r, n, st.d, cfg.data());
        uint32_t e = 0;
        for (const Edge &ed : edges) {
            e = fp_add(e, fp_mul(ed.w, fp_mul(cfg[ed.a], cfg[ed.b], st.d), st.d), st.d);
        }
        if (e == 0) {
            continue;
        }
        cplx f = unit_root(e, st.d);
        for (size_t c = 0; c < st.m.nc; c++) {
            st.m.at(r, c) *= f;
        }
    }
}

/// x-basis measurement with outcome p: Kraus (z(p) Phi)^*, a contraction
/// over the measured sites weighted by d^{-k/2} eps(-p.q).
inline void apply_measure_x(RegState &st, const Labels &sites, const FVec &outcome) {
    Labels rest;
    for (const auto &l : st.sites) {
        if (std::find(sites.begin(), sites.end(), l) == sites.end()) {
            rest.push_back(l);
        }
    }
    auto meas_pos = positions_of(st.sites, sites);
    auto rest_pos = positions_of(st.sites, rest);
    RegState next{rest, st.d, Mat()};
    size_t nd = next.dim();
    next.m = Mat(nd, st.m.nc);
    double amp = 1.0;
    for (size_t k = 0; k < sites.size(); k++) {
        amp /= std::sqrt(double(st.d));
    }
    size_t n = st.sites.size();
    size_t meas_dim = 1;
    for (size_t k = 0; k < sites.size(); k++) {
        meas_dim *= st.d;
    }
    std::vector<uint32_t> cfg(n), rest_cfg(rest.size()), meas_cfg(sites.size());
    for (size_t r = 0; r < nd; r++) {
        index_to_config(r, rest.size(), st.d, rest_cfg.data());
        for (size_t k = 0; k < rest_pos.size(); k++) {
            cfg[rest_pos[k]] = rest_cfg[k];
        }
        for (size_t mi = 0; mi < meas_dim; mi++) {
            index_to_config(mi, sites.size(), st.d, meas_cfg.data());
            uint32_t e = 0;
            for (size_t k = 0; k < meas_pos.size(); k++) {
                cfg[meas_pos[k]] = meas_cfg[k];
                e = fp_add(e, fp_mul(outcome.v[k], meas_cfg[k], st.d), st.d);
            }
            cplx f = amp * unit_root(fp_neg(e, st.d), st.d);
            size_t src = config_to_index(cfg.data(), n, st.d);
            for (size_t c = 0; c < st.m.nc; c++) {
                next.m.at(r, c) += f * st.m.at(src, c);
            }
        }
    }
    st = std::move(next);
}

/// z-basis measurement with outcome m: Kraus (F z(m) Phi)^* selects the
/// position configuration q = -m on the measured sites, weight one.
inline void apply_measure_z(RegState &st, const Labels &sites, const FVec &outcome) {
    Labels rest;
    for (const auto &l : st.sites) {
        if (std::find(sites.begin(), sites.end(), l) == sites.end()) {
            rest.push_back(l);
        }
    }
    auto meas_pos = positions_of(st.sites, sites);
    auto rest_pos = positions_of(st.sites, rest);
    RegState next{rest, st.d, Mat()};
    size_t nd = next.dim();
    next.m = Mat(nd, st.m.nc);
    size_t n = st.sites.size();
    std::vector<uint32_t> cfg(n), rest_cfg(rest.size());
    for (size_t k = 0; k < meas_pos.size(); k++) {
        cfg[meas_pos[k]] = fp_neg(outcome.v[k], st.d);
    }
    for (size_t r = 0; r < nd; r++) {
        index_to_config(r, rest.size(), st.d, rest_cfg.data());
        for (size_t k = 0; k < rest_pos.size(); k++) {
            cfg[rest_pos[k]] = rest_cfg[k];
        }
        size_t src = config_to_index(cfg.data(), n, st.d);
        for (size_t c = 0; c < st.m.nc; c++) {
            next.m.at(r, c) = st.m.at(src, c);
        }
    }
    st = std::move(next);
}

/// Conditional translation: applies eps(phase) w(xi)^* on the target sites.
/// w(p,s)^* maps |u> to eps(-p.u)|u+s>, so row v of the new state is
/// eps(-p.(v-s)) times row (v-s) of the old one, on the target part.
inline void apply_translate(RegState &st, const Translation &tr) {
    auto pos = positions_of(st.sites, tr.xi.labels());
    size_t n = st.sites.size(), nd = st.dim();
    Mat next(nd, st.m.nc);
    std::vector<uint32_t> cfg(n);
    cplx scalar = unit_root(tr.phase_exponent, st.d);
    for (size_t v = 0; v < nd; v++) {
        index_to_config(v, n, st.d, cfg.data());
        uint32_t e = 0;
        for (size_t k = 0; k < pos.size(); k++) {
            cfg[pos[k]] = fp_sub(cfg[pos[k]], tr.xi.q.v[k], st.d);
            e = fp_add(e, fp_mul(tr.xi.p.v[k], cfg[pos[k]], st.d), st.d);
        }
        cplx f = scalar * unit_root(fp_neg(e, st.d), st.d);
        size_t src = config_to_index(cfg.data(), n, st.d);
        for (size_t c = 0; c < st.m.nc; c++) {
            next.at(v, c) = f * st.m.at(src, c);
        }
    }
    st.m = std::move(next);
}

}  // namespace detail

struct CompiledBranch {
    std::map<std::string, FVec> records;
    Mat kraus;  // output register configs x input register configs
};

struct CompileOptions {
    bool skip_translations = false;  // feed-forward ablation
    size_t stop_after_steps = SIZE_MAX;
};

/// Enumerates every measurement outcome assignment and runs the program;
/// exact by construction. The outcome-independent prefix before the first
/// measurement is simulated once and shared across branches.
inline std::vector<CompiledBranch> compile_branches(const OneWayProgram &prog, const CompileOptions &opts = {}) {
    validate_program(prog);
    size_t n_steps = std::min(prog.steps.size(), opts.stop_after_steps);

    detail::RegState init;
    init.sites = prog.input_register;
    init.d = prog.d;
    size_t in_dim = 1;
    for (size_t k = 0; k < init.sites.size(); k++) {
        in_dim *= prog.d;
    }
    init.m = Mat::identity(in_dim);

    // Shared prefix.
    size_t first_measure = 0;
    while (first_measure < n_steps && prog.steps[first_measure].kind != StepKind::MeasureX &&
           prog.steps[first_measure].kind != StepKind::MeasureZ) {
        const Step &st = prog.steps[first_measure];
        if (st.kind == StepKind::Prepare) {
            detail::apply_prepare(init, prog.ambient, st.sites);
        } else if (st.kind == StepKind::Dynamics) {
            detail::apply_dynamics(init, st.graph, st.sign);
        } else if (st.kind == StepKind::Translate && !opts.skip_translations) {
            auto tr = device_output(st.device, prog.table.get(), {}, prog.d);
            detail::apply_translate(init, tr);
        }
        first_measure++;
    }

    // Outcome spaces of the remaining measurements.
    std::vector<size_t> meas_steps;
    std::vector<size_t> meas_dims;
    size_t total = 1;
    for (size_t k = first_measure; k < n_steps; k++) {
        const Step &st = prog.steps[k];
        if (st.kind == StepKind::MeasureX || st.kind == StepKind::MeasureZ) {
            meas_steps.push_back(k);
            size_t dim = 1;
            for (size_t s = 0; s < st.sites.size(); s++) {
                dim *= prog.d;
            }
            meas_dims.push_back(dim);
            total *= dim;
        }
    }

    std::vector<CompiledBranch> out;
    out.reserve(total);
    for (size_t assignment = 0; assignment < total; assignment++) {
        std::map<std::string, FVec> records;
        size_t rest = assignment;
        for (size_t k = 0; k < meas_steps.size(); k++) {
            const Step &st = prog.steps[meas_steps[k]];
            size_t idx = rest % meas_dims[k];
            rest /= meas_dims[k];
            records[st.record] = index_to_fvec(idx, Sites(st.sites, prog.d));
        }
        detail::RegState reg = init;
        for (size_t k = first_measure; k < n_steps; k++) {
            const Step &st = prog.steps[k];
            switch (st.kind) {
                case StepKind::Prepare:
                    detail::apply_prepare(reg, prog.ambient, st.sites);
                    break;
                case StepKind::Dynamics:
                    detail::apply_dynamics(reg, st.graph, st.sign);
                    break;
                case StepKind::MeasureX:
                    detail::apply_measure_x(reg, st.sites, records.at(st.record));
                    break;
                case StepKind::MeasureZ:
                    detail::apply_measure_z(reg, st.sites, records.at(st.record));
                    break;
                case StepKind::Translate:
                    if (!opts.skip_translations) {
                        auto tr = device_output(st.device, prog.table.get(), records, prog.d);
                        detail::apply_translate(reg, tr);
                    }
                    break;
            }
        }
        out.push_back(CompiledBranch{std::move(records), std::move(reg.m)});
    }
    return out;
}

/// The compiled program as a plain channel (branches summed).
inline QChannel compiled_channel(const OneWayProgram &prog, const CompileOptions &opts = {}) {
    QChannel c;
    c.in_sites = Sites(prog.input_register, prog.d);
    c.out_sites = Sites(prog.output_register, prog.d);
    for (auto &b : compile_branches(prog, opts)) {
        c.kraus.push_back(std::move(b.kraus));
    }
    return c;
}

// ---------------------------------------------------------------------------
// Program assembly.
// ---------------------------------------------------------------------------

/// device translating the input-measurement outcome on the fresh outputs:
/// p^I -> (Lam_JJ bar_JI p^I, -bar_JI p^I).
inline Device device_encode(const Scheme &s) {
    Device dev;
    dev.kind = Device::Kind::Affine;
    dev.records = {"mI"};
    dev.targets = s.g.outputs;
    FMat bar_ji = s.inv_j_i();
    dev.momentum_map = s.g.block(s.g.outputs, s.g.outputs) * bar_ji;
    dev.position_map = -bar_ji;
    return dev;
}

/// device compensating the output-measurement outcome on inputs+syndromes:
/// m^J -> (0, bar_ILJ m^J).
inline Device device_syndrome_compensate(const Scheme &s) {
    Device dev;
    dev.kind = Device::Kind::Affine;
    dev.records = {"mJ"};
    dev.targets = s.g.is_vertices();
    dev.momentum_map = FMat(dev.targets, s.g.outputs, s.g.d);
    dev.position_map = s.inv_il_j;
    return dev;
}

/// device applying the tabled correction for the measured syndrome.
inline Device device_correction(const Scheme &s) {
    Device dev;
    dev.kind = Device::Kind::SyndromeLookup;
    dev.records = {"mL"};
    dev.targets = s.g.inputs;
    return dev;
}

/// fused decode device combining compensation and correction.
inline Device device_decode(const Scheme &s) {
    Device dev;
    dev.kind = Device::Kind::DecodeLookup;
    dev.records = {"mJ", "mL"};
    dev.targets = s.g.inputs;
    dev.syndrome_map = s.inv_l_j();
    dev.shift_map = s.inv_i_j();
    return dev;
}

/// Encoder: prepare outputs, one dynamics step on the input/output
/// subgraph, measure inputs in the x-basis, translate by the device.
inline OneWayProgram assemble_encoder(const Scheme &s) {
    OneWayProgram prog;
    prog.d = s.g.d;
    prog.ambient = s.g.io_vertices();
    prog.input_register = s.g.inputs;
    prog.output_register = s.g.outputs;
    prog.table_ref = s.table.graph_hash;
    Labels io = s.g.io_vertices();

    Step prep{StepKind::Prepare, s.g.outputs, "", FMat(), +1, Device()};
    Step dyn{StepKind::Dynamics, {}, "", s.g.block(io, io), +1, Device()};
    Step meas{StepKind::MeasureX, s.g.inputs, "mI", FMat(), +1, Device()};
    Step corr{StepKind::Translate, {}, "", FMat(), +1, device_encode(s)};
    prog.steps = {prep, dyn, meas, corr};
    validate_program(prog);
    return prog;
}

/// Syndrome measurement: prepare inputs+syndromes, inverse dynamics on the
/// full graph, measure outputs in x (compensated by the affine device),
/// then measure syndromes in z. The extracted syndrome is q^L = -m^L.
inline OneWayProgram assemble_syndrome(const Scheme &s) {
    OneWayProgram prog;
    prog.d = s.g.d;
    prog.ambient = s.g.vertices();
    prog.input_register = s.g.outputs;
    prog.output_register = s.g.inputs;
    prog.table = std::make_shared<SyndromeTable>(s.table);
    prog.table_ref = s.table.graph_hash;

    Step prep{StepKind::Prepare, s.g.is_vertices(), "", FMat(), +1, Device()};
    Step dyn{StepKind::Dynamics, {}, "", s.g.adj, -1, Device()};
    Step meas_j{StepKind::MeasureX, s.g.outputs, "mJ", FMat(), +1, Device()};
    Step comp{StepKind::Translate, {}, "", FMat(), +1, device_syndrome_compensate(s)};
    Step meas_l{StepKind::MeasureZ, s.g.syndromes, "mL", FMat(), +1, Device()};
    prog.steps = {prep, dyn, meas_j, comp, meas_l};
    validate_program(prog);
    return prog;
}

/// Decoder. `fused` gives the four-operation form with the combined
/// device; otherwise the five-operation form with separate compensation
/// and correction devices.
inline OneWayProgram assemble_decoder(const Scheme &s, bool fused = true) {
    OneWayProgram prog;
    prog.d = s.g.d;
    prog.ambient = s.g.vertices();
    prog.input_register = s.g.outputs;
    prog.output_register = s.g.inputs;
    prog.table = std::make_shared<SyndromeTable>(s.table);
    prog.table_ref = s.table.graph_hash;

    Step prep{StepKind::Prepare, s.g.is_vertices(), "", FMat(), +1, Device()};
    Step dyn{StepKind::Dynamics, {}, "", s.g.adj, -1, Device()};
    Step meas_j{StepKind::MeasureX, s.g.outputs, "mJ", FMat(), +1, Device()};
    Step meas_l{StepKind::MeasureZ, s.g.syndromes, "mL", FMat(), +1, Device()};
    if (fused) {
        Step corr{StepKind::Translate, {}, "", FMat(), +1, device_decode(s)};
        prog.steps = {prep, dyn, meas_j, meas_l, corr};
    } else {
        Step comp{StepKind::Translate, {}, "", FMat(), +1, device_syndrome_compensate(s)};
        Step corr{StepKind::Translate, {}, "", FMat(), +1, device_correction(s)};
        prog.steps = {prep, dyn, meas_j, comp, meas_l, corr};
    }
    validate_program(prog);
    return prog;
}

// ---------------------------------------------------------------------------
// Verification.
// ---------------------------------------------------------------------------

/// Compiled encoder program vs the direct encoding channel, on the full
/// input operator basis.
inline double verify_encode(const Scheme &s, bool ablate_feedforward = false) {
    OneWayProgram prog = assemble_encoder(s);
    CompileOptions opts;
    opts.skip_translations = ablate_feedforward;
    QChannel compiled = compiled_channel(prog, opts);
    QChannel direct = encoder_channel(s);
    return channel_distance(compiled, direct);
}

/// Compiled syndrome program vs the direct instrument, outcome by outcome
/// (Choi matrices of the per-syndrome CP maps).
inline double verify_syndrome(const Scheme &s, bool ablate_feedforward = false) {
    OneWayProgram prog = assemble_syndrome(s);
    CompileOptions opts;
    opts.skip_translations = ablate_feedforward;
    auto branches = compile_branches(prog, opts);
    Instrument direct = syndrome_instrument(s);

    Sites in = s.output_sites(), out = s.input_sites();
    Sites l_sites = s.syndrome_sites();
    size_t n_syn = l_sites.dim();
    std::vector<QChannel> grouped(n_syn);
    for (size_t k = 0; k < n_syn; k++) {
        grouped[k].in_sites = in;
        grouped[k].out_sites = out;
    }
    for (auto &b : branches) {
        FVec q_l = -b.records.at("mL");
        grouped[fvec_to_index(q_l, s.g.d)].kraus.push_back(std::move(b.kraus));
    }
    double worst = 0;
    for (size_t k = 0; k < n_syn; k++) {
        QChannel direct_k;
        direct_k.in_sites = in;
        direct_k.out_sites = out;
        direct_k.kraus = direct.branches[k];
        worst = std::max(worst, choi_distance(grouped[k], direct_k));
    }
    return worst;
}

/// Single-Kraus check for the compensated prefix of the syndrome program:
/// prepare/dynamics/measure/compensate collapses to one unitary u mapping
/// the outputs to inputs+syndromes, every branch proportional d^{-|J|/2} u,
/// and the rows of u at syndrome configuration q^L reproduce v_{q^L}^*.
inline double verify_syndrome_single_kraus(const Scheme &s) {
    OneWayProgram prog = assemble_syndrome(s);
    CompileOptions opts;
    opts.stop_after_steps = 4;  // stop before the z measurement
    auto branches = compile_branches(prog, opts);
    DenseOp u_rev = reverse_graph_isometry(s.g);
    double amp = 1.0 / std::sqrt(double(s.output_sites().dim()));
    double worst = mat_distance((u_rev.adjoint() * u_rev).m, Mat::identity(u_rev.in_sites.dim()));
    for (const auto &b : branches) {
        worst = std::max(worst, mat_distance(b.kraus, amp * u_rev.m));
    }
    // Row blocks of the single Kraus against the isometry family.
    Sites l_sites = s.syndrome_sites();
    size_t ni_dim = s.input_sites().dim(), nj_dim = s.output_sites().dim();
    for (size_t k = 0; k < l_sites.dim(); k++) {
        FVec q_l = index_to_fvec(k, l_sites);
        Mat block(ni_dim, nj_dim);
        FVec qi(s.g.inputs, s.g.d);
        for (size_t r = 0; r < ni_dim; r++) {
            index_to_config(r, qi.size(), s.g.d, qi.v.data());
            size_t full_row = fvec_to_index(concat(qi, q_l), s.g.d);
            for (size_t c = 0; c < nj_dim; c++) {
                block.at(r, c) = u_rev.m.at(full_row, c);
            }
        }
        worst = std::max(worst, mat_distance(block, s.isometry(q_l).m.adjoint()));
    }
    return worst;
}

/// Compiled decoder program vs the direct decoder channel.
inline double verify_decode(const Scheme &s, bool fused = true, bool ablate_feedforward = false) {
    OneWayProgram prog = assemble_decoder(s, fused);
    CompileOptions opts;
    opts.skip_translations = ablate_feedforward;
    QChannel compiled = compiled_channel(prog, opts);
    QChannel direct = decoder_channel(s);
    return choi_distance(compiled, direct);
}

/// Kraus-level fusion of the two decode routes: the branch operator of the
/// fused program at outcome (m^J, m^L) equals the branch operator of the
/// two-device program at (m^J, m^L - bar_LJ m^J), exactly.
inline double verify_measure_fusion(const Scheme &s) {
    auto fused = compile_branches(assemble_decoder(s, true));
    auto split = compile_branches(assemble_decoder(s, false));
    auto key = [&](const FVec &mj, const FVec &ml) {
        return fvec_to_index(mj, s.g.d) * Sites(s.g.syndromes, s.g.d).dim() + fvec_to_index(ml, s.g.d);
    };
    std::vector<const Mat *> split_by_key(split.size(), nullptr);
    for (const auto &b : split) {
        split_by_key[key(b.records.at("mJ"), b.records.at("mL"))] = &b.kraus;
    }
    FMat bar_lj = s.inv_l_j();
    double worst = 0;
    for (const auto &b : fused) {
        FVec mj = b.records.at("mJ");
        FVec ml = b.records.at("mL");
        FVec mj_cols(bar_lj.cols, mj.v, s.g.d);
        FVec ml_split = FVec(bar_lj.rows, ml.v, s.g.d) - bar_lj * mj_cols;
        const Mat *other = split_by_key[key(mj, FVec(s.g.syndromes, ml_split.v, s.g.d))];
        worst = std::max(worst, mat_distance(b.kraus, *other));
    }
    return worst;
}

/// Full measurement-based roundtrip: compiled encode, an injected error,
/// compiled decode; compared to the identity on the input operator basis.
inline double verify_roundtrip(const Scheme &s, const PhaseVec &error) {
    QChannel enc = compiled_channel(assemble_encoder(s));
    QChannel dec = compiled_channel(assemble_decoder(s, true));
    Mat werr = weyl_op(error).m;
    Mat werr_dag = werr.adjoint();
    return map_distance(
        [&](const Mat &m) { return dec.apply(werr * enc.apply(m) * werr_dag); },
        [](const Mat &m) { return m; }, s.input_sites());
}

// ---------------------------------------------------------------------------
// Measurement-pattern serialization.
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json fmat_to_json(const FMat &m) {
    nlohmann::ordered_json j;
    j["rows"] = m.rows;
    j["cols"] = m.cols;
    auto entries = nlohmann::ordered_json::array();
    for (size_t r = 0; r < m.nrows(); r++) {
        auto row = nlohmann::ordered_json::array();
        for (size_t c = 0; c < m.ncols(); c++) {
            row.push_back(m.at(r, c));
        }
        entries.push_back(row);
    }
    j["entries"] = entries;
    return j;
}

inline FMat fmat_from_json(const nlohmann::json &j, uint32_t d) {
    FMat m(j.at("rows").get<Labels>(), j.at("cols").get<Labels>(), d);
    const auto &entries = j.at("entries");
    for (size_t r = 0; r < m.nrows(); r++) {
        for (size_t c = 0; c < m.ncols(); c++) {
            m.at(r, c) = entries.at(r).at(c).get<uint32_t>() % d;
        }
    }
    return m;
}

inline nlohmann::ordered_json program_to_json(const OneWayProgram &prog) {
    nlohmann::ordered_json j;
    j["d"] = prog.d;
    j["ambient"] = prog.ambient;
    j["input"] = prog.input_register;
    j["output"] = prog.output_register;
    auto steps = nlohmann::ordered_json::array();
    nlohmann::ordered_json matrices = nlohmann::ordered_json::object();
    for (const Step &st : prog.steps) {
        nlohmann::ordered_json sj;
        switch (st.kind) {
            case StepKind::Prepare:
                sj["kind"] = "prepare";
                sj["sites"] = st.sites;
                break;
            case StepKind::Dynamics: {
                sj["kind"] = "dynamics";
                sj["sign"] = st.sign;
                sj["vertices"] = st.graph.rows;
                auto edges = nlohmann::ordered_json::array();
                for (size_t r = 0; r < st.graph.nrows(); r++) {
                    for (size_t c = r + 1; c < st.graph.ncols(); c++) {
                        if (st.graph.at(r, c) != 0) {
                            edges.push_back({st.graph.rows[r], st.graph.rows[c], st.graph.at(r, c)});
                        }
                    }
                }
                sj["edges"] = edges;
                break;
            }
            case StepKind::MeasureX:
            case StepKind::MeasureZ:
                sj["kind"] = "measure";
                sj["basis"] = st.kind == StepKind::MeasureX ? "x" : "z";
                sj["sites"] = st.sites;
                sj["record"] = st.record;
                break;
            case StepKind::Translate: {
                sj["kind"] = "feedforward";
                const Device &dev = st.device;
                sj["records"] = dev.records;
                sj["targets"] = dev.targets;
                if (dev.kind == Device::Kind::Affine) {
                    sj["device"] = "affine";
                    std::string base = "ff" + std::to_string(steps.size());
                    matrices[base + "_momentum"] = fmat_to_json(dev.momentum_map);
                    matrices[base + "_position"] = fmat_to_json(dev.position_map);
                    sj["momentum_ref"] = base + "_momentum";
                    sj["position_ref"] = base + "_position";
                } else if (dev.kind == Device::Kind::SyndromeLookup) {
                    sj["device"] = "syndrome_lookup";
                } else {
                    sj["device"] = "decode_lookup";
                    std::string base = "ff" + std::to_string(steps.size());
                    matrices[base + "_syndrome"] = fmat_to_json(dev.syndrome_map);
                    matrices[base + "_shift"] = fmat_to_json(dev.shift_map);
                    sj["syndrome_ref"] = base + "_syndrome";
                    sj["shift_ref"] = base + "_shift";
                }
                break;
            }
        }
        steps.push_back(sj);
    }
    j["steps"] = steps;
    j["matrices"] = matrices;
    j["syndrome_table_ref"] = prog.table_ref;
    return j;
}

inline OneWayProgram program_from_json(const nlohmann::json &j) {
    OneWayProgram prog;
    prog.d = j.at("d").get<uint32_t>();
    prog.ambient = j.at("ambient").get<Labels>();
    prog.input_register = j.at("input").get<Labels>();
    prog.output_register = j.at("output").get<Labels>();
    prog.table_ref = j.at("syndrome_table_ref").get<uint64_t>();
    const auto &matrices = j.at("matrices");
    for (const auto &sj : j.at("steps")) {
        Step st;
        std::string kind = sj.at("kind").get<std::string>();
        if (kind == "prepare") {
            st.kind = StepKind::Prepare;
            st.sites = sj.at("sites").get<Labels>();
        } else if (kind == "dynamics") {
            st.kind = StepKind::Dynamics;
            st.sign = sj.at("sign").get<int>();
            Labels verts = sj.at("vertices").get<Labels>();
            st.graph = FMat(verts, verts, prog.d);
            for (const auto &e : sj.at("edges")) {
                size_t u = label_index(verts, e.at(0).get<Label>());
                size_t v = label_index(verts, e.at(1).get<Label>());
                uint32_t w = e.at(2).get<uint32_t>() % prog.d;
                st.graph.at(u, v) = w;
                st.graph.at(v, u) = w;
            }
        } else if (kind == "measure") {
            st.kind = sj.at("basis").get<std::string>() == "x" ? StepKind::MeasureX : StepKind::MeasureZ;
            st.sites = sj.at("sites").get<Labels>();
            st.record = sj.at("record").get<std::string>();
        } else if (kind == "feedforward") {
            st.kind = StepKind::Translate;
            Device &dev = st.device;
            dev.records = sj.at("records").get<std::vector<std::string>>();
            dev.targets = sj.at("targets").get<Labels>();
            std::string dtype = sj.at("device").get<std::string>();
            if (dtype == "affine") {
                dev.kind = Device::Kind::Affine;
                dev.momentum_map = fmat_from_json(matrices.at(sj.at("momentum_ref").get<std::string>()), prog.d);
                dev.position_map = fmat_from_json(matrices.at(sj.at("position_ref").get<std::string>()), prog.d);
            } else if (dtype == "syndrome_lookup") {
                dev.kind = Device::Kind::SyndromeLookup;
            } else if (dtype == "decode_lookup") {
                dev.kind = Device::Kind::DecodeLookup;
                dev.syndrome_map = fmat_from_json(matrices.at(sj.at("syndrome_ref").get<std::string>()), prog.d);
                dev.shift_map = fmat_from_json(matrices.at(sj.at("shift_ref").get<std::string>()), prog.d);
            } else {
                throw std::invalid_argument("unknown device type '" + dtype + "'");
            }
        } else {
            throw std::invalid_argument("unknown step kind '" + kind + "'");
        }
        prog.steps.push_back(std::move(st));
    }
    validate_program(prog);
    return prog;
}

}  // namespace graphcode

#endif
