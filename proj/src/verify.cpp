#include "curvop/verify.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <set>

namespace curvop {

namespace {

using Complex = std::complex<double>;
const Complex I(0.0, 1.0);

struct ErrTracker {
    double max_abs = 0, scale = 0, worst_u = 0, worst_v = 0;

    void record(double abs_err, double ref_mag, double u, double v) {
        if (abs_err > max_abs) {
            max_abs = abs_err;
            worst_u = u;
            worst_v = v;
        }
        scale = std::max(scale, ref_mag);
    }

    VerifyCheck finish(const std::string& name, double phi, double tol) const {
        VerifyCheck c;
        c.name = name;
        c.phi = phi;
        c.max_abs_err = max_abs;
        c.scale = scale;
        // strict relative error; identically-zero references (K on the cone,
        // off-diagonal metric entries) fall back to absolute error
        c.max_rel_err = max_abs / (scale > 1e-9 ? scale : 1.0);
        c.worst_u = worst_u;
        c.worst_v = worst_v;
        c.tolerance = tol;
        c.pass = c.max_rel_err <= tol;
        return c;
    }
};

double term_diff(const TermValue& a, const TermValue& b, ValueKind kind) {
    switch (kind) {
        case ValueKind::Scalar: return std::abs(a.scalar - b.scalar);
        case ValueKind::Vector3: return (a.vec - b.vec).norm();
        case ValueKind::Spin: return (a.spin - b.spin).norm();
    }
    return 0;
}

std::string idx_name(const DerivIndex& idx) {
    return "(" + std::to_string(idx.first) + "," + std::to_string(idx.second) + ")";
}

// oracle maps may omit indices the pipeline prunes and vice versa; compare on
// the union
std::set<DerivIndex> index_union(const std::map<DerivIndex, TermValue>& a,
                                 const std::map<DerivIndex, TermValue>& b) {
    std::set<DerivIndex> keys;
    for (const auto& kv : a) keys.insert(kv.first);
    for (const auto& kv : b) keys.insert(kv.first);
    return keys;
}

TermValue lookup(const std::map<DerivIndex, TermValue>& m, const DerivIndex& idx) {
    auto it = m.find(idx);
    return it == m.end() ? TermValue{} : it->second;
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& opts) {
    VerifyReport rep;
    rep.opts = opts;
    SurfaceDef cone = builtin_catalog("cone");
    const Couplings& cpl = opts.cpl;

    auto geometry_checks = [&](double phi) {
        ParamMap overrides{{"R", opts.R}, {"phi", phi}, {"l", opts.l}};
        auto params = cone.resolve_params(overrides);
        auto dom = cone.resolve_domain(params);
        auto us = grid_axis(dom.u_lo, dom.u_hi, opts.nu, true);
        auto vs = grid_axis(dom.v_lo, dom.v_hi, opts.nv, false);
        ConeParams cp{opts.R, phi, opts.l};

        const std::vector<std::string> scalars = {"M",     "K",      "Vg",    "g11",   "g12",
                                                  "g22",   "ginv11", "ginv12", "ginv22", "g1_11",
                                                  "g1_12", "g1_22"};
        std::map<std::string, ErrTracker> trk;
        ErrTracker trk_f, trk_offset, trk_pg, trk_lg, trk_sigma, trk_sr, trk_sd, trk_brackets;
        const std::vector<double> q3s = {-0.1, -0.05, 0.05, 0.1};

        for (double u : us)
            for (double v : vs) {
                GeoBundle b = compute_bundle(cone, u, v, params);
                GeometryPoint pt = frame_from_bundle(b);
                ConeOracle o(cp, u, v);
                for (const auto& q : scalars) {
                    double pip = extract_quantity(pt, q, cpl.hbar, cpl.mass);
                    double ora = oracle_scalar(cp, q, u, v, cpl);
                    trk[q].record(std::abs(pip - ora), std::abs(ora), u, v);
                }
                for (double q3 : q3s) {
                    double fp = 1.0 + 2.0 * pt.M * q3 + pt.K * q3 * q3;
                    trk_f.record(std::abs(fp - o.f(q3)), std::abs(o.f(q3)), u, v);
                    Eigen::Matrix3d Gp = offset_metric(pt, q3);
                    Eigen::Matrix3d Go = o.offset_metric(q3);
                    trk_offset.record((Gp - Go).norm(), Go.norm(), u, v);
                }
                Eigen::Vector3cd pg = I * cpl.hbar * pt.M * pt.en.cast<Complex>();
                Eigen::Vector3cd pg_o = o.geometric_momentum(cpl.hbar);
                trk_pg.record((pg - pg_o).norm(), pg_o.norm(), u, v);
                Eigen::Vector3cd lg =
                    I * cpl.hbar * pt.M * (pt.r.cross(pt.en)).cast<Complex>();
                Eigen::Vector3cd lg_o = o.geometric_oam(cpl.hbar);
                trk_lg.record((lg - lg_o).norm(), lg_o.norm(), u, v);

                auto sig_p = pauli_ccs(b);
                auto sig_o = o.pauli_reduced();
                double ds = 0, ss = 0;
                for (int i = 0; i < 3; ++i) {
                    ds = std::max(ds, (sig_p[i] - sig_o[i]).norm());
                    ss = std::max(ss, sig_o[i].norm());
                }
                trk_sigma.record(ds, ss, u, v);
                Eigen::Matrix3d sr = rashba_tensor_ccs(b, cpl.alpha, cpl.hbar);
                Eigen::Matrix3d sr_o = o.rashba_reduced(cpl.alpha, cpl.hbar);
                trk_sr.record((sr - sr_o).norm(), sr_o.norm(), u, v);
                Eigen::Matrix3d sd = dresselhaus_tensor_ccs(b, cpl.beta, cpl.hbar);
                Eigen::Matrix3d sd_o = o.dresselhaus_reduced(cpl.beta, cpl.hbar);
                trk_sd.record((sd - sd_o).norm(), sd_o.norm(), u, v);

                // reduced-bracket identities from the f-jet
                double br[4] = {reduced_bracket(pt, BracketField::F, 1),
                                reduced_bracket(pt, BracketField::F, 2),
                                reduced_bracket(pt, BracketField::InvSqrtF, 1),
                                reduced_bracket(pt, BracketField::InvSqrtF, 2)};
                double ex[4] = {2.0 * pt.M, 2.0 * pt.K, -pt.M, 3.0 * pt.M * pt.M - pt.K};
                for (int k = 0; k < 4; ++k)
                    trk_brackets.record(std::abs(br[k] - ex[k]), std::max(std::abs(ex[k]), 1.0), u, v);
            }
        for (const auto& q : scalars)
            rep.checks.push_back(trk[q].finish("geometry/" + q, phi, opts.tol));
        rep.checks.push_back(trk_f.finish("geometry/f(q3)", phi, opts.tol));
        rep.checks.push_back(trk_offset.finish("geometry/offset-metric", phi, opts.tol));
        rep.checks.push_back(trk_pg.finish("geometry/geometric-momentum", phi, opts.tol));
        rep.checks.push_back(trk_lg.finish("geometry/geometric-oam", phi, opts.tol));
        rep.checks.push_back(trk_sigma.finish("spin/pauli-reduced", phi, opts.tol));
        rep.checks.push_back(trk_sr.finish("spin/rashba-tensor", phi, opts.tol));
        rep.checks.push_back(trk_sd.finish("spin/dresselhaus-tensor", phi, opts.tol));
        rep.checks.push_back(trk_brackets.finish("geometry/reduced-brackets", phi, 1e-12));
    };

    // pipeline operator vs closed form; `which` chooses the printed or the
    // re-derived reference and the check tolerance
    auto operator_check = [&](double phi, ConeOp which, const DiffOp& op, const std::string& name,
                              bool prefer_derived, double tol) {
        ParamMap overrides{{"R", opts.R}, {"phi", phi}, {"l", opts.l}};
        auto params = cone.resolve_params(overrides);
        auto dom = cone.resolve_domain(params);
        auto us = grid_axis(dom.u_lo, dom.u_hi, opts.nu, true);
        auto vs = grid_axis(dom.v_lo, dom.v_hi, opts.nv, false);
        ConeParams cp{opts.R, phi, opts.l};

        ErrTracker trk;
        std::set<std::string> offending_rows;
        for (double u : us)
            for (double v : vs) {
                GeoBundle b = compute_bundle(cone, u, v, params);
                auto pip = op.evaluate(b);
                OracleOperator oro = oracle_operator(cp, which, u, v, cpl);
                auto ora = oro.total(prefer_derived);
                for (const auto& idx : index_union(pip, ora)) {
                    TermValue pv = lookup(pip, idx);
                    TermValue ov = lookup(ora, idx);
                    double d = term_diff(pv, ov, op.kind);
                    trk.record(d, ov.magnitude(op.kind), u, v);
                    if (!prefer_derived && d > 1e-12) {
                        // attribute printed-form mismatches to the rows whose
                        // re-derived variant absorbs them
                        for (const auto& row : oro.rows) {
                            if (!row.has_derived) continue;
                            if (row.printed.count(idx) || row.derived.count(idx)) {
                                TermValue corrected = ov;
                                TermValue rp = lookup(row.printed, idx);
                                TermValue rd = lookup(row.derived, idx);
                                corrected.scalar += rd.scalar - rp.scalar;
                                corrected.vec += rd.vec - rp.vec;
                                corrected.spin += rd.spin - rp.spin;
                                double d2 = term_diff(pv, corrected, op.kind);
                                if (d2 <= 1e-6 * d)
                                    offending_rows.insert(row.name + " at " + idx_name(idx));
                            }
                        }
                    }
                }
            }
        VerifyCheck c = trk.finish(name, phi, tol);
        if (!prefer_derived && !c.pass && !offending_rows.empty()) {
            // mismatch fully localized to known printed rows
            bool all_explained = true;
            // re-run with derived rows to confirm the residual is within tol
            ErrTracker trk2;
            for (double u : us)
                for (double v : vs) {
                    GeoBundle b = compute_bundle(cone, u, v, params);
                    auto pip = op.evaluate(b);
                    auto ora = oracle_operator(cp, which, u, v, cpl).total(true);
                    for (const auto& idx : index_union(pip, ora))
                        trk2.record(term_diff(lookup(pip, idx), lookup(ora, idx), op.kind),
                                    lookup(ora, idx).magnitude(op.kind), u, v);
                }
            double residual = trk2.max_abs / (trk2.scale > 1e-9 ? trk2.scale : 1.0);
            all_explained = residual <= opts.tol;
            if (all_explained) {
                c.known_print_discrepancy = true;
                c.pass = true;
                c.note = "printed closed form differs from the general pipeline; localized to: ";
                bool first = true;
                for (const auto& r : offending_rows) {
                    if (!first) c.note += "; ";
                    c.note += r;
                    first = false;
                }
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%.3e", residual);
                c.note += ". Residual vs re-derived rows: ";
                c.note += buf;
            }
        }
        rep.checks.push_back(c);
    };

    for (double phi : opts.phis) {
        geometry_checks(phi);
        ParamMap overrides{{"R", opts.R}, {"phi", phi}, {"l", opts.l}};
        DiffOp h = assemble_hamiltonian(cone, cpl.hbar, cpl.mass, overrides);
        DiffOp pe = assemble_momentum(cone, cpl.hbar, overrides);
        DiffOp le = assemble_oam(cone, cpl.hbar, overrides);
        DiffOp ra = assemble_rashba(cone, cpl.alpha, cpl.hbar, overrides);
        DiffOp dr = assemble_dresselhaus(cone, cpl.beta, cpl.hbar, overrides);
        operator_check(phi, ConeOp::H, h, "operator/hamiltonian", false, opts.tol);
        operator_check(phi, ConeOp::P, pe, "operator/momentum", false, opts.tol);
        operator_check(phi, ConeOp::L, le, "operator/oam", false, opts.tol);
        operator_check(phi, ConeOp::Rashba, ra, "operator/rashba(printed)", false,
                       opts.tol_cone_soc);
        operator_check(phi, ConeOp::Rashba, ra, "operator/rashba(derived)", true, opts.tol);
        operator_check(phi, ConeOp::Dresselhaus, dr, "operator/dresselhaus(printed)", false,
                       opts.tol_cone_soc);
        operator_check(phi, ConeOp::Dresselhaus, dr, "operator/dresselhaus(derived)", true,
                       opts.tol);
    }

    // cylinder limit: hard tolerance, no escape hatch
    {
        double phi = 1.5707963267948966;
        ParamMap overrides{{"R", opts.R}, {"phi", phi}, {"l", opts.l}};
        DiffOp h = assemble_hamiltonian(cone, cpl.hbar, cpl.mass, overrides);
        DiffOp ra = assemble_rashba(cone, cpl.alpha, cpl.hbar, overrides);
        DiffOp dr = assemble_dresselhaus(cone, cpl.beta, cpl.hbar, overrides);
        operator_check(phi, ConeOp::H, h, "cylinder-limit/hamiltonian", false, opts.tol);
        operator_check(phi, ConeOp::CylRashba, ra, "cylinder-limit/rashba", false, opts.tol);
        operator_check(phi, ConeOp::CylDresselhaus, dr, "cylinder-limit/dresselhaus", false,
                       opts.tol);

        // the cone closed forms must reduce to the cylinder forms as printed
        ErrTracker trk;
        auto us = grid_axis(0, 2 * 3.14159265358979323846, 16, true);
        const std::vector<std::pair<ConeOp, ConeOp>> reductions = {
            {ConeOp::Rashba, ConeOp::CylRashba}, {ConeOp::Dresselhaus, ConeOp::CylDresselhaus}};
        for (double u : us)
            for (double r : {0.0, 0.5, 1.0, 2.0}) {
                ConeParams cp{opts.R, phi, opts.l};
                for (const auto& pair : reductions) {
                    auto a = oracle_operator(cp, pair.first, u, r, cpl).total(false);
                    auto b = oracle_operator(cp, pair.second, u, r, cpl).total(false);
                    for (const auto& idx : index_union(a, b))
                        trk.record(term_diff(lookup(a, idx), lookup(b, idx), ValueKind::Spin),
                                   lookup(b, idx).magnitude(ValueKind::Spin), u, r);
                }
            }
        rep.checks.push_back(trk.finish("oracle/cone-to-cylinder-reduction", phi, 1e-12));
    }

    rep.n_pass = rep.n_fail = rep.n_known_discrepancies = 0;
    for (const auto& c : rep.checks) {
        if (c.pass)
            ++rep.n_pass;
        else
            ++rep.n_fail;
        if (c.known_print_discrepancy) ++rep.n_known_discrepancies;
    }
    rep.pass = rep.n_fail == 0;
    return rep;
}

std::string report_to_json(const VerifyReport& rep) {
    using json = nlohmann::ordered_json;
    auto fmt = [](double x) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.12e", x);
        return std::string(buf);
    };
    json j;
    j["surface"] = "cone";
    j["params"] = {{"R", fmt(rep.opts.R)}, {"l", fmt(rep.opts.l)}};
    json phis = json::array();
    for (double p : rep.opts.phis) phis.push_back(fmt(p));
    j["phi_values"] = phis;
    j["grid"] = {rep.opts.nu, rep.opts.nv};
    j["tolerance"] = fmt(rep.opts.tol);
    j["tolerance_cone_soc"] = fmt(rep.opts.tol_cone_soc);
    json checks = json::array();
    for (const auto& c : rep.checks) {
        json cj;
        cj["name"] = c.name;
        cj["phi"] = fmt(c.phi);
        cj["max_abs_err"] = fmt(c.max_abs_err);
        cj["max_rel_err"] = fmt(c.max_rel_err);
        cj["scale"] = fmt(c.scale);
        cj["worst_point"] = {fmt(c.worst_u), fmt(c.worst_v)};
        cj["tolerance"] = fmt(c.tolerance);
        cj["pass"] = c.pass;
        if (c.known_print_discrepancy) {
            cj["known_print_discrepancy"] = true;
            cj["note"] = c.note;
        }
        checks.push_back(cj);
    }
    j["checks"] = checks;
    j["summary"] = {{"n_checks", int(rep.checks.size())},
                    {"n_pass", rep.n_pass},
                    {"n_fail", rep.n_fail},
                    {"n_known_print_discrepancies", rep.n_known_discrepancies},
                    {"pass", rep.pass}};
    return j.dump(2) + "\n";
}

}  // namespace curvop
